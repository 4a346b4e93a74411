import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from dcmicro.jets import get_function, jet_table, coordinate_frame, multi_indices
from dcmicro.mollifier import (MollifierError, build_cutoff, centered_ball_quadrature,
                               mollified_series, reproduce_polynomial)
from dcmicro.sequence import RegularSequence


def monomial(alpha):
    def P(z):
        out = 1.0 + 0j
        for zl, a in zip(z, alpha):
            out = out * zl ** a
        return out
    return P


# build_cutoff -----------------------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2])
def test_cutoff_integrates_to_one(m):
    psi = build_cutoff(m, 0.3)
    assert psi.quad_error <= 1e-8
    centre = np.r_[1.0, np.zeros(m - 1)]
    q = centered_ball_quadrature(m, centre, 0.3)
    assert q.integrate(psi(q.nodes - centre.reshape(m, 1))) == pytest.approx(1.0, abs=1e-8)


def test_cutoff_vanishes_outside_support():
    psi = build_cutoff(1, 0.2)
    assert psi(np.array([[0.2 * 1.01]]))[0] == 0.0
    assert psi(np.array([[0.2j * 1.01]]))[0] == 0.0


def test_cutoff_radial():
    psi = build_cutoff(1, 0.2)
    a = psi(np.array([[0.1 + 0j]]))[0]
    b = psi(np.array([[0.1 * np.exp(0.7j)]]))[0]
    assert a == pytest.approx(b, rel=1e-15)
    psi2 = build_cutoff(2, 0.2)
    c = psi2(np.array([[0.1], [0.0]]))[0]
    d = psi2(np.array([[0.06j], [0.08]]))[0]
    assert c == pytest.approx(d, rel=1e-14)


@pytest.mark.parametrize("eps", [0.0, 1.0, -0.1])
def test_cutoff_radius_out_of_range(eps):
    with pytest.raises(MollifierError):
        build_cutoff(1, eps)


def test_cutoff_dimension_limited():
    with pytest.raises(MollifierError):
        build_cutoff(3, 0.2)


def test_profile_derivatives_to_order_four():
    psi = build_cutoff(1, 0.5)
    rho, h = 0.2, 1e-4
    p = lambda r: psi.profile(r, 0)
    fd = (p(rho + h) - p(rho - h)) / (2 * h)
    assert psi.profile(rho, 1) == pytest.approx(fd, rel=1e-6)
    assert np.isfinite(psi.profile(rho, 4))
    with pytest.raises(MollifierError):
        psi.profile(rho, 5)


# reproduce_polynomial ---------------------------------------------------------------

def test_reproduce_constant():
    assert reproduce_polynomial(build_cutoff(1, 0.2), monomial((0,)), [0.3]) == pytest.approx(1.0)


def test_reproduce_linear():
    assert reproduce_polynomial(build_cutoff(1, 0.2), monomial((1,)), [0.3]) == pytest.approx(0.3)


def test_reproduce_square():
    got = reproduce_polynomial(build_cutoff(1, 0.2), monomial((2,)), [0.3])
    assert abs(got - 0.09) <= 1e-7


def test_reproduce_needs_nonzero_center():
    with pytest.raises(MollifierError):
        reproduce_polynomial(build_cutoff(1, 0.2), monomial((1,)), [0.0])


@pytest.mark.parametrize("m", [1, 2])
def test_reproduction_all_monomials_to_degree_four(m):
    psi = build_cutoff(m, 0.2)
    v = np.array([0.3, -0.2][:m])
    for alpha in multi_indices(m, 4):
        want = np.prod(v ** np.array(alpha))
        got = reproduce_polynomial(psi, monomial(alpha), v)
        assert abs(got - want) <= 1e-6 * max(abs(want), 1e-3 * np.linalg.norm(v) ** sum(alpha))


@pytest.mark.parametrize("m", [1, 2])
def test_quadrature_refinement_stable(m):
    psi = build_cutoff(m, 0.2)
    v = np.array([0.3, 0.1][:m])
    for alpha in multi_indices(m, 4):
        a = reproduce_polynomial(psi, monomial(alpha), v, n_rho=32)
        b = reproduce_polynomial(psi, monomial(alpha), v, n_rho=64)
        assert abs(a - b) < 1e-8


# mollified_series -------------------------------------------------------------------

def test_series_of_square_reduces_to_reproduction():
    got = mollified_series(build_cutoff(1, 0.2), {(2,): 1.0}, [0.05], lambda r: np.full_like(r, 5))
    assert got == pytest.approx(0.0025, rel=1e-10)


def test_series_with_zero_coefficients():
    assert mollified_series(build_cutoff(1, 0.2), {(k,): 0.0 for k in range(5)}, [0.1],
                            lambda r: np.full_like(r, 4)) == 0.0


def test_series_with_constant_truncation_is_partial_sum():
    f = get_function("rational")
    t = jet_table(f, coordinate_frame(1), [0.0], 12)
    coeffs = {a: complex(t[a][0]) / math.factorial(a[0]) for a in t}
    got = mollified_series(build_cutoff(1, 0.2), coeffs, [0.1], lambda r: np.full_like(r, 6))
    want = sum(coeffs[(k,)] * 0.1 ** k for k in range(7))
    assert got == pytest.approx(want, rel=1e-10)


def test_series_with_varying_truncation_matches_adaptive_oracle():
    seq = RegularSequence.gevrey(2.0)
    ev = seq.evaluator()
    R, v, eps = 2.0, 0.1, 0.2
    trunc = lambda r: ev.N_array(R * np.asarray(r))
    f = get_function("rational")
    t = jet_table(f, coordinate_frame(1), [0.0], 12)
    c = [complex(t[(k,)][0]) / math.factorial(k) for k in range(13)]
    psi = build_cutoff(1, eps)
    jumps = [ev.breakpoint(k) / R for k in range(2, 13)]
    jumps = [b for b in jumps if (1 - eps) * v < b < (1 + eps) * v]
    got = mollified_series(psi, {(k,): c[k] for k in range(13)}, [v], trunc, breaks=jumps)

    # origin-centred polar coordinates; truncation is constant in the angle
    def angular(r):
        N = int(ev.N(R * r))
        def g(th, part):
            z = r * np.exp(1j * th)
            w = (z - v) / v
            val = psi(np.array([[w]]))[0] * sum(c[k] * z ** k for k in range(N + 1))
            return (val.real if part == 0 else val.imag) * r
        # psi is supported on the arc where |r e^(i th) - v| < eps v
        cos_min = (r * r + v * v - (eps * v) ** 2) / (2 * r * v)
        th = math.acos(min(1.0, max(-1.0, cos_min)))
        return [quad(g, -th, th, args=(p,), epsabs=1e-13, limit=200)[0] for p in (0, 1)]

    edges = [(1 - eps) * v] + jumps + [(1 + eps) * v]
    total = 0j
    for a, b in zip(edges[:-1], edges[1:]):
        re = quad(lambda r: angular(r)[0], a, b, epsabs=1e-13, limit=100)[0]
        im = quad(lambda r: angular(r)[1], a, b, epsabs=1e-13, limit=100)[0]
        total += re + 1j * im
    want = total / v ** 2
    assert len(jumps) >= 1
    assert abs(got - want) <= 1e-6


# kernel derivatives ---------------------------------------------------------------

@given(st.floats(0.05, 1.0), st.floats(0.5, 4.0), st.floats(-0.15, 0.15), st.floats(-0.15, 0.15))
def test_kernel_homogeneity(v, t, dx, dy):
    # g_beta(t z, t v) = t^(-2m-|beta|) g_beta(z, v) gives sup|g_beta| <= C_beta |v|^(-2-|beta|)
    psi = build_cutoff(1, 0.2)
    z = np.array([[v * (1 + dx + 1j * dy)]])
    k1 = psi.kernel(z, [v], 2)
    k2 = psi.kernel(t * z, [t * v], 2)
    for (b,), val in k1.items():
        assert k2[(b,)][0] == pytest.approx(val[0] * t ** (-2 - b), rel=1e-9, abs=1e-300)


def test_kernel_derivative_bound_is_finite():
    psi = build_cutoff(1, 0.2)
    consts = []
    for v in (0.01, 0.1, 1.0):
        q = centered_ball_quadrature(1, [v], 0.2 * v)
        k = psi.kernel(q.nodes, [v], 2)
        consts.append([float(np.max(np.abs(k[(b,)]))) * v ** (2 + b) for b in range(3)])
    consts = np.array(consts)
    assert np.all(np.isfinite(consts))
    assert np.allclose(consts, consts[0], rtol=1e-8)


@given(st.floats(0.05, 0.5))
def test_reproduction_of_cube_on_real_centres(v):
    psi = build_cutoff(1, 0.2)
    got = reproduce_polynomial(psi, monomial((3,)), [v])
    assert got == pytest.approx(v ** 3, rel=1e-9)

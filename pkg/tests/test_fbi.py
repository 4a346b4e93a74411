import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from dcmicro.fbi import (Cutoff, FBIError, FBIKernel, WedgeFunction, boundary_inverse,
                         boundary_value, bracket, classify_series, decay_fit, dirac_kernel,
                         fbi_euclidean, fbi_transform, geometric_ladder, inversion,
                         is_degenerate, jacobian_delta, jacobian_delta_numeric, sample_fbi,
                         wavefront_scan)
from dcmicro.jets import get_function
from dcmicro.manifold import get_chart

FLAT = get_chart("chart_flat")
LADDER = geometric_ladder(8.0)


# bracket and Jacobian -------------------------------------------------------------

def test_bracket_real():
    assert bracket([3.0, 4.0]) == pytest.approx(5.0)


def test_bracket_complex():
    assert bracket([1.0, 0.5j]) == pytest.approx(math.sqrt(0.75))


def test_bracket_cone_violation():
    with pytest.raises(FBIError):
        bracket([1j, 0.0])


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_bracket_of_real_covector_is_norm(a, b):
    if abs(a) + abs(b) < 1e-6:
        return
    assert bracket([a, b]) == pytest.approx(math.hypot(a, b), rel=1e-12)


@given(st.floats(0.1, 5), st.floats(-0.99, 0.99), st.floats(0, 2 * math.pi))
def test_bracket_has_positive_real_part_in_cone(r, s, th):
    re = r * np.array([math.cos(th), math.sin(th)])
    im = s * r * np.array([-math.sin(th), math.cos(th)])
    assert bracket(re + 1j * im).real > 0


def test_delta_at_origin():
    assert jacobian_delta([0.0], [2.0]) == 1.0
    assert jacobian_delta([0.0, 0.0], [1.0, 0.3j]) == 1.0


def test_delta_rank_one_example():
    assert jacobian_delta([0.1], [2.0]) == pytest.approx(1 + 0.1j)


def test_degenerate_delta_flagged():
    assert is_degenerate([1j], [2.0])
    assert not is_degenerate([0.1], [2.0])


@given(st.complex_numbers(max_magnitude=1), st.complex_numbers(max_magnitude=1),
       st.floats(0.5, 3), st.floats(-0.4, 0.4), st.floats(0.2, 3), st.floats(-0.4, 0.4))
def test_delta_matches_numeric_jacobian(z1, z2, a, b, c, d):
    zeta = [a + 1j * b * a, c + 1j * d * c]
    z = [z1, z2]
    assert jacobian_delta(z, zeta) == pytest.approx(jacobian_delta_numeric(z, zeta), abs=1e-7)


# transforms --------------------------------------------------------------------------

def test_dirac_is_kernel_evaluation():
    k = FBIKernel()
    z, zeta, x0 = 0.3, 5.0, 0.0
    want = np.exp(1j * zeta * (z - x0) - zeta * (z - x0) ** 2) * (1 + 1j * (z - x0))
    assert fbi_transform(get_function("dirac"), k, [z], [zeta]) == pytest.approx(want)
    assert dirac_kernel(k, [z], [zeta]) == pytest.approx(want)


@pytest.mark.parametrize("xi", [8.0, 16.0, 32.0, 64.0])
def test_indicator_matches_gaussian_oracle(xi):
    # with Delta = 1 - i y the full-line integral is half the plain Gaussian one
    want = 0.5 * math.sqrt(math.pi / xi) * math.exp(-xi / 4)
    got = abs(fbi_transform(get_function("indicator"), FBIKernel(), [0.0], [xi]))
    assert got == pytest.approx(want, rel=0.01)


def test_heaviside_decays_like_one_over_xi():
    u = get_function("heaviside")
    for xi in LADDER:
        for s in (1, -1):
            assert 0.2 <= xi * abs(fbi_euclidean(u, 0.0, s * xi)) <= 5


@pytest.mark.parametrize("x,xi", [(0.0, 6.0), (0.2, -10.0), (-0.3, 20.0)])
def test_flat_transform_matches_adaptive_quadrature(x, xi):
    # same formula through scipy: chi u(y) exp(i (x - y) xi - |xi| (x - y)^2) Delta(x - y, xi)
    u = get_function("gaussian")
    chi = Cutoff(center=x)

    def g(y, part):
        w = x - y
        val = (u.eval([[y]])[0] * chi(y) * np.exp(1j * w * xi - abs(xi) * w * w)
               * (1 + 1j * w * xi / abs(xi)))
        return val.real if part == 0 else val.imag

    lo, hi = chi.support
    want = sum((1j ** p) * quad(g, lo, hi, args=(p,), limit=400, epsabs=1e-14)[0] for p in (0, 1))
    got = fbi_transform(u, FBIKernel(1.0, FLAT), [x], [xi])
    assert abs(got - want) <= 1e-9


def test_euclidean_variant_drops_delta():
    u = get_function("gaussian")
    x, xi = 0.1, 12.0
    with_delta = fbi_transform(u, FBIKernel(1.0, FLAT, with_delta=True), [x], [xi])
    plain = fbi_transform(u, FBIKernel(1.0, FLAT, with_delta=False), [x], [xi])
    assert fbi_euclidean(u, x, xi) == pytest.approx(plain, rel=1e-12)
    assert abs(with_delta - plain) > 1e-6


def test_half_scale_kernel_scales_delta():
    k = FBIKernel(0.5, FLAT)
    w, zeta = 0.3, 4.0
    got = k(np.array([w]), np.zeros((1, 1)), [zeta])[0]
    want = np.exp(1j * zeta * w - 0.5 * zeta * w * w) * (1 + 0.5j * w)
    assert got == pytest.approx(want, rel=1e-14)


def test_transform_rejects_cone_violation():
    with pytest.raises(FBIError):
        fbi_transform(get_function("gaussian"), FBIKernel(), [0.0], [1j])


# decay classification ---------------------------------------------------------------

def test_synthetic_envelope_recovers_A(g2):
    M = np.exp(g2.log_M)
    s = np.array([min(2 ** (k + 1) * M[k] / z ** k for k in range(31)) for z in LADDER])
    c = classify_series(LADDER, s, g2)
    assert c.A == pytest.approx(2.0, rel=0.1) and c.regular


def test_constant_samples_are_not_regular(g2):
    assert classify_series(LADDER, np.ones(6), g2).kind == "none"


def test_short_ladder_rejected(g2):
    with pytest.raises(FBIError):
        classify_series(LADDER[:5], np.ones(5), g2)


def test_M_regular_samples_sit_under_envelope(g2):
    s = sample_fbi(get_function("gevrey_bump"), FBIKernel(), [[0.0], [0.5]], [[1.0], [-1.0]], LADDER)
    cls = decay_fit(s, g2)
    for (p, d), c in cls.per.items():
        assert c.regular
        if c.kind == "M-regular":
            for z, v in zip(s.zeta_abs[p, d], s.values[p, d]):
                env = min((k + 1) * math.log(c.A) + g2.log_M[k] - k * math.log(z) for k in range(31))
                assert math.log(max(abs(v), 1e-300)) <= env + 1e-9


def test_gaussian_decays_exponentially(g2):
    s = sample_fbi(get_function("gaussian"), FBIKernel(), [[-0.5], [0.0], [0.4]], [[1.0], [-1.0]],
                   LADDER)
    assert all(c.kind == "exponential" for c in decay_fit(s, g2).per.values())


def test_normalizations_differ_by_factorial(g2):
    M = np.exp(g2.log_M)
    s = np.array([min(2 ** (k + 1) * M[k] / z ** k for k in range(31)) for z in LADDER])
    a = classify_series(LADDER, s, g2, normalization="M")
    b = classify_series(LADDER, s, g2, normalization="m")
    assert b.A >= a.A and b.normalization == "m"


# wavefront scans --------------------------------------------------------------------

def test_bump_scan_flags_nothing(g2):
    scan = wavefront_scan(get_function("gevrey_bump"), FLAT, [-0.5, 0.0, 0.5], [1.0, -1.0], g2,
                          LADDER)
    assert scan.flagged == []


def test_heaviside_flagged_only_at_jump(g2):
    scan = wavefront_scan(get_function("heaviside"), FLAT, [-0.5, 0.0, 0.5], [1.0, -1.0], g2,
                          LADDER)
    assert sorted(scan.flagged) == [((0.0,), (-1.0,)), ((0.0,), (1.0,))]


@pytest.mark.parametrize("zeta_min", [2.0, 8.0])
def test_boundary_inverse_flagged_for_positive_xi_only(g2, zeta_min):
    scan = wavefront_scan(boundary_inverse(), FLAT, [0.0, 0.5], [1.0, -1.0], g2,
                          geometric_ladder(zeta_min))
    assert scan.flagged == [((0.0,), (1.0,))]


def test_flat_series_is_not_exponential(g2):
    # a fitted rate that decays by less than one e-fold over the ladder is no decay
    c = classify_series(LADDER, 6.2 * np.exp(-1e-3 * LADDER), g2)
    assert c.kind == "none"


# inversion --------------------------------------------------------------------------

def test_inversion_of_bump_at_origin():
    u = get_function("gevrey_bump")
    r = inversion(u, FLAT, [0.0])
    assert abs(r.value[0] - math.exp(-1)) <= 0.02 * math.exp(-1)


def test_inversion_of_x2_bump():
    r = inversion(get_function("bump_x2"), FLAT, [0.1])
    assert abs(r.value[0] - r.target[0]) <= 0.02 * abs(r.target[0])


def test_inversion_of_zero():
    assert inversion(get_function("zero"), FLAT, [0.0], n_s=20).value[0] == 0


def test_inversion_needs_long_enough_ladder():
    with pytest.raises(FBIError):
        inversion(get_function("gevrey_bump"), FLAT, [0.0], eps_ladder=(1e-2, 1e-3))


# boundary values --------------------------------------------------------------------

def bump(x):
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1
    return np.where(inside, np.exp(-1 / (1 - np.where(inside, x * x, 0.0))), 0.0)


def test_entire_function_restricts():
    f = WedgeFunction("z2", lambda z: z * z, (-1.0, 1.0))
    want = quad(lambda x: x * x * bump(x), -1, 1, epsabs=1e-13)[0]
    # Re (x + it)^2 = x^2 - t^2 needs a quadratic fit in t to be exact
    assert boundary_value(f, bump).value == pytest.approx(want, rel=1e-3)
    assert boundary_value(f, bump, order=2).value == pytest.approx(want, abs=1e-10)


def test_plemelj_for_inverse():
    f = WedgeFunction("inv", lambda z: 1 / z, (-1.0, 1.0), growth=(1.0, 1), singular=(0.0,))
    got = boundary_value(f, bump).value
    assert got == pytest.approx(-1j * math.pi * math.exp(-1), abs=1e-5)


def test_growth_violation_raises():
    f = WedgeFunction("inv3", lambda z: 1 / z ** 3, (-1.0, 1.0), growth=(1.0, 1), singular=(0.0,))
    with pytest.raises(FBIError):
        boundary_value(f, bump)

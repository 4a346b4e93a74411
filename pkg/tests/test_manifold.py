import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcmicro.extension import (boundary_value, dbar_residual_fd, dbar_residual_on_manifold,
                               manifold_decay, manifold_operator)
from dcmicro import RegularSequence
from dcmicro.jets import JetFunction, coordinate_frame, frame_apply, get_function
from dcmicro.manifold import (ChartError, chart_frame, check_well_positioned, distance_to_sigma,
                              frame_commutators, get_chart, lipschitz_estimate,
                              structure_direction)

FLAT = get_chart("chart_flat")
QUAD = get_chart("chart_quadratic")


# chart frame ------------------------------------------------------------------------

def test_flat_chart_frame_is_coordinate_frame():
    x = np.linspace(-0.5, 0.5, 5).reshape(1, -1)
    assert np.allclose(chart_frame(FLAT).coefficient_values(x), coordinate_frame(1).coefficient_values(x))


def test_quadratic_chart_coefficient_at_one():
    a = get_chart("chart_quadratic", [(-1.5, 1.5)]).a(np.array([1.0]))
    assert complex(a.ravel()[0]) == pytest.approx(0.8 - 0.4j, abs=1e-15)


@pytest.mark.parametrize("name", ["chart_flat", "chart_quadratic", "chart_bilinear2"])
def test_frame_is_dual_to_Z(name):
    chart = get_chart(name)
    frame = chart_frame(chart)
    rng = np.random.default_rng(1)
    lo = np.array([b[0] for b in chart.U])
    hi = np.array([b[1] for b in chart.U])
    x = lo[:, None] + (hi - lo)[:, None] * rng.random((chart.m, 6))
    for j in range(chart.m):
        Zj = JetFunction(f"Z{j}", chart.m,
                         lambda xs, j=j: xs[j] + 1j * chart.phi_func(xs)[j], tuple(chart.U))
        for k in range(chart.m):
            e = tuple(int(i == k) for i in range(chart.m))
            got = frame_apply(frame, Zj, e, x)
            assert np.allclose(got, float(j == k), atol=1e-9)


@given(st.floats(-0.2, 0.2), st.floats(-0.2, 0.2))
def test_chart_frames_commute(x1, x2):
    assert frame_commutators(get_chart("chart_bilinear2"), np.array([[x1], [x2]])) <= 1e-6


# structure directions ---------------------------------------------------------------

def test_flat_structure_direction():
    assert structure_direction(FLAT, [0.3], [1.0]).zeta[0] == 1.0


def test_quadratic_structure_direction_and_cone_ratio():
    chart = get_chart("chart_quadratic", [(-1.5, 1.5)])
    sd = structure_direction(chart, [1.0], [1.0])
    assert complex(sd.zeta[0]) == pytest.approx(0.8 - 0.4j, abs=1e-15)
    assert sd.cone_ratio == pytest.approx(0.5, rel=1e-14)


def test_zero_covector_rejected():
    with pytest.raises(ChartError):
        structure_direction(QUAD, [0.1], [0.0])


@given(st.floats(-0.2, 0.2), st.floats(-0.2, 0.2), st.floats(-3, 3), st.floats(-3, 3))
def test_structure_direction_inverts(x1, x2, a, b):
    if abs(a) + abs(b) < 1e-6:
        return
    chart = get_chart("chart_bilinear2")
    sd = structure_direction(chart, [x1, x2], [a, b])
    Zx = chart.Zx(np.array([x1, x2])).reshape(2, 2)
    assert np.allclose(Zx.T @ sd.zeta, [a, b], atol=1e-13)


# lipschitz and well-positioned -------------------------------------------------------

def test_lipschitz_flat():
    assert lipschitz_estimate(FLAT) == 0.0


@pytest.mark.parametrize("half,want", [(1.0, 0.5), (0.2, 0.1)])
def test_lipschitz_quadratic(half, want):
    chart = get_chart("chart_quadratic", [(-half, half)])
    assert lipschitz_estimate(chart, samples=401) == pytest.approx(want, rel=1e-2)


def test_lipschitz_needs_two_samples():
    with pytest.raises(ChartError):
        lipschitz_estimate(QUAD, samples=1)


def test_flat_chart_well_positioned_exactly():
    cert = check_well_positioned(FLAT, 1.0, 2000)
    assert cert.valid and cert.kappa == 0.0
    assert cert.kappa_prime == pytest.approx(1.0, rel=1e-12)


def test_quadratic_chart_well_positioned():
    cert = check_well_positioned(QUAD, 1.0, 10_000)
    assert cert.valid and cert.kappa_prime >= 0.5


def test_large_box_fails_and_shrinking_restores():
    big = get_chart("chart_quadratic", [(-3.0, 3.0)])
    assert not check_well_positioned(big, 1.0, 4000).valid
    assert check_well_positioned(get_chart("chart_quadratic", [(-0.5, 0.5)]), 1.0, 4000).valid


def test_lambda_must_be_positive():
    with pytest.raises(ChartError):
        check_well_positioned(QUAD, 0.0)


# distance ---------------------------------------------------------------------------

def test_distance_flat():
    d, x = distance_to_sigma(FLAT, 0.3 + 0.05j)
    assert d == pytest.approx(0.05) and x[0] == pytest.approx(0.3)


@given(st.floats(-0.15, 0.15), st.floats(-0.05, 0.05))
def test_distance_to_parabola_matches_brute_force(x, s):
    z = x + 1j * (x * x / 4 + s)
    d, _ = distance_to_sigma(QUAD, z)
    t = np.linspace(x - 0.1, x + 0.1, 200_001)
    brute = np.min(np.abs(z - (t + 0.25j * t * t)))
    assert d == pytest.approx(brute, abs=1e-9)


# manifold extension -----------------------------------------------------------------

@pytest.fixture(scope="module")
def quad_op(g2):
    return manifold_operator(g2, QUAD, get_function("rational"))


def test_flat_chart_polynomial_has_zero_dbar(g2):
    op = manifold_operator(g2, FLAT, get_function("poly_cubic"))
    for z in (0.1 + 0.5 * op.delta * 1j, -0.3 - 0.25 * op.delta * 1j):
        assert np.max(np.abs(dbar_residual_on_manifold(FLAT, op, z))) <= 1e-7


def test_boundary_value_is_f(quad_op):
    for x in (-0.15, 0.0, 0.1):
        assert abs(boundary_value(QUAD, quad_op, x) - 1 / (1 + x * x)) <= 1e-6


def test_dbar_agrees_with_differences(quad_op):
    z = 0.1 + 1j * (0.0025 + 0.5 * quad_op.delta)
    exact = dbar_residual_on_manifold(QUAD, quad_op, z)
    fd = dbar_residual_fd(QUAD, quad_op, z, 1e-5)
    assert np.max(np.abs(exact - fd)) <= 1e-6


def test_manifold_decay_conforms(quad_op, g2):
    rep = manifold_decay(QUAD, quad_op, np.linspace(-0.15, 0.15, 5), K_test=6)
    assert np.isfinite(rep.C) and rep.conforms
    assert rep.boundary_error <= 1e-6
    for d, r in zip(rep.dist, rep.residual):
        for k in range(7):
            assert r <= rep.C ** (k + 1) * np.exp(g2.log_m[k]) * d ** k * (1 + 1e-9)


@settings(max_examples=10)
@given(st.floats(-0.8, 0.8), st.floats(-0.5, 0.5))
def test_flat_chart_polynomials_stay_holomorphic(x, t):
    op = manifold_operator(RegularSequence.gevrey(2.0), FLAT, get_function("poly_cubic"))
    if t == 0:
        return
    z = x + 1j * t * op.delta
    assert np.max(np.abs(dbar_residual_on_manifold(FLAT, op, z))) <= 1e-7

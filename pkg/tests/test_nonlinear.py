import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dcmicro.nonlinear import (SOLUTIONS, SYSTEMS, NonlinearError, admit, characteristic_test,
                               get_solution, get_system, hamiltonian_coeffs,
                               hamiltonian_commutators, holomorphy_residual, linearize,
                               linearize_fd, substitution_identity, theta_system,
                               wf_inclusion_experiment)

PAIRS = [(s.system, name) for name, s in sorted(SOLUTIONS.items())]


# corpus ----------------------------------------------------------------------------

@pytest.mark.parametrize("system,solution", PAIRS)
def test_corpus_solutions_admitted(system, solution):
    s = admit(get_system(system), get_solution(solution))
    assert s.residual <= 1e-6 * s.scale


@pytest.mark.parametrize("name", sorted(SYSTEMS))
def test_corpus_systems_holomorphic(name):
    assert holomorphy_residual(get_system(name)) <= 1e-8


def test_wrong_solution_rejected():
    with pytest.raises(NonlinearError):
        admit(get_system("sys_transport"), get_solution("sol_burgers"))


# linearize ---------------------------------------------------------------------------

def test_linearize_transport_i():
    a = linearize(get_system("sys_transport_i"), get_solution("sol_square_i"), [0.2, -0.1])
    assert a[0, 0] == pytest.approx(1j)


def test_linearize_burgers_gives_u():
    p = [0.3, 0.2]
    a = linearize(get_system("sys_burgers"), get_solution("sol_burgers"), p)
    assert a[0, 0] == pytest.approx(0.3 / (1 - 0.2))


@pytest.mark.parametrize("system,solution", PAIRS)
def test_linearize_matches_differences(system, solution):
    sys_, sol = get_system(system), get_solution(solution)
    rng = np.random.default_rng(3)
    for _ in range(5):
        p = [rng.uniform(lo, hi) for lo, hi in sol.box]
        assert np.allclose(linearize(sys_, sol, p), linearize_fd(sys_, sol, p), atol=1e-6)


def test_linearize_rejects_inadmissible():
    with pytest.raises(NonlinearError):
        linearize(get_system("sys_transport"), get_solution("sol_burgers"), [0.0, 0.0])


# characteristic test ------------------------------------------------------------------

def test_imaginary_coefficient_not_characteristic():
    r = characteristic_test([[1j]], [1.0], [0.0])
    assert not r.characteristic and r.margin == pytest.approx(1.0)


def test_real_coefficient_characteristic_direction():
    r = characteristic_test([[2.0]], [1.0], [2.0])
    assert r.characteristic and r.margin == 0.0


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_imaginary_coefficient_has_empty_characteristic_set(xi, tau):
    if abs(xi) + abs(tau) < 1e-6:
        return
    assert not characteristic_test([[1j]], [xi], [tau]).characteristic


def test_zero_covector_rejected():
    with pytest.raises(NonlinearError):
        characteristic_test([[1.0]], [0.0], [0.0])


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.booleans())
def test_theta_criterion_matches_reduction(re_a, im_a, xi, on_set):
    # on_set builds a characteristic direction when Im a = 0 allows one
    a = complex(re_a, 0.0 if on_set else im_a)
    xi = xi if abs(xi) > 1e-3 else 1.0
    tau = a.real * xi if on_set else a.real * xi + 0.5
    r = characteristic_test([[a]], [xi], [tau])
    assert r.characteristic == r.theta_criterion
    assert r.characteristic == (abs(a.imag * xi) <= r.tolerance and abs(tau - a.real * xi) <= r.tolerance)


# theta systems and Hamiltonian coefficients -------------------------------------------

def test_theta_zero_and_quarter_turn():
    s = get_system("sys_burgers")
    args = ([0.1], [0.2], 1.5, [2.0], [3.0])
    base = 3.0 - 1.5 * 2.0
    assert theta_system(s, 0.0).eval(0, *args) == pytest.approx(base)
    assert theta_system(s, math.pi / 2).eval(0, *args) == pytest.approx(-1j * base)


@given(st.floats(0, 2 * math.pi - 1e-9))
def test_theta_partial_in_tau(theta):
    P = theta_system(get_system("sys_pair_transport"), theta).partials(
        0, [0.1], [0.0, 0.0], 0.5, [1.0], [0.3, 0.4])
    assert P["tau"][0] == pytest.approx(cmath.exp(-1j * theta))
    assert P["tau"][1] == 0.0


def test_theta_out_of_range():
    with pytest.raises(NonlinearError):
        theta_system(get_system("sys_burgers"), 2 * math.pi)


def test_transport_i_h0_vanishes_at_random_points():
    rng = np.random.default_rng(0)
    s = get_system("sys_transport_i")
    for _ in range(100):
        th = rng.uniform(0, 2 * math.pi)
        p = [*rng.uniform(-1, 1, 2), *(rng.normal(size=3) + 1j * rng.normal(size=3))]
        h0, _ = hamiltonian_coeffs(s, th, 0, p)
        assert abs(h0) <= 1e-10


def test_transport_i_h_fields_vanish():
    _, hs = hamiltonian_coeffs(get_system("sys_transport_i"), 0.7, 0, [0.1, 0.2, 1, 2j, 3])
    assert all(h == 0 for h in hs)


def test_burgers_h0_example():
    # f^0 = tau - z0 z; d/dz = -z0, d/dtau = 1; h0 = (3 - 2) - 2 (-1) - 3 = 0
    h0, hs = hamiltonian_coeffs(get_system("sys_burgers"), 0.0, 0, [0.0, 0.0, 1.0, 2.0, 3.0])
    assert h0 == 0
    # h_1 = d/dx f^0 + zeta d/dzeta0 f^0 = 0 + 2 (-2), h_2 = d/dt f^0 + tau d/dzeta0 f^0 = 3 (-2)
    assert hs == [pytest.approx(-4.0), pytest.approx(-6.0)]


@pytest.mark.parametrize("name", ["sys_pair_transport", "sys_pair_burgers"])
def test_hamiltonian_fields_commute(name):
    assert hamiltonian_commutators(get_system(name), 0.3) <= 1e-6


@pytest.mark.parametrize("system,solution", PAIRS)
def test_substitution_identity(system, solution):
    assert substitution_identity(get_system(system), get_solution(solution), 1.1) <= 1e-8


# wave-front experiment ----------------------------------------------------------------

def test_wf_experiment_rejects_inadmissible(g2):
    with pytest.raises(NonlinearError):
        wf_inclusion_experiment(get_system("sys_transport"), get_solution("sol_burgers"), g2,
                                [[0.0, 0.0]])


def test_wf_experiment_needs_one_time_variable(g2):
    with pytest.raises(NonlinearError):
        wf_inclusion_experiment(get_system("sys_pair_transport"),
                                get_solution("sol_pair_transport"), g2, [[0.0, 0.0, 0.0]])

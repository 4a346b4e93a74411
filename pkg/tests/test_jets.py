import math
import tempfile

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from dcmicro.jets import (CORPUS, JetError, class_constant_fit, coordinate_frame, fd_jet,
                          frame_apply, get_function, jet_table, load_jet_csv, multi_indices,
                          taylor_coefficient)
from dcmicro.manifold import chart_frame, frame_commutators, get_chart
from dcmicro.sequence import RegularSequence

X = sp.symbols("x")
FR1 = coordinate_frame(1)
SYMBOLIC = {
    "poly_quadratic": X ** 2,
    "poly_cubic": X ** 3 - X,
    "rational": 1 / (1 + X ** 2),
    "exp": sp.exp(X),
    "gaussian": sp.exp(-X ** 2),
    "gevrey_bump": sp.exp(-1 / (1 - X ** 2)),
}


def sym_jet(name, n, x):
    return complex(sp.diff(SYMBOLIC[name], X, n).subs(X, sp.Rational(str(x))).evalf(30))


# frame_apply ------------------------------------------------------------------------

def test_coordinate_second_derivative_of_square():
    f = get_function("poly_quadratic")
    assert frame_apply(FR1, f, (2,), [0.37]) == pytest.approx(2.0)


def test_coordinate_first_derivative_of_square_at_zero():
    assert frame_apply(FR1, get_function("poly_quadratic"), (1,), [0.0]) == pytest.approx(0.0)


def test_chart_frame_second_derivative_of_square_at_zero():
    frame = chart_frame(get_chart("chart_quadratic"))
    assert frame_apply(frame, get_function("poly_quadratic"), (2,), [0.0]) == pytest.approx(2.0)


def test_chart_frame_matches_symbolic_composition():
    # X = a d/dx with a = 1/(1 + i x/2); X^3 f expanded independently
    a = 1 / (1 + sp.I * X / 2)
    g = SYMBOLIC["rational"]
    for _ in range(3):
        g = a * sp.diff(g, X)
    frame = chart_frame(get_chart("chart_quadratic"))
    for x in (-0.15, 0.0, 0.1):
        want = complex(g.subs(X, x).evalf(30))
        got = complex(frame_apply(frame, get_function("rational"), (3,), [x])[0])
        assert got == pytest.approx(want, rel=1e-12)


def test_order_overflow_rejected():
    with pytest.raises(JetError):
        frame_apply(FR1, get_function("abs_cubed"), (3,), [0.5])


def test_point_outside_domain_rejected():
    f = load_jet_csv_fixture()
    with pytest.raises(JetError):
        frame_apply(FR1, f, (1,), [5.0])


# taylor coefficients ----------------------------------------------------------------

@pytest.mark.parametrize("k,expected", [(0, 1.0), (2, -1.0), (4, 1.0), (3, 0.0)])
def test_rational_taylor_coefficients(k, expected):
    got = taylor_coefficient(get_function("rational"), FR1, (k,), [0.0])
    assert got == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("name", sorted(SYMBOLIC))
@pytest.mark.parametrize("x", [-0.4, 0.0, 0.3])
def test_exact_jets_match_symbolic(name, x):
    table = jet_table(get_function(name), FR1, [x], 8)
    for n in range(9):
        want = sym_jet(name, n, x)
        assert table[(n,)][0] == pytest.approx(want, rel=1e-10, abs=1e-12)


def test_jet_order_zero_is_value():
    for name, f in CORPUS.items():
        if f.func is None or f.m != 1:
            continue
        x = np.array([[-0.3, 0.2, 0.7]])
        assert np.allclose(f.jet((0,), x), f.eval(x))


def test_mixed_partials_symmetric_in_two_variables():
    f = get_function("rational2")
    t = jet_table(f, coordinate_frame(2), np.array([[0.2], [-0.1]]), 4)
    # compare with nested differences taken in the opposite order
    h = 1e-3

    def dy(x, y):
        return (f.eval([[x], [y + h]]) - f.eval([[x], [y - h]])) / (2 * h)

    dyx = (dy(0.2 + h, -0.1) - dy(0.2 - h, -0.1)) / (2 * h)
    assert t[(1, 1)][0] == pytest.approx(dyx[0], rel=1e-5)


@pytest.mark.parametrize("name", ["rational", "gaussian", "exp"])
def test_finite_difference_jets_agree_with_exact(name):
    f = get_function(name)
    x = np.array([[-0.3, 0.1, 0.45]])
    for n in range(4):
        exact = f.jet((n,), x)
        fd = fd_jet(f, (n,), x)
        assert np.allclose(fd, exact, rtol=1e-5, atol=1e-7)


def test_fd_order_cap():
    with pytest.raises(JetError):
        fd_jet(get_function("heaviside"), (4,), [[0.5]])


# class constant ---------------------------------------------------------------------

def test_class_constant_of_square(g2):
    fit = class_constant_fit(get_function("poly_quadratic"), FR1, g2, 4, np.linspace(-1, 1, 41))
    assert fit.C == pytest.approx(math.sqrt(2), rel=1e-12)


def test_class_constant_of_zero(g2):
    fit = class_constant_fit(get_function("zero"), FR1, g2, 6, np.linspace(-1, 1, 11))
    assert fit.C == 0.0


def test_class_constant_of_rational_stable(g2):
    grid = np.linspace(-0.5, 0.5, 41)
    f = get_function("rational")
    c6 = class_constant_fit(f, FR1, g2, 6, grid).C
    c8 = class_constant_fit(f, FR1, g2, 8, grid)
    assert math.isfinite(c8.C) and c8.stable
    assert c8.C <= 1.1 * c6


def test_class_constant_definition(g2):
    grid = np.linspace(-0.5, 0.5, 21)
    fit = class_constant_fit(get_function("gaussian"), FR1, g2, 8, grid)
    want = max((max(abs(sym_jet("gaussian", k, float(x))) for x in grid)
                / math.exp(g2.log_M[k])) ** (1 / (k + 1)) for k in range(9))
    assert fit.C == pytest.approx(want, rel=1e-9)


def test_class_constant_empty_grid(g2):
    with pytest.raises(JetError):
        class_constant_fit(get_function("rational"), FR1, g2, 4, [])


def test_heaviside_class_fit_unstable_across_jump(g2):
    fit = class_constant_fit(get_function("heaviside"), FR1, g2, 3, np.linspace(-0.25, 0.25, 41))
    assert not fit.stable


def test_ingredient_estimate_on_rational(g2):
    # |d^g f_a| <= C^(|g|+|a|+1) M_(|g|+|a|) / a!
    f = get_function("rational")
    grid = np.linspace(-0.5, 0.5, 21)
    C = class_constant_fit(f, FR1, g2, 8, grid).C
    t = jet_table(f, FR1, grid, 8)
    for a in range(9):
        for g in range(9 - a):
            lhs = np.max(np.abs(t[(a + g,)])) / math.factorial(a)
            rhs = C ** (a + g + 1) * math.exp(g2.log_M[a + g]) / math.factorial(a)
            assert lhs <= rhs * (1 + 1e-12)


# chart duality and commutators -------------------------------------------------------

def test_chart_frame_dual_to_dZ():
    chart = get_chart("chart_quadratic")
    frame = chart_frame(chart)
    xs = np.linspace(-0.2, 0.2, 7)
    a = frame.coefficient_values(xs.reshape(1, -1))[0, 0]
    assert np.allclose(a * chart.Zx(xs.reshape(1, -1))[0, 0], 1.0)


# csv tables -------------------------------------------------------------------------

def load_jet_csv_fixture():
    with tempfile.NamedTemporaryFile("w", suffix=".csv", delete=False) as fh:
        fh.write("tab,d0,d1,d2\n")
        for x in (0.0, 0.5, 1.0):
            fh.write(f"{x},{x ** 2},{2 * x},2\n")
    return load_jet_csv(fh.name)


def test_csv_table_serves_tabulated_jets():
    f = load_jet_csv_fixture()
    assert f.name == "tab" and f.max_order == 2
    assert frame_apply(FR1, f, (1,), [0.5]) == pytest.approx(1.0)
    assert frame_apply(FR1, f, (2,), [1.0]) == pytest.approx(2.0)


# properties -------------------------------------------------------------------------

@given(st.floats(-0.9, 0.9), st.integers(0, 6))
def test_rational_jets_match_closed_form(x, n):
    # partial fractions: 1/(1+x^2) = (1/(x-i) - 1/(x+i)) / (2i)
    want = math.factorial(n) * (-1) ** n * (((x - 1j) ** -(n + 1) - (x + 1j) ** -(n + 1)) / 2j)
    got = get_function("rational").jet((n,), [[x]])[0]
    assert got == pytest.approx(want.real, rel=1e-10, abs=1e-12)


@given(st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_coordinate_frames_commute(x, y):
    f = get_function("gaussian2")
    t = jet_table(f, coordinate_frame(2), np.array([[x], [y]]), 2)
    assert all(k in t for k in multi_indices(2, 2))
    assert np.isfinite(t[(1, 1)]).all()


@given(st.floats(-0.2, 0.2))
def test_bilinear_chart_frame_commutes(x):
    chart = get_chart("chart_bilinear2")
    assert frame_commutators(chart, np.array([[x], [0.5 * x]])) <= 1e-10

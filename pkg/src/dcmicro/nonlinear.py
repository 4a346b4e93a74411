"""First-order nonlinear systems ``du/dt_j = f_j(x, t, u, u_x)``.

Variables are ordered ``x (d), t (n), zeta0, zeta (d)`` for ``f``; the
rotated systems ``f_j^theta = exp(-i theta)(tau_j - f_j)`` add ``tau (n)``,
and the Hamiltonian fields act on functions of
``x (d), t (n), r (n), zeta0, zeta (d), tau (n)``:

    H_j = d/dr_j - sum_k f^theta_zeta_k d/dx_k - sum_l f^theta_tau_l d/dt_l
          + h_j0 d/dzeta0 + sum_k h_jk d/dzeta_k + sum_l h_j(d+l) d/dtau_l.

All partial derivatives come from truncated power series, so they are exact
up to rounding for the closed-form corpus.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fbi import Cutoff, FBIKernel, WavefrontScan, geometric_ladder, wavefront_scan
from .jets import JetFunction, _abs_cubed
from .manifold import get_chart
from .sequence import RegularSequence
from .tps import TPS

THETA_GRID = 64
CHAR_TOL = 1e-8
ADMIT_TOL = 1e-6
# finite-order kinks decay algebraically; low rungs cannot separate that from M-regular
WF_LADDER_MIN = 8.0


class NonlinearError(ValueError):
    """Inadmissible solution or malformed system input."""


@dataclass(frozen=True)
class NonlinearSystem:
    """``f(j, x, t, z0, z)`` with ``x``, ``t``, ``z`` lists; TPS-compatible."""

    name: str
    d: int
    n: int
    f: Callable
    regularity: str = "analytic"
    description: str = ""

    def eval(self, j: int, x, t, z0, z):
        return self.f(j, list(x), list(t), z0, list(z))


@dataclass(frozen=True)
class Solution:
    """Closed-form solution ``u(x, t)``; ``func(x, t)`` takes coordinate lists.

    ``singular_angle`` rotates the scan frame so a kink line of ``u`` is
    a coordinate line; ``singular_offsets`` are its offsets there.
    """

    name: str
    system: str
    func: Callable
    box: Tuple[Tuple[float, float], ...]
    singular_angle: Optional[float] = None
    singular_offsets: Tuple[float, ...] = ()
    description: str = ""


# partial derivatives ---------------------------------------------------------

def _f_series(system: NonlinearSystem, j: int, x, t, z0, z, order: int = 1):
    vals = [*x, *t, z0, *z]
    V = TPS.variables(order, [np.asarray(v, dtype=complex) for v in vals])
    d, n = system.d, system.n
    out = system.eval(j, V[:d], V[d:d + n], V[d + n], V[d + n + 1:])
    if not isinstance(out, TPS):
        out = V[0].constant_like(0.0) + out
    return out


def f_partials(system: NonlinearSystem, j: int, x, t, z0, z) -> Dict[str, np.ndarray]:
    """Value and first partials of ``f_j`` at one point."""
    d, n = system.d, system.n
    g = _f_series(system, j, x, t, z0, z)
    unit = lambda i: tuple(int(k == i) for k in range(d + n + 1 + d))
    return {"f": g.value,
            "x": [g.coef(unit(i)) for i in range(d)],
            "t": [g.coef(unit(d + i)) for i in range(n)],
            "z0": g.coef(unit(d + n)),
            "z": [g.coef(unit(d + n + 1 + k)) for k in range(d)]}


def holomorphy_residual(system: NonlinearSystem, points: int = 32, seed: int = 0,
                        h: float = 1e-5) -> float:
    """Largest sampled ``|d f / d conj(w)|`` for ``w`` in ``(zeta0, zeta)``."""
    rng = np.random.default_rng(seed)
    d, n = system.d, system.n
    worst = 0.0
    for _ in range(points):
        x = rng.uniform(-0.5, 0.5, d)
        t = rng.uniform(-0.2, 0.2, n)
        w = rng.uniform(-1, 1, d + 1) + 1j * rng.uniform(-1, 1, d + 1)
        for j in range(n):
            for i in range(d + 1):
                def F(dw):
                    ww = w.copy()
                    ww[i] += dw
                    return complex(system.eval(j, x, t, ww[0], ww[1:]))
                da = (F(h) - F(-h)) / (2 * h)
                db = (F(1j * h) - F(-1j * h)) / (2 * h)
                worst = max(worst, abs(0.5 * (da + 1j * db)))
    return worst


# solutions -------------------------------------------------------------------

def _solution_series(sol: Solution, d: int, n: int, pts: np.ndarray, order: int,
                     extra: int = 0):
    """TPS of ``u`` in ``(x, t)`` (plus ``extra`` idle variables)."""
    vals = [pts[i] for i in range(d + n)] + [np.zeros_like(pts[0])] * extra
    V = TPS.variables(order, vals)
    out = sol.func(V[:d], V[d:d + n])
    if not isinstance(out, TPS):
        out = V[0].constant_like(0.0) + out
    return out, V


@dataclass
class SolutionSample:
    points: np.ndarray  # (d + n, N)
    u: np.ndarray
    u_x: np.ndarray  # (d, N)
    u_t: np.ndarray  # (n, N)
    residual: float
    scale: float
    admitted: bool

    def to_dict(self) -> dict:
        return {"residual": self.residual, "scale": self.scale, "admitted": self.admitted,
                "points": int(self.points.shape[1])}


def sample_solution(system: NonlinearSystem, sol: Solution, per_axis: int = 9) -> SolutionSample:
    """Grid values and residual ``sup_j |u_t_j - f_j(x, t, u, u_x)|``."""
    d, n = system.d, system.n
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in sol.box]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in mesh])
    g, _ = _solution_series(sol, d, n, pts, 1)
    unit = lambda i: tuple(int(k == i) for k in range(d + n))
    u = np.asarray(g.value, dtype=complex)
    ux = np.array([g.coef(unit(i)) for i in range(d)], dtype=complex)
    ut = np.array([g.coef(unit(d + i)) for i in range(n)], dtype=complex)
    res = 0.0
    for j in range(n):
        fj = system.eval(j, pts[:d], pts[d:d + n], u, ux)
        res = max(res, float(np.max(np.abs(ut[j] - fj))))
    scale = max(1.0, float(np.max(np.abs(ut))))
    return SolutionSample(pts, u, ux, ut, res, scale, res <= ADMIT_TOL * scale)


def admit(system: NonlinearSystem, sol: Solution) -> SolutionSample:
    s = sample_solution(system, sol)
    if not s.admitted:
        raise NonlinearError(f"{sol.name} is not a solution of {system.name} "
                             f"(residual {s.residual:.3g})")
    return s


def _solution_jet(system: NonlinearSystem, sol: Solution, point):
    d, n = system.d, system.n
    pts = np.asarray(point, dtype=float).reshape(d + n, 1)
    g, _ = _solution_series(sol, d, n, pts, 1)
    unit = lambda i: tuple(int(k == i) for k in range(d + n))
    return (complex(g.value[0]), [complex(g.coef(unit(i))[0]) for i in range(d)],
            [complex(g.coef(unit(d + i))[0]) for i in range(n)])


def linearize(system: NonlinearSystem, sol: Solution, point) -> np.ndarray:
    """``a[j, k] = df_j/dzeta_k (x, t, u, u_x)`` at ``point = (x, t)``."""
    admit(system, sol)
    d, n = system.d, system.n
    point = np.asarray(point, dtype=float).reshape(d + n)
    u, ux, _ = _solution_jet(system, sol, point)
    a = np.zeros((n, d), dtype=complex)
    for j in range(n):
        p = f_partials(system, j, point[:d], point[d:], u, ux)
        a[j] = [complex(np.asarray(v)) for v in p["z"]]
    return a


def linearize_fd(system: NonlinearSystem, sol: Solution, point, h: float = 1e-6) -> np.ndarray:
    """Finite-difference cross-check of :func:`linearize`."""
    d, n = system.d, system.n
    point = np.asarray(point, dtype=float).reshape(d + n)
    u, ux, _ = _solution_jet(system, sol, point)
    a = np.zeros((n, d), dtype=complex)
    for j in range(n):
        for k in range(d):
            zp, zm = list(ux), list(ux)
            zp[k] += h
            zm[k] -= h
            fp = complex(system.eval(j, point[:d], point[d:], u, zp))
            fm = complex(system.eval(j, point[:d], point[d:], u, zm))
            a[j, k] = (fp - fm) / (2 * h)
    return a


# characteristic set ------------------------------------------------------------

@dataclass
class CharacteristicResult:
    characteristic: bool
    margin: float
    theta_criterion: bool
    tolerance: float

    def to_dict(self) -> dict:
        return {"characteristic": self.characteristic, "margin": self.margin,
                "theta_criterion": self.theta_criterion, "tolerance": self.tolerance}


def characteristic_test(a, xi, tau, theta_grid: int = THETA_GRID,
                        tol: Optional[float] = None) -> CharacteristicResult:
    """Whether ``(xi, tau)`` lies in the characteristic set of the linearization ``a``.

    The reduction ``Im a_j.xi = 0, tau_j = Re a_j.xi`` decides membership; the
    margin is the largest ``|cos th Im a_j.xi + sin th (tau_j - Re a_j.xi)|``
    over the theta grid.
    """
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if not (np.any(xi) or np.any(tau)):
        raise NonlinearError("(xi, tau) must be nonzero")
    tol = CHAR_TOL * (1 + float(np.max(np.abs(a)))) * (np.linalg.norm(xi) + np.linalg.norm(tau)) \
        if tol is None else tol
    im = a.imag @ xi
    re = tau - a.real @ xi
    th = 2 * np.pi * np.arange(theta_grid) / theta_grid
    vals = np.cos(th)[:, None] * im[None, :] + np.sin(th)[:, None] * re[None, :]
    margin = float(np.max(np.abs(vals)))
    reduced = bool(np.all(np.abs(im) <= tol) and np.all(np.abs(re) <= tol))
    return CharacteristicResult(reduced, margin, margin <= tol, tol)


# rotated systems and Hamiltonian lifts -----------------------------------------

@dataclass(frozen=True)
class ThetaSystem:
    """``f_j^theta(x, t, zeta0, zeta, tau) = exp(-i theta)(tau_j - f_j)``."""

    base: NonlinearSystem
    theta: float

    @property
    def phase(self) -> complex:
        return cmath.exp(-1j * self.theta)

    def eval(self, j: int, x, t, z0, z, tau):
        return self.phase * (tau[j] - self.base.eval(j, x, t, z0, z))

    def partials(self, j: int, x, t, z0, z, tau) -> Dict[str, object]:
        p = f_partials(self.base, j, x, t, z0, z)
        e = self.phase
        n = self.base.n
        return {"f": e * (tau[j] - p["f"]),
                "x": [-e * v for v in p["x"]],
                "t": [-e * v for v in p["t"]],
                "z0": -e * p["z0"],
                "z": [-e * v for v in p["z"]],
                "tau": [e if l == j else 0.0 for l in range(n)]}


def theta_system(system: NonlinearSystem, theta: float) -> ThetaSystem:
    if not 0 <= theta < 2 * math.pi:
        raise NonlinearError("theta must lie in [0, 2 pi)")
    return ThetaSystem(system, theta)


def hamiltonian_coeffs(system: NonlinearSystem, theta: float, j: int, point) -> Tuple[complex, List[complex]]:
    """``(h_j0, [h_j1, ..., h_j(d+n)])`` at ``point = (x, t, zeta0, zeta, tau)``."""
    d, n = system.d, system.n
    p = np.asarray(point, dtype=complex).ravel()
    x, t = p[:d].real, p[d:d + n].real
    z0, z, tau = p[d + n], p[d + n + 1:d + n + 1 + d], p[d + n + 1 + d:]
    P = theta_system(system, theta).partials(j, x, t, z0, z, tau)
    h0 = P["f"] - sum(z[k] * P["z"][k] for k in range(d)) - sum(tau[l] * P["tau"][l] for l in range(n))
    hs = [P["x"][i] + z[i] * P["z0"] for i in range(d)]
    hs += [P["t"][i] + tau[i] * P["z0"] for i in range(n)]
    return complex(np.asarray(h0)), [complex(np.asarray(h)) for h in hs]


class _Layout:
    """Index layout of ``(x, t, r, zeta0, zeta, tau)``."""

    def __init__(self, d: int, n: int):
        self.d, self.n = d, n
        self.x = list(range(d))
        self.t = list(range(d, d + n))
        self.r = list(range(d + n, d + 2 * n))
        self.z0 = d + 2 * n
        self.z = list(range(d + 2 * n + 1, 2 * d + 2 * n + 1))
        self.tau = list(range(2 * d + 2 * n + 1, 2 * d + 3 * n + 1))
        self.size = 2 * d + 3 * n + 1


def _field_series(system: NonlinearSystem, theta: float, j: int, V: List[TPS]) -> Dict[int, TPS]:
    """Coefficients of ``H_j^theta`` as TPS over the full variable list."""
    d, n = system.d, system.n
    L = _Layout(d, n)
    x = [V[i] for i in L.x]
    t = [V[i] for i in L.t]
    z0, z, tau = V[L.z0], [V[i] for i in L.z], [V[i] for i in L.tau]
    fth = ThetaSystem(system, theta).eval(j, x, t, z0, z, tau)
    if not isinstance(fth, TPS):
        fth = V[0].constant_like(0.0) + fth
    D = {i: fth.diff(i) for i in range(L.size)}
    low = D[0].order
    trunc = lambda g: g.truncate(low) if isinstance(g, TPS) else g
    coeffs: Dict[int, TPS] = {}
    for k in range(d):
        coeffs[L.x[k]] = -D[L.z[k]]
    for l in range(n):
        coeffs[L.t[l]] = -D[L.tau[l]]
    coeffs[L.r[j]] = V[0].truncate(low).constant_like(1.0)
    h0 = trunc(fth) - sum((trunc(z[k]) * D[L.z[k]] for k in range(d)), start=0 * D[0]) \
        - sum((trunc(tau[l]) * D[L.tau[l]] for l in range(n)), start=0 * D[0])
    coeffs[L.z0] = h0
    for i in range(d):
        coeffs[L.z[i]] = D[L.x[i]] + trunc(z[i]) * D[L.z0]
    for i in range(n):
        coeffs[L.tau[i]] = D[L.t[i]] + trunc(tau[i]) * D[L.z0]
    return coeffs


def _apply(coeffs: Dict[int, TPS], G: TPS) -> TPS:
    out = None
    for v, c in coeffs.items():
        dG = G.diff(v)
        order = min(dG.order, c.order)
        term = c.truncate(order) * dG.truncate(order)
        out = term if out is None else out.truncate(min(out.order, order)) + term
    return out


def _probe(V: List[TPS], rng: np.random.Generator, degree: int = 3, terms: int = 12) -> TPS:
    """Random complex polynomial in all variables."""
    out = V[0].constant_like(complex(rng.standard_normal()))
    for _ in range(terms):
        deg = int(rng.integers(1, degree + 1))
        idx = rng.integers(0, len(V), deg)
        term = V[idx[0]]
        for i in idx[1:]:
            term = term * V[i]
        out = out + term * complex(rng.standard_normal(), rng.standard_normal())
    return out


def _random_point(system: NonlinearSystem, rng: np.random.Generator) -> List[complex]:
    d, n = system.d, system.n
    L = _Layout(d, n)
    p = list(rng.uniform(-0.5, 0.5, d)) + list(rng.uniform(-0.2, 0.2, n)) \
        + list(rng.uniform(-1, 1, n))
    p += list(rng.uniform(-1, 1, 1 + d + n) + 1j * rng.uniform(-1, 1, 1 + d + n))
    assert len(p) == L.size
    return p


def hamiltonian_commutators(system: NonlinearSystem, theta: float = 0.0, points: int = 20,
                            seed: int = 0) -> float:
    """Largest ``|[H_j, H_k] Phi|`` over random points and polynomial probes."""
    rng = np.random.default_rng(seed)
    L = _Layout(system.d, system.n)
    worst = 0.0
    for _ in range(points):
        V = TPS.variables(3, [np.asarray(v, dtype=complex) for v in _random_point(system, rng)])
        Phi = _probe(V, rng)
        fields = [_field_series(system, theta, j, V) for j in range(system.n)]
        for j in range(system.n):
            for k in range(j + 1, system.n):
                a = _apply(fields[j], _apply(fields[k], Phi))
                b = _apply(fields[k], _apply(fields[j], Phi))
                worst = max(worst, float(abs(a.value - b.value)))
    return worst


def substitution_identity(system: NonlinearSystem, sol: Solution, theta: float = 0.0,
                          points: int = 20, seed: int = 0) -> float:
    """Largest ``|(L_j^theta)^u Phi^u - (H_j^theta Phi)^u|`` over random ``(x, t, r)``."""
    rng = np.random.default_rng(seed)
    d, n = system.d, system.n
    L = _Layout(d, n)
    worst = 0.0
    for _ in range(points):
        x = np.array([rng.uniform(lo, hi) for lo, hi in sol.box[:d]])
        t = np.array([rng.uniform(lo, hi) for lo, hi in sol.box[d:]])
        r = rng.uniform(-1, 1, n)
        # Phi is fixed per point: same random polynomial on both sides
        coef_seed = int(rng.integers(1 << 30))
        # left side: Phi^u as a series in (x, t, r)
        g, W = _solution_series(sol, d, n, np.r_[x, t].reshape(-1, 1), 2, extra=n)
        g1 = g.truncate(1)
        ux = [g.diff(i) for i in range(d)]
        ut = [g.diff(d + i) for i in range(n)]
        args = [W[i].truncate(1) for i in range(d + n)] + [W[d + n + i].truncate(1) + r[i] for i in range(n)]
        args += [g1] + ux + ut
        Phi_u = _probe(args, np.random.default_rng(coef_seed))
        u0 = complex(g.value[0])
        ux0 = [complex(v.value[0]) for v in ux]
        ut0 = [complex(v.value[0]) for v in ut]
        # right side: H Phi at the lifted point
        point = [*x, *t, *r, u0, *ux0, *ut0]
        V = TPS.variables(2, [np.asarray(v, dtype=complex) for v in point])
        Phi = _probe(V, np.random.default_rng(coef_seed))
        for j in range(n):
            P = theta_system(system, theta).partials(j, x, t, u0, ux0, ut0)
            lhs = Phi_u.diff(d + n + j).value[0] \
                - sum(complex(np.asarray(P["z"][k])) * Phi_u.diff(k).value[0] for k in range(d)) \
                - sum(complex(np.asarray(P["tau"][l])) * Phi_u.diff(d + l).value[0] for l in range(n))
            rhs = _apply(_field_series(system, theta, j, V), Phi).value
            worst = max(worst, float(abs(lhs - rhs)))
    return worst


# wave-front inclusion ------------------------------------------------------------

@dataclass
class WFReport:
    system: str
    solution: str
    flagged: List[dict]
    passes: bool
    margin_limit: float
    scan: Optional[WavefrontScan] = None

    def to_dict(self) -> dict:
        return {"system": self.system, "solution": self.solution, "flagged": self.flagged,
                "passes": self.passes, "margin_limit": self.margin_limit,
                "vacuous": not self.flagged}


def _rotation(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def wf_inclusion_experiment(system: NonlinearSystem, sol: Solution, seq: RegularSequence,
                            points: Sequence[Sequence[float]], n_directions: int = 8,
                            ladder: Optional[Sequence[float]] = None, K_test: int = 30,
                            margin_limit: float = 0.05) -> WFReport:
    """Scan ``u`` over ``(x, t)`` and test every flagged direction for characteristicity.

    Only ``d = n = 1`` is scanned (a two-dimensional flat transform).  When the
    solution declares a kink line the scan runs in coordinates rotated so the
    line is a coordinate line; the kernel is rotation invariant.
    """
    if system.d != 1 or system.n != 1:
        raise NonlinearError("the wave-front experiment scans d = n = 1")
    admit(system, sol)
    R = _rotation(-sol.singular_angle) if sol.singular_angle is not None else np.eye(2)
    Rinv = R.T

    def u_rot(ys):
        x = Rinv[0, 0] * ys[0] + Rinv[0, 1] * ys[1]
        t = Rinv[1, 0] * ys[0] + Rinv[1, 1] * ys[1]
        return sol.func([x], [t])

    ju = JetFunction(f"{sol.name}[rotated]", 2, u_rot, ((-np.inf, np.inf),) * 2,
                     singular=tuple(sol.singular_offsets))
    ang = 2 * np.pi * np.arange(n_directions) / n_directions
    dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    ladder = geometric_ladder(WF_LADDER_MIN) if ladder is None else ladder
    scan = wavefront_scan(ju, get_chart("chart_flat2"), pts @ R.T, dirs @ R.T, seq, ladder, K_test)
    flagged = []
    ok = True
    for p_rot, d_rot in scan.flagged:
        p = Rinv @ np.asarray(p_rot)
        dvec = Rinv @ np.asarray(d_rot)
        a = linearize(system, sol, p)
        ct = characteristic_test(a, dvec[:1], dvec[1:])
        within = ct.margin <= margin_limit
        ok &= within
        flagged.append({"point": p.round(12).tolist(), "direction": dvec.round(12).tolist(),
                        "a": [[a[0, 0].real, a[0, 0].imag]], "margin": ct.margin,
                        "characteristic": within})
    return WFReport(system.name, sol.name, flagged, bool(ok), margin_limit, scan)


# corpus --------------------------------------------------------------------------

SYSTEMS: Dict[str, NonlinearSystem] = {}
SOLUTIONS: Dict[str, Solution] = {}


def _sys(s: NonlinearSystem):
    SYSTEMS[s.name] = s


def _sol(s: Solution):
    SOLUTIONS[s.name] = s


_sys(NonlinearSystem("sys_transport_i", 1, 1, lambda j, x, t, z0, z: 1j * z[0],
                     description="u_t = i u_x"))
_sys(NonlinearSystem("sys_transport", 1, 1, lambda j, x, t, z0, z: -z[0],
                     description="u_t = -u_x"))
_sys(NonlinearSystem("sys_burgers", 1, 1, lambda j, x, t, z0, z: z0 * z[0],
                     description="u_t = u u_x"))
_sys(NonlinearSystem("sys_quadratic", 1, 1, lambda j, x, t, z0, z: 1j * z[0] + z0 * z0,
                     description="u_t = i u_x + u^2"))
_sys(NonlinearSystem("sys_pair_transport", 1, 2,
                     lambda j, x, t, z0, z: 1j * z[0] if j == 0 else -z[0],
                     description="u_t1 = i u_x, u_t2 = -u_x"))
_sys(NonlinearSystem("sys_pair_burgers", 1, 2,
                     lambda j, x, t, z0, z: z0 * z[0] if j == 0 else 2 * z0 * z[0],
                     description="u_t1 = u u_x, u_t2 = 2 u u_x"))

_BOX = ((-0.5, 0.5), (-0.4, 0.4))
_sol(Solution("sol_square_i", "sys_transport_i", lambda x, t: (x[0] + 1j * t[0]) ** 2, _BOX,
              description="(x + i t)^2"))
_sol(Solution("sol_abs_cubed", "sys_transport", lambda x, t: _abs_cubed(x[0] - t[0]), _BOX,
              singular_angle=math.pi / 4, singular_offsets=(0.0,), description="|x - t|^3"))
_sol(Solution("sol_burgers", "sys_burgers", lambda x, t: x[0] / (1 - t[0]), _BOX,
              description="x/(1 - t)"))
_sol(Solution("sol_quadratic", "sys_quadratic",
              lambda x, t: -1.0 / (x[0] + (1 + 1j) * t[0] + 2), _BOX,
              description="-1/(x + (1 + i) t + 2)"))
_BOX2 = ((-0.5, 0.5), (-0.2, 0.2), (-0.2, 0.2))
_sol(Solution("sol_pair_transport", "sys_pair_transport",
              lambda x, t: (x[0] + 1j * t[0] - t[1]) ** 2, _BOX2,
              description="(x + i t1 - t2)^2"))
_sol(Solution("sol_pair_burgers", "sys_pair_burgers",
              lambda x, t: x[0] / (1 - t[0] - 2 * t[1]), _BOX2,
              description="x/(1 - t1 - 2 t2)"))


def get_system(name: str) -> NonlinearSystem:
    if name not in SYSTEMS:
        raise KeyError(f"unknown system {name!r}")
    return SYSTEMS[name]


def get_solution(name: str) -> Solution:
    if name not in SOLUTIONS:
        raise KeyError(f"unknown solution {name!r}")
    return SOLUTIONS[name]

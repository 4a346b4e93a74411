"""Almost-analytic extension of frame-differentiable functions.

For ``u`` in the inner box ``V`` and real ``v`` with ``0 < |v| < delta``

    F(u, v) = |v|^(-2m) * integral psi((z - v)/|v|) sum_{|a| <= N(R|z|)} f_a(u) z^a,

with ``f_a = X^a f / a!`` and ``R = (1 + eps) c e m C``.  Because the
truncation index only depends on ``|z|``, every monomial ``z^a`` is
integrated either over the whole ball (giving ``v^a`` exactly) or over the
part of the ball inside a sphere ``|z| < b_|a| / R``.  Only the latter
"partial" moments need quadrature, which keeps the exponentially small
residual ``L_j F = (d/dv_j - X_j) F`` free of cancellation:

    L_j F = - sum_{|a| = n} X_j f_a v^a
            + sum_{partial a} ( f_a d_j I_a - X_j f_a I_a ),

where ``n`` is the truncation index at the outer radius of the ball.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .jets import (ClassFit, JetError, JetFunction, MultiIndex, VectorFrame, class_constant_fit,
                   factorial, jet_table, multi_indices)
from .mollifier import TRUNC_CAP, RadialCutoff, build_cutoff, slab_moments
from .sequence import RegularSequence

log = logging.getLogger(__name__)

TRUNC_CAP_M2 = 12
DEFAULT_EPS = 0.2
C_FLOOR = 1e-6
STABILITY = 1.1


class ExtensionError(ValueError):
    """Sample outside the working radius or the inner box."""


def _as_v(v, m: int) -> np.ndarray:
    return np.atleast_1d(np.asarray(v, dtype=float)).reshape(m)


def _poly_deriv(alpha: MultiIndex, beta: MultiIndex, v: np.ndarray) -> float:
    """``d^beta v^alpha`` at the real point ``v``."""
    out = 1.0
    for a, b, x in zip(alpha, beta, v):
        if b > a:
            return 0.0
        out *= math.factorial(a) / math.factorial(a - b) * x ** (a - b)
    return out


@dataclass
class _Moments:
    n_min: int
    n_max: int
    partial: Dict[Tuple[MultiIndex, MultiIndex], complex]


class ExtensionOperator:
    """Parameters of the extension and the sampling machinery around them.

    Parameters
    ----------
    seq : RegularSequence
    frame : VectorFrame
        Commuting frame ``X`` (use ``chart_frame(chart).scaled(1j)`` for the
        manifold variant).
    f : JetFunction
    V : sequence of (lo, hi)
        Inner box; must lie strictly inside ``f.domain``.
    eps : float
        Cutoff radius of the mollifier.
    C : float, optional
        Class constant; fitted on a grid over ``V`` when omitted.
    kappa : int, optional
        Fixed-kappa mode (``c_eff = c_base**kappa``); moderate-growth mode
        (``c_eff = c``) when omitted.
    """

    def __init__(self, seq: RegularSequence, frame: VectorFrame, f: JetFunction,
                 V: Sequence[Tuple[float, float]], eps: float = DEFAULT_EPS,
                 C: Optional[float] = None, kappa: Optional[int] = None, fit_K: int = 12,
                 fit_points: int = 41, n_quad: int = 48, trunc_cap: Optional[int] = None):
        self.seq = seq
        self.frame = frame
        self.f = f
        self.m = f.m
        self.V = tuple((float(a), float(b)) for a, b in V)
        for (lo, hi), (dlo, dhi) in zip(self.V, f.domain):
            if not (dlo < lo < hi < dhi):
                raise ExtensionError("V must lie strictly inside the domain of f")
        self.eps = eps
        self.psi: RadialCutoff = build_cutoff(self.m, eps)
        self.kappa = kappa
        self.mode = "moderate-growth" if kappa is None else "fixed-kappa"
        self.class_fit: Optional[ClassFit] = None
        if C is None:
            grids = [np.linspace(lo, hi, fit_points) for lo, hi in self.V]
            mesh = np.meshgrid(*grids, indexing="ij")
            pts = np.stack([g.ravel() for g in mesh], axis=1)
            grid = pts[:, 0] if self.m == 1 else pts
            self.class_fit = class_constant_fit(f, frame, seq, fit_K, grid)
            C = self.class_fit.C
            if not self.class_fit.stable:
                log.warning("class constant of %s grows with the order (ratio %.3g); "
                            "using the K=%d value", f.name, self.class_fit.growth_ratio,
                            self.class_fit.K)
        self.C = max(float(C), C_FLOOR)
        self.c_eff = seq.c_eff(kappa)
        self.R = (1 + eps) * self.c_eff * math.e * self.m * self.C
        self.delta = 1.0 / (2 * (1 + eps) ** 2 * self.c_eff * math.e * self.m * self.C)
        cap = TRUNC_CAP if self.m == 1 else TRUNC_CAP_M2
        if trunc_cap is not None:
            cap = min(cap, trunc_cap)
        cap = min(cap, seq.k_max, f.max_order - 1)
        self.trunc_cap = max(cap, 0)
        self.n_quad = n_quad
        self._ev = seq.evaluator()
        self._moment_cache: Dict[tuple, _Moments] = {}
        self._clamp_warned = False

    # truncation -----------------------------------------------------------
    def trunc(self, r) -> np.ndarray:
        """``N(R r)`` clamped to the truncation cap."""
        r = np.asarray(r, dtype=float)
        N = self._ev.N_array(np.maximum(self.R * r, 1e-300))
        if np.any(N > self.trunc_cap) and not self._clamp_warned:
            self._clamp_warned = True
            log.warning("truncation index clamped to %d for %s", self.trunc_cap, self.f.name)
        return np.minimum(N, self.trunc_cap)

    def _cut_radius(self, k: int) -> float:
        return math.exp(self.seq.log_breaks[k]) / self.R

    # moments --------------------------------------------------------------
    def _moments(self, v: np.ndarray, order: int) -> _Moments:
        key = (tuple(np.round(v, 15)), order)
        hit = self._moment_cache.get(key)
        if hit is not None:
            return hit
        nv = float(np.linalg.norm(v))
        n_min = int(self.trunc((1 + self.eps) * nv))
        n_max = int(self.trunc((1 - self.eps) * nv))
        partial: Dict[Tuple[MultiIndex, MultiIndex], complex] = {}
        if n_max > n_min:
            ks = list(range(n_min + 1, n_max + 1))
            cuts = sorted(self._cut_radius(k) for k in ks)
            slabs, mom = slab_moments(self.psi, v, cuts, n_max, order, n=self.n_quad)
            uppers = np.array([b for _, b in slabs])
            for k in ks:
                rho = self._cut_radius(k)
                below = uppers <= rho * (1 + 1e-12)
                for a in multi_indices(self.m, n_max):
                    if sum(a) != k:
                        continue
                    for b in multi_indices(self.m, order):
                        partial[(a, b)] = complex(np.sum(mom[(a, b)][below]))
        out = _Moments(n_min, n_max, partial)
        self._moment_cache[key] = out
        return out

    def _check(self, u: np.ndarray, v: np.ndarray) -> None:
        nv = float(np.linalg.norm(v))
        if nv >= self.delta:
            raise ExtensionError(f"|v|={nv:.4g} outside the working radius delta={self.delta:.4g}")
        for i, (lo, hi) in enumerate(self.V):
            if np.any(u[i] < lo - 1e-12) or np.any(u[i] > hi + 1e-12):
                raise ExtensionError("u outside the inner box V")

    def _points(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.m == 1:
            return u.reshape(1, -1)
        return u.reshape(self.m, -1) if u.shape[0] == self.m else u.T

    def jets(self, u: np.ndarray, order: int) -> Dict[MultiIndex, np.ndarray]:
        if order > self.f.max_order:
            raise JetError(f"{self.f.name} serves jets only up to order {self.f.max_order}")
        return jet_table(self.f, self.frame, u, order)

    # public evaluations ---------------------------------------------------
    def evaluate(self, u, v) -> np.ndarray:
        """``F(u, v)`` for a batch of ``u`` and one real ``v``."""
        u = self._points(u)
        v = _as_v(v, self.m)
        if not np.any(v):
            return self.f.eval(u)
        self._check(u, v)
        mo = self._moments(v, 0)
        T = self.jets(u, mo.n_max)
        zero = (0,) * self.m
        out = np.zeros(u.shape[1], dtype=complex)
        for a in multi_indices(self.m, mo.n_min):
            out += T[a] / factorial(a) * _poly_deriv(a, zero, v)
        for (a, b), val in mo.partial.items():
            out += T[a] / factorial(a) * val
        return out

    def residual(self, u, v, j: int) -> np.ndarray:
        """``L_j F(u, v)`` from the exact decomposition."""
        u = self._points(u)
        v = _as_v(v, self.m)
        self._check(u, v)
        mo = self._moments(v, 1)
        T = self.jets(u, mo.n_max + 1)
        ej = tuple(int(i == j) for i in range(self.m))
        zero = (0,) * self.m
        out = np.zeros(u.shape[1], dtype=complex)
        for a in multi_indices(self.m, mo.n_min):
            if sum(a) == mo.n_min:
                up = tuple(x + y for x, y in zip(a, ej))
                out -= T[up] / factorial(a) * _poly_deriv(a, zero, v)
        for (a, b), val in mo.partial.items():
            if b == ej:
                out += T[a] / factorial(a) * val
            elif b == zero:
                up = tuple(x + y for x, y in zip(a, ej))
                out -= T[up] / factorial(a) * val
        return out

    def frame_derivative(self, u, v, j: int) -> np.ndarray:
        """``X_j F(u, v)`` via ``X_j f_a = X^(a + e_j) f / a!``."""
        u = self._points(u)
        v = _as_v(v, self.m)
        self._check(u, v)
        mo = self._moments(v, 0)
        T = self.jets(u, mo.n_max + 1)
        ej = tuple(int(i == j) for i in range(self.m))
        zero = (0,) * self.m
        out = np.zeros(u.shape[1], dtype=complex)
        for a in multi_indices(self.m, mo.n_min):
            up = tuple(x + y for x, y in zip(a, ej))
            out += T[up] / factorial(a) * _poly_deriv(a, zero, v)
        for (a, b), val in mo.partial.items():
            up = tuple(x + y for x, y in zip(a, ej))
            out += T[up] / factorial(a) * val
        return out

    def residual_fd(self, u, v, j: int, h: float) -> np.ndarray:
        """``L_j F`` with ``d/dv_j`` by a central difference of step ``h``."""
        v = _as_v(v, self.m)
        e = np.eye(self.m)[j] * h
        dv = (self.evaluate(u, v + e) - self.evaluate(u, v - e)) / (2 * h)
        return dv - self.frame_derivative(u, v, j)

    def consistency_defect(self, u, v, beta: MultiIndex, gamma: MultiIndex) -> np.ndarray:
        """``d_v^beta X^gamma F(u, v) - beta! X^gamma f_beta(u)``."""
        beta, gamma = tuple(beta), tuple(gamma)
        if self.kappa is not None and sum(gamma) > self.kappa:
            raise ExtensionError(f"|gamma|={sum(gamma)} exceeds kappa={self.kappa}")
        u = self._points(u)
        v = _as_v(v, self.m)
        self._check(u, v)
        mo = self._moments(v, sum(beta))
        T = self.jets(u, mo.n_max + sum(gamma))
        out = np.zeros(u.shape[1], dtype=complex)
        for a in multi_indices(self.m, mo.n_min):
            if a == beta:
                continue
            d = _poly_deriv(a, beta, v)
            if d:
                ag = tuple(x + y for x, y in zip(a, gamma))
                out += T[ag] / factorial(a) * d
        for (a, b), val in mo.partial.items():
            if b == beta:
                ag = tuple(x + y for x, y in zip(a, gamma))
                out += T[ag] / factorial(a) * val
        return out

    def shells(self, J: int = 8) -> np.ndarray:
        """Geometric ladder ``delta * 2^-j`` for ``j = 1..J``."""
        return self.delta * 2.0 ** -np.arange(1, J + 1)

    def directions(self) -> List[np.ndarray]:
        if self.m == 1:
            return [np.array([1.0]), np.array([-1.0])]
        ang = np.linspace(0, 2 * np.pi, 8, endpoint=False)
        return [np.array([math.cos(t), math.sin(t)]) for t in ang]

    def summary(self) -> dict:
        return {"f": self.f.name, "m": self.m, "eps": self.eps, "C": self.C,
                "c_eff": self.c_eff, "delta": self.delta, "mode": self.mode,
                "kappa": self.kappa, "trunc_cap": self.trunc_cap, "V": list(self.V)}


def evaluate_extension(op: ExtensionOperator, u, v) -> np.ndarray:
    return op.evaluate(u, v)


def lj_residual(op: ExtensionOperator, u, v, j: int = 0, method: str = "exact",
                h: Optional[float] = None) -> np.ndarray:
    """``(d/dv_j - X_j) F(u, v)``.

    ``method="exact"`` uses the moment decomposition; ``method="fd"`` takes a
    central difference in ``v`` with step ``h`` (default ``|v|/64``).
    """
    if method == "exact":
        return op.residual(u, v, j)
    if method == "fd":
        nv = float(np.linalg.norm(_as_v(v, op.m)))
        return op.residual_fd(u, v, j, h if h is not None else nv / 64)
    raise ValueError(f"unknown method {method!r}")


# fields and reports ------------------------------------------------------------

@dataclass
class ExtensionField:
    """Samples of ``F`` and of the residuals over a ``(u, v)`` grid."""

    u: np.ndarray
    shells: np.ndarray
    values: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)
    residuals: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)
    v_points: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)

    def per_shell_sup(self) -> np.ndarray:
        out = np.zeros(len(self.shells))
        for (i, _), r in self.residuals.items():
            out[i] = max(out[i], float(np.max(np.abs(r))))
        return out

    def rows(self):
        """CSV rows ``(u..., Re v..., Im v..., Re F, Im F)``."""
        for (i, d), vals in sorted(self.values.items()):
            v = self.v_points[(i, d)]
            for n in range(vals.shape[0]):
                uu = np.atleast_1d(self.u[..., n])
                yield [*map(float, uu), *map(float, v), *([0.0] * v.size),
                       float(vals[n].real), float(vals[n].imag)]


def build_field(op: ExtensionOperator, u, shells: Optional[Sequence[float]] = None,
                with_values: bool = True) -> ExtensionField:
    u = op._points(u)
    shells = op.shells() if shells is None else np.asarray(shells, dtype=float)
    fld = ExtensionField(u=u, shells=shells)
    for i, rho in enumerate(shells):
        for d, dirn in enumerate(op.directions()):
            v = rho * dirn
            fld.v_points[(i, d)] = v
            if with_values:
                fld.values[(i, d)] = op.evaluate(u, v)
            res = np.max(np.abs([op.residual(u, v, j) for j in range(op.m)]), axis=0)
            fld.residuals[(i, d)] = res
    return fld


@dataclass
class DecayReport:
    shells: np.ndarray
    per_shell_sup: np.ndarray
    Q: float
    Q_without_smallest: float
    per_k_margin: Dict[int, float]
    K_test: int
    conforms: bool

    def to_dict(self) -> dict:
        return {"shells": [float(x) for x in self.shells],
                "per_shell_sup": [float(x) for x in self.per_shell_sup],
                "Q": self.Q, "Q_without_smallest": self.Q_without_smallest,
                "per_k_margin": {str(k): v for k, v in self.per_k_margin.items()},
                "K_test": self.K_test, "conforms": self.conforms}


def _fit_Q(shells: np.ndarray, sups: np.ndarray, seq: RegularSequence, K: int) -> float:
    Q = 0.0
    for rho, s in zip(shells, sups):
        if s <= 0:
            continue
        for k in range(K + 1):
            q = math.exp((math.log(s) - seq.log_m[k] - k * math.log(rho)) / (k + 1))
            Q = max(Q, q)
    return Q


def fit_decay(data, seq: RegularSequence, K_test: int = 8,
              shells: Optional[Sequence[float]] = None) -> DecayReport:
    """Fit ``Q`` with ``sup_residual(rho) <= Q^(k+1) m_k rho^k`` for ``k <= K_test``.

    ``data`` is an :class:`ExtensionField` or an array of per-shell sups (then
    ``shells`` is required).  The report conforms when ``Q`` is finite and
    stable within 10% under removing the smallest shell.
    """
    if isinstance(data, ExtensionField):
        shells = data.shells
        sups = data.per_shell_sup()
    else:
        sups = np.asarray(data, dtype=float)
        shells = np.asarray(shells, dtype=float)
    if sups.size == 0:
        raise ValueError("empty field")
    if sups.size < 4:
        raise ValueError("fit_decay needs at least 4 shells")
    order = np.argsort(shells)[::-1]
    shells, sups = shells[order], sups[order]
    Q = _fit_Q(shells, sups, seq, K_test)
    Q_red = _fit_Q(shells[:-1], sups[:-1], seq, K_test)
    margins = {}
    for k in range(K_test + 1):
        best = math.inf
        for rho, s in zip(shells, sups):
            if s > 0 and Q > 0:
                env = (k + 1) * math.log(Q) + seq.log_m[k] + k * math.log(rho)
                best = min(best, env - math.log(s))
        margins[k] = best
    conforms = bool(np.isfinite(Q) and (Q == 0.0 or Q <= STABILITY * Q_red))
    return DecayReport(shells, sups, Q, Q_red, margins, K_test, conforms)


@dataclass
class SlopeReport:
    shells: np.ndarray
    defects: np.ndarray
    slope: float
    passes: bool
    identically_zero: bool

    def to_dict(self) -> dict:
        return {"shells": [float(x) for x in self.shells],
                "defects": [float(x) for x in self.defects],
                "slope": self.slope, "passes": self.passes,
                "identically_zero": self.identically_zero}


ZERO_DEFECT = 1e-13


def jet_consistency(op: ExtensionOperator, u, beta: MultiIndex, gamma: MultiIndex,
                    shells: Optional[Sequence[float]] = None,
                    min_slope: float = 0.9) -> SlopeReport:
    """Log-log slope of ``sup |d_v^beta X^gamma F - beta! X^gamma f_beta|`` against ``|v|``."""
    shells = op.shells() if shells is None else np.asarray(shells, dtype=float)
    D = np.zeros(len(shells))
    for i, rho in enumerate(shells):
        for dirn in op.directions():
            D[i] = max(D[i], float(np.max(np.abs(op.consistency_defect(u, rho * dirn, beta, gamma)))))
    scale = max(1.0, float(np.max(np.abs(op.jets(op._points(u), sum(gamma))[tuple(gamma)]))))
    if np.all(D <= ZERO_DEFECT * scale):
        return SlopeReport(shells, D, math.inf, True, True)
    slope = float(np.polyfit(np.log(shells), np.log(np.maximum(D, 1e-300)), 1)[0])
    return SlopeReport(shells, D, slope, slope >= min_slope, False)


# manifold variant -----------------------------------------------------------

def dbar_residual_on_manifold(chart, op: ExtensionOperator, z) -> np.ndarray:
    """``dbar F`` at ``z`` near ``Sigma`` in the coordinates ``u = x, v = y - phi(x)``.

    ``op`` must use the frame ``i X`` of ``chart``; then
    ``dbar_j = (i/2) sum_k Zx_kj(u) L_k`` with ``L_k = d/dv_k - i X_k``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex)).reshape(op.m)
    u = z.real
    v = z.imag - chart.phi(u)
    if not np.any(v):
        return np.zeros(op.m, dtype=complex)
    op._check(u.reshape(op.m, 1), v)
    L = np.array([op.residual(u.reshape(op.m, 1), v, k)[0] for k in range(op.m)])
    Zx = chart.Zx(u)
    return 0.5j * Zx.T @ L


def dbar_residual_fd(chart, op: ExtensionOperator, z, h: float) -> np.ndarray:
    """Cross-check of :func:`dbar_residual_on_manifold` by differences in ``(x, y)``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex)).reshape(op.m)

    def F(w):
        u = w.real
        v = w.imag - chart.phi(u)
        return op.evaluate(u.reshape(op.m, 1), v)[0]

    out = np.zeros(op.m, dtype=complex)
    for j in range(op.m):
        e = np.eye(op.m)[j]
        dx = (F(z + h * e) - F(z - h * e)) / (2 * h)
        dy = (F(z + 1j * h * e) - F(z - 1j * h * e)) / (2 * h)
        out[j] = 0.5 * (dx + 1j * dy)
    return out


def boundary_value(chart, op: ExtensionOperator, x) -> complex:
    """``F`` on ``Sigma`` at ``Z(x)``, equal to ``f(x)`` by definition."""
    x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(op.m)
    return complex(op.evaluate(x.reshape(op.m, 1), np.zeros(op.m))[0])


def manifold_operator(seq: RegularSequence, chart, f: JetFunction, **kwargs) -> ExtensionOperator:
    """Extension operator for ``f`` on ``Sigma`` built with the frame ``i X`` of ``chart``."""
    from .manifold import chart_frame
    return ExtensionOperator(seq, chart_frame(chart).scaled(1j), f, chart.U, **kwargs)


@dataclass
class ManifoldDecayReport:
    dist: np.ndarray
    residual: np.ndarray
    C: float
    C_without_smallest: float
    K_test: int
    conforms: bool
    boundary_error: float

    def to_dict(self) -> dict:
        return {"dist": [float(x) for x in self.dist],
                "residual": [float(x) for x in self.residual],
                "C": self.C, "C_without_smallest": self.C_without_smallest,
                "K_test": self.K_test, "conforms": self.conforms,
                "boundary_error": self.boundary_error}


def manifold_decay(chart, op: ExtensionOperator, x_grid, K_test: int = 6,
                   shells: Optional[Sequence[float]] = None) -> ManifoldDecayReport:
    """Fit ``C`` with ``|dbar F(z)| <= C^(k+1) m_k dist(z, Sigma)^k`` for ``k <= K_test``.

    Samples sit at ``v = +-rho`` above each base point; distances come from the
    projection onto ``Sigma``.  Conforms when ``C`` is finite and stable within
    10% under removing the smallest shell.  Also reports the largest
    ``|F - f|`` on ``Sigma`` over the grid.
    """
    from .manifold import distance_to_sigma
    if op.m != 1:
        raise ExtensionError("manifold_decay samples m = 1 charts")
    xs = np.asarray(x_grid, dtype=float).ravel()
    shells = op.shells() if shells is None else np.asarray(shells, dtype=float)
    shells = np.sort(shells)[::-1]
    if shells.size < 4:
        raise ValueError("manifold_decay needs at least 4 shells")
    dist, res, level = [], [], []
    for i, rho in enumerate(shells):
        for x in xs:
            for s in (1.0, -1.0):
                z = x + 1j * (float(chart.phi(np.array([x]))[0, 0]) + s * rho)
                d, _ = distance_to_sigma(chart, z)
                dist.append(d)
                res.append(float(np.max(np.abs(dbar_residual_on_manifold(chart, op, z)))))
                level.append(i)
    dist, res, level = np.array(dist), np.array(res), np.array(level)
    keep = level < shells.size - 1
    C = _fit_Q(dist, res, op.seq, K_test)
    C_red = _fit_Q(dist[keep], res[keep], op.seq, K_test)
    conforms = bool(np.isfinite(C) and (C == 0.0 or C <= STABILITY * C_red))
    f_vals = op.f.eval(xs.reshape(1, -1))
    bv = np.array([boundary_value(chart, op, x) for x in xs])
    err = float(np.max(np.abs(bv - f_vals)))
    return ManifoldDecayReport(dist, res, C, C_red, K_test, conforms, err)

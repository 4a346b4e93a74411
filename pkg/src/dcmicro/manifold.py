"""Maximally real graphs ``Sigma = {x + i phi(x)}`` in C^m.

A chart carries ``phi`` and its Jacobian in closed form, both written so they
accept arrays or :class:`~dcmicro.tps.TPS` arguments.  From them we build
``Zx = I + i dphi``, the dual frame ``X_k = sum_l a_kl d/dx_l`` with
``a = Zx^(-T)`` (so ``X_k Z_j = delta_jk``), structure covectors
``zeta = Zx^(-T) xi`` and the sampled well-positioned certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .jets import VectorFrame
from .tps import TPS


class ChartError(ValueError):
    """Invalid chart input."""


def _zero(x):
    return 0.0 * x


@dataclass(frozen=True)
class MaximallyRealChart:
    """Graph chart ``Z(x) = x + i phi(x)`` over the box ``U``.

    ``phi_func(xs)`` returns the list ``[phi_1, ..., phi_m]`` and
    ``jac_func(xs)`` the nested list ``J[j][l] = d phi_j / d x_l``; both take
    the list of coordinates (arrays or TPS).
    """

    name: str
    m: int
    phi_func: Callable
    jac_func: Callable
    U: Tuple[Tuple[float, float], ...]
    description: str = ""

    def with_box(self, U: Sequence[Tuple[float, float]]) -> "MaximallyRealChart":
        return MaximallyRealChart(self.name, self.m, self.phi_func, self.jac_func,
                                  tuple((float(a), float(b)) for a, b in U), self.description)

    def _pts(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.m == 1:
            return x.reshape(1, *x.shape) if x.ndim <= 1 else x
        return x.reshape(self.m, *x.shape[1:]) if x.shape[0] == self.m else x

    def phi(self, x) -> np.ndarray:
        """``phi(x)`` with shape ``(m, *batch)``."""
        x = self._pts(x)
        vals = self.phi_func([x[i] for i in range(self.m)])
        return np.array([np.broadcast_to(v, x.shape[1:]) for v in vals], dtype=float)

    def Z(self, x) -> np.ndarray:
        x = self._pts(x)
        return x + 1j * self.phi(x)

    def jacobian(self, x) -> np.ndarray:
        """``dphi`` with shape ``(m, m, *batch)``."""
        x = self._pts(x)
        J = self.jac_func([x[i] for i in range(self.m)])
        return np.array([[np.broadcast_to(J[j][l], x.shape[1:]) for l in range(self.m)]
                         for j in range(self.m)], dtype=float)

    def Zx(self, x) -> np.ndarray:
        """``I + i dphi``; for a single point a plain ``m x m`` matrix."""
        J = self.jacobian(x)
        eye = np.eye(self.m).reshape((self.m, self.m) + (1,) * (J.ndim - 2))
        out = eye + 1j * J
        return out[..., 0] if out.ndim == 3 and out.shape[2] == 1 else out

    def a(self, x) -> np.ndarray:
        """``a = Zx^(-T)`` at a single point."""
        Zx = self.Zx(np.asarray(x, dtype=float).reshape(self.m))
        if self.m == 1 or Zx.ndim == 2:
            Zx = np.atleast_2d(Zx)
        cond = np.linalg.cond(Zx)
        if not np.isfinite(cond) or cond > 1e12:
            raise ChartError(f"Zx singular at x={x}")
        return np.linalg.inv(Zx).T

    def in_box(self, x) -> np.ndarray:
        x = self._pts(x)
        ok = np.ones(x.shape[1:], dtype=bool)
        for i, (lo, hi) in enumerate(self.U):
            ok &= (x[i] >= lo) & (x[i] <= hi)
        return ok


def _frame_coeff(chart: MaximallyRealChart) -> Callable:
    def coeff(xs):
        J = chart.jac_func(xs)
        if chart.m == 1:
            return [[1.0 / (1.0 + 1j * J[0][0])]]
        p, q = 1.0 + 1j * J[0][0], 1j * J[0][1]
        r, s = 1j * J[1][0], 1.0 + 1j * J[1][1]
        det = p * s - q * r
        inv = 1.0 / det
        return [[s * inv, -r * inv], [-q * inv, p * inv]]
    return coeff


def chart_frame(chart: MaximallyRealChart) -> VectorFrame:
    """The frame ``X_k = sum_l a_kl d/dx_l`` dual to ``dZ`` on ``Sigma``."""
    if chart.name.startswith("chart_flat"):
        return VectorFrame(chart.m, None, "coordinate", 1.0, chart.name)
    return VectorFrame(chart.m, _frame_coeff(chart), "chart", 1.0, chart.name)


def frame_commutators(chart: MaximallyRealChart, points) -> float:
    """Largest coefficient of ``[X_k, X_l]`` over the sampled points."""
    if chart.m == 1:
        return 0.0
    pts = chart._pts(points)
    xs = TPS.variables(1, [pts[i] for i in range(chart.m)])
    a = _frame_coeff(chart)(xs)

    def X(k, g):
        return sum(a[k][l].value * g.diff(l).value for l in range(chart.m))

    worst = 0.0
    for i in range(chart.m):
        comp = X(0, a[1][i]) - X(1, a[0][i])
        worst = max(worst, float(np.max(np.abs(comp))))
    return worst


@dataclass
class StructureDirection:
    x: np.ndarray
    xi: np.ndarray
    zeta: np.ndarray

    @property
    def cone_ratio(self) -> float:
        return float(np.linalg.norm(self.zeta.imag) / np.linalg.norm(self.zeta.real))


def structure_direction(chart: MaximallyRealChart, x, xi) -> StructureDirection:
    """``zeta = Zx(x)^(-T) xi``."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float)).reshape(chart.m)
    if not np.any(xi):
        raise ChartError("xi must be nonzero")
    x = np.atleast_1d(np.asarray(x, dtype=float)).reshape(chart.m)
    return StructureDirection(x, xi, chart.a(x) @ xi)


def lipschitz_estimate(chart: MaximallyRealChart, samples=64, seed: int = 0) -> float:
    """``max |phi(x) - phi(x')| / |x - x'|`` over sampled pairs in ``U``.

    ``samples`` is a point count (drawn as a tensor grid in ``U``) or an
    explicit ``(m, N)`` array.
    """
    if np.isscalar(samples):
        n = int(samples)
        if n < 2:
            raise ChartError("need at least 2 samples")
        per = max(2, int(round(n ** (1 / chart.m))))
        grids = np.meshgrid(*[np.linspace(lo, hi, per) for lo, hi in chart.U], indexing="ij")
        pts = np.stack([g.ravel() for g in grids])
    else:
        pts = chart._pts(samples).reshape(chart.m, -1)
        if pts.shape[1] < 2:
            raise ChartError("need at least 2 samples")
    ph = chart.phi(pts)
    best = 0.0
    for i in range(pts.shape[1] - 1):
        dx = np.linalg.norm(pts[:, i + 1:] - pts[:, i:i + 1], axis=0)
        dp = np.linalg.norm(ph[:, i + 1:] - ph[:, i:i + 1], axis=0)
        ok = dx > 0
        if np.any(ok):
            best = max(best, float(np.max(dp[ok] / dx[ok])))
    return best


def bracket_sq(zeta) -> complex:
    return complex(np.sum(np.asarray(zeta) ** 2))


@dataclass
class WellPositionedCertificate:
    lam: float
    kappa: float
    kappa_prime: float
    samples: int
    valid: bool
    sample_report: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "kappa": self.kappa, "kappa_prime": self.kappa_prime,
                "samples": self.samples, "valid": self.valid,
                "sample_report": self.sample_report}


def check_well_positioned(chart: MaximallyRealChart, lam: float = 1.0,
                          sample_budget: int = 10_000, seed: int = 0) -> WellPositionedCertificate:
    """Sampled coercivity of ``Re{i zeta.(z - z') - lam <zeta><z - z'>^2}`` on ``Sigma``.

    ``zeta`` is drawn from the fibre at ``x`` and, separately, at ``x'``.
    ``kappa'`` is the smallest ratio ``-Re{...} / (|zeta| |z - z'|^2)`` and
    ``kappa`` the largest ``|Im zeta| / |Re zeta|``; the certificate is valid
    when ``kappa < 1`` and ``kappa' > 0``.
    """
    if not lam > 0:
        raise ChartError("lambda must be positive")
    rng = np.random.default_rng(seed)
    n = max(1, sample_budget // 2)
    lo = np.array([b[0] for b in chart.U])
    hi = np.array([b[1] for b in chart.U])
    x = lo[:, None] + (hi - lo)[:, None] * rng.random((chart.m, n))
    xp = lo[:, None] + (hi - lo)[:, None] * rng.random((chart.m, n))
    xi = rng.standard_normal((chart.m, n))
    xi /= np.linalg.norm(xi, axis=0)
    w = chart.Z(x) - chart.Z(xp)
    w2 = np.sum(w * w, axis=0)
    wn2 = np.sum(np.abs(w) ** 2, axis=0)
    kappa, kprime, worst = 0.0, math.inf, None
    for base in (x, xp):
        J = chart.jacobian(base)
        Zx = np.eye(chart.m)[:, :, None] + 1j * J
        # zeta = Zx^(-T) xi, batched
        zeta = np.linalg.solve(np.moveaxis(Zx, 2, 0).transpose(0, 2, 1), xi.T[:, :, None])[:, :, 0].T
        ratio = np.linalg.norm(zeta.imag, axis=0) / np.linalg.norm(zeta.real, axis=0)
        kappa = max(kappa, float(np.max(ratio)))
        br = np.sqrt(np.sum(zeta * zeta, axis=0))
        re = np.real(1j * np.sum(zeta * w, axis=0) - lam * br * w2)
        ok = wn2 > 1e-20
        kp = -re[ok] / (np.linalg.norm(np.abs(zeta), axis=0)[ok] * wn2[ok])
        i = int(np.argmin(kp))
        if kp[i] < kprime:
            kprime = float(kp[i])
            idx = np.flatnonzero(ok)[i]
            worst = {"x": x[:, idx].tolist(), "x_prime": xp[:, idx].tolist(),
                     "xi": xi[:, idx].tolist()}
    valid = bool(kappa < 1 and kprime > 0)
    return WellPositionedCertificate(lam, kappa, kprime, 2 * n, valid,
                                     {"worst_sample": worst, "fibres": ["x", "x_prime"]})


def distance_to_sigma(chart: MaximallyRealChart, z, tol: float = 1e-10,
                      max_iter: int = 50) -> Tuple[float, np.ndarray]:
    """``dist(z, Sigma)`` by damped Gauss-Newton projection seeded at ``Re z``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex)).reshape(chart.m)
    x = z.real.copy()

    def resid(x):
        r = z - chart.Z(x)[:, 0] if chart.m > 1 else z - chart.Z(x).ravel()
        return np.r_[r.real, r.imag]

    r = resid(x)
    g = float(r @ r)
    for _ in range(max_iter):
        J = chart.jacobian(x).reshape(chart.m, chart.m)
        A = np.vstack([np.eye(chart.m), J])
        step = np.linalg.lstsq(A, r, rcond=None)[0]
        t = 1.0
        while t > 1e-6:
            xn = x + t * step
            rn = resid(xn)
            gn = float(rn @ rn)
            if gn <= g:
                break
            t *= 0.5
        done = np.linalg.norm(t * step) < tol
        x, r, g = xn, rn, gn
        if done:
            break
    return math.sqrt(g), x


# corpus ------------------------------------------------------------------

def _flat_phi(xs):
    return [_zero(x) for x in xs]


def _flat_jac(xs):
    return [[_zero(xs[0]) for _ in xs] for _ in xs]


CHARTS: Dict[str, MaximallyRealChart] = {
    "chart_flat": MaximallyRealChart(
        "chart_flat", 1, _flat_phi, _flat_jac, ((-1.0, 1.0),), "phi = 0"),
    "chart_quadratic": MaximallyRealChart(
        "chart_quadratic", 1, lambda xs: [xs[0] * xs[0] * 0.25],
        lambda xs: [[xs[0] * 0.5]], ((-0.2, 0.2),), "phi = x^2/4"),
    "chart_flat2": MaximallyRealChart(
        "chart_flat2", 2, _flat_phi, _flat_jac, ((-1.0, 1.0), (-1.0, 1.0)), "phi = 0"),
    "chart_bilinear2": MaximallyRealChart(
        "chart_bilinear2", 2, lambda xs: [xs[0] * xs[1] * 0.25, _zero(xs[0])],
        lambda xs: [[xs[1] * 0.25, xs[0] * 0.25], [_zero(xs[0]), _zero(xs[0])]],
        ((-0.2, 0.2), (-0.2, 0.2)), "phi = (x1 x2/4, 0)"),
}


def get_chart(name: str, U: Optional[Sequence[Tuple[float, float]]] = None) -> MaximallyRealChart:
    if name not in CHARTS:
        raise KeyError(f"unknown chart {name!r}")
    chart = CHARTS[name]
    return chart.with_box(U) if U is not None else chart

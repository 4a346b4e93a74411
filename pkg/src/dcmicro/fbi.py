"""FBI transforms and the decay analysis built on them.

The transform of ``u`` on a maximally real chart is

    F[u](z, zeta) = int u(x') exp(i zeta.(z - Z(x')) - lam <zeta> <z - Z(x')>^2)
                              * Delta(lam (z - Z(x')), zeta) det Zx(x') dx',

with ``<zeta> = sqrt(zeta.zeta)`` on the principal branch and
``Delta(z, zeta) = 1 + i z.zeta / <zeta>``.  The Euclidean transform drops
``Delta`` and uses the real kernel ``exp(i (x - y) xi - |xi| (x - y)^2)``.

All line integrals are composite Gauss-Legendre rules: panels are split at
the singular points of ``u`` and graded geometrically towards them, and their
width resolves both the oscillation ``2 pi / |xi|`` and the Gaussian window.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .jets import JetError, JetFunction, regularized_inverse
from .manifold import MaximallyRealChart, check_well_positioned, get_chart, structure_direction
from .sequence import RegularSequence

log = logging.getLogger(__name__)

GL_NODES = 16
WINDOW_EXP = 40.0  # Gaussian window cut where exp(-|xi| d^2) < e^-40
NOISE_FLOOR = 1e-13
EXP_RESIDUAL = 0.1
EXP_MIN_EFOLDS = 1.0  # exponential factor must decay by at least e across the ladder
A_STABILITY = 1.15
MIN_RUNGS = 6


class FBIError(ValueError):
    """Input outside the range a transform supports."""


# brackets and Jacobians -----------------------------------------------------

def bracket(zeta) -> complex:
    """``<zeta>`` on the principal branch; requires ``|Im zeta| < |Re zeta|``."""
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    if not np.linalg.norm(zeta.imag) < np.linalg.norm(zeta.real):
        raise FBIError(f"zeta={zeta} outside the cone |Im zeta| < |Re zeta|")
    return complex(np.sqrt(np.sum(zeta * zeta)))


def _bracket_unchecked(zeta: np.ndarray) -> np.ndarray:
    """Batched bracket over the first axis, no cone check."""
    return np.sqrt(np.sum(zeta * zeta, axis=0))


def jacobian_delta(z, zeta) -> complex:
    """Jacobian of ``zeta -> zeta + i z <zeta>``: ``1 + i z.zeta / <zeta>``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    return complex(1 + 1j * np.sum(z * zeta) / bracket(zeta))


def jacobian_delta_numeric(z, zeta, h: float = 1e-6) -> complex:
    """Determinant of the complex Jacobian by central differences."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    m = zeta.size

    def G(w):
        return w + 1j * z * bracket(w)

    J = np.empty((m, m), dtype=complex)
    for k in range(m):
        e = np.zeros(m, dtype=complex)
        e[k] = h
        J[:, k] = (G(zeta + e) - G(zeta - e)) / (2 * h)
    return complex(np.linalg.det(J))


def is_degenerate(z, zeta, tol: float = 1e-12) -> bool:
    """``Delta(z, zeta) = 0`` up to ``tol``."""
    return abs(jacobian_delta(z, zeta)) < tol


# cutoffs and families ---------------------------------------------------------

def _smooth_step(t):
    """0 for t <= 0, 1 for t >= 1, Gevrey-2 in between."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        a = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        b = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1 - t, 1.0)), 0.0)
    return a / (a + b)


@dataclass(frozen=True)
class Cutoff:
    """``chi = 1`` on ``|x - center| <= plateau``, ``0`` beyond ``outer``."""

    center: float = 0.0
    plateau: float = 1.0
    outer: float = 1.5

    def __call__(self, x) -> np.ndarray:
        d = np.abs(np.asarray(x, dtype=float) - self.center)
        return _smooth_step((self.outer - d) / (self.outer - self.plateau))

    @property
    def support(self) -> Tuple[float, float]:
        return (self.center - self.outer, self.center + self.outer)

    @property
    def breaks(self) -> Tuple[float, ...]:
        c, p, o = self.center, self.plateau, self.outer
        return (c - o, c - p, c + p, c + o)


@dataclass(frozen=True)
class RegularizedFamily:
    """A distribution given as the ``eps -> 0+`` limit of a family of functions.

    Transforms are computed per ``eps`` and extrapolated by a polynomial of
    degree ``order`` in ``eps``.
    """

    name: str
    family: Callable[[float], JetFunction]
    eps_ladder: Tuple[float, ...] = (4e-3, 2e-3, 1e-3)
    order: int = 1
    m: int = 1

    @property
    def singular(self) -> Tuple[float, ...]:
        return self.family(self.eps_ladder[0]).singular


def boundary_inverse() -> RegularizedFamily:
    """``1/(x + i0)`` as the limit of ``1/(x + i eps)``."""
    return RegularizedFamily("reg_inverse", regularized_inverse)


Distribution = Union[JetFunction, RegularizedFamily]


def _extrapolate(eps: Sequence[float], vals: Sequence[complex], order: int) -> complex:
    """Value at 0 of the degree-``order`` least-squares polynomial in ``eps``."""
    eps = np.asarray(eps, dtype=float)
    vals = np.asarray(vals, dtype=complex)
    if eps.size < order + 1:
        raise FBIError(f"need at least {order + 1} ladder values, got {eps.size}")
    V = np.vander(eps, order + 1, increasing=True)
    coef = np.linalg.lstsq(V, vals, rcond=None)[0]
    return complex(coef[0])


# quadrature ---------------------------------------------------------------------

def _panel_rule(lo: float, hi: float, singular: Sequence[float] = (), h_max: float = 0.1,
                h_min: float = 1e-4, n: int = GL_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre on ``[lo, hi]`` graded towards ``singular``."""
    if hi <= lo:
        return np.zeros(0), np.zeros(0)
    edges = {lo, hi}
    for s in singular:
        if lo <= s <= hi:
            edges.add(s)
            h = h_min
            while h < h_max:
                for e in (s - h, s + h):
                    if lo < e < hi:
                        edges.add(e)
                h *= 2
    edges = sorted(edges)
    fine = []
    for a, b in zip(edges[:-1], edges[1:]):
        k = max(1, int(math.ceil((b - a) / h_max)))
        fine.extend(np.linspace(a, b, k + 1)[:-1])
    fine.append(hi)
    fine = np.asarray(fine)
    x, w = np.polynomial.legendre.leggauss(n)
    a, b = fine[:-1, None], fine[1:, None]
    nodes = 0.5 * (b - a) * (x[None, :] + 1) + a
    weights = 0.5 * (b - a) * w[None, :]
    return nodes.ravel(), weights.ravel()


def _window(xi_abs: float) -> float:
    return math.sqrt(WINDOW_EXP / max(xi_abs, 1e-12))


def _h_max(xi_abs: float) -> float:
    return min(2 * math.pi / max(xi_abs, 1e-12), 0.25 * _window(xi_abs), 0.25)


# transforms -----------------------------------------------------------------------

@dataclass(frozen=True)
class FBIKernel:
    lam: float = 1.0
    chart: MaximallyRealChart = field(default_factory=lambda: get_chart("chart_flat"))
    with_delta: bool = True

    def __call__(self, z, Zp: np.ndarray, zeta) -> np.ndarray:
        """Kernel at ``z`` against surface points ``Zp`` (shape (m, N))."""
        zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        w = z[:, None] - Zp
        br = bracket(zeta)
        phase = 1j * np.sum(zeta[:, None] * w, axis=0) - self.lam * br * np.sum(w * w, axis=0)
        out = np.exp(phase)
        if self.with_delta:
            out = out * (1 + 1j * self.lam * np.sum(w * zeta[:, None], axis=0) / br)
        return out


def _support_interval(u: JetFunction, center: float, cutoff: Optional[Cutoff]):
    if cutoff is not None:
        lo, hi = cutoff.support
    elif u.support is not None:
        lo, hi = u.support[0]
    else:
        lo, hi = u.domain[0]
    if u.support is not None:
        lo, hi = max(lo, u.support[0][0]), min(hi, u.support[0][1])
    return lo, hi


def _auto_cutoff(u: JetFunction, center: float) -> Optional[Cutoff]:
    return Cutoff(center=center) if u.support is None else None


def _transform_1d(u: JetFunction, kernel: FBIKernel, z: complex, zeta: complex,
                  cutoff: Optional[Cutoff]) -> complex:
    if u.func is None:
        if u.name != "dirac":
            raise FBIError(f"unsupported distribution {u.name!r}")
        x0 = 0.0
        chi = cutoff(x0) if cutoff is not None else 1.0
        return complex(chi * kernel(z, kernel.chart.Z(np.array([x0])).reshape(1, 1), zeta)[0])
    xi_abs = abs(zeta)
    W = _window(xi_abs)
    lo, hi = _support_interval(u, z.real, cutoff)
    lo, hi = max(lo, z.real - W), min(hi, z.real + W)
    sing = list(u.singular) + (list(cutoff.breaks) if cutoff is not None else [])
    h_min = 1e-4
    if u.name.startswith("reg_inverse["):
        h_min = min(h_min, 0.25 * float(u.name[len("reg_inverse["):-1]))
    x, w = _panel_rule(lo, hi, sing, _h_max(xi_abs), h_min)
    if x.size == 0:
        return 0j
    vals = np.asarray(u.eval(x), dtype=complex)
    if cutoff is not None:
        vals = vals * cutoff(x)
    chart = kernel.chart
    Zp = chart.Z(x).reshape(1, -1)
    dZ = 1 + 1j * chart.jacobian(x).reshape(-1)
    integrand = vals * kernel(z, Zp, zeta) * dZ * w
    return complex(math.fsum(integrand.real) + 1j * math.fsum(integrand.imag))


def _transform_2d(u: JetFunction, kernel: FBIKernel, z: np.ndarray, zeta: np.ndarray,
                  cutoff: Optional[Cutoff]) -> complex:
    xi_abs = float(np.linalg.norm(zeta))
    W = _window(xi_abs)
    rules = []
    for i in range(2):
        c = z[i].real
        if u.support is not None:
            lo, hi = u.support[i]
        elif cutoff is not None:
            lo, hi = c - cutoff.outer, c + cutoff.outer
        else:
            lo, hi = u.domain[i]
        # singular values of a 2-D member are kink offsets in the first coordinate
        sing = u.singular if i == 0 else ()
        rules.append(_panel_rule(max(lo, c - W), min(hi, c + W), sing, _h_max(xi_abs)))
    (x1, w1), (x2, w2) = rules
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    pts = np.stack([X1.ravel(), X2.ravel()])
    wts = np.outer(w1, w2).ravel()
    vals = np.asarray(u.eval(pts), dtype=complex)
    if cutoff is not None:
        for i in range(2):
            vals = vals * Cutoff(z[i].real, cutoff.plateau, cutoff.outer)(pts[i])
    chart = kernel.chart
    J = chart.jacobian(pts)
    Zx = np.eye(2)[:, :, None] + 1j * J
    det = Zx[0, 0] * Zx[1, 1] - Zx[0, 1] * Zx[1, 0]
    integrand = vals * kernel(z, chart.Z(pts), zeta) * det * wts
    return complex(math.fsum(integrand.real) + 1j * math.fsum(integrand.imag))


def fbi_transform(u: Distribution, kernel: FBIKernel, z, zeta,
                  cutoff: Optional[Cutoff] = None) -> complex:
    """``F^lam[chi u](z, zeta)``; ``chi`` centred at ``Re z`` when ``u`` lacks support."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    bracket(zeta)
    if isinstance(u, RegularizedFamily):
        vals = [fbi_transform(u.family(e), kernel, z, zeta, cutoff) for e in u.eps_ladder]
        return _extrapolate(u.eps_ladder, vals, u.order)
    if u.m != kernel.chart.m or z.size != u.m:
        raise FBIError("u and z must match the chart dimension")
    if cutoff is None:
        cutoff = _auto_cutoff(u, float(z[0].real))
    if u.m == 1:
        return _transform_1d(u, kernel, complex(z[0]), complex(zeta[0]), cutoff)
    return _transform_2d(u, kernel, z, zeta, cutoff)


def fbi_euclidean(u: Distribution, x, xi, cutoff: Optional[Cutoff] = None) -> complex:
    """``int u(y) exp(i (x - y).xi - |xi| |x - y|^2) dy``."""
    kernel = FBIKernel(1.0, get_chart("chart_flat" if np.size(x) == 1 else "chart_flat2"),
                       with_delta=False)
    return fbi_transform(u, kernel, np.asarray(x, dtype=float), np.asarray(xi, dtype=float),
                         cutoff)


def dirac_kernel(kernel: FBIKernel, z, zeta, x0=0.0) -> complex:
    """Closed-form transform of the point mass at ``x0``."""
    Zp = kernel.chart.Z(np.atleast_1d(np.asarray(x0, dtype=float))).reshape(kernel.chart.m, 1)
    return complex(kernel(z, Zp, zeta)[0])


# sampling and classification -----------------------------------------------------

@dataclass
class FBISampleSet:
    """``values[p, d, r]`` at base point ``p``, direction ``d`` and rung ``r``."""

    u: str
    chart: str
    points: np.ndarray  # (P, m)
    directions: np.ndarray  # (D, m) unit xi
    ladder: np.ndarray  # |xi| scale per rung
    zeta_abs: np.ndarray  # (P, D, R)
    values: np.ndarray  # (P, D, R) complex

    def __post_init__(self):
        if len(self.ladder) < MIN_RUNGS:
            raise FBIError(f"ladder needs at least {MIN_RUNGS} rungs")
        if np.any(np.diff(self.ladder) <= 0):
            raise FBIError("ladder must be strictly increasing")

    def rows(self):
        """CSV rows ``(x..., xi-direction..., |zeta|, Re F, Im F)``."""
        P, D, R = self.values.shape
        for p in range(P):
            for d in range(D):
                for r in range(R):
                    v = self.values[p, d, r]
                    yield [*map(float, self.points[p]), *map(float, self.directions[d]),
                           float(self.zeta_abs[p, d, r]), float(v.real), float(v.imag)]


def geometric_ladder(zeta_min: float = 2.0, rungs: int = MIN_RUNGS) -> np.ndarray:
    return zeta_min * 2.0 ** np.arange(rungs)


def sample_fbi(u: Distribution, kernel: FBIKernel, points, directions,
               ladder: Optional[Sequence[float]] = None,
               cutoff: Optional[Cutoff] = None) -> FBISampleSet:
    """Transform at ``Z(x)`` for each base point and ``zeta = Zx^(-T)(s xi)``."""
    chart = kernel.chart
    m = chart.m
    pts = np.asarray(points, dtype=float).reshape(-1, m)
    dirs = np.asarray(directions, dtype=float).reshape(-1, m)
    dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    ladder = geometric_ladder() if ladder is None else np.asarray(ladder, dtype=float)
    P, D, R = len(pts), len(dirs), len(ladder)
    vals = np.zeros((P, D, R), dtype=complex)
    zabs = np.zeros((P, D, R))
    for p, x in enumerate(pts):
        z = chart.Z(x).reshape(m)
        for d, xi in enumerate(dirs):
            for r, s in enumerate(ladder):
                zeta = structure_direction(chart, x, s * xi).zeta
                zabs[p, d, r] = float(np.linalg.norm(zeta))
                vals[p, d, r] = fbi_transform(u, kernel, z, zeta, cutoff)
    name = u.name
    return FBISampleSet(name, chart.name, pts, dirs, ladder, zabs, vals)


@dataclass
class Classification:
    kind: str  # "M-regular" | "exponential" | "none"
    A: float
    A_without_largest: float
    rate: Optional[float]
    exp_residual: float
    normalization: str

    @property
    def regular(self) -> bool:
        return self.kind in ("M-regular", "exponential")

    def to_dict(self) -> dict:
        return {"class": self.kind, "A": self.A, "A_without_largest": self.A_without_largest,
                "rate": self.rate, "exp_residual": self.exp_residual,
                "normalization": self.normalization, "regular": self.regular}


def _fit_A(zabs: np.ndarray, mags: np.ndarray, logw: np.ndarray, K: int) -> float:
    k = np.arange(K + 1)
    best = 0.0
    for s, f in zip(zabs, mags):
        if f <= NOISE_FLOOR:
            continue  # below the floor a sample bounds nothing
        lf = math.log(f)
        best = max(best, float(np.max(np.exp((lf + k * math.log(s) - logw[k]) / (k + 1)))))
    return best


def classify_series(zeta_abs, values, seq: RegularSequence, K_test: int = 30,
                    normalization: str = "M") -> Classification:
    """Classify one ladder of samples.

    Exponential when ``log|F| = c - a|zeta| + b log|zeta|`` fits with
    normalized residual below 10%, ``a > 0``, and the exponential factor
    decays by at least one e-fold and accounts for most of the decay across
    the ladder.  Otherwise M-regular when the fitted
    ``A`` with ``|F| <= A^(k+1) M_k / |zeta|^k`` (all ``k <= K_test``, all
    rungs) moves by less than 15% when the largest rung is dropped.
    """
    zabs = np.asarray(zeta_abs, dtype=float)
    mags = np.abs(np.asarray(values))
    if zabs.size < MIN_RUNGS:
        raise FBIError(f"ladder needs at least {MIN_RUNGS} rungs")
    if normalization not in ("M", "m"):
        raise ValueError("normalization must be 'M' or 'm'")
    logw = seq.log_M if normalization == "M" else seq.log_m
    K = min(K_test, seq.k_max)
    A = _fit_A(zabs, mags, logw, K)
    A_red = _fit_A(zabs[:-1], mags[:-1], logw, K)

    above = mags > NOISE_FLOOR
    rate, resid, dominant = None, math.inf, True
    if np.count_nonzero(above) >= 3:
        y = np.log(mags[above])
        x = zabs[above]
        # power correction only when there are enough points to pin it down
        cols = [x, np.ones_like(x)] + ([np.log(x)] if x.size >= 4 else [])
        coef = np.linalg.lstsq(np.column_stack(cols), y, rcond=None)[0]
        spread = float(np.sqrt(np.mean((y - y.mean()) ** 2)))
        fit = float(np.sqrt(np.mean((y - np.column_stack(cols) @ coef) ** 2)))
        resid = fit / spread if spread > 0 else math.inf
        rate = float(-coef[0])
        dominant = rate * (x[-1] - x[0]) >= EXP_MIN_EFOLDS
        if dominant and x.size >= 4:
            # the exponential factor must carry most of the decay over the ladder
            dominant = rate * (x[-1] - x[0]) >= abs(coef[2]) * math.log(x[-1] / x[0])
    elif not above[-1] and np.any(~above):
        rate, resid = math.inf, 0.0

    if rate is not None and rate > 0 and resid < EXP_RESIDUAL and dominant:
        kind = "exponential"
    elif A_red > 0 and A <= A_STABILITY * A_red or A == 0.0:
        kind = "M-regular"
    else:
        kind = "none"
    return Classification(kind, A, A_red, rate, resid, normalization)


@dataclass
class DecayClassification:
    per: Dict[Tuple[int, int], Classification]
    samples: FBISampleSet

    def flagged(self) -> List[Tuple[int, int]]:
        return sorted(k for k, c in self.per.items() if not c.regular)

    def to_dict(self) -> dict:
        return {"u": self.samples.u, "chart": self.samples.chart,
                "entries": [{"point": self.samples.points[p].tolist(),
                             "direction": self.samples.directions[d].tolist(),
                             **c.to_dict()} for (p, d), c in sorted(self.per.items())]}


def decay_fit(samples: FBISampleSet, seq: RegularSequence, K_test: int = 30,
              normalization: str = "M") -> DecayClassification:
    P, D, _ = samples.values.shape
    per = {(p, d): classify_series(samples.zeta_abs[p, d], samples.values[p, d], seq,
                                   K_test, normalization)
           for p in range(P) for d in range(D)}
    return DecayClassification(per, samples)


@dataclass
class WavefrontScan:
    flagged: List[Tuple[Tuple[float, ...], Tuple[float, ...]]]
    classification: DecayClassification

    def to_dict(self) -> dict:
        return {"flagged": [{"point": list(p), "direction": list(d)} for p, d in self.flagged],
                **self.classification.to_dict()}


def wavefront_scan(u: Distribution, chart: MaximallyRealChart, points, directions,
                   seq: RegularSequence, ladder: Optional[Sequence[float]] = None,
                   K_test: int = 30, lam: float = 1.0) -> WavefrontScan:
    """Base points and directions where the transform is not M-regular."""
    samples = sample_fbi(u, FBIKernel(lam, chart), points, directions, ladder)
    cls = decay_fit(samples, seq, K_test)
    flagged = [(tuple(map(float, samples.points[p])), tuple(map(float, samples.directions[d])))
               for p, d in cls.flagged()]
    return WavefrontScan(flagged, cls)


# inversion -------------------------------------------------------------------------

@dataclass
class InversionResult:
    x: np.ndarray
    value: np.ndarray
    per_eps: Dict[float, np.ndarray]
    target: np.ndarray

    @property
    def max_error(self) -> float:
        return float(np.max(np.abs(self.value - self.target)))

    def to_dict(self) -> dict:
        return {"x": self.x.tolist(), "re": self.value.real.tolist(),
                "im": self.value.imag.tolist(), "target": self.target.real.tolist(),
                "max_error": self.max_error,
                "per_eps": {f"{e:g}": [float(abs(v)) for v in vals]
                            for e, vals in self.per_eps.items()}}


def inversion(u: JetFunction, chart: MaximallyRealChart, x,
              eps_ladder: Sequence[float] = (1e-2, 3e-3, 1e-3),
              cutoff: Optional[Cutoff] = None, order: int = 2,
              n_s: int = 100) -> InversionResult:
    """Reconstruct ``chi u`` at ``x`` from its transform (``m = 1``).

    For each ``eps`` the double integral over ``z' = Z(x')`` and
    ``zeta = Zx(x')^(-T) xi`` is truncated at ``|xi| <= 6/sqrt(eps)``;
    the surface and fibre Jacobians cancel in one dimension.  The values
    are extrapolated to ``eps = 0`` by a polynomial of degree ``order``.
    """
    if chart.m != 1 or u.m != 1:
        raise FBIError("inversion is implemented for m = 1")
    if len(eps_ladder) < order + 1:
        raise FBIError("eps ladder too short")
    cutoff = Cutoff() if cutoff is None else cutoff
    lo, hi = _support_interval(u, 0.0, cutoff)
    cert = check_well_positioned(chart.with_box([(lo, hi)]), 1.0, 2000)
    if not cert.valid:
        raise FBIError("chart is not well positioned on the support of chi u")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    kernel = FBIKernel(1.0, chart)
    R = 6.0 / math.sqrt(min(eps_ladder))
    s, ws = np.polynomial.legendre.leggauss(n_s)
    s = 0.5 * math.sqrt(R) * (s + 1)
    ws = 0.5 * math.sqrt(R) * ws
    # source quadrature for the inner transform
    y, wy = _panel_rule(lo, hi, list(u.singular) + list(cutoff.breaks), _h_max(R), 1e-4)
    gy = np.asarray(u.eval(y), dtype=complex) * cutoff(y) * (1 + 1j * chart.jacobian(y).ravel()) * wy
    Zy = chart.Z(y).ravel()
    Zx_eval = chart.Z(x).ravel()
    totals = {e: np.zeros(x.size, dtype=complex) for e in eps_ladder}
    for sign in (1.0, -1.0):
        for sk, wk in zip(s, ws):
            xi = sign * sk * sk
            jac = 2 * sk * wk  # d xi = 2 s ds
            W = _window(abs(xi))
            xp, wp = _panel_rule(lo - W, hi + W, (), min(2 * math.pi / abs(xi), 0.25 * W))
            a = 1.0 / (1 + 1j * chart.jacobian(xp).ravel())
            zeta = a * xi  # per x'
            br = np.sqrt(zeta * zeta)
            Zp = chart.Z(xp).ravel()
            dZp = 1 + 1j * chart.jacobian(xp).ravel()
            w = Zp[:, None] - Zy[None, :]
            K = np.exp(1j * zeta[:, None] * w - br[:, None] * w * w) * (1 + 1j * w * zeta[:, None] / br[:, None])
            F = K @ gy  # transform at (z', zeta(x', xi))
            d = Zx_eval[:, None] - Zp[None, :]
            outer = np.exp(1j * zeta[None, :] * d - br[None, :] * d * d)
            # d z' d zeta = det Zx(x') det Zx(x')^(-T) dx' dxi = dx' dxi
            for e in eps_ladder:
                damp = np.exp(-e * (br * br))
                if abs(xi) <= 6.0 / math.sqrt(e):
                    totals[e] += (outer @ (F * np.sqrt(br) * wp * dZp * a * damp)) * jac
    norm = (2 * math.pi ** 3) ** -0.5
    per_eps = {e: totals[e] * norm for e in eps_ladder}
    eps = np.array(eps_ladder)
    value = np.array([_extrapolate(eps, [per_eps[e][i] for e in eps_ladder], order)
                      for i in range(x.size)])
    target = np.asarray(u.eval(x), dtype=complex) * cutoff(x)
    return InversionResult(x, value, per_eps, target)


# wedge boundary values --------------------------------------------------------------

@dataclass(frozen=True)
class WedgeFunction:
    """Function on the wedge ``Z(V) + i Gamma`` with a slow-growth certificate.

    ``growth = (C, N)`` asserts ``|f(Z(x) + i t gamma)| <= C / t^N``.
    """

    name: str
    eval: Callable
    V: Tuple[float, float]
    gamma: float = 1.0
    delta: float = 1.0
    growth: Tuple[float, int] = (1.0, 0)
    aa_constant: Optional[float] = None
    singular: Tuple[float, ...] = ()


@dataclass
class BoundaryValueResult:
    value: complex
    t_ladder: np.ndarray
    pairings: np.ndarray
    order: int

    def to_dict(self) -> dict:
        return {"re": self.value.real, "im": self.value.imag, "order": self.order,
                "t": self.t_ladder.tolist(), "pairings_abs": np.abs(self.pairings).tolist()}


def boundary_value(f: WedgeFunction, test: Callable, chart: Optional[MaximallyRealChart] = None,
                   t_ladder: Optional[Sequence[float]] = None, order: Optional[int] = None,
                   growth_tol: float = 1.5) -> BoundaryValueResult:
    """``lim_{t -> 0+} int_V f(Z(x) + i t gamma) test(x) dZ(x)``.

    The pairing is sampled on a halving ``t`` ladder and extrapolated by a
    polynomial of degree ``N + 1`` in ``t`` (or ``order``).  Samples exceeding
    the growth certificate by more than ``growth_tol`` raise.
    """
    chart = get_chart("chart_flat") if chart is None else chart
    C, N = f.growth
    order = N + 1 if order is None else order
    if t_ladder is None:
        t_ladder = 0.01 * 2.0 ** -np.arange(order + 2)
    t_ladder = np.asarray(t_ladder, dtype=float)
    lo, hi = f.V
    pairings = []
    for t in t_ladder:
        x, w = _panel_rule(lo, hi, f.singular, 0.05, min(1e-4, t / 4))
        z = chart.Z(x).ravel() + 1j * t * f.gamma
        vals = np.asarray(f.eval(z), dtype=complex)
        if np.max(np.abs(vals)) * t ** N > growth_tol * C:
            raise FBIError(f"growth certificate (C={C}, N={N}) violated at t={t:g}")
        dZ = 1 + 1j * chart.jacobian(x).ravel()
        g = vals * np.asarray(test(x)) * dZ * w
        pairings.append(complex(math.fsum(g.real) + 1j * math.fsum(g.imag)))
    pairings = np.array(pairings)
    value = _extrapolate(t_ladder, pairings, min(order, len(t_ladder) - 1))
    return BoundaryValueResult(value, t_ladder, pairings, order)

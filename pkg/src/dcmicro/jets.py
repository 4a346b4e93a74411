"""Functions with iterated-derivative oracles along commuting frames.

A :class:`JetFunction` whose ``func`` accepts :class:`~dcmicro.tps.TPS`
arguments has exact jets of any order: evaluating it on truncated power
series variables yields its Taylor coefficients.  Members without such an
implementation fall back to Richardson-extrapolated central differences up
to order 3.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import tps as T
from .sequence import RegularSequence
from .tps import TPS

MultiIndex = Tuple[int, ...]

FD_MAX_ORDER = 3
EPS = np.finfo(float).eps


class JetError(ValueError):
    """A jet request the function cannot serve."""


def multi_indices(m: int, order: int) -> List[MultiIndex]:
    """All multi-indices of length ``m`` with ``|alpha| <= order``, graded."""
    out = []
    for deg in range(order + 1):
        for a in product(range(deg + 1), repeat=m):
            if sum(a) == deg:
                out.append(tuple(a))
    return sorted(out, key=lambda a: (sum(a), tuple(-x for x in a)))


def factorial(alpha: Sequence[int]) -> int:
    return math.prod(math.factorial(a) for a in alpha)


def _as_points(x, m: int) -> np.ndarray:
    """Return points as an array of shape (m, *batch)."""
    x = np.asarray(x)
    if m == 1:
        return x if (x.ndim >= 2 and x.shape[0] == 1) else x[None, ...]
    if x.shape[0] != m:
        raise JetError(f"expected leading axis of length {m}, got shape {x.shape}")
    return x


@dataclass(frozen=True)
class JetFunction:
    """A function on a box of R^m with an iterated-derivative oracle.

    ``func`` receives a list of ``m`` coordinates (arrays or TPS) and returns
    the value.  ``exact`` says whether ``func`` supports TPS arguments.
    """

    name: str
    m: int
    func: Optional[Callable]
    domain: Tuple[Tuple[float, float], ...]
    exact: bool = True
    max_order: int = 60
    pairing_only: bool = False
    support: Optional[Tuple[Tuple[float, float], ...]] = None
    singular: Tuple[float, ...] = ()
    fd_scale: float = 1.0
    description: str = ""

    @property
    def jet_kind(self) -> str:
        return "exact-closed-form" if self.exact else "finite-difference"

    def in_domain(self, x) -> np.ndarray:
        x = _as_points(x, self.m)
        ok = np.ones(x.shape[1:], dtype=bool)
        for i, (lo, hi) in enumerate(self.domain):
            ok &= (x[i] >= lo) & (x[i] <= hi)
        return ok

    def eval(self, x) -> np.ndarray:
        if self.func is None:
            raise JetError(f"{self.name} is pairing-only and has no pointwise values")
        x = _as_points(x, self.m)
        return self.func([x[i] for i in range(self.m)])

    def taylor(self, x, order: int) -> TPS:
        """TPS of ``f`` around the points ``x`` (shape (m, *batch))."""
        if not self.exact:
            raise JetError(f"{self.name} has no closed-form jets")
        x = _as_points(x, self.m)
        xs = TPS.variables(order, [x[i] for i in range(self.m)])
        out = self.func(xs)
        if not isinstance(out, TPS):
            out = xs[0].constant_like(0.0) + out
        return out

    def jet(self, alpha: MultiIndex, x) -> np.ndarray:
        """``d^alpha f(x)`` (coordinate derivatives)."""
        alpha = tuple(alpha)
        n = sum(alpha)
        if n > self.max_order:
            raise JetError(f"order {n} exceeds max_order={self.max_order} of {self.name}")
        x = _as_points(x, self.m)
        if not np.all(self.in_domain(x)):
            raise JetError(f"point outside the domain of {self.name}")
        if self.exact:
            return self.taylor(x, n).derivative_value(alpha)
        return fd_jet(self, alpha, x)


def fd_jet(f: JetFunction, alpha: MultiIndex, x, refine: float = 1.0) -> np.ndarray:
    """Central-difference ``d^alpha f`` with one Richardson step.

    The step for total order ``n`` is ``eps^(1/(n+4)) * scale``, which
    balances the ``h^4`` truncation error after extrapolation against the
    ``eps/h^n`` rounding error.
    """
    alpha = tuple(alpha)
    n = sum(alpha)
    if n > FD_MAX_ORDER:
        raise JetError(f"finite-difference jets stop at order {FD_MAX_ORDER}")
    x = _as_points(x, f.m).astype(float)
    if n == 0:
        return f.eval(x)
    h = EPS ** (1.0 / (n + 4)) * f.fd_scale * refine

    def stencil_eval(hh):
        total = 0.0
        axes = [_STENCILS[a] for a in alpha]
        for combo in product(*axes):
            w = 1.0
            pt = x.copy()
            for i, (off, coef) in enumerate(combo):
                w *= coef
                pt[i] = pt[i] + off * hh
            if w != 0.0:
                total = total + w * f.eval(pt)
        return total / hh ** n

    d1 = stencil_eval(h)
    d2 = stencil_eval(h / 2)
    return (4.0 * d2 - d1) / 3.0


_STENCILS = {
    0: [(0, 1.0)],
    1: [(-1, -0.5), (1, 0.5)],
    2: [(-1, 1.0), (0, -2.0), (1, 1.0)],
    3: [(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
}


# frames ------------------------------------------------------------------

@dataclass(frozen=True)
class VectorFrame:
    """Commuting frame ``X_k = scale * sum_l a_kl(x) d/dx_l``.

    ``coeff`` maps a list of ``m`` coordinates (arrays or TPS) to an ``m x m``
    nested list of coefficients; ``None`` means the coordinate frame.
    """

    m: int
    coeff: Optional[Callable] = None
    kind: str = "coordinate"
    scale: complex = 1.0
    name: str = "coordinate"

    def scaled(self, s: complex) -> "VectorFrame":
        return VectorFrame(self.m, self.coeff, self.kind, self.scale * s, self.name)

    def coefficients(self, xs) -> List[List]:
        if self.coeff is None:
            return [[1.0 if k == l else 0.0 for l in range(self.m)] for k in range(self.m)]
        return self.coeff(xs)

    def apply_series(self, g: TPS, k: int, xs: Sequence[TPS]) -> TPS:
        """``X_k g`` as a TPS of order one lower."""
        if self.coeff is None:
            out = g.diff(k)
        else:
            a = self.coeff([v.truncate(g.order - 1) for v in xs])
            out = None
            for l in range(self.m):
                term = g.diff(l) * a[k][l]
                out = term if out is None else out + term
        return out * self.scale if self.scale != 1.0 else out

    def coefficient_values(self, x) -> np.ndarray:
        """Array ``a[k, l, *batch]`` at points ``x`` (shape (m, *batch))."""
        x = _as_points(x, self.m)
        a = self.coefficients([x[i] for i in range(self.m)])
        batch = x.shape[1:]
        return self.scale * np.array([[np.broadcast_to(a[k][l], batch) for l in range(self.m)]
                                      for k in range(self.m)])


def coordinate_frame(m: int) -> VectorFrame:
    return VectorFrame(m)


def jet_table(f: JetFunction, frame: VectorFrame, u, order: int,
              refine: float = 1.0) -> Dict[MultiIndex, np.ndarray]:
    """``X^alpha f(u)`` for all ``|alpha| <= order``, batched over ``u``.

    The composition is ``X_1^{a_1} o ... o X_m^{a_m}``; since the frame
    commutes the order only fixes which intermediate series are cached.
    """
    if frame.m != f.m:
        raise JetError("frame and function dimensions differ")
    if order > f.max_order:
        raise JetError(f"order {order} exceeds max_order={f.max_order} of {f.name}")
    u = _as_points(u, f.m)
    if not f.exact:
        if frame.coeff is not None:
            raise JetError("finite-difference jets only support the coordinate frame")
        s = complex(frame.scale)
        return {a: fd_jet(f, a, u, refine) * s ** sum(a) for a in multi_indices(f.m, order)}
    xs = TPS.variables(order, [u[i] for i in range(f.m)])
    g0 = f.func(xs)
    if not isinstance(g0, TPS):
        g0 = xs[0].constant_like(0.0) + g0
    if frame.coeff is None:
        s = frame.scale
        return {a: g0.derivative_value(a) * (s ** sum(a) if s != 1.0 else 1.0)
                for a in multi_indices(f.m, order)}
    series = {(0,) * f.m: g0}
    out = {(0,) * f.m: g0.value}
    for a in multi_indices(f.m, order)[1:]:
        # peel X_1 first: X^a = X_k X^(a - e_k) with k the first nonzero slot
        k = next(i for i, ai in enumerate(a) if ai)
        prev = tuple(ai - (i == k) for i, ai in enumerate(a))
        g = frame.apply_series(series[prev], k, xs)
        series[a] = g
        out[a] = g.value
    return out


def frame_apply(frame: VectorFrame, f: JetFunction, alpha: MultiIndex, x) -> np.ndarray:
    """``X^alpha f(x)``."""
    alpha = tuple(alpha)
    n = sum(alpha)
    if n > f.max_order:
        raise JetError(f"order {n} exceeds max_order={f.max_order} of {f.name}")
    x = _as_points(x, f.m)
    if not np.all(f.in_domain(x)):
        raise JetError(f"point outside the domain of {f.name}")
    return jet_table(f, frame, x, n)[alpha]


def taylor_coefficient(f: JetFunction, frame: VectorFrame, alpha: MultiIndex, u) -> np.ndarray:
    """``f_alpha(u) = X^alpha f(u) / alpha!``."""
    return frame_apply(frame, f, alpha, u) / factorial(alpha)


# class constants ----------------------------------------------------------

@dataclass
class ClassFit:
    C: float
    per_order: Dict[int, dict] = field(default_factory=dict)
    K: int = 0
    stable: bool = True
    growth_ratio: float = 1.0

    def to_dict(self) -> dict:
        return {"C": self.C, "K": self.K, "stable": self.stable,
                "growth_ratio": self.growth_ratio,
                "per_order": {str(k): v for k, v in self.per_order.items()}}


STABILITY_RATIO = 1.1


def _fit_from_table(table, seq: RegularSequence, K: int):
    sup = {}
    for a, vals in table.items():
        n = sum(a)
        sup[n] = max(sup.get(n, 0.0), float(np.max(np.abs(vals))))
    per_order, running = {}, []
    for n in range(K + 1):
        s = sup[n]
        c_n = math.exp((math.log(s) - seq.log_M[n]) / (n + 1)) if s > 0 else 0.0
        per_order[n] = {"sup": s, "M": math.exp(seq.log_M[n]), "C_n": c_n}
        running.append(c_n if not running else max(running[-1], c_n))
    return running, per_order


def _ratio(num: float, den: float) -> float:
    if num == 0.0:
        return 1.0
    return math.inf if den == 0.0 else num / den


def class_constant_fit(f: JetFunction, frame: VectorFrame, seq: RegularSequence, K: int,
                       grid) -> ClassFit:
    """Smallest ``C`` with ``sup_grid |X^a f| <= C^(|a|+1) M_|a|`` for ``|a| <= K``.

    The fit is flagged unstable when ``C(K) / C(K-2) > 1.1``: a genuine member
    of the class has a fitted constant that settles as ``K`` grows.  For
    finite-difference members the fit is also repeated with half the step;
    a constant that grows under step refinement means the derivatives do not
    exist at some grid point.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise JetError("empty grid")
    K = min(K, f.max_order if f.exact else FD_MAX_ORDER)
    pts = grid[None, :] if f.m == 1 and grid.ndim == 1 else grid.T
    running, per_order = _fit_from_table(jet_table(f, frame, pts, K), seq, K)
    C = running[-1]
    ratio = _ratio(C, running[max(K - 2, 0)])
    if not f.exact:
        fine, _ = _fit_from_table(jet_table(f, frame, pts, K, refine=0.5), seq, K)
        ratio = max(ratio, _ratio(fine[-1], C))
    return ClassFit(C=C, per_order=per_order, K=K, stable=ratio <= STABILITY_RATIO,
                    growth_ratio=ratio)


# corpus ------------------------------------------------------------------

def _bump(r2):
    """exp(-1/(1 - r2)) for r2 < 1, zero elsewhere; works on TPS."""
    r0 = T.value_of(r2)
    inside = r0 < 1
    if isinstance(r2, TPS):
        safe = r2 + np.where(inside, 0.0, -r0)  # shift outside points to 0
        val = (-1.0 / (1.0 - safe)).exp()
        return val.where(inside, 0.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        val = np.exp(-1.0 / (1.0 - np.where(inside, r2, 0.0)))
    return np.where(inside, val, 0.0)


def _abs_cubed(x):
    sgn = np.sign(T.value_of(x))
    return x * x * x * sgn


def _heaviside(x):
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, 1.0, np.where(x < 0, 0.0, 0.5))


def _indicator(x):
    x = np.asarray(x, dtype=float)
    a = np.abs(x)
    return np.where(a < 1, 1.0, np.where(a > 1, 0.0, 0.5))


def regularized_inverse(eps: float) -> JetFunction:
    """``1/(x + i eps)``, the regularizations of the boundary value ``1/(x + i0)``."""
    return JetFunction(f"reg_inverse[{eps:g}]", 1, lambda xs: 1.0 / (xs[0] + 1j * eps),
                       ((-np.inf, np.inf),), singular=(0.0,),
                       description="1/(x + i eps)")


INF = (-np.inf, np.inf)
_BOX1 = (INF,)
_BOX2 = (INF, INF)

CORPUS: Dict[str, JetFunction] = {}


def _register(f: JetFunction) -> JetFunction:
    CORPUS[f.name] = f
    return f


_register(JetFunction("zero", 1, lambda xs: 0.0 * xs[0], _BOX1, description="0"))
_register(JetFunction("poly_quadratic", 1, lambda xs: xs[0] * xs[0], _BOX1, description="x^2"))
_register(JetFunction("poly_cubic", 1, lambda xs: xs[0] * xs[0] * xs[0] - xs[0], _BOX1,
                      description="x^3 - x"))
_register(JetFunction("rational", 1, lambda xs: 1.0 / (1.0 + xs[0] * xs[0]), _BOX1,
                      description="1/(1 + x^2)"))
_register(JetFunction("exp", 1, lambda xs: T.exp(xs[0]), _BOX1, description="exp(x)"))
_register(JetFunction("gaussian", 1, lambda xs: T.exp(-xs[0] * xs[0]), _BOX1,
                      description="exp(-x^2)"))
_register(JetFunction("gevrey_bump", 1, lambda xs: _bump(xs[0] * xs[0]), _BOX1,
                      support=((-1.0, 1.0),), singular=(-1.0, 1.0),
                      description="exp(-1/(1 - x^2)) on |x| < 1, else 0"))
_register(JetFunction("bump_x2", 1, lambda xs: xs[0] * xs[0] * _bump(xs[0] * xs[0]), _BOX1,
                      support=((-1.0, 1.0),), singular=(-1.0, 1.0),
                      description="x^2 exp(-1/(1 - x^2)) on |x| < 1, else 0"))
_register(JetFunction("abs_cubed", 1, lambda xs: _abs_cubed(xs[0]), _BOX1, max_order=2,
                      singular=(0.0,),
                      description="|x|^3"))
_register(JetFunction("heaviside", 1, lambda xs: _heaviside(xs[0]), _BOX1, exact=False,
                      max_order=FD_MAX_ORDER, pairing_only=True, singular=(0.0,),
                      fd_scale=1.0, description="H(x), value 1/2 at 0"))
_register(JetFunction("indicator", 1, lambda xs: _indicator(xs[0]), _BOX1, exact=False,
                      max_order=FD_MAX_ORDER, pairing_only=True, support=((-1.0, 1.0),),
                      singular=(-1.0, 1.0), description="1 on [-1, 1]"))
_register(JetFunction("dirac", 1, None, _BOX1, exact=False, max_order=0, pairing_only=True,
                      singular=(0.0,), description="point mass at 0"))
_register(JetFunction("poly2_quadratic", 2, lambda xs: xs[0] * xs[0] + xs[0] * xs[1], _BOX2,
                      description="x1^2 + x1 x2"))
_register(JetFunction("rational2", 2, lambda xs: 1.0 / (1.0 + xs[0] * xs[0] + xs[1] * xs[1]),
                      _BOX2, description="1/(1 + |x|^2)"))
_register(JetFunction("gaussian2", 2, lambda xs: T.exp(-xs[0] * xs[0] - xs[1] * xs[1]), _BOX2,
                      description="exp(-|x|^2)"))
_register(JetFunction("gevrey_bump2", 2, lambda xs: _bump(xs[0] * xs[0] + xs[1] * xs[1]), _BOX2,
                      support=((-1.0, 1.0), (-1.0, 1.0)),
                      description="exp(-1/(1 - |x|^2)) on |x| < 1, else 0"))
_register(regularized_inverse(1e-3))


def get_function(name: str) -> JetFunction:
    if name in CORPUS:
        return CORPUS[name]
    if name.startswith("reg_inverse[") and name.endswith("]"):
        return regularized_inverse(float(name[len("reg_inverse["):-1]))
    raise KeyError(f"unknown corpus function {name!r}")


def load_jet_csv(path: str, name: Optional[str] = None) -> JetFunction:
    """Load a 1-D jet table with columns ``x, d0, d1, ...``.

    The resulting member answers jet queries only at the tabulated points.
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        for row in reader:
            if row:
                rows.append([complex(v.replace(" ", "")) for v in row])
    data = np.array(rows)
    xs = data[:, 0].real
    jets = data[:, 1:]
    order = jets.shape[1] - 1
    lookup = {float(x): jets[i] for i, x in enumerate(xs)}

    def func(args):
        x = args[0]
        if isinstance(x, TPS):
            base = np.atleast_1d(x.value)
            coeffs = np.array([[lookup[float(b)][k] / math.factorial(k) for b in base]
                               for k in range(x.order + 1)])
            dx = x - x.value
            out = x.constant_like(0.0)
            power = x.constant_like(1.0)
            for k in range(x.order + 1):
                out = out + power * coeffs[k].reshape(x.batch_shape)
                power = power * dx
            return out
        return np.vectorize(lambda b: lookup[float(b)][0])(x)

    lo, hi = float(xs.min()), float(xs.max())
    return JetFunction(name or header[0], 1, func, ((lo, hi),), max_order=order,
                       description=f"table from {path}")

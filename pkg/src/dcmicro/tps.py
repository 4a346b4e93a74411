"""Truncated multivariate power series with batched coefficients.

A :class:`TPS` holds the Taylor coefficients of a function of ``nvar``
variables up to total degree ``order`` around a base point.  Coefficients are
stored along the first axis; any trailing axes are batch axes, so one object
can carry the jets at many base points at once.

Exponents are ordered by total degree first, which makes the space of a lower
order a prefix of the space of a higher order.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Callable, Sequence

import numpy as np


class Space:
    """Monomial bookkeeping for ``nvar`` variables up to degree ``order``."""

    def __init__(self, nvar: int, order: int):
        self.nvar = nvar
        self.order = order
        exps = []
        for deg in range(order + 1):
            for combo in combinations_with_replacement(range(nvar), deg):
                e = [0] * nvar
                for i in combo:
                    e[i] += 1
                exps.append(tuple(e))
        self.exponents = exps
        self.index = {e: i for i, e in enumerate(exps)}
        self.size = len(exps)
        self.degree = np.array([sum(e) for e in exps], dtype=int)
        self._mul = None
        self._diff = {}

    def prefix(self, order: int) -> int:
        """Number of monomials of total degree <= ``order``."""
        return int(np.searchsorted(self.degree, order, side="right"))

    def mul_table(self):
        if self._mul is None:
            ii, jj, kk = [], [], []
            for a, ea in enumerate(self.exponents):
                da = self.degree[a]
                for b, eb in enumerate(self.exponents):
                    if da + self.degree[b] > self.order:
                        continue
                    ii.append(a)
                    jj.append(b)
                    kk.append(self.index[tuple(x + y for x, y in zip(ea, eb))])
            order = np.argsort(kk, kind="stable")
            ii = np.asarray(ii)[order]
            jj = np.asarray(jj)[order]
            kk = np.asarray(kk)[order]
            starts = np.flatnonzero(np.r_[True, kk[1:] != kk[:-1]])
            self._mul = (ii, jj, starts)
        return self._mul

    def diff_table(self, var: int):
        """Source indices and factors for d/dx_var into the order-1 space."""
        if var not in self._diff:
            lower = get_space(self.nvar, max(self.order - 1, 0))
            src = np.zeros(lower.size, dtype=int)
            fac = np.zeros(lower.size)
            for t, e in enumerate(lower.exponents):
                if self.order == 0:
                    break
                up = list(e)
                up[var] += 1
                src[t] = self.index[tuple(up)]
                fac[t] = up[var]
            self._diff[var] = (src, fac)
        return self._diff[var]


@lru_cache(maxsize=None)
def get_space(nvar: int, order: int) -> Space:
    return Space(nvar, order)


class TPS:
    """Truncated power series ``sum_e c_e (x - x0)^e`` with batched ``c_e``."""

    __array_priority__ = 1000

    def __init__(self, coeffs: np.ndarray, space: Space):
        self.c = coeffs
        self.space = space

    # construction -------------------------------------------------------
    @classmethod
    def variable(cls, nvar: int, order: int, var: int, value) -> "TPS":
        sp = get_space(nvar, order)
        value = np.asarray(value)
        c = np.zeros((sp.size,) + value.shape, dtype=np.result_type(value, float))
        c[0] = value
        if order >= 1:
            e = [0] * nvar
            e[var] = 1
            c[sp.index[tuple(e)]] = 1.0
        return cls(c, sp)

    @classmethod
    def variables(cls, order: int, values: Sequence) -> list["TPS"]:
        n = len(values)
        shape = np.broadcast_shapes(*[np.shape(v) for v in values])
        return [cls.variable(n, order, i, np.broadcast_to(np.asarray(v), shape))
                for i, v in enumerate(values)]

    def constant_like(self, value) -> "TPS":
        value = np.asarray(value)
        batch = np.broadcast_shapes(self.batch_shape, value.shape)
        c = np.zeros((self.space.size,) + batch, dtype=np.result_type(self.c, value))
        c[0] = value
        return TPS(c, self.space)

    # basic properties ---------------------------------------------------
    @property
    def batch_shape(self):
        return self.c.shape[1:]

    @property
    def order(self) -> int:
        return self.space.order

    @property
    def value(self) -> np.ndarray:
        return self.c[0]

    def coef(self, alpha: Sequence[int]) -> np.ndarray:
        """Taylor coefficient of ``(x - x0)^alpha``."""
        return self.c[self.space.index[tuple(alpha)]]

    def derivative_value(self, alpha: Sequence[int]) -> np.ndarray:
        """The partial derivative ``d^alpha`` at the base point."""
        fact = math.prod(math.factorial(a) for a in alpha)
        return self.coef(alpha) * fact

    def truncate(self, order: int) -> "TPS":
        sp = get_space(self.space.nvar, order)
        return TPS(self.c[: sp.size], sp)

    def real(self) -> "TPS":
        return TPS(self.c.real.copy(), self.space)

    def conj(self) -> "TPS":
        return TPS(self.c.conj(), self.space)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TPS):
            if other.space is not self.space:
                order = min(self.order, other.order)
                return self.truncate(order), other.truncate(order)
            return self, other
        return self, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if b is None:
            other = np.asarray(other)
            batch = np.broadcast_shapes(a.batch_shape, other.shape)
            c = np.broadcast_to(a.c, (a.space.size,) + batch).astype(
                np.result_type(a.c, other), copy=True)
            c[0] = c[0] + other
            return TPS(c, a.space)
        return TPS(a.c + b.c, a.space)

    __radd__ = __add__

    def __neg__(self):
        return TPS(-self.c, self.space)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if b is None:
            return TPS(a.c * np.asarray(other), a.space)
        sp = a.space
        if sp.nvar == 1:
            n = sp.size
            batch = np.broadcast_shapes(a.batch_shape, b.batch_shape)
            out = np.zeros((n,) + batch, dtype=np.result_type(a.c, b.c))
            for i in range(n):
                out[i:] += a.c[i] * b.c[: n - i]
            return TPS(out, sp)
        ii, jj, starts = sp.mul_table()
        prod = a.c[ii] * b.c[jj]
        return TPS(np.add.reduceat(prod, starts, axis=0), sp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TPS):
            return self * other.reciprocal()
        return TPS(self.c / np.asarray(other), self.space)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)) and p >= 0:
            result = self.constant_like(1.0)
            base = self
            while p:
                if p & 1:
                    result = result * base
                p >>= 1
                if p:
                    base = base * base
            return result
        a0 = self.value
        return self.compose(lambda k: _binom_series(a0, p, k))

    # composition with scalar functions ------------------------------------
    def compose(self, taylor: Callable[[int], np.ndarray]) -> "TPS":
        """Return ``g(self)`` given ``taylor(k) = g^(k)(a0)/k!``."""
        nil = TPS(self.c.copy(), self.space)
        nil.c[0] = 0
        result = self.constant_like(0.0) + taylor(self.order)
        for k in range(self.order - 1, -1, -1):
            result = result * nil + taylor(k)
        return result

    def reciprocal(self) -> "TPS":
        a0 = self.value
        return self.compose(lambda k: (-1.0) ** k / a0 ** (k + 1))

    def exp(self) -> "TPS":
        e0 = np.exp(self.value)
        return self.compose(lambda k: e0 / math.factorial(k))

    def log(self) -> "TPS":
        a0 = self.value
        return self.compose(
            lambda k: np.log(a0) if k == 0 else (-1.0) ** (k + 1) / (k * a0 ** k))

    def sqrt(self) -> "TPS":
        return self ** 0.5

    def sin(self) -> "TPS":
        a0 = self.value
        return self.compose(lambda k: np.sin(a0 + k * np.pi / 2) / math.factorial(k))

    def cos(self) -> "TPS":
        a0 = self.value
        return self.compose(lambda k: np.cos(a0 + k * np.pi / 2) / math.factorial(k))

    # calculus -----------------------------------------------------------
    def diff(self, var: int) -> "TPS":
        """Partial derivative; the result has order reduced by one."""
        src, fac = self.space.diff_table(var)
        lower = get_space(self.space.nvar, max(self.order - 1, 0))
        fac = fac.reshape((-1,) + (1,) * len(self.batch_shape))
        return TPS(self.c[src] * fac, lower)

    def where(self, mask, other: "TPS | float" = 0.0) -> "TPS":
        """Batchwise select: ``self`` where ``mask`` else ``other``."""
        if not isinstance(other, TPS):
            other = self.constant_like(other)
        return TPS(np.where(mask, self.c, other.c), self.space)


def _binom_series(a0, p, k):
    # coefficient of t^k in (a0 + t)^p
    coef = 1.0
    for j in range(k):
        coef *= (p - j) / (j + 1)
    return coef * np.power(a0 + 0j if np.iscomplexobj(a0) else a0, p - k)


# numpy-or-TPS dispatch helpers -------------------------------------------

def exp(x):
    return x.exp() if isinstance(x, TPS) else np.exp(x)


def log(x):
    return x.log() if isinstance(x, TPS) else np.log(x)


def sqrt(x):
    return x.sqrt() if isinstance(x, TPS) else np.sqrt(x)


def sin(x):
    return x.sin() if isinstance(x, TPS) else np.sin(x)


def cos(x):
    return x.cos() if isinstance(x, TPS) else np.cos(x)


def value_of(x):
    """Constant term for a TPS, identity otherwise."""
    return x.value if isinstance(x, TPS) else np.asarray(x)

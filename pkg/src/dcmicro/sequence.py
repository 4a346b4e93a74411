"""Regular Denjoy-Carleman weight sequences and their associated functions.

Weights are kept in the log domain: ``log_m[k] = ln(M_k / k!)``.  The
associated functions are

    h(r)  = inf_k      m_k r^k
    h1(r) = inf_{k>=1} m_k r^(k-1)
    N(r)  = smallest n >= 1 attaining h1(r)

and log-convexity of ``m`` makes ``k -> m_k r^k`` unimodal, so every infimum
is found by walking up to the first index where the sequence turns upward.
"""

from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

log = logging.getLogger(__name__)

C_MARGIN = 1.05
TIE_TOL = 1e-12


class SequenceError(ValueError):
    """Invalid input to a sequence operation."""


def _tol(x) -> np.ndarray:
    return TIE_TOL * np.maximum(1.0, np.abs(x))


def ratio_sup(log_m: np.ndarray, K: int) -> float:
    """max over 1 <= k <= K-1 of (m_{k+1}/m_k)^(1/k)."""
    k = np.arange(1, K)
    return float(np.exp(np.max((log_m[k + 1] - log_m[k]) / k)))


def moderate_growth_profile(log_M: np.ndarray, K: int) -> np.ndarray:
    """q_k = (M_k / min_n M_n M_{k-n})^(1/(k+1)) for 0 <= k <= K."""
    q = np.empty(K + 1)
    for k in range(K + 1):
        n = np.arange(k + 1)
        worst = np.min(log_M[n] + log_M[k - n])
        q[k] = math.exp((log_M[k] - worst) / (k + 1))
    return q


def choose_c(seq: "RegularSequence", K: int, moderate_growth: bool = False) -> float:
    """Structural constant ``c`` with a fixed 5% margin over the finite-range sup."""
    if K < 2:
        raise SequenceError(f"choose_c needs K >= 2, got K={K}")
    if K > seq.k_max:
        raise SequenceError(f"K={K} exceeds K_max={seq.k_max}")
    base = max(1.0, ratio_sup(seq.log_m, K))
    if moderate_growth:
        base = max(base, float(np.max(moderate_growth_profile(seq.log_M, K))))
    return C_MARGIN * base


@dataclass
class ValidationReport:
    checks: dict
    details: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"checks": dict(self.checks), "details": dict(self.details),
                "all_pass": self.all_pass}


class RegularSequence:
    """A weight sequence ``M_k = k! m_k`` stored as ``ln m_k``.

    Parameters
    ----------
    log_m : array_like
        ``ln m_k`` for ``0 <= k <= K_max``.
    kind : str
        ``"gevrey"`` or ``"table"``; informational.
    s : float, optional
        Gevrey exponent when ``kind == "gevrey"``.
    """

    def __init__(self, log_m: Sequence[float], kind: str = "table",
                 s: Optional[float] = None):
        log_m = np.asarray(log_m, dtype=float)
        if log_m.ndim != 1 or log_m.size < 9:
            raise SequenceError("log_m must hold at least 9 entries (K_max >= 8)")
        if not np.all(np.isfinite(log_m)):
            raise SequenceError("log_m must be finite")
        self.log_m = log_m
        self.log_m.setflags(write=False)
        self.kind = kind
        self.s = s
        self.k_max = log_m.size - 1
        k = np.arange(self.k_max + 1)
        self.log_M = log_m + np.array([math.lgamma(i + 1) for i in k])
        self.log_M.setflags(write=False)
        # b_k = m_{k-1}/m_k: N(r) >= k  iff  r < b_k
        self.log_breaks = np.r_[np.inf, np.inf, log_m[1:-1] - log_m[2:]]
        # breakpoints shifted by the tie tolerance used in the scalar scan
        self._log_breaks_adj = self.log_breaks[2:] - TIE_TOL * np.maximum(1.0, np.abs(log_m[1:-1]))
        self.c_base = choose_c(self, self.k_max)
        self.moderate_growth = "holds" if _moderate_tail_ok(self.log_M, self.k_max) else "fails"
        self.c = choose_c(self, self.k_max, moderate_growth=self.moderate_growth == "holds")

    @classmethod
    def gevrey(cls, s: float, k_max: int = 60) -> "RegularSequence":
        if not s > 1:
            raise SequenceError(f"Gevrey exponent must exceed 1, got {s}")
        if k_max < 8:
            raise SequenceError("k_max must be >= 8")
        log_m = np.array([(s - 1.0) * math.lgamma(k + 1) for k in range(k_max + 1)])
        return cls(log_m, kind="gevrey", s=s)

    @classmethod
    def from_table(cls, log_m: Sequence[float]) -> "RegularSequence":
        return cls(log_m, kind="table")

    @classmethod
    def from_config(cls, spec: dict) -> "RegularSequence":
        kind = spec.get("kind")
        if kind == "gevrey":
            return cls.gevrey(float(spec["s"]), int(spec.get("k_max", 60)))
        if kind == "table":
            return cls.from_table(spec["log_m"])
        raise SequenceError(f"unknown sequence kind {kind!r}")

    def to_config(self) -> dict:
        if self.kind == "gevrey":
            return {"kind": "gevrey", "s": self.s, "k_max": self.k_max}
        return {"kind": "table", "log_m": [float(x) for x in self.log_m]}

    def __repr__(self) -> str:
        if self.kind == "gevrey":
            return f"RegularSequence.gevrey(s={self.s}, k_max={self.k_max})"
        return f"RegularSequence.from_table(K_max={self.k_max})"

    def _check_index(self, k: int) -> None:
        if not 0 <= k <= self.k_max:
            raise SequenceError(f"index {k} outside 0..K_max={self.k_max}")

    def m_value(self, k: int) -> float:
        self._check_index(k)
        return math.exp(self.log_m[k])

    def M_value(self, k: int) -> float:
        self._check_index(k)
        return math.exp(self.log_M[k])

    def c_eff(self, kappa: Optional[int] = None) -> float:
        """``c`` under moderate growth, ``c_base**kappa`` in fixed-kappa mode."""
        if kappa is None:
            return self.c
        return self.c_base ** kappa

    def evaluator(self) -> "AssociatedEvaluator":
        return AssociatedEvaluator(self)


def _moderate_tail_ok(log_M: np.ndarray, K: int) -> bool:
    q = moderate_growth_profile(log_M, K)
    cut = (3 * K) // 4
    return bool(np.max(q[cut:]) <= C_MARGIN * np.max(q[:cut]))


def validate(seq: RegularSequence, K: Optional[int] = None) -> ValidationReport:
    """Check conditions (a)-(e) over ``0 <= k <= K``; failures are data."""
    K = seq.k_max if K is None else K
    if not 2 <= K <= seq.k_max:
        raise SequenceError(f"K={K} must lie in 2..K_max={seq.k_max}")
    lm = seq.log_m[: K + 1]
    checks, details = {}, {}

    checks["a_normalized"] = bool(lm[0] == 0.0 and lm[1] == 0.0)

    conv = lm[:-2] + lm[2:] - 2 * lm[1:-1]
    checks["b_log_convex"] = bool(np.all(conv >= -_tol(lm[1:-1])))
    details["b_min_second_difference"] = float(np.min(conv))

    k = np.arange(1, K)
    ratios = np.exp((lm[k + 1] - lm[k]) / k)
    cut = max(2, (3 * len(ratios)) // 4)
    checks["c_bounded_ratios"] = bool(np.max(ratios[cut:]) <= C_MARGIN * np.max(ratios[:cut]))
    details["c_ratio_sup"] = float(np.max(ratios))

    kk = np.arange(1, K + 1)
    roots = lm[1:] / kk
    k0 = K // 2
    tail = roots[k0 - 1:]
    grows = bool(np.all(np.diff(tail) > 0) and tail[-1] > tail[0] + 1e-9)
    checks["d_roots_unbounded"] = grows
    details["d_root_at_K"] = float(math.exp(roots[-1]))

    q = moderate_growth_profile(seq.log_M, K)
    c_mod = choose_c(seq, K, moderate_growth=True)
    n_ok = all(
        seq.log_M[j] <= (j + 1) * math.log(c_mod) + np.min(seq.log_M[: j + 1] + seq.log_M[j::-1]) + 1e-9
        for j in range(K + 1))
    checks["e_moderate_growth"] = bool(_moderate_tail_ok(seq.log_M, K) and n_ok)
    details["e_profile_sup"] = float(np.max(q))
    details["c_moderate"] = c_mod
    return ValidationReport(checks, details)


class AssociatedEvaluator:
    """Evaluates ``h``, ``h1`` and ``N`` with a thread-safe memo cache."""

    def __init__(self, seq: RegularSequence):
        self.seq = seq
        self._cache: dict = {}
        self._lock = threading.Lock()
        self._warned = False

    def _scan(self, r: float):
        if not r > 0:
            raise SequenceError(f"radius must be positive, got {r}")
        hit = self._cache.get(r)
        if hit is not None:
            return hit
        lm = self.seq.log_m
        lr = math.log(r)
        K = self.seq.k_max
        # first k with m_{k+1} r >= m_k; both h and h1 turn there
        stop = K
        for k in range(K):
            if lm[k + 1] + lr >= lm[k] - TIE_TOL * max(1.0, abs(lm[k])):
                stop = k
                break
        if stop == K and not self._warned:
            self._warned = True
            log.warning("infimum at r=%g not reached before K_max=%d; clamped", r, K)
        ks = np.arange(stop + 1)
        log_h = float(np.min(lm[ks] + ks * lr))
        k1 = np.arange(1, max(stop, 1) + 1)
        vals = lm[k1] + (k1 - 1) * lr
        best = np.min(vals)
        n = int(k1[np.flatnonzero(vals <= best + _tol(best))[0]])
        out = (log_h, float(best), n)
        with self._lock:
            self._cache.setdefault(r, out)
        return out

    def h(self, r: float) -> float:
        return math.exp(self._scan(float(r))[0])

    def h1(self, r: float) -> float:
        return math.exp(self._scan(float(r))[1])

    def N(self, r: float) -> int:
        return self._scan(float(r))[2]

    def N_array(self, r) -> np.ndarray:
        """Vectorized ``N`` using the exact breakpoints ``m_{k-1}/m_k``."""
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise SequenceError("radius must be positive")
        lb = self.seq._log_breaks_adj  # decreasing in k
        counts = np.searchsorted(-lb, -np.log(r), side="left")
        return 1 + counts

    def breakpoint(self, k: int) -> float:
        """Radius ``b_k`` with ``N(r) >= k`` iff ``r < b_k``."""
        return math.exp(self.seq.log_breaks[k])


def h_value(ev: AssociatedEvaluator, r: float) -> float:
    return ev.h(r)


def h1_value(ev: AssociatedEvaluator, r: float) -> float:
    return ev.h1(r)


def bigN_value(ev: AssociatedEvaluator, r: float) -> int:
    return ev.N(r)


def m_value(seq: RegularSequence, k: int) -> float:
    return seq.m_value(k)


def check_invariants(seq: RegularSequence, grid_points: int = 100, j_max: int = 12,
                     n_random: int = 10_000, seed: int = 0) -> ValidationReport:
    """Count violations of the inequalities linking ``h``, ``h1``, ``N`` and ``c``.

    Uses the smallest admissible ``c`` (``c_base``), which makes every check
    as tight as the sequence allows.
    """
    ev = seq.evaluator()
    c = seq.c_base
    # below b_{K_max} the infimum sits beyond the stored range
    r_min = max(1e-3, 1.001 * ev.breakpoint(seq.k_max))
    rs = np.geomspace(r_min, 1.0, grid_points, endpoint=False)
    rel = 1e-10

    sandwich = 0
    for r in rs:
        h, h1, hc = ev.h(r), ev.h1(r), ev.h(c * r)
        sandwich += int(not (h <= h1 * (1 + rel) and h1 <= hc * (1 + rel)))

    shift = 0
    for j in range(j_max + 1):
        for r in rs:
            lhs = math.log(ev.h1(r)) - j * math.log(r)
            rhs = j * (j + 1) / 2 * math.log(c) + math.log(ev.h1(c ** j * r))
            shift += int(lhs > rhs + rel * max(1.0, abs(rhs)))

    rng = np.random.default_rng(seed)
    trunc = 0
    lm = seq.log_m
    for lr in rng.uniform(math.log(r_min), 0.0, n_random):
        N = min(ev.N(math.exp(lr)), seq.k_max)
        k = int(rng.integers(0, N + 1))
        n = int(rng.integers(0, k + 1))
        a, b = lm[k] + k * lr, lm[n] + n * lr
        trunc += int(a > b + rel * max(1.0, abs(b)))

    checks = {"h_sandwich": sandwich == 0, "h1_shift": shift == 0, "truncation_bound": trunc == 0}
    details = {"c": c, "violations": {"h_sandwich": sandwich, "h1_shift": shift,
                                      "truncation_bound": trunc},
               "r_min": r_min, "grid_points": grid_points, "j_max": j_max, "n_random": n_random, "seed": seed}
    return ValidationReport(checks, details)

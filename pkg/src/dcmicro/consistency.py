"""Three independent regularity verdicts for one function near one point.

A function in the class should pass every verdict.  Each one probes a
different object built from the function: its derivative sups, its almost
analytic extension, its FBI transform.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .extension import ExtensionError, ExtensionOperator, build_field, fit_decay
from .fbi import FBIError, wavefront_scan
from .jets import JetError, JetFunction, class_constant_fit, coordinate_frame
from .manifold import get_chart
from .sequence import RegularSequence

log = logging.getLogger(__name__)


@dataclass
class Verdict:
    name: str
    passed: bool
    detail: dict

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, **self.detail}


@dataclass
class ConsistencyReport:
    u: str
    point: float
    verdicts: Sequence[Verdict]

    @property
    def agree(self) -> bool:
        return len({v.passed for v in self.verdicts}) == 1

    @property
    def all_pass(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def all_fail(self) -> bool:
        return not any(v.passed for v in self.verdicts)

    def to_dict(self) -> dict:
        return {"u": self.u, "point": self.point, "agree": self.agree,
                "all_pass": self.all_pass, "verdicts": [v.to_dict() for v in self.verdicts]}


def _class_verdict(f, seq, grid, K) -> Verdict:
    try:
        fit = class_constant_fit(f, coordinate_frame(1), seq, K, grid)
    except JetError as exc:
        return Verdict("class_fit", False, {"error": str(exc)})
    ok = bool(np.isfinite(fit.C) and fit.stable)
    return Verdict("class_fit", ok, {"C": fit.C, "K": fit.K, "stable": fit.stable,
                                     "growth_ratio": fit.growth_ratio})


def _extension_verdict(f, seq, point, radius, K, K_test) -> Verdict:
    try:
        op = ExtensionOperator(seq, coordinate_frame(1), f, [(point - radius, point + radius)],
                               fit_K=K)
        rep = fit_decay(build_field(op, np.array([point]), with_values=False), seq, K_test)
    except (ExtensionError, JetError) as exc:
        return Verdict("dbar_extension", False, {"error": str(exc)})
    ok = bool(np.isfinite(rep.Q) and rep.conforms)
    return Verdict("dbar_extension", ok, {"C": op.C, "Q": rep.Q,
                                          "Q_without_smallest": rep.Q_without_smallest,
                                          "conforms": rep.conforms})


def _fbi_verdict(f, seq, points, directions, ladder) -> Verdict:
    try:
        scan = wavefront_scan(f, get_chart("chart_flat"), points, directions, seq, ladder)
    except FBIError as exc:
        return Verdict("fbi_decay", False, {"error": str(exc)})
    return Verdict("fbi_decay", not scan.flagged,
                   {"flagged": [{"point": list(p), "direction": list(d)}
                                for p, d in scan.flagged]})


def consistency_loop(f: JetFunction, seq: RegularSequence, point: float = 0.0,
                     radius: float = 0.25, K: int = 20, K_test: int = 8,
                     fbi_points: Optional[Sequence[float]] = None,
                     directions: Sequence[float] = (1.0, -1.0),
                     ladder: Optional[Sequence[float]] = None) -> ConsistencyReport:
    """Run the three verdicts for ``f`` (``m = 1``) on ``[point - radius, point + radius]``."""
    if f.m != 1:
        raise ValueError("the consistency loop runs in one variable")
    grid = np.linspace(point - radius, point + radius, 41)
    pts = [point] if fbi_points is None else list(fbi_points)
    verdicts = [_class_verdict(f, seq, grid, K),
                _extension_verdict(f, seq, point, radius, K, K_test),
                _fbi_verdict(f, seq, pts, directions, ladder)]
    for v in verdicts:
        log.info("%s %s: %s", f.name, v.name, "pass" if v.passed else "fail")
    return ConsistencyReport(f.name, float(point), verdicts)

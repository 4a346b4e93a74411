"""Config-driven experiment runner and corpus listing.

    dcmicro run CONFIG [--out DIR] [--threads N] [--seed S]
    dcmicro list [FILTER]

A config is a YAML mapping with ``kind`` (seq, extend, fbi, wf, invert,
nonlinear), an optional ``sequence`` (``sequences`` for a list under
``seq``), a ``params`` block and an ``assert`` block.  Every run writes
``report.json`` plus CSV tables to the output directory; failed contracts
are also listed in ``failures.json``.

Exit status: 0 when every assertion passes, 1 on a contract failure,
2 on a config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from . import __version__
from .consistency import consistency_loop
from .extension import (ExtensionOperator, build_field, fit_decay, jet_consistency,
                        manifold_decay, manifold_operator)
from .fbi import (Cutoff, FBIKernel, RegularizedFamily, boundary_inverse, decay_fit,
                  geometric_ladder, inversion, sample_fbi)
from .jets import CORPUS, coordinate_frame, get_function
from .manifold import CHARTS, get_chart
from .nonlinear import (SOLUTIONS, SYSTEMS, admit, get_solution, get_system,
                        hamiltonian_coeffs, hamiltonian_commutators, substitution_identity,
                        wf_inclusion_experiment)
from .sequence import RegularSequence, SequenceError, check_invariants, validate

log = logging.getLogger("dcmicro")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
KINDS = ("seq", "extend", "fbi", "wf", "invert", "nonlinear")
DEFAULT_SEQUENCE = {"kind": "gevrey", "s": 2.0, "k_max": 60}


class ConfigError(ValueError):
    pass


# artifacts -------------------------------------------------------------------------

def _plain(obj):
    """JSON-safe copy: numpy scalars and arrays become Python values, complex becomes [re, im]."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n", encoding="utf-8")


def write_csv(path: Path, header: Sequence[str], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)  # RFC 4180: CRLF line ends, minimal quoting
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


@dataclass
class Outcome:
    """Everything one experiment run produces."""

    summary: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, Tuple[List[str], list]] = field(default_factory=dict)
    checks: List[dict] = field(default_factory=list)

    def check(self, name: str, passed: bool, **detail) -> None:
        self.checks.append({"check": name, "passed": bool(passed), **detail})


# config ------------------------------------------------------------------------------

def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def load_config(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    try:
        cfg = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}") from exc
    _require(isinstance(cfg, dict), "config must be a mapping")
    _require(cfg.get("kind") in KINDS, f"kind must be one of {', '.join(KINDS)}")
    unknown = set(cfg) - {"kind", "name", "sequence", "sequences", "params", "assert", "out",
                          "seed", "threads"}
    _require(not unknown, f"unknown config keys: {sorted(unknown)}")
    for key in ("params", "assert"):
        cfg.setdefault(key, {})
        _require(isinstance(cfg[key], dict), f"{key} must be a mapping")
    return cfg


def _sequence(spec) -> RegularSequence:
    try:
        return RegularSequence.from_config(dict(spec or DEFAULT_SEQUENCE))
    except (SequenceError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad sequence spec {spec!r}: {exc}") from exc


def _distribution(name: str):
    if name == "reg_inverse":
        return boundary_inverse()
    try:
        return get_function(name)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"unknown corpus function {name!r}") from exc


def _chart(name: str, box=None):
    try:
        return get_chart(name, box)
    except KeyError as exc:
        raise ConfigError(f"unknown chart {name!r}") from exc


def _system(name: str):
    try:
        return get_system(name)
    except KeyError as exc:
        raise ConfigError(f"unknown system {name!r}") from exc


def _solution(name: str):
    try:
        return get_solution(name)
    except KeyError as exc:
        raise ConfigError(f"unknown solution {name!r}") from exc


def _names(params: dict, key: str) -> List[str]:
    names = params.get(key)
    _require(isinstance(names, list) and names and all(isinstance(n, str) for n in names),
             f"params.{key} must be a non-empty list of names")
    return names


def _grid(spec, default) -> np.ndarray:
    if spec is None:
        spec = default
    if isinstance(spec, dict):
        return np.linspace(float(spec["lo"]), float(spec["hi"]), int(spec["n"]))
    return np.asarray(spec, dtype=float)


def _key(point, direction) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    return (tuple(round(float(v), 9) for v in np.atleast_1d(point)),
            tuple(round(float(v), 9) for v in np.atleast_1d(direction)))


# experiments -------------------------------------------------------------------------

def run_seq(cfg: dict, seed: int, pool: ThreadPoolExecutor) -> Outcome:
    p, a = cfg["params"], cfg["assert"]
    specs = cfg.get("sequences") or [cfg.get("sequence") or DEFAULT_SEQUENCE]
    seqs = [_sequence(s) for s in specs]

    def cell(seq: RegularSequence):
        K = int(p.get("K", seq.k_max))
        if not 2 <= K <= seq.k_max:
            raise ConfigError(f"params.K must lie in 2..{seq.k_max}")
        rep = validate(seq, K)
        inv = check_invariants(seq, int(p.get("grid_points", 100)), int(p.get("j_max", 12)),
                               int(p.get("n_random", 10_000)), seed)
        ev = seq.evaluator()
        r_min = max(float(p.get("r_min", 1e-2)), 1.001 * ev.breakpoint(seq.k_max))
        rs = np.geomspace(r_min, 2.0, int(p.get("table_points", 60)))
        table = [[float(r), ev.h(r), ev.h1(r), ev.N(r)] for r in rs]
        return seq, rep, inv, table

    out = Outcome()
    for seq, rep, inv, table in pool.map(cell, seqs):
        tag = f"{seq.kind}_{seq.s:g}" if seq.kind == "gevrey" else f"table_{seq.k_max}"
        out.summary[tag] = {"sequence": seq.to_config(), "c": seq.c, "c_base": seq.c_base,
                            "moderate_growth": seq.moderate_growth,
                            "validation": rep.to_dict(), "invariants": inv.to_dict()}
        out.tables[f"{tag}_weights"] = (["k", "log_m", "log_M"],
                                        [[k, float(seq.log_m[k]), float(seq.log_M[k])]
                                         for k in range(seq.k_max + 1)])
        out.tables[f"{tag}_associated"] = (["r", "h", "h1", "N"], table)
        if a.get("validate", True):
            out.check("validate", rep.all_pass, cell=tag,
                      failed=[k for k, v in rep.checks.items() if not v])
        if a.get("invariants", True):
            out.check("invariants", inv.all_pass, cell=tag,
                      violations=inv.details["violations"])
    return out


def run_extend(cfg: dict, seed: int, pool: ThreadPoolExecutor) -> Outcome:
    p, a = cfg["params"], cfg["assert"]
    seq = _sequence(cfg.get("sequence"))
    funcs = [_distribution(n) for n in _names(p, "functions")]
    chart_name = p.get("chart")
    chart = _chart(chart_name, p.get("V")) if chart_name else None
    V = p.get("V", [[-0.5, 0.5]])
    eps = float(p.get("eps", 0.2))
    K_test = int(p.get("K_test", 8))
    fit_K = int(p.get("fit_K", 12))
    J = int(p.get("shells", 8))
    jc_pairs = p.get("jet_consistency", [])

    def cell(f):
        if chart is not None and not chart.name.startswith("chart_flat"):
            op = manifold_operator(seq, chart, f, eps=eps, fit_K=fit_K)
            xs = _grid(p.get("u"), {"lo": chart.U[0][0] * 0.75, "hi": chart.U[0][1] * 0.75, "n": 7})
            rep = manifold_decay(chart, op, xs, int(p.get("K_test", 6)), op.shells(J))
            rows = [[d, r] for d, r in zip(rep.dist, rep.residual)]
            return f.name, op, rep.to_dict(), (["dist", "dbar_residual"], rows), []
        op = ExtensionOperator(seq, coordinate_frame(f.m), f, V, eps=eps, fit_K=fit_K)
        u = _grid(p.get("u"), {"lo": V[0][0], "hi": V[0][1], "n": 21})
        fld = build_field(op, u if f.m == 1 else np.stack([u, np.zeros_like(u)]), op.shells(J))
        rep = fit_decay(fld, seq, K_test)
        m = f.m
        header = [f"u{i}" for i in range(m)] + [f"re_v{i}" for i in range(m)] \
            + [f"im_v{i}" for i in range(m)] + ["re_F", "im_F"]
        slopes = []
        for pair in jc_pairs:
            beta, gamma = tuple(pair["beta"]), tuple(pair["gamma"])
            sr = jet_consistency(op, u[: max(1, u.size // 4)] if f.m == 1 else u, beta, gamma,
                                 op.shells(J))
            slopes.append({"beta": list(beta), "gamma": list(gamma), **sr.to_dict()})
        return f.name, op, rep.to_dict(), (header, list(fld.rows())), slopes

    out = Outcome()
    for name, op, rep, table, slopes in pool.map(cell, funcs):
        out.summary[name] = {"operator": op.summary(), "decay": rep, "jet_consistency": slopes}
        out.tables[f"{name}_field"] = table
        if a.get("conforms", True):
            out.check("conforms", rep["conforms"], cell=name,
                      Q=rep.get("Q", rep.get("C")))
        if "max_residual" in a:
            worst = max(rep.get("per_shell_sup", rep.get("residual", [0.0])))
            out.check("max_residual", worst <= float(a["max_residual"]), cell=name, value=worst)
        if "boundary_error" in a and "boundary_error" in rep:
            out.check("boundary_error", rep["boundary_error"] <= float(a["boundary_error"]),
                      cell=name, value=rep["boundary_error"])
        if "min_slope" in a:
            for s in slopes:
                ok = s["identically_zero"] or s["slope"] >= float(a["min_slope"])
                out.check("jet_consistency", ok, cell=name, beta=s["beta"], gamma=s["gamma"],
                          slope=s["slope"])
    return out


def _scan_inputs(p: dict):
    chart = _chart(p.get("chart", "chart_flat"))
    points = np.asarray(p.get("points", [[-0.5], [0.0], [0.5]]), dtype=float)
    directions = np.asarray(p.get("directions", [[1.0], [-1.0]]), dtype=float)
    lad = p.get("ladder", {})
    ladder = geometric_ladder(float(lad.get("zeta_min", 2.0)), int(lad.get("rungs", 6)))
    return chart, points, directions, ladder


def _expect_flagged(out: Outcome, a: dict, name: str, flagged) -> None:
    expect = a.get("flagged", {})
    if name not in expect:
        return
    want = sorted(_key(pt, d) for pt, d in expect[name])
    got = sorted(_key(pt, d) for pt, d in flagged)
    out.check("flagged", want == got, cell=name, expected=want, found=got)


def run_fbi(cfg: dict, seed: int, pool: ThreadPoolExecutor) -> Outcome:
    p, a = cfg["params"], cfg["assert"]
    seq = _sequence(cfg.get("sequence"))
    funcs = [_distribution(n) for n in _names(p, "functions")]
    chart, points, directions, ladder = _scan_inputs(p)
    kernel = FBIKernel(float(p.get("lam", 1.0)), chart)
    K_test = int(p.get("K_test", 30))
    norm = p.get("normalization", "M")
    _require(norm in ("M", "m"), "params.normalization must be 'M' or 'm'")

    def cell(u):
        samples = sample_fbi(u, kernel, points, directions, ladder)
        return u.name, samples, decay_fit(samples, seq, K_test, norm)

    out = Outcome()
    for name, samples, cls in pool.map(cell, funcs):
        m = chart.m
        header = [f"x{i}" for i in range(m)] + [f"xi{i}" for i in range(m)] \
            + ["zeta_abs", "re_F", "im_F"]
        out.tables[f"{name}_samples"] = (header, list(samples.rows()))
        out.summary[name] = cls.to_dict()
        flagged = [(samples.points[pi], samples.directions[di]) for pi, di in cls.flagged()]
        _expect_flagged(out, a, name, flagged)
        band = a.get("scaled_band", {}).get(name)
        if band is not None:
            # |zeta| |F| stays in [lo, hi] along every flagged ladder
            lo, hi = map(float, band)
            vals = [float(z * abs(v)) for pi, di in cls.flagged()
                    for z, v in zip(samples.zeta_abs[pi, di], samples.values[pi, di])]
            out.check("scaled_band", bool(vals) and lo <= min(vals) and max(vals) <= hi,
                      cell=name, band=[lo, hi], values=vals)
    return out


def run_wf(cfg: dict, seed: int, pool: ThreadPoolExecutor) -> Outcome:
    p, a = cfg["params"], cfg["assert"]
    seq = _sequence(cfg.get("sequence"))
    funcs = [_distribution(n) for n in _names(p, "functions")]
    chart, points, directions, ladder = _scan_inputs(p)
    _require(chart.m == 1, "wf runs on one-dimensional charts")
    point = float(p.get("point", 0.0))
    radius = float(p.get("radius", 0.25))
    K = int(p.get("K", 20))

    def cell(u):
        _require(not isinstance(u, RegularizedFamily), "wf needs pointwise corpus functions")
        return u.name, consistency_loop(u, seq, point, radius, K, int(p.get("K_test", 8)),
                                        points.ravel().tolist(), directions.ravel().tolist(),
                                        ladder)

    out = Outcome()
    expect = a.get("consistency", {})
    for name, rep in pool.map(cell, funcs):
        out.summary[name] = rep.to_dict()
        out.tables[f"{name}_verdicts"] = (["verdict", "passed"],
                                          [[v.name, int(v.passed)] for v in rep.verdicts])
        fbi = next(v for v in rep.verdicts if v.name == "fbi_decay")
        _expect_flagged(out, a, name,
                        [(f["point"], f["direction"]) for f in fbi.detail.get("flagged", [])])
        if name in expect:
            want = expect[name]
            _require(want in ("pass", "fail"), "assert.consistency values are 'pass' or 'fail'")
            ok = rep.all_pass if want == "pass" else rep.all_fail
            out.check("consistency", ok, cell=name, expected=want,
                      verdicts={v.name: v.passed for v in rep.verdicts})
    return out


def run_invert(cfg: dict, seed: int, pool: ThreadPoolExecutor) -> Outcome:
    p, a = cfg["params"], cfg["assert"]
    funcs = [_distribution(n) for n in _names(p, "functions")]
    chart = _chart(p.get("chart", "chart_flat"))
    c = p.get("cutoff", {})
    cutoff = Cutoff(float(c.get("center", 0.0)), float(c.get("plateau", 1.0)),
                    float(c.get("outer", 1.5)))
    half = 0.5 * cutoff.outer
    xs = _grid(p.get("x"), {"lo": cutoff.center - half, "hi": cutoff.center + half, "n": 9})
    eps = tuple(float(e) for e in p.get("eps_ladder", (1e-2, 3e-3, 1e-3)))

    def cell(u):
        _require(not isinstance(u, RegularizedFamily), "invert needs pointwise corpus functions")
        return u.name, inversion(u, chart, xs, eps, cutoff, int(p.get("order", 2)),
                                 int(p.get("n_s", 100)))

    out = Outcome()
    for name, res in pool.map(cell, funcs):
        sup = float(np.max(np.abs(res.target))) or 1.0
        rel = res.max_error / sup
        out.summary[name] = {**res.to_dict(), "relative_error": rel, "sup": sup}
        out.tables[f"{name}_reconstruction"] = (
            ["x", "re_value", "im_value", "target"],
            [[x, v.real, v.imag, t.real] for x, v, t in zip(res.x, res.value, res.target)])
        if "max_rel_error" in a:
            out.check("max_rel_error", rel <= float(a["max_rel_error"]), cell=name, value=rel)
    return out


def run_nonlinear(cfg: dict, seed: int, pool: ThreadPoolExecutor) -> Outcome:
    p, a = cfg["params"], cfg["assert"]
    seq = _sequence(cfg.get("sequence"))
    pairs = p.get("pairs")
    _require(isinstance(pairs, list) and pairs, "params.pairs must list [system, solution] pairs")
    pairs = [(_system(s), _solution(u)) for s, u in pairs]
    thetas = [float(t) for t in p.get("thetas", [0.0, 1.0])]
    n_id = int(p.get("identity_points", 100))
    n_comm = int(p.get("commutator_points", 20))
    wf_points = p.get("wf_points", [[0.0, 0.0], [0.3, 0.3], [0.3, -0.3]])
    wf_pairs = {tuple(x) for x in p.get("wf", [])}

    def cell(pair):
        system, sol = pair
        res = {"admission": admit(system, sol).to_dict()}
        rng = np.random.default_rng(seed)
        h0 = 0.0
        for _ in range(n_id):
            th = float(rng.uniform(0, 2 * math.pi))
            pt = rng.uniform(-1, 1, 2 * (system.d + system.n) + 1)
            h0 = max(h0, abs(hamiltonian_coeffs(system, th, 0, pt)[0]))
        res["h0_max"] = h0
        res["commutators"] = max(hamiltonian_commutators(system, th, n_comm, seed)
                                 for th in thetas) if system.n > 1 else 0.0
        res["substitution"] = max(substitution_identity(system, sol, th, n_comm, seed)
                                  for th in thetas)
        if (system.name, sol.name) in wf_pairs:
            res["wf"] = wf_inclusion_experiment(system, sol, seq, wf_points).to_dict()
        return f"{system.name}__{sol.name}", system, res

    out = Outcome()
    h0_systems = set(a.get("h0_zero", []))
    for tag, system, res in pool.map(cell, pairs):
        out.summary[tag] = res
        out.check("admitted", res["admission"]["admitted"], cell=tag,
                  residual=res["admission"]["residual"])
        if system.name in h0_systems:
            tol = float(a.get("h0_tol", 1e-10))
            out.check("h0_zero", res["h0_max"] <= tol, cell=tag, value=res["h0_max"])
        if "commutator_tol" in a:
            out.check("commutators", res["commutators"] <= float(a["commutator_tol"]),
                      cell=tag, value=res["commutators"])
        if "substitution_tol" in a:
            out.check("substitution", res["substitution"] <= float(a["substitution_tol"]),
                      cell=tag, value=res["substitution"])
        if "wf" in res:
            out.check("wf_inclusion", res["wf"]["passes"], cell=tag,
                      flagged=len(res["wf"]["flagged"]))
            rows = [[*f["point"], *f["direction"], f["margin"], int(f["characteristic"])]
                    for f in res["wf"]["flagged"]]
            out.tables[f"{tag}_flagged"] = (["x", "t", "xi", "tau", "margin", "characteristic"],
                                            rows)
    return out


RUNNERS: Dict[str, Callable[[dict, int, ThreadPoolExecutor], Outcome]] = {
    "seq": run_seq, "extend": run_extend, "fbi": run_fbi, "wf": run_wf,
    "invert": run_invert, "nonlinear": run_nonlinear,
}


def run(config_path, out_dir: Optional[str] = None, threads: int = 1,
        seed: Optional[int] = None) -> int:
    """Run one config; returns the exit status."""
    try:
        cfg = load_config(config_path)
        seed = int(cfg.get("seed", 0) if seed is None else seed)
        _require(0 <= seed < 2 ** 64, "seed must be an unsigned 64-bit integer")
        out = Path(out_dir or cfg.get("out") or "out")
        threads = max(1, int(threads))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            result = RUNNERS[cfg["kind"]](cfg, seed, pool)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (KeyError, TypeError, ValueError) as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    out.mkdir(parents=True, exist_ok=True)
    for name, (header, rows) in sorted(result.tables.items()):
        write_csv(out / f"{name}.csv", header, rows)
    failures = [c for c in result.checks if not c["passed"]]
    report = {"kind": cfg["kind"], "name": cfg.get("name", Path(config_path).stem),
              "version": __version__, "seed": seed, "config": cfg,
              "results": result.summary, "checks": result.checks,
              "all_pass": not failures, "tables": sorted(f"{n}.csv" for n in result.tables)}
    write_json(out / "report.json", report)
    manifest = out / "failures.json"
    if failures:
        write_json(manifest, {"failures": failures})
    elif manifest.exists():
        manifest.unlink()
    status = "PASS" if not failures else f"FAIL ({len(failures)} of {len(result.checks)})"
    print(f"{cfg['kind']}: {status} -> {out}")
    return EXIT_OK if not failures else EXIT_FAIL


# listing -----------------------------------------------------------------------------

def corpus_table() -> List[Tuple[str, str, str, str, str]]:
    """Rows ``(kind, name, dim, jets, description)`` sorted by kind then name."""
    rows = []
    for f in CORPUS.values():
        jets = f"exact/{f.max_order}" if f.exact else f"fd/{f.max_order}"
        if f.pairing_only:
            jets += "/pairing"
        rows.append(("function", f.name, f"m={f.m}", jets, f.description))
    rows.append(("function", "reg_inverse", "m=1", "limit", "1/(x + i0) as eps -> 0+"))
    for c in CHARTS.values():
        rows.append(("chart", c.name, f"m={c.m}", "exact", c.description))
    for s in SYSTEMS.values():
        rows.append(("system", s.name, f"d={s.d},n={s.n}", "exact", s.description))
    for u in SOLUTIONS.values():
        rows.append(("solution", u.name, u.system, "exact", u.description))
    return sorted(rows)


def list_corpus(filt: str = "") -> str:
    rows = [r for r in corpus_table() if not filt or filt in r[0] or filt in r[1]]
    head = ("kind", "name", "dim", "jets", "description")
    widths = [max(len(str(r[i])) for r in rows + [head]) for i in range(4)]
    lines = ["  ".join(str(v).ljust(w) for v, w in zip(r[:4], widths)) + "  " + r[4]
             for r in [head] + rows]
    return "\n".join(line.rstrip() for line in lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = argparse.ArgumentParser(prog="dcmicro", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = ap.add_subparsers(dest="command", required=True)
    rp = sub.add_parser("run", help="run an experiment config")
    rp.add_argument("config")
    rp.add_argument("--out", help="output directory (default: config 'out' or ./out)")
    rp.add_argument("--threads", type=int, default=1, help="worker threads")
    rp.add_argument("--seed", type=int, help="seed for randomized sampling")
    lp = sub.add_parser("list", help="list the shipped corpus")
    lp.add_argument("filter", nargs="?", default="")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "list":
        print(list_corpus(args.filter))
        return EXIT_OK
    return run(args.config, args.out, args.threads, args.seed)


if __name__ == "__main__":
    sys.exit(main())

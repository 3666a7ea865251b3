"""Command-line interface.

Subcommands:

* ``classify``: Denjoy-Wolff classification of the configured map
* ``verdict``: full ergodicity report, written as report.json plus CSV traces
* ``trace``: criterion traces only (CSV)
* ``interp``: Pick minimal norm, separation constant or basis sum bound for a node file

Exit codes: 0 decisive, 2 configuration error, 3 inconclusive classification,
4 inconclusive numerics.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .config import ConfigError, RunConfig, load_config, read_nodes, validate_config
from .ergodicity import (
    Verdict,
    auto_schedule,
    cesaro_deviation_trace,
    criterion_e1,
    criterion_e2,
    hinf_criterion,
    verdict,
)
from .errors import DegenerateBasisError, DomainError, InconclusiveClassification, PreconditionError
from .grid import GridSpec
from .interpolation import MIN_NORM_TOL, PickProblem, lagrange_basis, min_norm, separation_constant, sum_bound
from .maps import InteriorDW, classify, conjugate_to_origin
from .weights import check_properties

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CLASSIFY = 3
EXIT_NUMERICS = 4

TRACE_HEADER = ("n", "value", "attaining_re", "attaining_im", "refinement_gap")
CESARO_HEADER = ("n", "lower_bound", "upper_bound", "slack")


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("ERGODISK_THREADS", "1")))
    except ValueError:
        return 1


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def trace_csv(trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for n, v, re, im, gap in trace.rows():
        w.writerow([n, repr(v), repr(re), repr(im), repr(gap)])
    return buf.getvalue()


def cesaro_csv(devs) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CESARO_HEADER)
    for d in devs:
        w.writerow([d.n, repr(d.lower_bound), repr(d.upper_bound), repr(d.slack)])
    return buf.getvalue()


def _apply_overrides(cfg: RunConfig, args) -> RunConfig:
    if getattr(args, "out", None):
        cfg.output_dir = args.out
    if getattr(args, "nmax", None) is not None:
        cfg.n_max = args.nmax
    if getattr(args, "grid_level", None) is not None or getattr(args, "angles", None) is not None:
        try:
            cfg.grid = GridSpec(
                args.grid_level if args.grid_level is not None else cfg.grid.levels,
                args.angles if args.angles is not None else cfg.grid.angles,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if getattr(args, "decide", None) is not None:
        cfg.decide = args.decide
    if getattr(args, "reject", None) is not None:
        cfg.reject = args.reject
    validate_config(cfg)
    return cfg


def _write(out_dir: Path, files: dict[str, str]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for name in sorted(files):
        (out_dir / name).write_text(files[name])


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(cfg: RunConfig) -> tuple[int, dict]:
    c = classify(cfg.map, root_cap=cfg.root_cap)
    return EXIT_OK, {"config": cfg.resolved(), "classification": c.to_dict()}


def cmd_verdict(cfg: RunConfig) -> tuple[int, dict, dict[str, str]]:
    rep = verdict(cfg.map, cfg.space, cfg.weight, cfg.params())
    body = {"config": cfg.resolved(), "report": rep.to_dict()}
    if cfg.weight is not None:
        body["weight_properties"] = check_properties(cfg.weight).to_dict()
    files = {f"{name}.csv": trace_csv(t) for name, t in rep.traces.items()}
    if rep.cesaro is not None:
        files["cesaro.csv"] = cesaro_csv(rep.cesaro)
    files["report.json"] = dumps(body)
    code = EXIT_NUMERICS if rep.verdict is Verdict.INCONCLUSIVE else EXIT_OK
    return code, body, files


def cmd_trace(cfg: RunConfig, criteria: list[str]) -> tuple[int, dict, dict[str, str]]:
    c = classify(cfg.map, root_cap=cfg.root_cap)
    if not isinstance(c, InteriorDW):
        raise PreconditionError(f"traces need an interior Denjoy-Wolff point, map is {c.kind}")
    psi = conjugate_to_origin(cfg.map, c.point)
    sched = cfg.schedule or auto_schedule(cfg.map)
    jobs = {
        "hinf": lambda: hinf_criterion(psi, cfg.n_max, cfg.grid),
        "e1": lambda: criterion_e1(psi, cfg.weight, sched, cfg.n_max, cfg.grid),
        "e2": lambda: criterion_e2(psi, cfg.weight, cfg.n_max, cfg.grid),
        "cesaro": lambda: cesaro_deviation_trace(psi, cfg.weight, cfg.n_max, cfg.grid),
    }
    if not criteria:
        criteria = ["hinf"] if cfg.weight is None else ["e1", "e2"] if float(cfg.weight(0.0)) <= 1 else ["e1"]
    for name in criteria:
        if name != "hinf" and cfg.weight is None:
            raise ConfigError(f"criterion {name} needs a weight")
    with ThreadPoolExecutor(max_workers=thread_cap()) as pool:
        futures = {name: pool.submit(jobs[name]) for name in criteria}
        results = {name: futures[name].result() for name in criteria}
    files = {}
    for name in criteria:
        files[f"{name}.csv"] = cesaro_csv(results[name]) if name == "cesaro" else trace_csv(results[name])
    body = {"config": cfg.resolved(), "classification": c.to_dict(), "criteria": criteria}
    return EXIT_OK, body, files


def cmd_interp(path, want_min_norm: bool, want_separation: bool, want_sum_bound: bool, grid: GridSpec) -> dict:
    nodes, targets = read_nodes(path)
    out: dict = {"nodes": [[z.real, z.imag] for z in nodes]}
    if not (want_min_norm or want_separation or want_sum_bound):
        want_separation = True
    if want_min_norm:
        if targets is None:
            raise ConfigError("min_norm needs a target on every node line")
        out["min_norm"] = {"value": min_norm(PickProblem(nodes, targets)), "tolerance": MIN_NORM_TOL}
    if want_separation:
        out["separation"] = {"value": separation_constant(nodes)}
    if want_sum_bound:
        s = sum_bound(lagrange_basis(nodes), grid)
        out["sum_bound"] = {
            "value": s.value,
            "attaining_point": [s.point.real + 0.0, s.point.imag + 0.0],
            "refinement_gap": s.gap,
            "grid": grid.to_dict(),
        }
    return out


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON run configuration")
    common.add_argument("--out", help="output directory (overrides output_dir)")
    common.add_argument("--nmax", type=int, help="number of iterates")
    common.add_argument("--grid-level", type=int, help="deepest dyadic circle 1 - 2**-J")
    common.add_argument("--angles", type=int, help="angles per circle")
    common.add_argument("--decide", type=float, help="decide threshold")
    common.add_argument("--reject", type=float, help="reject threshold")

    p = argparse.ArgumentParser(prog="ergodisk", description="Mean ergodicity of composition operators on the disk")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="Denjoy-Wolff classification")
    sub.add_parser("verdict", parents=[common], help="ergodicity verdict with traces")
    t = sub.add_parser("trace", parents=[common], help="criterion traces as CSV")
    t.add_argument("--criterion", action="append", choices=["e1", "e2", "hinf", "cesaro"],
                   help="criterion to trace (repeatable)")
    i = sub.add_parser("interp", help="interpolation quantities for a node file")
    i.add_argument("nodes", help="node file: 're im [target_re target_im]' per line")
    i.add_argument("--min-norm", action="store_true")
    i.add_argument("--separation", action="store_true")
    i.add_argument("--sum-bound", action="store_true")
    i.add_argument("--grid-level", type=int, default=24)
    i.add_argument("--angles", type=int, default=1024)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "interp":
            body = cmd_interp(args.nodes, args.min_norm, args.separation, args.sum_bound,
                              GridSpec(args.grid_level, args.angles))
            sys.stdout.write(dumps(body))
            return EXIT_OK
        cfg = _apply_overrides(load_config(args.config), args)
        if args.command == "classify":
            code, body = cmd_classify(cfg)
            sys.stdout.write(dumps(body))
            return code
        if args.command == "verdict":
            code, body, files = cmd_verdict(cfg)
        else:
            code, body, files = cmd_trace(cfg, args.criterion or [])
        _write(Path(cfg.output_dir), files)
        summary = {"output_dir": cfg.output_dir, "files": sorted(files)}
        if args.command == "verdict":
            summary["verdict"] = body["report"]["verdict"]
            summary["rule"] = body["report"]["evidence"]["rule"]
        sys.stdout.write(dumps(summary))
        return code
    except InconclusiveClassification as exc:
        print(f"ergodisk: inconclusive classification: {exc}", file=sys.stderr)
        return EXIT_CLASSIFY
    except (ConfigError, PreconditionError, DomainError, DegenerateBasisError, ValueError) as exc:
        print(f"ergodisk: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

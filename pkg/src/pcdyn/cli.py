"""Command-line workbench.

Subcommands: ``aks`` (attractor sets), ``orbit``, ``partition``, ``power``,
``cap``, ``survey``.  Each reads a plain-text config (see config.py for the
schema), writes CSV to --out (default stdout), and exits 0 on success, 1 on
an inconclusive outcome (with a reason row in the output), 2 on a config
error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Optional

from .config import ConfigError, RunConfig, descriptor_tokens, parse_config
from .errors import (
    CapExceededError,
    InexactPreimageError,
    NonDiscretePreimageError,
    PartitionInvarianceError,
)
from .ifs import attractor_sequence, cap_ifs, highly_contractive_bound
from .numerics import format_scalar
from .pcmap import orbit as run_orbit
from .pcmap import power_map
from .quasipartition import (
    build_partition,
    equivalence_classes,
    periodic_orbits,
    preimage_set,
)
from .survey import run_survey, survey_csv

OK, INCONCLUSIVE, CONFIG_ERROR = 0, 1, 2


def emit_aks(cfg: RunConfig) -> tuple[str, int]:
    seq = attractor_sequence(cfg.ifs(), cfg.k_max, cfg.backend)
    rows = ["k,component_index,lo,hi,measure_total"]
    for k, s in enumerate(seq):
        total = format_scalar(s.measure())
        for ci, iv in enumerate(s, start=1):
            rows.append(
                f"{k},{ci},{format_scalar(iv.lo)},{format_scalar(iv.hi)},{total}"
            )
    return "\n".join(rows) + "\n", OK


def emit_orbit(cfg: RunConfig) -> tuple[str, int]:
    if cfg.x0 is None:
        raise ConfigError(None, "orbit needs an x0 line")
    rec = run_orbit(
        cfg.pc(),
        cfg.x0,
        cfg.max_iter,
        cfg.backend,
        cfg.eps_orbit,
        cfg.eps_fp,
        cfg.fail_on_breakpoint_hit,
    )
    rows = ["step,x,digit"]
    for step, d in enumerate(rec.itinerary.digits):
        rows.append(f"{step},{format_scalar(rec.points[step])},{d}")
    rows.append("outcome,preperiod,period,orbit_points")
    if rec.converged:
        pts = ";".join(format_scalar(p) for p in rec.orbit.points)
        rows.append(
            f"converged,{rec.itinerary.preperiod},{rec.orbit.period},{pts}"
        )
        code = OK
    else:
        rows.append(f"{rec.failure},,,")
        code = INCONCLUSIVE
    return "\n".join(rows) + "\n", code


def emit_partition(cfg: RunConfig) -> tuple[str, int]:
    f = cfg.pc()
    rows: list[str] = []
    try:
        q = preimage_set(f, cfg.q_depth_cap, cfg.q_size_cap, cfg.backend)
        rows.append("q_points")
        rows.append("point,source,depth")
        for e in q.entries:
            rows.append(f"{format_scalar(e.point)},{e.source},{e.depth}")
        if not q.is_complete:
            rows.append("reason,q-truncated")
            return "\n".join(rows) + "\n", INCONCLUSIVE
        part = build_partition(f, q, cfg.backend)
        rows.append("intervals")
        rows.append("index,lo,hi,tau,eta")
        for j, iv in enumerate(part.intervals, start=1):
            rows.append(
                f"{j},{format_scalar(iv.lo)},{format_scalar(iv.hi)},"
                f"{part.transition[j - 1]},{part.branch[j - 1]}"
            )
        orbs = periodic_orbits(f, part, cfg.eps_fp)
        rows.append("orbits")
        rows.append("id,period,points,word")
        for i, o in enumerate(orbs, start=1):
            pts = ";".join(format_scalar(p) for p in o.points)
            word = ";".join(str(d) for d in o.word)
            rows.append(f"{i},{o.period},{pts},{word}")
        ec = equivalence_classes(f, part, cfg.eps_fp)
        rows.append("classes")
        rows.append("id,members")
        for i, cls in enumerate(ec.classes, start=1):
            rows.append(f"{i},{';'.join(str(m) for m in cls)}")
        return "\n".join(rows) + "\n", OK
    except (
        NonDiscretePreimageError,
        InexactPreimageError,
        PartitionInvarianceError,
    ) as exc:
        rows.append(f"reason,{type(exc).__name__}: {exc}")
        return "\n".join(rows) + "\n", INCONCLUSIVE


def emit_power(cfg: RunConfig) -> tuple[str, int]:
    f = cfg.pc()
    try:
        g = power_map(f, cfg.k, cfg.power_cap, cfg.backend)
    except (NonDiscretePreimageError, InexactPreimageError, CapExceededError) as exc:
        return f"reason,{type(exc).__name__}: {exc}\n", INCONCLUSIVE
    rows = ["breakpoints", "index,y"]
    for i, y in enumerate(g.breakpoints, start=1):
        rows.append(f"{i},{format_scalar(y)}")
    rows.append("branches")
    rows.append("index,lo,hi,word")
    bounds = (cfg.backend.zero,) + g.breakpoints.points + (cfg.backend.one,)
    for j, (lo, hi) in enumerate(zip(bounds, bounds[1:]), start=1):
        x = (lo + hi) / 2
        word = []
        for _ in range(cfg.k):
            d = f.digit(x)
            word.append(str(d))
            x = f.ifs.maps[d - 1]._eval(x)
        rows.append(
            f"{j},{format_scalar(lo)},{format_scalar(hi)},{';'.join(word)}"
        )
    return "\n".join(rows) + "\n", OK


def emit_cap(cfg: RunConfig) -> tuple[str, int]:
    plan = cap_ifs(cfg.ifs(), cfg.breakpoints)
    rho = highly_contractive_bound(plan.capped)
    rows = [
        f"delta,{format_scalar(plan.delta)}",
        f"rho,{format_scalar(rho)}",
        "maps",
        "index,descriptor",
    ]
    for i, m in enumerate(plan.capped, start=1):
        rows.append(f"{i},{descriptor_tokens(m)}")
    return "\n".join(rows) + "\n", OK


def emit_survey(cfg: RunConfig) -> tuple[str, int]:
    report = run_survey(cfg)
    code = INCONCLUSIVE if report.bound_violated() else OK
    return survey_csv(report), code


_COMMANDS = {
    "aks": emit_aks,
    "orbit": emit_orbit,
    "partition": emit_partition,
    "power": emit_power,
    "cap": emit_cap,
    "survey": emit_survey,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcdyn",
        description="piecewise-contraction dynamics workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="config file path")
        cmd.add_argument("--out", default=None, help="output path (default stdout)")
        cmd.add_argument("--backend", choices=("exact", "float"), default=None)
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument("--jobs", type=int, default=None)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    try:
        cfg = parse_config(text, args.backend, args.seed)
        if args.jobs is not None:
            cfg = replace(cfg, jobs=args.jobs)
        output, code = _COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(output)
    else:
        sys.stdout.write(output)
    return code


def entry() -> None:
    sys.exit(main())

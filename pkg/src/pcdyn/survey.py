"""Monte Carlo sweep over random piecewise contractions.

Each sample draws breakpoints and affine maps on the rational grid, runs
the full pipeline (genericity test, backward closure, partition, periodic
orbits, equivalence classes, grid of forward limits) and records one row.
Samples are independent, keyed by (master seed, index), so a worker pool
produces byte-identical reports for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import Counter as CounterType
from collections import Counter

from .config import RunConfig, descriptor_tokens
from .errors import (
    BoundViolationError,
    CapExceededError,
    InexactPreimageError,
    IterationCapError,
    NonDiscretePreimageError,
    PartitionInvarianceError,
)
from .numerics import format_scalar
from .pcmap import Breakpoints, PiecewiseContraction, is_generic
from .quasipartition import (
    build_partition,
    equivalence_classes,
    omega_limit,
    periodic_orbits,
    preimage_set,
)
from .sampling import draw_breakpoints, draw_ifs, rng_for_sample


@dataclass(frozen=True)
class SampleRecord:
    """Outcome of one random instance."""

    index: int
    breakpoints: tuple
    maps: tuple
    generic: bool
    q_status: str
    q_size: int
    m: int
    orbit_count: int
    class_count: int
    grid_converged: bool
    reason: str  # empty when the pipeline ran to completion
    violation: bool  # a certified bound failed (never expected)

    @property
    def conclusive(self) -> bool:
        return self.reason == ""


@dataclass(frozen=True)
class SurveyReport:
    n: int
    records: tuple[SampleRecord, ...]

    @property
    def conclusive_count(self) -> int:
        return sum(1 for r in self.records if r.conclusive)

    @property
    def inconclusive_count(self) -> int:
        return len(self.records) - self.conclusive_count

    @property
    def periodic_fraction(self) -> float:
        concl = [r for r in self.records if r.conclusive]
        if not concl:
            return 0.0
        return sum(1 for r in concl if r.grid_converged) / len(concl)

    def orbit_histogram(self) -> CounterType[int]:
        return Counter(
            r.orbit_count for r in self.records if r.conclusive
        )

    def reason_counts(self) -> CounterType[str]:
        return Counter(
            r.reason for r in self.records if not r.conclusive
        )

    def bound_violated(self) -> bool:
        """True when a conclusive generic sample broke the orbit bound."""
        for r in self.records:
            if not r.generic:
                continue
            if r.violation:
                return True
            if r.conclusive and not 1 <= r.orbit_count <= self.n:
                return True
        return False


def run_sample(cfg: RunConfig, index: int) -> SampleRecord:
    rng = rng_for_sample(cfg.seed, index)
    bps = draw_breakpoints(rng, cfg.n, cfg.eps_range)
    ifs = draw_ifs(rng, cfg.n, cfg.kappa_max, cfg.eps_range)
    f = PiecewiseContraction(ifs, Breakpoints(bps))

    generic = False
    q_status = ""
    q_size = 0
    m = 0
    orbit_count = 0
    class_count = 0
    grid_converged = False
    reason = ""
    violation = False
    try:
        generic = is_generic(f, cfg.generic_depth, cap=cfg.composition_cap)
        q = preimage_set(f, cfg.q_depth_cap, cfg.q_size_cap)
        q_status = q.status
        q_size = len(q.points)
        if not q.is_complete:
            reason = "q-truncated"
        else:
            part = build_partition(f, q)
            m = part.m
            orbit_count = len(periodic_orbits(f, part, cfg.eps_fp))
            try:
                ec = equivalence_classes(f, part, cfg.eps_fp)
                class_count = len(ec.classes)
            except BoundViolationError:
                violation = True
            for g in range(cfg.grid):
                omega_limit(f, Fraction(g, cfg.grid), part, cfg.eps_fp)
            grid_converged = True
    except NonDiscretePreimageError:
        reason = "non-discrete-preimage"
    except InexactPreimageError:
        reason = "inexact-preimage"
    except PartitionInvarianceError:
        reason = "partition-straddle"
    except IterationCapError:
        reason = "iteration-cap"
    except CapExceededError:
        reason = "cap-exceeded"
    return SampleRecord(
        index=index,
        breakpoints=bps,
        maps=ifs.maps,
        generic=generic,
        q_status=q_status,
        q_size=q_size,
        m=m,
        orbit_count=orbit_count,
        class_count=class_count,
        grid_converged=grid_converged,
        reason=reason,
        violation=violation,
    )


def run_survey(cfg: RunConfig) -> SurveyReport:
    """Run all samples, in order, optionally on a process pool.

    The report is identical for any ``jobs`` value: samples derive their
    randomness from (seed, index) alone and results are merged by index.
    """
    indices = range(cfg.samples)
    if cfg.jobs > 1 and cfg.samples > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = tuple(pool.map(partial(run_sample, cfg), indices))
    else:
        records = tuple(run_sample(cfg, i) for i in indices)
    return SurveyReport(cfg.n, records)


def survey_csv(report: SurveyReport) -> str:
    """Render the per-sample rows and the aggregate blocks."""
    out = ["samples"]
    out.append(
        "index,generic,q_status,q_size,m,orbits,classes,"
        "grid_converged,reason,breakpoints,maps"
    )
    for r in report.records:
        bps = ";".join(format_scalar(b) for b in r.breakpoints)
        maps = "|".join(descriptor_tokens(m) for m in r.maps)
        out.append(
            f"{r.index},{str(r.generic).lower()},{r.q_status},{r.q_size},"
            f"{r.m},{r.orbit_count},{r.class_count},"
            f"{str(r.grid_converged).lower()},{r.reason},{bps},{maps}"
        )
    out.append("aggregate")
    out.append("samples,conclusive,inconclusive,periodic_fraction")
    out.append(
        f"{len(report.records)},{report.conclusive_count},"
        f"{report.inconclusive_count},{report.periodic_fraction!r}"
    )
    out.append("histogram")
    out.append("orbits,count")
    for k in sorted(report.orbit_histogram()):
        out.append(f"{k},{report.orbit_histogram()[k]}")
    out.append("reasons")
    out.append("reason,count")
    for name in sorted(report.reason_counts()):
        out.append(f"{name},{report.reason_counts()[name]}")
    return "\n".join(out) + "\n"

"""The finite backward closure of the breakpoints and everything it buys.

When every backward iterate of every breakpoint is computed and the closure
is finite, the open intervals between those points form a partition that
the map respects: each interval maps inside a single interval.  The induced
index dynamics is a self-map of a finite set, so every trajectory is
eventually periodic; composing the branch maps along an index cycle and
solving the fixed point produces the actual periodic orbits, and the
adjacency structure around the breakpoints bounds how many there can be.

Everything here requires the exact backend: backward preimage trees amplify
rounding error, and the finiteness argument is an exact one.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    BoundViolationError,
    InexactPreimageError,
    IterationCapError,
    NonDiscretePreimageError,
    PartitionInvarianceError,
)
from .maps import DEFAULT_EPS_FP
from .numerics import EXACT, Backend, Interval, Scalar
from .pcmap import PeriodicOrbit, PiecewiseContraction, _word_map

COMPLETE = "complete"
TRUNCATED = "truncated"

DEFAULT_DEPTH_CAP = 64
DEFAULT_SIZE_CAP = 10_000


@dataclass(frozen=True)
class QPoint:
    """One backward iterate: which breakpoint it reaches and in how many steps."""

    point: Scalar
    source: int  # 1-based breakpoint index
    depth: int   # 0 for the breakpoint itself


@dataclass(frozen=True)
class PreimageSet:
    """All backward iterates of the breakpoints, with provenance.

    ``status`` is "complete" when one full backward level produced no new
    points, "truncated" when the depth or size cap was hit first.
    ``depth_reached`` counts backward levels computed, including the
    terminal one that stabilized.
    """

    entries: tuple[QPoint, ...]
    depth_reached: int
    status: str

    @property
    def is_complete(self) -> bool:
        return self.status == COMPLETE

    @property
    def points(self) -> tuple[Scalar, ...]:
        return tuple(sorted({e.point for e in self.entries}))

    def by_source(self, i: int) -> tuple[Scalar, ...]:
        return tuple(sorted(e.point for e in self.entries if e.source == i))


def preimage_set(
    f: PiecewiseContraction,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    size_cap: int = DEFAULT_SIZE_CAP,
    backend: Backend = EXACT,
) -> PreimageSet:
    """Backward breadth-first closure of the breakpoints.

    Level 0 is the breakpoints themselves; each later level collects the
    branchwise preimages of the previous one.  Points reachable from two
    breakpoints keep their first provenance (the trees are disjoint for
    generic parameters).
    """
    if not backend.is_exact:
        raise ValueError("backward closure requires the exact backend")
    entries: list[QPoint] = [
        QPoint(p, i, 0) for i, p in enumerate(f.breakpoints, start=1)
    ]
    seen = {e.point for e in entries}
    frontier = entries[:]
    depth = 0
    status = COMPLETE
    while frontier:
        depth += 1
        if depth > depth_cap:
            status = TRUNCATED
            depth = depth_cap
            break
        level: list[QPoint] = []
        for e in frontier:
            for p in f.preimages(e.point, backend):
                if isinstance(p, float):
                    raise InexactPreimageError(
                        f"irrational preimage of {e.point}"
                    )
                if p not in seen:
                    seen.add(p)
                    level.append(QPoint(p, e.source, depth))
        entries.extend(level)
        if len(entries) > size_cap:
            status = TRUNCATED
            break
        frontier = level
    entries.sort(key=lambda e: e.point)
    return PreimageSet(tuple(entries), depth, status)


@dataclass(frozen=True)
class QuasiPartition:
    """Open intervals between the closure points, with the index dynamics.

    ``intervals[l-1]`` is the l-th open interval (stored as its closure),
    ``transition[l-1]`` the index of the interval containing its image, and
    ``branch[l-1]`` the piecewise-contraction branch the interval sits in.
    """

    qset: PreimageSet
    cut_points: tuple[Scalar, ...]
    intervals: tuple[Interval, ...]
    transition: tuple[int, ...]
    branch: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.intervals)

    def locate(self, x: Scalar) -> Optional[int]:
        """1-based index of the open interval containing x, None on a cut
        point or at 0."""
        if not 0 <= x < 1:
            raise ValueError(f"point {x} outside [0, 1)")
        if x == 0:
            return None
        i = bisect_left(self.cut_points, x)
        if i < len(self.cut_points) and self.cut_points[i] == x:
            return None
        return i + 1


def build_partition(
    f: PiecewiseContraction, qset: PreimageSet, backend: Backend = EXACT
) -> QuasiPartition:
    """Build the invariant partition and verify it is respected exactly.

    For each open interval the containing branch is constant (breakpoints
    are closure points); the image interval must avoid every closure point
    except at its ends, which is checked through exact preimage queries.
    A straddle raises PartitionInvarianceError: the closure was truncated
    or the parameters are degenerate.
    """
    if not qset.is_complete:
        raise ValueError("partition requires a complete backward closure")
    cuts = tuple(p for p in qset.points if 0 < p < 1)
    bounds = (backend.zero,) + cuts + (backend.one,)
    intervals = tuple(
        Interval(lo, hi) for lo, hi in zip(bounds, bounds[1:])
    )

    def locate(y: Scalar) -> Optional[int]:
        i = bisect_left(cuts, y)
        if i < len(cuts) and cuts[i] == y:
            return None
        return i + 1

    transition: list[int] = []
    branch: list[int] = []
    for j, iv in enumerate(intervals, start=1):
        mid = iv.midpoint()
        d = f.digit(mid)
        phi = f.ifs.maps[d - 1]
        img = phi.image(iv)
        lo_idx = bisect_left(cuts, img.lo)
        hi_idx = bisect_right(cuts, img.hi)
        for q in cuts[lo_idx:hi_idx]:
            try:
                hits = phi.preimages(q, iv, backend)
            except NonDiscretePreimageError as exc:
                raise PartitionInvarianceError(
                    f"interval {j} has a plateau on closure point {q}"
                ) from exc
            if any(iv.lo < p < iv.hi for p in hits):
                raise PartitionInvarianceError(
                    f"image of interval {j} straddles closure point {q}"
                )
        target = locate(phi._eval(mid))
        if target is None:
            raise PartitionInvarianceError(
                f"image midpoint of interval {j} lies on a closure point"
            )
        transition.append(target)
        branch.append(d)
    return QuasiPartition(
        qset, cuts, intervals, tuple(transition), tuple(branch)
    )


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate an index cycle so it starts at its smallest index."""
    k = cycle.index(min(cycle))
    return tuple(cycle[k:]) + tuple(cycle[:k])


def _cycle_orbit(
    f: PiecewiseContraction,
    part: QuasiPartition,
    cycle: Sequence[int],
    eps_fp: float,
) -> PeriodicOrbit:
    """Fixed point of the branch maps composed along an index cycle."""
    cyc = _canonical_cycle(list(cycle))
    word = tuple(part.branch[l - 1] for l in cyc)
    z = _word_map(f, word).fixed_point(eps_fp)
    pts = []
    cur = z
    for d in word:
        pts.append(cur)
        cur = f.ifs.maps[d - 1]._eval(cur)
    k = min(range(len(pts)), key=lambda i: pts[i])
    return PeriodicOrbit(
        tuple(pts[k:] + pts[:k]),
        len(cyc),
        word[k:] + word[:k],
        home_cycle=cyc[k:] + cyc[:k],
    )


def _transition_cycles(transition: Sequence[int]) -> list[tuple[int, ...]]:
    """All cycles of the functional graph l -> transition[l-1]."""
    m = len(transition)
    color = [0] * (m + 1)  # 0 new, 1 on stack, 2 done
    cycles = []
    for start in range(1, m + 1):
        if color[start]:
            continue
        path = []
        node = start
        while color[node] == 0:
            color[node] = 1
            path.append(node)
            node = transition[node - 1]
        if color[node] == 1:
            cycles.append(_canonical_cycle(path[path.index(node):]))
        for v in path:
            color[v] = 2
    return cycles


def _same_orbit(
    a: PeriodicOrbit, b: PeriodicOrbit, backend: Backend, eps: float
) -> bool:
    if backend.is_exact:
        return a.point_set() == b.point_set()
    if len(a.points) != len(b.points):
        return False
    sa, sb = sorted(a.points), sorted(b.points)
    return all(abs(u - v) <= eps for u, v in zip(sa, sb))


def periodic_orbits(
    f: PiecewiseContraction,
    part: QuasiPartition,
    eps_fp: float = DEFAULT_EPS_FP,
    backend: Backend = EXACT,
    eps_orbit: float = 1e-10,
) -> list[PeriodicOrbit]:
    """One periodic orbit per transition cycle, deduplicated."""
    orbits: list[PeriodicOrbit] = []
    for cyc in _transition_cycles(part.transition):
        orb = _cycle_orbit(f, part, cyc, eps_fp)
        if not any(_same_orbit(orb, o, backend, eps_orbit) for o in orbits):
            orbits.append(orb)
    return orbits


def omega_limit(
    f: PiecewiseContraction,
    x: Scalar,
    part: QuasiPartition,
    eps_fp: float = DEFAULT_EPS_FP,
) -> PeriodicOrbit:
    """The periodic orbit attracting x.

    If x sits on a closure point (or at 0) it is iterated through that
    finite set until it either enters an open interval or closes a cycle
    inside the set; otherwise the interval dynamics is followed to its
    cycle directly.
    """
    special = {0} | set(part.cut_points)
    visited: list[Scalar] = []
    while x in special:
        if x in visited:
            s = visited.index(x)
            cyc_pts = visited[s:]
            word = tuple(f.digit(p) for p in cyc_pts)
            return PeriodicOrbit(tuple(cyc_pts), len(cyc_pts), word)
        visited.append(x)
        if len(visited) > len(special) + 1:
            raise IterationCapError(
                "orbit stuck outside the partition; closure inconsistent"
            )
        x = f(x)
    start = part.locate(x)
    seq = [start]
    seen = {start: 0}
    while True:
        nxt = part.transition[seq[-1] - 1]
        if nxt in seen:
            cycle = seq[seen[nxt]:]
            return _cycle_orbit(f, part, cycle, eps_fp)
        seen[nxt] = len(seq)
        seq.append(nxt)


@dataclass(frozen=True)
class EquivalenceClasses:
    """Adjacency intervals around each breakpoint and their merge classes.

    ``adjacency[i-1]`` holds the indices of the two intervals ending and
    starting at breakpoint i; ``classes`` partitions the distinct adjacency
    intervals by eventual overlap of their forward index orbits.  The class
    count can never exceed the number of branches, and the number of
    periodic orbits can never exceed the class count; violations raise
    instead of passing silently.
    """

    adjacency: tuple[tuple[int, int], ...]
    first_interval: int
    last_interval: int
    members: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]
    permutation: tuple[int, ...]
    orbit_count: int


def equivalence_classes(
    f: PiecewiseContraction,
    part: QuasiPartition,
    eps_fp: float = DEFAULT_EPS_FP,
    backend: Backend = EXACT,
) -> EquivalenceClasses:
    """Group the breakpoint-adjacent intervals by shared forward orbits.

    Two adjacency intervals are equivalent when their forward orbits under
    the index dynamics meet; since forward images of partition intervals
    stay inside single intervals, this matches the definition through a
    common absorbing interval.
    """
    n = f.n
    cuts = part.cut_points
    adjacency = []
    for x_i in f.breakpoints:
        pos = bisect_left(cuts, x_i)
        if pos >= len(cuts) or cuts[pos] != x_i:
            raise ValueError("breakpoint missing from the closure points")
        adjacency.append((pos + 1, pos + 2))
    members: list[int] = []
    for fi, gi in adjacency:
        for idx in (fi, gi):
            if idx not in members:
                members.append(idx)

    def forward_set(start: int) -> frozenset:
        out = set()
        node = start
        while node not in out:
            out.add(node)
            node = part.transition[node - 1]
        return frozenset(out)

    reach = {idx: forward_set(idx) for idx in members}
    parent = {idx: idx for idx in members}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if reach[a] & reach[b]:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
    grouped: dict[int, list[int]] = {}
    for idx in members:
        grouped.setdefault(find(idx), []).append(idx)
    classes = tuple(tuple(v) for _, v in sorted(grouped.items()))

    mins = [
        (min(part.qset.by_source(i)), i)
        for i in range(1, len(f.breakpoints) + 1)
    ]
    permutation = tuple(i for _, i in sorted(mins))

    orbits = periodic_orbits(f, part, eps_fp, backend)
    if len(classes) > n:
        raise BoundViolationError(
            f"{len(classes)} equivalence classes exceed branch count {n}"
        )
    if len(orbits) > len(classes):
        raise BoundViolationError(
            f"{len(orbits)} periodic orbits exceed class count {len(classes)}"
        )
    return EquivalenceClasses(
        adjacency=tuple(adjacency),
        first_interval=1,
        last_interval=part.m,
        members=tuple(members),
        classes=classes,
        permutation=permutation,
        orbit_count=len(orbits),
    )

#!/usr/bin/env python3
"""From backward closure to periodic orbits, on one small instance.

Two half-slope branches split at 3/10.  The breakpoint has finitely many
backward iterates; the open intervals between them form a partition the
map respects, its index dynamics is a self-map of seven symbols, and the
single cycle of that finite dynamics pins down the unique periodic orbit
{2/7, 11/28, 9/28}.  Every starting point ends up there.
"""

from fractions import Fraction as F

from pcdyn import (
    Affine,
    Breakpoints,
    IteratedFunctionSystem,
    PiecewiseContraction,
    build_partition,
    equivalence_classes,
    omega_limit,
    orbit,
    periodic_orbits,
    preimage_set,
)

f = PiecewiseContraction(
    IteratedFunctionSystem((Affine(F(1, 2), F(1, 4)), Affine(F(1, 2), F(1, 8)))),
    Breakpoints((F(3, 10),)),
)

q = preimage_set(f)
print("backward closure of the breakpoint:", ", ".join(map(str, q.points)))
print("status:", q.status, "| levels computed:", q.depth_reached)
print()

part = build_partition(f, q)
print("invariant partition (interval, image interval index, branch):")
for j, iv in enumerate(part.intervals, start=1):
    print(
        f"  J{j} = ({iv.lo}, {iv.hi})  ->  J{part.transition[j - 1]}"
        f"   via branch {part.branch[j - 1]}"
    )
print()

orbs = periodic_orbits(f, part)
for o in orbs:
    print("periodic orbit:", ", ".join(map(str, o.points)),
          "| period", o.period, "| digits", o.word)

ec = equivalence_classes(f, part)
print("adjacency intervals around the breakpoint:", ec.adjacency[0])
print("equivalence classes:", ec.classes, "(orbit count must not exceed this)")
print()

print("forward limits from a few starting points:")
for x in (F(0), F(1, 100), F(9, 10)):
    om = omega_limit(f, x, part)
    print(f"  x0 = {x}: attracted to {{{', '.join(map(str, om.points))}}}")

rec = orbit(f, F(0), 200)
print()
print("direct iteration from 0 agrees:",
      rec.orbit.point_set() == orbs[0].point_set(),
      f"(preperiod {rec.itinerary.preperiod}, period {rec.itinerary.period})")

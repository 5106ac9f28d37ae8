#!/usr/bin/env python3
"""The k-th iterate of a piecewise contraction is one again.

Pulling the breakpoints back through the map refines the partition: the
second iterate of a two-branch map is a four-branch piecewise contraction
whose branch maps are the length-2 compositions along each digit word.
This is the reduction that turns questions about any contraction family
into questions about families with very small Lipschitz constants.
"""

from fractions import Fraction as F

from pcdyn import (
    Affine,
    Breakpoints,
    IteratedFunctionSystem,
    PiecewiseContraction,
    power_map,
)

f = PiecewiseContraction(
    IteratedFunctionSystem((Affine(F(1, 2), F(1, 4)), Affine(F(1, 2), F(1, 8)))),
    Breakpoints((F(3, 10),)),
)

for k in (2, 3):
    g = power_map(f, k)
    print(f"iterate k = {k}: {g.n} branches")
    bounds = (F(0),) + g.breakpoints.points + (F(1),)
    for j, (lo, hi) in enumerate(zip(bounds, bounds[1:]), start=1):
        x = (lo + hi) / 2
        word = []
        for _ in range(k):
            d = f.digit(x)
            word.append(str(d))
            x = f.ifs.maps[d - 1](x)
        m = g.ifs.maps[j - 1]
        print(
            f"  on ({lo}, {hi}): follows digits {'-'.join(word)},"
            f"  branch map {m.a}*x + {m.b}"
        )
    mismatches = 0
    for i in range(1, 4096):
        x = F(i, 4096)
        if x in set(g.breakpoints.points):
            continue
        y = x
        for _ in range(k):
            y = f(y)
        mismatches += g(x) != y
    print(f"  grid check against {k}-fold evaluation: {mismatches} mismatches")
    print()

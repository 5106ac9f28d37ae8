#!/usr/bin/env python3
"""Capping maps outside a collar of their branch.

Three slope-2/5 maps are individually strong contractions, but their slope
magnitudes sum to 6/5, so no joint certificate exists for the raw system.
Capping replaces each map by a version that is constant away from a collar
around its own branch; at most two collars overlap anywhere, so the capped
system certifies at 4/5.  The piecewise contraction itself is untouched:
any breakpoint vector within the collar width of the original centers
induces the exact same map from both systems.
"""

from fractions import Fraction as F

from pcdyn import (
    Affine,
    Breakpoints,
    IteratedFunctionSystem,
    PiecewiseContraction,
    cap_ifs,
    highly_contractive_bound,
)

ifs = IteratedFunctionSystem(
    (
        Affine(F(2, 5), F(1, 10)),
        Affine(F(2, 5), F(1, 4)),
        Affine(F(2, 5), F(1, 2)),
    )
)
centers = (F(3, 10), F(3, 5))

print("joint slope bound of the raw system:", highly_contractive_bound(ifs))

plan = cap_ifs(ifs, centers)
print("collar width:", plan.delta)
for i, m in enumerate(plan.capped, start=1):
    print(f"  capped map {i}: constant outside [{m.lo}, {m.hi}]")
print("joint slope bound of the capped system:",
      highly_contractive_bound(plan.capped))
print()

shifted = (F(3, 10) - F(1, 16), F(3, 5) + F(1, 16))  # |shift| < 1/10
assert plan.covers(shifted)
f_orig = PiecewiseContraction(ifs, Breakpoints(shifted))
f_capped = PiecewiseContraction(plan.capped, Breakpoints(shifted))
worst = max(
    abs(f_orig(F(i, 1000)) - f_capped(F(i, 1000))) for i in range(1000)
)
print("largest disagreement on a 1000-point grid, shifted breakpoints:", worst)

outside = (F(3, 10) + F(1, 5), F(3, 5) + F(1, 5))
print("shift of 1/5 stays within the collar:", plan.covers(outside))

#!/usr/bin/env python3
"""Nested attractor sets of a two-map system with a nontrivial limit.

The maps 4/5 x + 1/10 and 3/5 x + 1/20 are both strong contractions, but
their slopes sum to 7/5, so the joint slope certificate fails and the
nested sets A_k do not shrink to measure zero: they converge to the
interval [1/8, 1/2] spanned by the two fixed points.
"""

from fractions import Fraction as F

from pcdyn import (
    Affine,
    IteratedFunctionSystem,
    attractor_sequence,
    highly_contractive_bound,
)

phi1 = Affine(F(4, 5), F(1, 10))
phi2 = Affine(F(3, 5), F(1, 20))
ifs = IteratedFunctionSystem((phi1, phi2))

print("joint slope bound:", highly_contractive_bound(ifs))
print("fixed points:", phi2.fixed_point(), "and", phi1.fixed_point())
print()

K = 14
seq = attractor_sequence(ifs, K)
print(f"{'k':>3} {'components':>10} {'left end':>12} {'right end':>12} {'measure':>10}")
for k, s in enumerate(seq):
    h = s.hull()
    print(f"{k:>3} {len(s):>10} {str(h.lo):>12} {str(h.hi):>12} {float(s.measure()):>10.6f}")

print()
print("closed-form cross-check at k =", K)
lo = F(1, 8) * (1 - F(3, 5) ** K)
hi = F(4, 5) ** K + F(1, 2) * (1 - F(4, 5) ** K)
assert seq[K].hull() == seq[K].components[0]
assert (seq[K].components[0].lo, seq[K].components[0].hi) == (lo, hi)
print("  exact endpoints:", lo, hi)
print("  distance to the limit [1/8, 1/2]:",
      float(lo - F(1, 8)), float(hi - F(1, 2)))

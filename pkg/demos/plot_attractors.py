#!/usr/bin/env python3
"""Render an `aks` CSV as text: one bar of the unit interval per level.

Usage:
    pcdyn aks --config my.cfg --out aks.csv
    python demos/plot_attractors.py aks.csv [width]
"""

import sys
from fractions import Fraction


def render(path: str, width: int = 72) -> None:
    per_k: dict[int, list[tuple[Fraction, Fraction]]] = {}
    with open(path, encoding="utf-8") as fh:
        next(fh)  # header
        for line in fh:
            k, _, lo, hi, _ = line.strip().split(",")
            per_k.setdefault(int(k), []).append((Fraction(lo), Fraction(hi)))
    for k in sorted(per_k):
        cells = [" "] * width
        for lo, hi in per_k[k]:
            a = int(lo * (width - 1))
            b = int(hi * (width - 1))
            for i in range(a, b + 1):
                cells[i] = "#"
        total = float(sum(hi - lo for lo, hi in per_k[k]))
        print(f"k={k:>2} |{''.join(cells)}| measure {total:.4f}")


if __name__ == "__main__":
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    render(sys.argv[1], int(sys.argv[2]) if len(sys.argv) > 2 else 72)

#!/usr/bin/env python3
"""L^1(R) norm enclosures: the triangle 1_[0,1] * 1_[0,1] and an approximate unit.

For eps = 2^-j the function (1/eps) 1_[0,1] * 1_[0,eps] is at L^1 distance
exactly eps from 1_[0,1]; the table shows the certified enclosures.
"""
import argparse
import time
from fractions import Fraction

from crossprod.l1group import L1PiecewisePoly, convolve, l1_norm


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--precision", type=int, default=20)
    args = ap.parse_args()
    k = args.precision
    box = L1PiecewisePoly.indicator(0, 1)
    start = time.perf_counter()
    tri = convolve(box, box)
    iv = l1_norm(tri, k)
    print(f"triangle: {tri.to_text()}")
    print(f"||1_[0,1] * 1_[0,1]||_1 in [{float(iv.lo):.12f}, {float(iv.hi):.12f}]  "
          f"width {float(iv.width):.2e}  {time.perf_counter() - start:.3f} s")
    print(f"{'eps':>10} {'lo':>14} {'hi':>14}")
    for j in range(1, 9):
        eps = Fraction(1, 2 ** j)
        approx = convolve(box, L1PiecewisePoly.indicator(0, eps)).scale(1 / eps)
        d = l1_norm(approx - box, k)
        print(f"{str(eps):>10} {float(d.lo):14.10f} {float(d.hi):14.10f}")
    f = L1PiecewisePoly.make([0, 1], [((1,), (0, 1))])
    start = time.perf_counter()
    iv = l1_norm(f, k)
    print(f"||1 + it||_1 on [0,1] in [{float(iv.lo):.12f}, {float(iv.hi):.12f}]  "
          f"{time.perf_counter() - start:.3f} s")


if __name__ == "__main__":
    main()

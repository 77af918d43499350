#!/usr/bin/env python3
"""Image measure of [1] under the odometer at increasing precision.

The image is the infinite union of the cylinders [0^k 1]; its measure is
closed from both sides by enumerating the (finite) image of the complement.
"""
import argparse
import time
from fractions import Fraction

from crossprod.cantor import Bernoulli, Odometer, image_measure, lower_image, parse_union


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-k", type=int, default=20)
    ap.add_argument("--p", default="1/2", help="Bernoulli parameter")
    args = ap.parse_args()
    m = Bernoulli(Fraction(args.p))
    odo = Odometer()
    g = odo.group.parse("g")
    U = parse_union("1")
    print(f"{'k':>3} {'lower words':>11} {'width':>12} {'midpoint':>12} {'time':>8}")
    for k in range(0, args.max_k + 1, 2):
        start = time.perf_counter()
        iv = image_measure(odo, m, g, U, k)
        low, _ = lower_image(odo, m, g, U, k)
        print(f"{k:3d} {len(low.words):11d} {float(iv.width):12.3e} {float(iv.midpoint):12.9f} "
              f"{time.perf_counter() - start:7.3f}s")


if __name__ == "__main__":
    main()

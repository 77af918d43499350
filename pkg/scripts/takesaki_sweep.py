#!/usr/bin/env python3
"""Takesaki duality over every permutation action on C^n (n <= 3) of the abelian groups of order <= 4.

Prints one line per model: dimensions, generator pairs checked and wall time.
"""
import argparse
import itertools
import time
from fractions import Fraction

from crossprod.findim import FinBase, takesaki_check
from crossprod.groups import DirectProduct, GroupError, cyclic


def models(max_points: int):
    groups = [cyclic(1), cyclic(2), cyclic(3), cyclic(4), DirectProduct([cyclic(2), cyclic(2)])]
    for group in groups:
        gens = [group.format(group.gen(i).word) for i in range(group.ngens)]
        for n in range(1, max_points + 1):
            for perms in itertools.product(itertools.permutations(range(n)), repeat=len(gens)):
                try:
                    yield group, n, FinBase.functions(group, [Fraction(1, n)] * n, dict(zip(gens, perms)))
                except (GroupError, ValueError):
                    continue


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=3, help="largest n for C^n")
    args = ap.parse_args()
    failed = 0
    total = 0
    for group, n, base in models(args.points):
        start = time.perf_counter()
        rep = takesaki_check(base)
        total += 1
        failed += not rep.passed
        status = "PASS" if rep.passed else "FAIL"
        print(f"{status} {group!r:10} C^{n}  dims {rep.dim_double} = {rep.dim_target}  "
              f"pairs {rep.generator_pairs:4d}  {time.perf_counter() - start:6.2f} s")
    print(f"{total - failed}/{total} models pass")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())

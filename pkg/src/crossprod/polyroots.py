"""Univariate polynomials with rational coefficients and real-root isolation.

Polynomials are tuples of Fractions, lowest degree first, with no trailing
zeros (the zero polynomial is ()).  Root isolation uses Sturm sequences of the
square-free part, so every isolating interval is certified.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Poly = Tuple[Fraction, ...]


def trim(p: Sequence) -> Poly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p: Poly) -> int:
    return len(p) - 1


def evaluate(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def scale(p: Poly, c) -> Poly:
    return trim([c * x for x in p])


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def derivative(p: Poly) -> Poly:
    return trim([i * p[i] for i in range(1, len(p))])


def antiderivative(p: Poly) -> Poly:
    return trim([Fraction(0)] + [p[i] / (i + 1) for i in range(len(p))])


def divmod_poly(p: Poly, q: Poly):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(p) >= len(q) and p:
        c = p[-1] / lead
        shift = len(p) - len(q)
        quot[shift] = c
        for i, b in enumerate(q):
            p[shift + i] -= c * b
        p = list(trim(p))
    return trim(quot), trim(p)


def gcd(p: Poly, q: Poly) -> Poly:
    while q:
        p, q = q, divmod_poly(p, q)[1]
    if not p:
        return ()
    return scale(p, 1 / p[-1])


def squarefree(p: Poly) -> Poly:
    g = gcd(p, derivative(p))
    if len(g) <= 1:
        return p
    return divmod_poly(p, g)[0]


def sturm_sequence(p: Poly) -> List[Poly]:
    seq = [p, derivative(p)]
    while seq[-1]:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(scale(r, -1))
    return [s for s in seq if s]


def _sign_changes(seq, x) -> int:
    signs = [v for v in (evaluate(s, x) for s in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(seq, a, b) -> int:
    """Number of distinct roots in (a, b] for a Sturm sequence of a square-free polynomial."""
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def isolate_roots(p: Poly, a, b) -> List[Tuple[Fraction, Fraction]]:
    """Sorted disjoint intervals, each holding exactly one root of p in the open interval (a, b).

    A rational root found on the way comes back as a degenerate interval
    (r, r); otherwise the square-free part changes sign strictly between the
    endpoints, which are never roots.
    """
    a, b = Fraction(a), Fraction(b)
    p = trim(p)
    if len(p) <= 1 or a >= b:
        return []
    sf = squarefree(p)
    seq = sturm_sequence(sf)
    end_root = evaluate(sf, b) == 0
    out = []
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()  # half-open (lo, hi]
        n = count_roots(seq, lo, hi) - (1 if hi == b and end_root else 0)
        if n <= 0:
            continue
        if n > 1:
            mid = (lo + hi) / 2
            stack.append((lo, mid))
            stack.append((mid, hi))
            continue
        if hi != b and evaluate(sf, hi) == 0:
            out.append((hi, hi))
            continue
        if hi == b and end_root:
            # the single root is strictly inside; move hi off the endpoint root
            exact = None
            while exact is None:
                mid = (lo + hi) / 2
                if evaluate(sf, mid) == 0:
                    exact = mid
                elif count_roots(seq, lo, mid) == 1:
                    hi = mid
                    break
                else:
                    lo = mid
            if exact is not None:
                out.append((exact, exact))
                continue
        while evaluate(sf, lo) == 0:
            mid = (lo + hi) / 2
            fm = evaluate(sf, mid)
            if fm == 0:
                lo = hi = mid
                break
            if count_roots(seq, mid, hi) == 1:
                lo = mid
            else:
                hi = mid
        out.append((lo, hi))
    out.sort()
    return out


def refine_root(p: Poly, lo: Fraction, hi: Fraction, width: Fraction) -> Tuple[Fraction, Fraction]:
    """Bisect an isolating interval (one sign change of square-free p) below ``width``."""
    sf = squarefree(p)
    flo = evaluate(sf, lo)
    while hi - lo >= width:
        mid = (lo + hi) / 2
        fm = evaluate(sf, mid)
        if fm == 0:
            return mid, mid
        if flo == 0:
            # root sits at lo
            return lo, lo
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi

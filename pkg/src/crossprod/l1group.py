"""Computable presentations of the convolution algebras l^1(G) and L^1(R).

``L1Discrete`` holds finitely supported functions on a discrete group.
``L1PiecewisePoly`` holds compactly supported piecewise polynomials on R
with rational breakpoints and Gaussian-rational coefficients; this class is
closed under convolution and involution, so every rational *-polynomial in
interval indicators lands in it.  Norms are certified enclosures: real pieces
are integrated exactly between isolated roots, complex pieces by adaptive
subdivision with a certified series bound.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Optional

from . import polyroots as P
from .enumeration import interval_of_index
from .groups import GroupElement, GroupSpec
from .intervals import RationalInterval, round_out, sqrt_lower, sqrt_upper
from .presentations import (Add, Adjoint, Mul, PresentationOracle, Scalar, ScalarMul,
                            SpecialPoint, StarPoly)
from .scalars import Cyc, ONE, ZERO


def _abs_enclosure(c: Cyc, bits: int) -> RationalInterval:
    g = c.as_gaussian()
    if g is not None:
        q = g[0] ** 2 + g[1] ** 2
        return RationalInterval(sqrt_lower(q, bits), sqrt_upper(q, bits))
    (rl, rh), (il, ih) = c.enclose(bits + 4)
    lo2 = _min_sq(rl, rh) + _min_sq(il, ih)
    hi2 = max(rl * rl, rh * rh) + max(il * il, ih * ih)
    return RationalInterval(sqrt_lower(lo2, bits + 1), sqrt_upper(hi2, bits + 1))


def _min_sq(lo, hi):
    if lo <= 0 <= hi:
        return Fraction(0)
    return min(lo * lo, hi * hi)


# ---------------------------------------------------------------------------
# discrete groups


@dataclass(frozen=True, eq=False)
class L1Discrete:
    group: GroupSpec
    coeffs: tuple  # ((GroupElement, Cyc), ...) sorted by group enumeration

    @classmethod
    def from_dict(cls, group: GroupSpec, d: dict) -> "L1Discrete":
        items = []
        for g, c in d.items():
            g = g if isinstance(g, GroupElement) else group.parse(str(g))
            c = Cyc.coerce(c)
            if not c.is_zero():
                items.append((g, c))
        items.sort(key=lambda t: group.index(t[0]))
        return cls(group, tuple(items))

    @classmethod
    def delta(cls, group: GroupSpec, g, c=1) -> "L1Discrete":
        return cls.from_dict(group, {g: c})

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def __call__(self, g: GroupElement) -> Cyc:
        return self.as_dict().get(g, ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "L1Discrete") -> "L1Discrete":
        d = self.as_dict()
        for g, c in other.coeffs:
            d[g] = d.get(g, ZERO) + c
        return L1Discrete.from_dict(self.group, d)

    def scale(self, c) -> "L1Discrete":
        c = Cyc.coerce(c)
        return L1Discrete.from_dict(self.group, {g: c * v for g, v in self.coeffs})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, L1Discrete):
            return NotImplemented
        return self.group is other.group and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        return self.to_text()

    def triples(self) -> list:
        out = []
        for g, c in self.coeffs:
            re_, im_ = c.as_gaussian()
            out.append((self.group.format(g.word), re_, im_))
        return out

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        return " ; ".join(f"{w} {re_} {im_}" for w, re_, im_ in self.triples())


# ---------------------------------------------------------------------------
# complex polynomials as (real part, imaginary part)


def _cpoly(re_, im_=()):
    return (P.trim(re_), P.trim(im_))


def _cadd(p, q):
    return (P.add(p[0], q[0]), P.add(p[1], q[1]))


def _cmul(p, q):
    return (P.add(P.mul(p[0], q[0]), P.scale(P.mul(p[1], q[1]), -1)),
            P.add(P.mul(p[0], q[1]), P.mul(p[1], q[0])))


def _cscale(p, c: Cyc):
    re_, im_ = c.as_gaussian()
    return (P.add(P.scale(p[0], re_), P.scale(p[1], -im_)),
            P.add(P.scale(p[0], im_), P.scale(p[1], re_)))


def _cconj(p):
    return (p[0], P.scale(p[1], -1))


def _reflect(p):
    """q(t) = p(-t)."""
    return tuple(P.trim([c * (-1) ** i for i, c in enumerate(part)]) for part in p)


def _czero(p) -> bool:
    return not p[0] and not p[1]


def _cdegree(p) -> int:
    return max(len(p[0]), len(p[1])) - 1


def _format_cpoly(p) -> str:
    terms = []
    n = max(len(p[0]), len(p[1]))
    for i in range(n):
        re_ = p[0][i] if i < len(p[0]) else Fraction(0)
        im_ = p[1][i] if i < len(p[1]) else Fraction(0)
        if re_ == 0 and im_ == 0:
            continue
        c = Cyc.gauss(re_, im_)
        text = str(c)
        if i == 0:
            terms.append(text)
            continue
        mono = "t" if i == 1 else f"t^{i}"
        if c == ONE:
            terms.append(mono)
        elif c == Cyc.rational(-1):
            terms.append(f"-{mono}")
        else:
            paren = f"({text})" if ("+" in text[1:] or "-" in text[1:] or "/" in text) else text
            terms.append(f"{paren}*{mono}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


# ---------------------------------------------------------------------------
# L^1(R)


@dataclass(frozen=True)
class L1PiecewisePoly:
    """f(t) = pieces[j](t) on [breaks[j], breaks[j+1]), zero outside [breaks[0], breaks[-1]].

    Each piece is a pair (real part, imaginary part) of coefficient tuples in
    the global variable t, lowest degree first.  Canonical: adjacent equal
    pieces merged, no zero pieces at either end.
    """

    breaks: tuple
    pieces: tuple

    @classmethod
    def make(cls, breaks, pieces) -> "L1PiecewisePoly":
        breaks = [Fraction(b) for b in breaks]
        pieces = [_cpoly(*p) if isinstance(p, tuple) and len(p) == 2 and isinstance(p[0], (tuple, list))
                  else _cpoly(p) for p in pieces]
        if len(breaks) != len(pieces) + 1 and pieces:
            raise ValueError("need one more breakpoint than pieces")
        if any(a >= b for a, b in zip(breaks, breaks[1:])):
            raise ValueError("breakpoints must increase strictly")
        # merge
        nb = breaks[:1]
        np_ = []
        for j, p in enumerate(pieces):
            if np_ and np_[-1] == p:
                nb[-1] = breaks[j + 1]
            else:
                np_.append(p)
                nb.append(breaks[j + 1])
        while np_ and _czero(np_[0]):
            np_.pop(0)
            nb.pop(0)
        while np_ and _czero(np_[-1]):
            np_.pop()
            nb.pop()
        if not np_:
            return cls((), ())
        return cls(tuple(nb), tuple(np_))

    @classmethod
    def zero(cls) -> "L1PiecewisePoly":
        return cls((), ())

    @classmethod
    def indicator(cls, a, b, c=1) -> "L1PiecewisePoly":
        c = Cyc.coerce(c)
        re_, im_ = c.as_gaussian()
        return cls.make([a, b], [((re_,), (im_,))])

    def is_zero(self) -> bool:
        return not self.pieces

    @property
    def max_degree(self) -> int:
        return max((_cdegree(p) for p in self.pieces), default=-1)

    def is_real(self) -> bool:
        return all(not p[1] for p in self.pieces)

    def __call__(self, t) -> Cyc:
        t = Fraction(t)
        for j, p in enumerate(self.pieces):
            if self.breaks[j] <= t < self.breaks[j + 1]:
                return Cyc.gauss(P.evaluate(p[0], t), P.evaluate(p[1], t))
        return ZERO

    def _on(self, breaks):
        """Pieces on a refinement ``breaks`` of the support (zero outside)."""
        out = []
        for a, b in zip(breaks, breaks[1:]):
            mid = (a + b) / 2
            piece = ((), ())
            for j, p in enumerate(self.pieces):
                if self.breaks[j] <= mid < self.breaks[j + 1]:
                    piece = p
                    break
            out.append(piece)
        return out

    def __add__(self, other: "L1PiecewisePoly") -> "L1PiecewisePoly":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        breaks = sorted(set(self.breaks) | set(other.breaks))
        pieces = [_cadd(p, q) for p, q in zip(self._on(breaks), other._on(breaks))]
        return L1PiecewisePoly.make(breaks, pieces)

    def scale(self, c) -> "L1PiecewisePoly":
        c = Cyc.coerce(c)
        return L1PiecewisePoly.make(self.breaks, [_cscale(p, c) for p in self.pieces])

    def __sub__(self, other):
        return self + other.scale(-1)

    def shift(self, a) -> "L1PiecewisePoly":
        """t -> f(t - a)."""
        a = Fraction(a)
        pieces = []
        for p in self.pieces:
            pieces.append(tuple(_compose_linear(part, -a, Fraction(1)) for part in p))
        return L1PiecewisePoly.make([b + a for b in self.breaks], pieces)

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        if not self.pieces:
            return "0"
        parts = []
        for j, p in enumerate(self.pieces):
            parts.append(f"{self.breaks[j]}..{self.breaks[j + 1]}: {_format_cpoly(p)}")
        return " ; ".join(parts)

    def rows(self):
        """(breakpoint list, coefficient rows of (re, im) pairs)."""
        rows = []
        for p in self.pieces:
            n = max(len(p[0]), len(p[1]))
            rows.append([(p[0][i] if i < len(p[0]) else Fraction(0),
                          p[1][i] if i < len(p[1]) else Fraction(0)) for i in range(n)])
        return list(self.breaks), rows


def _compose_linear(p, alpha: Fraction, beta: Fraction):
    """p(alpha + beta*x) as a polynomial in x."""
    out = [Fraction(0)] * max(len(p), 1)
    for j, c in enumerate(p):
        if not c:
            continue
        for l in range(j + 1):
            out[l] += c * comb(j, l) * alpha ** (j - l) * beta ** l
    return P.trim(out)


def _pair_convolution(p, a, b, q, c, d) -> L1PiecewisePoly:
    """Convolution of p on [a, b) with q on [c, d), both complex polynomials in t."""
    # F(x, t) = integral P(t) Q(x - t) dt as {(x_exp, t_exp): complex coefficient}
    F: dict = {}
    for part_p, part_q in ((0, 0), (1, 1), (0, 1), (1, 0)):
        pp = p[part_p]
        qq = q[part_q]
        for i, pi in enumerate(pp):
            if not pi:
                continue
            for k, qk in enumerate(qq):
                if not qk:
                    continue
                for m in range(k + 1):
                    coef = pi * qk * comb(k, m) * (-1) ** m / (i + m + 1)
                    key = (k - m, i + m + 1)
                    re_, im_ = F.get(key, (Fraction(0), Fraction(0)))
                    if part_p == 0 and part_q == 0:
                        re_ += coef
                    elif part_p == 1 and part_q == 1:
                        re_ -= coef
                    else:
                        im_ += coef
                    F[key] = (re_, im_)

    def substitute(alpha, beta):
        re_out: tuple = ()
        im_out: tuple = ()
        for (xe, te), (re_, im_) in F.items():
            poly = P.mul(tuple([Fraction(0)] * xe + [Fraction(1)]), _compose_linear(
                tuple([Fraction(0)] * te + [Fraction(1)]), alpha, beta))
            re_out = P.add(re_out, P.scale(poly, re_))
            im_out = P.add(im_out, P.scale(poly, im_))
        return (re_out, im_out)

    points = sorted({a + c, a + d, b + c, b + d})
    breaks = []
    pieces = []
    for x0, x1 in zip(points, points[1:]):
        mid = (x0 + x1) / 2
        lower = (-d, Fraction(1)) if mid >= a + d else (a, Fraction(0))
        upper = (-c, Fraction(1)) if mid <= b + c else (b, Fraction(0))
        up = substitute(*upper)
        lo = substitute(*lower)
        pieces.append(_cadd(up, (P.scale(lo[0], -1), P.scale(lo[1], -1))))
        if not breaks:
            breaks.append(x0)
        breaks.append(x1)
    return L1PiecewisePoly.make(breaks, pieces)


# ---------------------------------------------------------------------------
# algebra operations


def convolve(f, g):
    """Exact convolution in l^1(G) or L^1(R)."""
    if isinstance(f, L1Discrete):
        if f.group is not g.group:
            raise ValueError("convolution of elements over different groups")
        out: dict = {}
        for s, a in f.coeffs:
            for t, b in g.coeffs:
                r = s * t
                out[r] = out.get(r, ZERO) + a * b
        return L1Discrete.from_dict(f.group, out)
    out = L1PiecewisePoly.zero()
    for i, p in enumerate(f.pieces):
        for j, q in enumerate(g.pieces):
            if _czero(p) or _czero(q):
                continue
            out = out + _pair_convolution(p, f.breaks[i], f.breaks[i + 1],
                                          q, g.breaks[j], g.breaks[j + 1])
    return out


def involution(f):
    """f^#(s) = conj(f(s^-1)); on R, f^#(t) = conj(f(-t))."""
    if isinstance(f, L1Discrete):
        return L1Discrete.from_dict(f.group, {s.inverse(): a.conj() for s, a in f.coeffs})
    breaks = [-b for b in reversed(f.breaks)]
    pieces = [_cconj(_reflect(p)) for p in reversed(f.pieces)]
    return L1PiecewisePoly.make(breaks, pieces)


def l1_norm(f, k: int) -> RationalInterval:
    """Enclosure of ||f||_1 of width < 2^-k."""
    if isinstance(f, L1Discrete):
        n = max(len(f.coeffs), 1)
        bits = k + n.bit_length() + 2
        total = RationalInterval.exact(0)
        for _, c in f.coeffs:
            total = total + _abs_enclosure(c, bits)
        return total
    target = Fraction(1, 2 ** k)
    share = target / (2 * max(len(f.pieces), 1))
    total = RationalInterval.exact(0)
    for j, p in enumerate(f.pieces):
        total = total + _piece_norm(p, f.breaks[j], f.breaks[j + 1], share)
    return total


def _bound(poly, lo: Fraction, hi: Fraction) -> Fraction:
    r = max(abs(lo), abs(hi))
    return sum((abs(c) * r ** i for i, c in enumerate(poly)), Fraction(0))


def _real_abs_integral(p, a: Fraction, b: Fraction, width: Fraction) -> RationalInterval:
    """Enclosure of integral_a^b |p(t)| dt for a real polynomial p."""
    if not p:
        return RationalInterval.exact(0)
    F = P.antiderivative(p)
    roots = P.isolate_roots(p, a, b)
    if not roots:
        v = P.evaluate(F, b) - P.evaluate(F, a)
        return RationalInterval.exact(abs(v))
    per_root = width / (4 * len(roots))
    while True:
        # sample points strictly between consecutive roots give the signs
        cuts = [(a, a)] + roots + [(b, b)]
        signs = []
        for (lo0, hi0), (lo1, hi1) in zip(cuts, cuts[1:]):
            x = (hi0 + lo1) / 2
            v = P.evaluate(p, x)
            signs.append(1 if v > 0 else -1 if v < 0 else 0)
        total = RationalInterval.exact(signs[-1] * P.evaluate(F, b) - signs[0] * P.evaluate(F, a))
        ok = True
        for idx, (lo, hi) in enumerate(roots):
            coef = signs[idx] - signs[idx + 1]
            if coef == 0:
                continue
            if lo == hi:
                total = total + coef * P.evaluate(F, lo)
                continue
            m = _bound(p, lo, hi) * (hi - lo)
            base = P.evaluate(F, lo)
            total = total + RationalInterval(base - m, base + m) * coef
            if 2 * abs(coef) * m >= per_root:
                ok = False
        if ok:
            return RationalInterval(max(total.lo, Fraction(0)), max(total.hi, Fraction(0)))
        roots = [P.refine_root(p, lo, hi, (hi - lo) / 16) if lo != hi else (lo, hi)
                 for lo, hi in roots]


def _proportional(p):
    """If p = c * r with r real, return (c as Cyc, r); else None."""
    re_, im_ = p
    if not im_:
        return ONE, re_
    if not re_:
        return Cyc.gauss(0, 1), im_
    if len(re_) != len(im_):
        return None
    lead = im_[-1] / re_[-1]
    if all(i == lead * r for r, i in zip(re_, im_)):
        return Cyc.gauss(1, lead), re_
    return None


def _piece_norm(p, a: Fraction, b: Fraction, width: Fraction) -> RationalInterval:
    # integrate over [-h, h] in z = t - mid, in whichever orientation z or -z has the
    # smaller |p|^2 coefficients, so f and its involution see identical arithmetic
    mid, h = (a + b) / 2, (b - a) / 2
    fwd = tuple(_compose_linear(part, mid, Fraction(1)) for part in p)
    bwd = tuple(_compose_linear(part, mid, Fraction(-1)) for part in p)
    key = lambda q: tuple(P.add(P.mul(q[0], q[0]), P.mul(q[1], q[1])))  # noqa: E731
    p = fwd if key(fwd) <= key(bwd) else bwd
    a, b = -h, h
    prop = _proportional(p)
    if prop is not None:
        c, r = prop
        if c == ONE:
            return _real_abs_integral(r, a, b, width)
        cabs = _abs_enclosure(c, 2 * width.denominator.bit_length() + 8)
        inner = _real_abs_integral(r, a, b, width / (2 * cabs.hi + 1))
        return inner * cabs
    return _complex_abs_integral(p, a, b, width)


def _int_poly_mul(p: list, q: list) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _half_binomials(m: int) -> list:
    """Taylor coefficients of sqrt(1 + v): binom(1/2, j) for j <= m."""
    out = [Fraction(1)]
    for j in range(1, m + 1):
        out.append(out[-1] * (Fraction(1, 2) - (j - 1)) / j)
    return out


_BINOM = _half_binomials(40)


def _complex_abs_integral(p, a: Fraction, b: Fraction, width: Fraction) -> RationalInterval:
    """Adaptive subdivision for integral of |p| = sqrt(S), S = Re(p)^2 + Im(p)^2.

    On a cell [mid - r, mid + r] write S(mid + r y) = s0 (1 + V(y)) with
    rho = sum |V_i| < 1/2.  Then sqrt(1 + V) is its binomial series, whose
    truncation after m terms integrates exactly over [-1, 1] and leaves a tail
    of at most |binom(1/2, m+1)| rho^(m+1) / (1 - rho).  Cells where S may
    vanish get the crude range enclosure and are split further.
    """
    S = P.add(P.mul(p[0], p[0]), P.mul(p[1], p[1]))
    bits = 2 * width.denominator.bit_length() + 8
    total_len = b - a

    def crude(h, smin, smax):
        return round_out(RationalInterval(sqrt_lower(max(smin, Fraction(0)), bits) * h,
                                          sqrt_upper(max(smax, Fraction(0)), bits) * h), bits)

    def cell(lo, hi):
        h = hi - lo
        mid = (lo + hi) / 2
        r = h / 2
        T = _compose_linear(S, mid, r)  # S(mid + r y)
        s0 = T[0] if T else Fraction(0)
        b1 = sum((abs(c) for c in T[1:]), Fraction(0))
        if s0 <= 0 or 2 * b1 >= s0:
            return crude(h, s0 - b1, s0 + b1)
        rho = b1 / s0
        V = [c / s0 for c in T[1:]]
        den = lcm(*(c.denominator for c in V))
        N = [0] + [int(c * den) for c in V]  # V = N / den with integer coefficients
        target = width * h / total_len / 4
        root_lo, root_hi = sqrt_lower(s0, bits), sqrt_upper(s0, bits)
        power = [1]  # N^j, integer coefficients
        acc = Fraction(2)  # j = 0 term: integral of 1 over [-1, 1]
        m = 0
        while True:
            tail = abs(_BINOM[m + 1]) * rho ** (m + 1) / (1 - rho) * 2 * r * root_hi
            if tail < target or m + 1 >= len(_BINOM) - 1:
                break
            m += 1
            power = _int_poly_mul(power, N)
            integral = sum((Fraction(2 * c, i + 1) for i, c in enumerate(power) if i % 2 == 0 and c),
                           Fraction(0))
            acc += _BINOM[m] * integral / den ** m
        lo_v = r * root_lo * acc - tail
        hi_v = r * root_hi * acc + tail
        est = round_out(RationalInterval(lo_v, hi_v), bits)
        c = crude(h, s0 - b1, s0 + b1)
        return RationalInterval(max(est.lo, c.lo), min(est.hi, c.hi))

    heap = []
    total_lo = Fraction(0)
    total_hi = Fraction(0)
    for i in range(8):
        lo, hi = a + (b - a) * i / 8, a + (b - a) * (i + 1) / 8
        enc = cell(lo, hi)
        total_lo += enc.lo
        total_hi += enc.hi
        heapq.heappush(heap, (-enc.width, lo, hi, enc))
    while total_hi - total_lo >= width:
        _, lo, hi, enc = heapq.heappop(heap)
        total_lo -= enc.lo
        total_hi -= enc.hi
        mid = (lo + hi) / 2
        for x0, x1 in ((lo, mid), (mid, hi)):
            e = cell(x0, x1)
            total_lo += e.lo
            total_hi += e.hi
            heapq.heappush(heap, (-e.width, x0, x1, e))
    return RationalInterval(total_lo, total_hi)


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class SpecialPointInfo:
    """Per special point: an enclosure of its L^1 norm and whether |f| <= 1 pointwise."""

    norm: RationalInterval
    sup_at_most_one: bool


def _eval_poly(p: StarPoly, leaf, unit=None):
    if isinstance(p, SpecialPoint):
        return leaf(p.index)
    if isinstance(p, Add):
        return _eval_poly(p.left, leaf, unit) + _eval_poly(p.right, leaf, unit)
    if isinstance(p, Mul):
        return convolve(_eval_poly(p.left, leaf, unit), _eval_poly(p.right, leaf, unit))
    if isinstance(p, ScalarMul):
        return _eval_poly(p.arg, leaf, unit).scale(p.scalar)
    if isinstance(p, Adjoint):
        return involution(_eval_poly(p.arg, leaf, unit))
    if isinstance(p, Scalar):
        if unit is None:
            raise ValueError("L^1(R) has no unit; scalars must multiply a special point")
        return unit.scale(p.value)
    raise TypeError(f"cannot evaluate {p!r} in an L^1 presentation")


class L1DiscretePresentation(PresentationOracle):
    """l^1(G): special points delta_{g_n} over the fixed group enumeration."""

    def __init__(self, group: GroupSpec):
        self.group = group

    def point(self, n: int) -> L1Discrete:
        g = self.group.enumerate(n + 1)[n]
        return L1Discrete.delta(self.group, g)

    def special_point(self, n: int) -> str:
        g = self.group.enumerate(n + 1)[n]
        return f"d[{self.group.format(g.word)}]"

    def evaluate(self, poly: StarPoly) -> L1Discrete:
        unit = L1Discrete.delta(self.group, self.group.identity())
        return _eval_poly(poly, self.point, unit)

    def norm(self, point, k: int) -> RationalInterval:
        f = point if isinstance(point, L1Discrete) else self.evaluate(point)
        return l1_norm(f, k)

    def info(self, n: int) -> SpecialPointInfo:
        return SpecialPointInfo(RationalInterval.exact(1), True)


class L1RealPresentation(PresentationOracle):
    """L^1(R): special points 1_[a_n, b_n) over the fixed enumeration of rational intervals."""

    def point(self, n: int) -> L1PiecewisePoly:
        a, b = interval_of_index(n)
        return L1PiecewisePoly.indicator(a, b)

    def special_point(self, n: int) -> str:
        a, b = interval_of_index(n)
        return f"1[{a},{b}]"

    def evaluate(self, poly: StarPoly) -> L1PiecewisePoly:
        return _eval_poly(poly, self.point)

    def norm(self, point, k: int) -> RationalInterval:
        f = point if isinstance(point, L1PiecewisePoly) else self.evaluate(point)
        return l1_norm(f, k)

    def info(self, n: int) -> SpecialPointInfo:
        a, b = interval_of_index(n)
        return SpecialPointInfo(RationalInterval.exact(b - a), True)

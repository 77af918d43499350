"""Rational *-polynomials over special points and the L-infinity presentation.

Special points of L^inf(C, mu) are the indicators p_[w] of cylinders, indexed
by the shortlex enumeration of binary words.  Any rational *-polynomial in
them is a step function, and ``reduce`` brings it to a canonical
``IndicatorCombination``: disjoint cylinders with non-zero Gaussian-rational
(or cyclotomic) coefficients, coarsest possible partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cantor import (ActionOracle, CylinderUnion, MeasureOracle, _key, image_union,
                     index_of_word, lower_image, measure, normalize, word_of_index)
from .groups import GroupElement
from .intervals import RationalInterval, sqrt_interval, sqrt_upper
from .scalars import Cyc, ONE, ZERO


class InexactImage(ValueError):
    """An action image is an infinite union, so exact reduction is impossible."""


# ---------------------------------------------------------------------------
# AST


class StarPoly:
    def __add__(self, other):
        return Add(self, _lift_poly(other))

    def __radd__(self, other):
        return Add(_lift_poly(other), self)

    def __sub__(self, other):
        return Add(self, ScalarMul(Cyc.rational(-1), _lift_poly(other)))

    def __neg__(self):
        return ScalarMul(Cyc.rational(-1), self)

    def __mul__(self, other):
        if isinstance(other, StarPoly):
            return Mul(self, other)
        return ScalarMul(Cyc.coerce(other), self)

    def __rmul__(self, other):
        return ScalarMul(Cyc.coerce(other), self)

    def star(self):
        return Adjoint(self)

    def __str__(self):
        return format_poly(self)


def _lift_poly(x) -> StarPoly:
    return x if isinstance(x, StarPoly) else Scalar(Cyc.coerce(x))


@dataclass(frozen=True)
class SpecialPoint(StarPoly):
    """The index-th special point; label 'p' for cylinder indicators, 'x' for findim basis points."""

    index: int
    label: str = "p"



@dataclass(frozen=True)
class Scalar(StarPoly):
    value: Cyc



@dataclass(frozen=True)
class Add(StarPoly):
    left: StarPoly
    right: StarPoly



@dataclass(frozen=True)
class Mul(StarPoly):
    left: StarPoly
    right: StarPoly



@dataclass(frozen=True)
class Adjoint(StarPoly):
    arg: StarPoly



@dataclass(frozen=True)
class ScalarMul(StarPoly):
    scalar: Cyc
    arg: StarPoly



@dataclass(frozen=True)
class Act(StarPoly):
    """alpha_g applied to a polynomial; produced when a base action is kept symbolic."""

    g: GroupElement
    arg: StarPoly



@dataclass(frozen=True)
class Combo(StarPoly):
    """A canonical combination embedded as a literal."""

    value: "IndicatorCombination"



def indicator(w: str) -> SpecialPoint:
    return SpecialPoint(index_of_word(w))


def simplify_adjoints(poly: StarPoly) -> StarPoly:
    """Push adjoints to the leaves, so (x^*)^* collapses to x."""
    def go(p, starred):
        if isinstance(p, Adjoint):
            return go(p.arg, not starred)
        if isinstance(p, Scalar):
            return Scalar(p.value.conj()) if starred else p
        if isinstance(p, SpecialPoint):
            return Adjoint(p) if starred else p
        if isinstance(p, Combo):
            return Combo(p.value.conj()) if starred else p
        if isinstance(p, Add):
            return Add(go(p.left, starred), go(p.right, starred))
        if isinstance(p, Mul):
            if starred:
                return Mul(go(p.right, True), go(p.left, True))
            return Mul(go(p.left, False), go(p.right, False))
        if isinstance(p, ScalarMul):
            return ScalarMul(p.scalar.conj() if starred else p.scalar, go(p.arg, starred))
        if isinstance(p, Act):
            return Act(p.g, go(p.arg, starred))
        raise TypeError(f"not a StarPoly: {p!r}")
    return go(poly, False)


def _format_scalar(c: Cyc) -> str:
    if c.as_gaussian() is not None:
        return str(c)
    m = c.minimal()
    parts = []
    for j, cj in enumerate(m.c):
        if cj:
            mono = "" if j == 0 else (f"zeta({m.n})" if j == 1 else f"zeta({m.n})^{j}")
            if not mono:
                parts.append(str(cj))
            elif cj == 1:
                parts.append(mono)
            else:
                parts.append(f"({cj})*{mono}")
    return " + ".join(parts)


def _atomic_scalar(c: Cyc) -> str:
    s = _format_scalar(c)
    if any(ch in s[1:] for ch in "+-") or s.startswith("-") or "*" in s or "/" in s:
        return f"({s})"
    return s


def format_poly(p: StarPoly) -> str:
    if isinstance(p, SpecialPoint):
        if p.label == "p":
            return f"p[{word_of_index(p.index)}]"
        return f"{p.label}[{p.index}]"
    if isinstance(p, Scalar):
        return _atomic_scalar(p.value)
    if isinstance(p, Add):
        return f"({format_poly(p.left)} + {format_poly(p.right)})"
    if isinstance(p, Mul):
        return f"{format_poly(p.left)}*{format_poly(p.right)}"
    if isinstance(p, Adjoint):
        return f"({format_poly(p.arg)})^*"
    if isinstance(p, ScalarMul):
        return f"{_atomic_scalar(p.scalar)}*{format_poly(p.arg)}"
    if isinstance(p, Act):
        return f"alpha[{p.g.spec.format(p.g.word)}]({format_poly(p.arg)})"
    if isinstance(p, Combo):
        text = p.value.to_text()
        return text if len(p.value.terms) <= 1 else f"({text})"
    raise TypeError(f"not a StarPoly: {p!r}")


# ---------------------------------------------------------------------------
# step functions on cylinders


def _strip(d: dict, bit: str) -> dict:
    return {w[1:]: v for w, v in d.items() if w.startswith(bit)}


def _combine(f: dict, g: dict, op, absorbing_zero: bool) -> dict:
    """Pointwise op of two step functions given as prefix-free word -> value maps.

    Missing regions count as 0.  With ``absorbing_zero`` (products) empty
    inputs short-circuit to the empty result.
    """
    if absorbing_zero:
        if not f or not g:
            return {}
    else:
        if not f:
            return {w: op(ZERO, v) for w, v in g.items()}
        if not g:
            return {w: op(v, ZERO) for w, v in f.items()}
    if "" in f and "" in g:
        return {"": op(f[""], g[""])}
    out = {}
    for bit in "01":
        fb = {"": f[""]} if "" in f else _strip(f, bit)
        gb = {"": g[""]} if "" in g else _strip(g, bit)
        for w, v in _combine(fb, gb, op, absorbing_zero).items():
            out[bit + w] = v
    return out


def _canonical(d: dict) -> dict:
    d = {w: v for w, v in d.items() if not v.is_zero()}
    changed = True
    while changed:
        changed = False
        for w in sorted(d, key=len, reverse=True):
            if w and w in d:
                sib = w[:-1] + ("1" if w[-1] == "0" else "0")
                if sib in d and d[sib] == d[w]:
                    d[w[:-1]] = d.pop(w)
                    del d[sib]
                    changed = True
    return d


@dataclass(frozen=True)
class IndicatorCombination:
    """Sum of c * p_[w] over disjoint cylinders [w], canonical form."""

    terms: tuple  # ((word, Cyc), ...) sorted by (len, word)

    @classmethod
    def from_dict(cls, d: dict) -> "IndicatorCombination":
        d = _canonical(dict(d))
        return cls(tuple(sorted(d.items(), key=lambda t: _key(t[0]))))

    @classmethod
    def zero(cls) -> "IndicatorCombination":
        return cls(())

    @classmethod
    def constant(cls, c) -> "IndicatorCombination":
        return cls.from_dict({"": Cyc.coerce(c)})

    @classmethod
    def indicator(cls, U) -> "IndicatorCombination":
        if isinstance(U, str):
            U = CylinderUnion.cylinder(U)
        return cls.from_dict({w: ONE for w in U.words})

    @classmethod
    def from_cells(cls, cells) -> "IndicatorCombination":
        """Sum of c * 1_U over (U, c) pairs; the U need not be disjoint."""
        out = cls.zero()
        for U, c in cells:
            out = out + cls.indicator(U).scale(c)
        return out

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "IndicatorCombination") -> "IndicatorCombination":
        return IndicatorCombination.from_dict(
            _combine(self.as_dict(), other.as_dict(), lambda a, b: a + b, False))

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other: "IndicatorCombination") -> "IndicatorCombination":
        return IndicatorCombination.from_dict(
            _combine(self.as_dict(), other.as_dict(), lambda a, b: a * b, True))

    def scale(self, c) -> "IndicatorCombination":
        c = Cyc.coerce(c)
        return IndicatorCombination.from_dict({w: c * v for w, v in self.terms})

    def conj(self) -> "IndicatorCombination":
        return IndicatorCombination(tuple((w, v.conj()) for w, v in self.terms))

    def value_at(self, x: str) -> Cyc:
        """Value on the cylinder [x]; x must be at least as deep as the partition."""
        for w, v in self.terms:
            if x.startswith(w):
                return v
        return ZERO

    def depth(self) -> int:
        return max((len(w) for w, _ in self.terms), default=0)

    def support(self) -> CylinderUnion:
        return normalize(w for w, _ in self.terms)

    def sup_bound(self) -> Fraction:
        """Rational upper bound for the sup norm."""
        best = Fraction(0)
        for _, v in self.terms:
            best = max(best, _abs_upper(v))
        return best

    def to_poly(self) -> StarPoly:
        out: Optional[StarPoly] = None
        for w, v in self.terms:
            t = indicator(w) if v == ONE else ScalarMul(v, indicator(w))
            out = t if out is None else Add(out, t)
        return out if out is not None else Scalar(ZERO)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, v in self.terms:
            parts.append(f"p[{w}]" if v == ONE else f"{_atomic_scalar(v)}*p[{w}]")
        return " + ".join(parts)

    def triples(self) -> list:
        """(bitstring, re, im) triples; coefficients must be Gaussian."""
        out = []
        for w, v in self.terms:
            g = v.as_gaussian()
            if g is None:
                raise ValueError("coefficient is not a Gaussian rational")
            out.append((w, g[0], g[1]))
        return out

    def __str__(self):
        return self.to_text()


def _abs_upper(v: Cyc) -> Fraction:
    g = v.as_gaussian()
    if g is not None:
        return sqrt_upper(g[0] ** 2 + g[1] ** 2, 32)
    (rl, rh), (il, ih) = v.enclose(40)
    r = max(abs(rl), abs(rh))
    i = max(abs(il), abs(ih))
    return sqrt_upper(r * r + i * i, 32)


def _abs2_interval(v: Cyc, bits: int) -> RationalInterval:
    a2 = v.abs2()
    if a2.is_rational():
        return RationalInterval.exact(a2.to_fraction())
    (lo, hi), _ = a2.enclose(bits)
    return RationalInterval(max(lo, Fraction(0)), hi)


# ---------------------------------------------------------------------------
# reduction


def reduce(poly: StarPoly, action: Optional[ActionOracle] = None) -> IndicatorCombination:
    """Canonical step-function form of a *-polynomial in cylinder indicators.

    ``Act`` nodes need ``action`` and succeed only when every image is a
    finite union; otherwise ``InexactImage`` is raised.
    """
    if isinstance(poly, SpecialPoint):
        if poly.label != "p":
            raise ValueError(f"special point {poly} is not a cylinder indicator")
        return IndicatorCombination.indicator(word_of_index(poly.index))
    if isinstance(poly, Scalar):
        return IndicatorCombination.constant(poly.value)
    if isinstance(poly, Combo):
        return poly.value
    if isinstance(poly, Add):
        return reduce(poly.left, action) + reduce(poly.right, action)
    if isinstance(poly, Mul):
        return reduce(poly.left, action) * reduce(poly.right, action)
    if isinstance(poly, ScalarMul):
        return reduce(poly.arg, action).scale(poly.scalar)
    if isinstance(poly, Adjoint):
        return reduce(poly.arg, action).conj()
    if isinstance(poly, Act):
        if action is None:
            raise ValueError("polynomial contains an action node but no action is configured")
        return act_exact(action, poly.g, reduce(poly.arg, action))
    raise TypeError(f"not a StarPoly: {poly!r}")


def act_exact(action: ActionOracle, g: GroupElement, f: IndicatorCombination) -> IndicatorCombination:
    if g.is_identity() or f.is_zero() or f.terms[0][0] == "":
        return f  # constants are fixed by every automorphism
    cells = []
    for w, c in f.terms:
        img = image_union(action, g, CylinderUnion.cylinder(w))
        if img is None:
            raise InexactImage(f"image of [{w}] under {g} is not a finite union")
        cells.append((img, c))
    return IndicatorCombination.from_cells(cells)


def act_approx(action: ActionOracle, m: MeasureOracle, g: GroupElement,
               f: IndicatorCombination, k: int, budget: int = 100_000):
    """A combination q and a rational bound d >= ||alpha_g(f) - q||_2 with d < 2^-k."""
    try:
        return act_exact(action, g, f), Fraction(0)
    except InexactImage:
        pass
    s = sum((_abs2_interval(c, 40).hi for _, c in f.terms), Fraction(0))
    extra = max(math.ceil(math.log2(s)) if s > 0 else 0, 0) + len(f.terms).bit_length() + 1
    cell_k = 2 * k + extra + 2
    cells = []
    gap_sum = Fraction(0)
    for w, c in f.terms:
        img = image_union(action, g, CylinderUnion.cylinder(w), limit=64)
        if img is not None:
            cells.append((img, c))
            continue
        low, gap = lower_image(action, m, g, CylinderUnion.cylinder(w), cell_k, budget)
        cells.append((low, c))
        gap_sum += _abs2_interval(c, 40).hi * gap
    return IndicatorCombination.from_cells(cells), sqrt_upper(gap_sum, k + 2)


def approximate(poly: StarPoly, action: Optional[ActionOracle], m: MeasureOracle, k: int,
                budget: int = 100_000):
    """Combination q with certified L2 distance d to poly, d < 2^-k.

    Used when action images are infinite unions; the action is assumed to
    preserve m, so alpha_g is an L2 isometry.
    """
    for extra in range(0, 64, 4):
        q, err, _ = _approx(poly, action, m, k + extra, budget)
        if err < Fraction(1, 2 ** k):
            return q, err
    raise RuntimeError("approximation did not converge")


def _approx(p, action, m, k, budget):
    """(approximant, L2 error bound, sup bound of both) with leaf tolerance 2^-k."""
    if isinstance(p, (SpecialPoint, Scalar, Combo)):
        q = reduce(p)
        return q, Fraction(0), q.sup_bound()
    if isinstance(p, Add):
        a, ea, sa = _approx(p.left, action, m, k, budget)
        b, eb, sb = _approx(p.right, action, m, k, budget)
        return a + b, ea + eb, sa + sb
    if isinstance(p, Mul):
        a, ea, sa = _approx(p.left, action, m, k, budget)
        b, eb, sb = _approx(p.right, action, m, k, budget)
        return a * b, sa * eb + sb * ea, sa * sb
    if isinstance(p, ScalarMul):
        a, ea, sa = _approx(p.arg, action, m, k, budget)
        s = _abs_upper(p.scalar)
        return a.scale(p.scalar), s * ea, s * sa
    if isinstance(p, Adjoint):
        a, ea, sa = _approx(p.arg, action, m, k, budget)
        return a.conj(), ea, sa
    if isinstance(p, Act):
        a, ea, sa = _approx(p.arg, action, m, k, budget)
        q, d = act_approx(action, m, p.g, a, k, budget)
        return q, ea + d, sa
    raise TypeError(f"not a StarPoly: {p!r}")


# ---------------------------------------------------------------------------
# presentations


class PresentationOracle:
    """A Banach *-algebra presentation: special points plus a norm oracle."""

    def special_point(self, n: int) -> str:
        raise NotImplementedError

    def norm(self, point: StarPoly, k: int) -> RationalInterval:
        raise NotImplementedError


def _sq_integral(f: IndicatorCombination, m: MeasureOracle, k: int) -> RationalInterval:
    total = RationalInterval.exact(0)
    n = max(len(f.terms), 1)
    for w, c in f.terms:
        a2 = _abs2_interval(c, k + n.bit_length() + 4)
        total = total + a2 * measure(m, CylinderUnion.cylinder(w), k + n.bit_length() + 4 +
                                     max(a2.hi, Fraction(1)).numerator.bit_length())
    return RationalInterval(max(total.lo, Fraction(0)), max(total.hi, Fraction(0)))


class LInfinityPresentation(PresentationOracle):
    """L^inf(C, mu) with special points p_[w_n] and the L2 norm of the state integral."""

    def __init__(self, measure: MeasureOracle, action: Optional[ActionOracle] = None):
        self.measure = measure
        self.action = action

    def special_point(self, n: int) -> str:
        return f"p[{word_of_index(n)}]"

    def reduce(self, poly: StarPoly) -> IndicatorCombination:
        return reduce(poly, self.action)

    def norm(self, point: StarPoly, k: int) -> RationalInterval:
        return l2_norm(self, point, k)


def _as_comb(pres, poly) -> IndicatorCombination:
    if isinstance(poly, IndicatorCombination):
        return poly
    return reduce(poly, getattr(pres, "action", None))


def l2_norm(pres: LInfinityPresentation, poly, k: int) -> RationalInterval:
    """Enclosure of (integral |f|^2 dmu)^(1/2), width < 2^-k."""
    f = _as_comb(pres, poly)
    target = Fraction(1, 2 ** k)
    j = 2 * k + 4
    while True:
        sq = _sq_integral(f, pres.measure, j)
        iv = sqrt_interval(sq, k)
        if iv.width < target:
            return iv
        j += 8


def integral(pres: LInfinityPresentation, poly, k: int):
    """Enclosures (re, im) of integral f dmu, widths < 2^-k."""
    f = _as_comb(pres, poly)
    n = max(len(f.terms), 1)
    bits = k + n.bit_length() + 4
    re_ = RationalInterval.exact(0)
    im_ = RationalInterval.exact(0)
    for w, c in f.terms:
        (rl, rh), (il, ih) = c.enclose(bits)
        scale = max(abs(rl), abs(rh), abs(il), abs(ih), Fraction(1))
        mu = measure(pres.measure, CylinderUnion.cylinder(w), bits + scale.numerator.bit_length())
        re_ = re_ + RationalInterval(rl, rh) * mu
        im_ = im_ + RationalInterval(il, ih) * mu
    return re_, im_


def inner_product(pres: LInfinityPresentation, f, g, k: int):
    """Enclosures (re, im) of <f, g> = integral g^* f dmu."""
    ff = _as_comb(pres, f)
    gg = _as_comb(pres, g)
    return integral(pres, gg.conj() * ff, k)


def apply_action(pres: LInfinityPresentation, action: ActionOracle, g: GroupElement, poly,
                 k: int, budget: int = 100_000):
    """(q, d): a combination q with ||alpha_g(poly) - q||_2 <= d < 2^-k.

    d is exactly 0 when every touched cylinder has a finite image.
    """
    f = _as_comb(pres, poly)
    return act_approx(action, pres.measure, g, f, k, budget)

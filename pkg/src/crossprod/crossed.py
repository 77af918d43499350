"""Symbolic crossed products M x_alpha G for discrete G.

Elements are built from pi(m) for m in a base algebra, unitaries u_s and
scalars.  ``CrossedProduct.normalize`` rewrites any such expression to the
normal form sum_s pi(a_s) u_s by pushing unitaries to the right of the
pi-letters ("pushing the u's to the left" of the next letter) with the rules

    R1  u_s^*          -> u_{s^-1}
    R2  u_s u_r        -> u_{sr}
    R3  u_s pi(x)      -> pi(alpha_s(x)) u_s      (from u_s pi(x) u_s^* = pi(alpha_s(x)))
    R4  pi(x) pi(y)    -> pi(xy)

Each rule strictly decreases the measure (number of u^* letters, number of
pairs (u before pi), word length) in lexicographic order, so rewriting stops;
the result does not depend on which redex is chosen first.

The base algebra is pluggable (see ``BaseAlgebra``): exact finite-dimensional
algebras live in ``findim``; ``LInfinityBase`` is L^inf(C, mu) with a
computable action.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cantor import ActionOracle, MeasureOracle
from .groups import Character, GroupElement, GroupError, GroupSpec, UnsupportedGroup
from .intervals import RationalInterval, sqrt_interval
from .presentations import (Act, Add, Adjoint, Combo, IndicatorCombination, InexactImage,
                            LInfinityPresentation, Mul, Scalar, ScalarMul, StarPoly, act_exact,
                            approximate, format_poly, integral, l2_norm, reduce)
from .scalars import Cyc, ONE, ZERO


# ---------------------------------------------------------------------------
# base algebras


class BaseAlgebra:
    """Interface a coefficient algebra must provide."""

    group: GroupSpec

    def one(self):
        raise NotImplementedError

    def embed(self, poly: StarPoly):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def adjoint(self, a):
        raise NotImplementedError

    def scale(self, c: Cyc, a):
        raise NotImplementedError

    def act(self, g: GroupElement, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return self.is_zero(self.add(a, self.scale(Cyc.rational(-1), b)))

    def trace(self, a, k: int):
        """Enclosures (re, im) of the state on a, widths < 2^-k."""
        raise NotImplementedError

    def format(self, a) -> str:
        raise NotImplementedError


class LInfinityBase(BaseAlgebra):
    """L^inf(C, mu) with a measure-preserving computable action.

    Exact elements are ``IndicatorCombination``s.  When an action image is an
    infinite union the element stays a symbolic StarPoly and is evaluated
    only approximately (norm and trace queries still return certified
    enclosures).  Symbolic coefficients count as zero when their L2 norm is
    certified below 2^-(prune_k + 2); that is pruning, not equality.
    """

    def __init__(self, measure: MeasureOracle, action: ActionOracle, prune_k: int = 30,
                 budget: int = 100_000):
        self.measure = measure
        self.action = action
        self.group = action.group
        self.prune_k = prune_k
        self.budget = budget

    def _pres(self):
        return LInfinityPresentation(self.measure)

    @staticmethod
    def _poly(a) -> StarPoly:
        return Combo(a) if isinstance(a, IndicatorCombination) else a

    def one(self):
        return IndicatorCombination.constant(ONE)

    def embed(self, poly):
        if isinstance(poly, IndicatorCombination):
            return poly
        try:
            return reduce(poly, self.action)
        except InexactImage:
            return poly

    def add(self, a, b):
        if isinstance(a, IndicatorCombination) and isinstance(b, IndicatorCombination):
            return a + b
        return Add(self._poly(a), self._poly(b))

    def mul(self, a, b):
        exact_a = isinstance(a, IndicatorCombination)
        exact_b = isinstance(b, IndicatorCombination)
        if exact_a and exact_b:
            return a * b
        if (exact_a and a.is_zero()) or (exact_b and b.is_zero()):
            return IndicatorCombination.zero()
        if exact_a and a == self.one():
            return b
        if exact_b and b == self.one():
            return a
        return Mul(self._poly(a), self._poly(b))

    def adjoint(self, a):
        if isinstance(a, IndicatorCombination):
            return a.conj()
        return Adjoint(a)

    def scale(self, c, a):
        if isinstance(a, IndicatorCombination):
            return a.scale(c)
        return ScalarMul(Cyc.coerce(c), a)

    def act(self, g, a):
        if g.is_identity():
            return a
        if isinstance(a, IndicatorCombination):
            try:
                return act_exact(self.action, g, a)
            except InexactImage:
                return Act(g, Combo(a))
        return Act(g, a)

    def approximate(self, a, k: int):
        if isinstance(a, IndicatorCombination):
            return a, Fraction(0)
        return approximate(a, self.action, self.measure, k, self.budget)

    def is_zero(self, a) -> bool:
        if isinstance(a, IndicatorCombination):
            return a.is_zero()
        k = self.prune_k + 4
        q, err = self.approximate(a, k)
        return l2_norm(self._pres(), q, k).hi + err < Fraction(1, 2 ** (self.prune_k + 2))

    def eq(self, a, b) -> bool:
        if isinstance(a, IndicatorCombination) and isinstance(b, IndicatorCombination):
            return a == b
        return a == b or self.is_zero(self.add(a, self.scale(-1, b)))

    def trace(self, a, k: int):
        q, err = self.approximate(a, k + 2)
        re_, im_ = integral(self._pres(), q, k + 2)
        return (RationalInterval(re_.lo - err, re_.hi + err),
                RationalInterval(im_.lo - err, im_.hi + err))

    def format(self, a) -> str:
        if isinstance(a, IndicatorCombination):
            return a.to_text()
        return format_poly(a)


# ---------------------------------------------------------------------------
# expressions


class CrossedExpr:
    def __add__(self, other):
        return CAdd(self, _lift(other))

    def __radd__(self, other):
        return CAdd(_lift(other), self)

    def __sub__(self, other):
        return CAdd(self, CScale(Cyc.rational(-1), _lift(other)))

    def __mul__(self, other):
        if isinstance(other, CrossedExpr):
            return CMul(self, other)
        return CScale(Cyc.coerce(other), self)

    def __rmul__(self, other):
        return CScale(Cyc.coerce(other), self)

    def star(self):
        return CStar(self)

    def __str__(self):
        return format_expr(self)


def _lift(x) -> CrossedExpr:
    return x if isinstance(x, CrossedExpr) else CScalar(Cyc.coerce(x))


@dataclass(frozen=True, eq=False)
class Pi(CrossedExpr):
    """pi(m); m is a StarPoly or an already-evaluated base element."""

    arg: object


@dataclass(frozen=True, eq=False)
class U(CrossedExpr):
    g: GroupElement


@dataclass(frozen=True, eq=False)
class CScalar(CrossedExpr):
    value: Cyc


@dataclass(frozen=True, eq=False)
class CAdd(CrossedExpr):
    left: CrossedExpr
    right: CrossedExpr


@dataclass(frozen=True, eq=False)
class CMul(CrossedExpr):
    left: CrossedExpr
    right: CrossedExpr


@dataclass(frozen=True, eq=False)
class CStar(CrossedExpr):
    arg: CrossedExpr


@dataclass(frozen=True, eq=False)
class CScale(CrossedExpr):
    scalar: Cyc
    arg: CrossedExpr


def format_expr(x: CrossedExpr) -> str:
    if isinstance(x, Pi):
        arg = x.arg
        text = format_poly(arg) if isinstance(arg, StarPoly) else str(arg)
        return f"pi({text})"
    if isinstance(x, U):
        return f"u[{x.g.spec.format(x.g.word)}]"
    if isinstance(x, CScalar):
        return format_poly(_scalar_poly(x.value))
    if isinstance(x, CAdd):
        return f"({format_expr(x.left)} + {format_expr(x.right)})"
    if isinstance(x, CMul):
        return f"{format_expr(x.left)} {format_expr(x.right)}"
    if isinstance(x, CStar):
        return f"({format_expr(x.arg)})^*"
    if isinstance(x, CScale):
        return f"{format_poly(_scalar_poly(x.scalar))} {format_expr(x.arg)}"
    raise TypeError(f"not a crossed expression: {x!r}")


def _scalar_poly(c):
    return Scalar(c)


def depth(x: CrossedExpr) -> int:
    if isinstance(x, (Pi, U, CScalar)):
        return 1
    if isinstance(x, (CAdd, CMul)):
        return 1 + max(depth(x.left), depth(x.right))
    return 1 + depth(x.arg)


# ---------------------------------------------------------------------------
# normal forms


@dataclass(frozen=True, eq=False)
class CrossedNormalForm:
    """sum_s pi(a_s) u_s, terms sorted by the group enumeration, no zero coefficients."""

    product: "CrossedProduct"
    terms: tuple  # ((GroupElement, base element), ...)

    def coeff(self, g: GroupElement):
        for h, a in self.terms:
            if h == g:
                return a
        return None

    def support(self) -> list:
        return [g for g, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        return self.product.add(self, other)

    def __sub__(self, other):
        return self.product.add(self, self.product.scale(-1, other))

    def __mul__(self, other):
        if isinstance(other, CrossedNormalForm):
            return self.product.mul(self, other)
        return self.product.scale(other, self)

    def __rmul__(self, other):
        return self.product.scale(other, self)

    def adjoint(self):
        return self.product.adjoint(self)

    def __eq__(self, other):
        if not isinstance(other, CrossedNormalForm):
            return NotImplemented
        return self.product.equal(self, other)

    def __hash__(self):
        return hash(tuple(g for g, _ in self.terms))

    def __str__(self):
        return self.product.format(self)

    def pairs(self) -> list:
        """(group word, serialized coefficient) pairs."""
        spec = self.product.group
        return [(spec.format(g.word), self.product.base.format(a)) for g, a in self.terms]


class CrossedProduct:
    def __init__(self, base: BaseAlgebra):
        self.base = base
        self.group = base.group

    # -- construction -------------------------------------------------------
    def _make(self, coeffs: dict) -> CrossedNormalForm:
        items = [(g, a) for g, a in coeffs.items() if not self.base.is_zero(a)]
        items.sort(key=lambda t: self.group.index(t[0]))
        return CrossedNormalForm(self, tuple(items))

    def _check(self, x: CrossedNormalForm):
        if not isinstance(x, CrossedNormalForm) or x.product is not self:
            raise GroupError("normal form belongs to a different crossed product")

    def zero(self) -> CrossedNormalForm:
        return CrossedNormalForm(self, ())

    def one(self) -> CrossedNormalForm:
        return self.u(self.group.identity())

    def u(self, g: GroupElement) -> CrossedNormalForm:
        self.group._check(g)
        return self._make({g: self.base.one()})

    def pi(self, a) -> CrossedNormalForm:
        a = self.base.embed(a) if isinstance(a, StarPoly) else a
        return self._make({self.group.identity(): a})

    def term(self, a, g: GroupElement) -> CrossedNormalForm:
        a = self.base.embed(a) if isinstance(a, StarPoly) else a
        return self._make({g: a})

    # -- algebra --------------------------------------------------------------
    def add(self, x, y) -> CrossedNormalForm:
        self._check(x)
        self._check(y)
        out = dict(x.terms)
        for g, b in y.terms:
            out[g] = self.base.add(out[g], b) if g in out else b
        return self._make(out)

    def scale(self, c, x) -> CrossedNormalForm:
        self._check(x)
        c = Cyc.coerce(c)
        return self._make({g: self.base.scale(c, a) for g, a in x.terms})

    def mul(self, x, y) -> CrossedNormalForm:
        """(sum pi(a_s) u_s)(sum pi(b_t) u_t) = sum_r pi(sum_{st=r} a_s alpha_s(b_t)) u_r."""
        self._check(x)
        self._check(y)
        out: dict = {}
        for s, a in x.terms:
            for t, b in y.terms:
                r = s * t
                c = self.base.mul(a, self.base.act(s, b))
                out[r] = self.base.add(out[r], c) if r in out else c
        return self._make(out)

    def adjoint(self, x) -> CrossedNormalForm:
        """(pi(a) u_s)^* = u_{s^-1} pi(a^*) = pi(alpha_{s^-1}(a^*)) u_{s^-1}."""
        self._check(x)
        out: dict = {}
        for s, a in x.terms:
            si = s.inverse()
            out[si] = self.base.act(si, self.base.adjoint(a))
        return self._make(out)

    def equal(self, x, y) -> bool:
        self._check(x)
        self._check(y)
        if [g for g, _ in x.terms] == [g for g, _ in y.terms]:
            return all(self.base.eq(a, b) for (_, a), (_, b) in zip(x.terms, y.terms))
        return self.add(x, self.scale(-1, y)).is_zero()

    # -- rewriting ------------------------------------------------------------
    def expand(self, x: CrossedExpr) -> list:
        """Monomials (scalar, letters) with adjoints pushed to the letters."""
        if isinstance(x, Pi):
            a = self.base.embed(x.arg) if isinstance(x.arg, StarPoly) else x.arg
            return [(ONE, (("pi", a),))]
        if isinstance(x, U):
            self.group._check(x.g)
            return [(ONE, (("u", x.g),))]
        if isinstance(x, CScalar):
            return [(x.value, ())]
        if isinstance(x, CAdd):
            return self.expand(x.left) + self.expand(x.right)
        if isinstance(x, CScale):
            return [(x.scalar * c, m) for c, m in self.expand(x.arg)]
        if isinstance(x, CMul):
            left = self.expand(x.left)
            right = self.expand(x.right)
            return [(c * d, m + n) for c, m in left for d, n in right]
        if isinstance(x, CStar):
            out = []
            for c, m in self.expand(x.arg):
                out.append((c.conj(), tuple(_star_letter(self.base, l) for l in reversed(m))))
            return out
        raise TypeError(f"not a crossed expression: {x!r}")

    def rewrite(self, letters, strategy: str = "leftmost", rng: Optional[random.Random] = None):
        """Apply R1-R4 until no redex remains; returns (base element, group element)."""
        letters = list(letters)
        while True:
            redexes = []
            for i, (kind, val) in enumerate(letters):
                if kind == "us":
                    redexes.append((1, i))
                if i + 1 < len(letters):
                    nxt = letters[i + 1][0]
                    if kind == "u" and nxt == "u":
                        redexes.append((2, i))
                    elif kind == "u" and nxt == "pi":
                        redexes.append((3, i))
                    elif kind == "pi" and nxt == "pi":
                        redexes.append((4, i))
            if not redexes:
                break
            if strategy == "random":
                rule, i = (rng or random).choice(redexes)
            else:
                rule, i = min(redexes, key=lambda t: (t[1], t[0]))
            kind, val = letters[i]
            if rule == 1:
                letters[i] = ("u", val.inverse())
            elif rule == 2:
                letters[i:i + 2] = [("u", val * letters[i + 1][1])]
            elif rule == 3:
                letters[i:i + 2] = [("pi", self.base.act(val, letters[i + 1][1])), ("u", val)]
            else:
                letters[i:i + 2] = [("pi", self.base.mul(val, letters[i + 1][1]))]
        a = self.base.one()
        g = self.group.identity()
        for kind, val in letters:
            if kind == "pi":
                a = val
            else:
                g = val
        return a, g

    def normalize(self, x: CrossedExpr, method: str = "bottom_up", strategy: str = "leftmost",
                  seed: Optional[int] = None) -> CrossedNormalForm:
        """Normal form of x.

        ``bottom_up`` combines normal forms of sub-expressions; ``expand``
        distributes everything into monomials and rewrites each one with the
        chosen redex strategy ('leftmost' or 'random').
        """
        if method == "bottom_up":
            return self._bottom_up(x)
        rng = random.Random(seed)
        out: dict = {}
        for c, letters in self.expand(x):
            if c.is_zero():
                continue
            a, g = self.rewrite(letters, strategy, rng)
            a = self.base.scale(c, a)
            out[g] = self.base.add(out[g], a) if g in out else a
        return self._make(out)

    def _bottom_up(self, x: CrossedExpr) -> CrossedNormalForm:
        if isinstance(x, Pi):
            return self.pi(x.arg)
        if isinstance(x, U):
            return self.u(x.g)
        if isinstance(x, CScalar):
            return self.scale(x.value, self.one())
        if isinstance(x, CAdd):
            return self.add(self._bottom_up(x.left), self._bottom_up(x.right))
        if isinstance(x, CMul):
            return self.mul(self._bottom_up(x.left), self._bottom_up(x.right))
        if isinstance(x, CScale):
            return self.scale(x.scalar, self._bottom_up(x.arg))
        if isinstance(x, CStar):
            return self.adjoint(self._bottom_up(x.arg))
        raise TypeError(f"not a crossed expression: {x!r}")

    def to_expr(self, x: CrossedNormalForm) -> CrossedExpr:
        out: Optional[CrossedExpr] = None
        for g, a in x.terms:
            t = CMul(Pi(a), U(g))
            out = t if out is None else CAdd(out, t)
        return out if out is not None else CScalar(ZERO)

    # -- traces and norms -----------------------------------------------------
    def dual_trace(self, x: CrossedNormalForm, k: int):
        """Enclosures (re, im) of the dual trace, i.e. the state of the e-coefficient."""
        self._check(x)
        a = x.coeff(self.group.identity())
        if a is None:
            zero = RationalInterval.exact(0)
            return zero, zero
        return self.base.trace(a, k)

    def _sqrt_of_trace(self, y, k: int, factor=Fraction(1)) -> RationalInterval:
        target = Fraction(1, 2 ** k)
        j = 2 * k + 4
        for _ in range(16):
            re_, _ = self.dual_trace(y, j)
            iv = sqrt_interval(re_ * factor, k)
            if iv.width < target:
                return iv
            j += 8
        raise RuntimeError("trace enclosure did not tighten")

    def norm2(self, x: CrossedNormalForm, k: int) -> RationalInterval:
        """Enclosure of sqrt(tau(x^* x)), width < 2^-k."""
        return self._sqrt_of_trace(self.mul(self.adjoint(x), x), k)

    def sharp_norm(self, x: CrossedNormalForm, k: int) -> RationalInterval:
        """Enclosure of sqrt((tau(x^* x) + tau(x x^*)) / 2)."""
        xs = self.adjoint(x)
        y = self.add(self.mul(xs, x), self.mul(x, xs))
        return self._sqrt_of_trace(y, k, Fraction(1, 2))

    # -- dual action ------------------------------------------------------------
    def dual_action(self, p: Character, x: CrossedNormalForm) -> CrossedNormalForm:
        """Coefficientwise s -> conj(p(s)) a_s."""
        self._check(x)
        if not (self.group.is_finite() and self.group.is_abelian()):
            raise UnsupportedGroup("the dual action needs a finite abelian group")
        if p.group is not self.group:
            raise GroupError("character of a different group")
        return self._make({g: self.base.scale(p.conj_value(g), a) for g, a in x.terms})

    # -- text -----------------------------------------------------------------
    def format(self, x: CrossedNormalForm) -> str:
        if not x.terms:
            return "0"
        parts = []
        one = self.base.one()
        for g, a in x.terms:
            word = self.group.format(g.word)
            is_one = self.base.eq(a, one)
            if g.is_identity():
                parts.append("u[e]" if is_one else f"pi({self.base.format(a)})")
            else:
                parts.append(f"u[{word}]" if is_one else f"pi({self.base.format(a)}) u[{word}]")
        return " + ".join(parts)


def _star_letter(base: BaseAlgebra, letter):
    kind, val = letter
    if kind == "pi":
        return ("pi", base.adjoint(val))
    if kind == "u":
        return ("us", val)
    return ("u", val)


def random_expr(rng: random.Random, group: GroupSpec, leaf_poly, max_depth: int = 6) -> CrossedExpr:
    """A pseudo-random expression of depth <= max_depth.

    ``leaf_poly(rng)`` supplies StarPoly arguments for pi-leaves; group
    elements come from the first dozen elements of the group enumeration.
    """
    pool = group.enumerate(12)

    def leaf():
        r = rng.random()
        if r < 0.4:
            return Pi(leaf_poly(rng))
        if r < 0.85:
            return U(rng.choice(pool))
        return CScalar(Cyc.gauss(rng.randint(-2, 2), rng.randint(-2, 2)))

    def build(d):
        if d <= 1 or rng.random() < 0.25:
            return leaf()
        r = rng.random()
        if r < 0.45:
            return CMul(build(d - 1), build(d - 1))
        if r < 0.7:
            return CAdd(build(d - 1), build(d - 1))
        if r < 0.85:
            return CStar(build(d - 1))
        return CScale(Cyc.gauss(rng.randint(-2, 2), rng.randint(-1, 1)), build(d - 1))

    return build(max_depth)

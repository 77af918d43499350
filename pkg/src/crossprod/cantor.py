"""Cantor space C = {0,1}^N: cylinder codes, computable measures, computable actions.

A cylinder [w] is the set of sequences extending the finite binary word w.
Finite unions of cylinders are kept in a canonical prefix-free form, so two
codes are equal exactly when they denote the same set.

Actions are given by procedures that, for a generator and a word w, enumerate
binary words whose cylinders union to the image of [w].  The enumeration may be
infinite; measures of images are then bracketed from below by what has been
enumerated and from above by enumerating the image of the complement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .groups import FiniteGroup, GroupElement, GroupError, GroupSpec
from .intervals import RationalInterval


class BudgetExceeded(RuntimeError):
    """An enumeration did not close its gap within the configured budget."""


def word_of_index(n: int) -> str:
    """Shortlex enumeration of binary words: 0 -> '', 1 -> '0', 2 -> '1', 3 -> '00', ..."""
    if n < 0:
        raise ValueError("index must be non-negative")
    return bin(n + 1)[3:]


def index_of_word(w: str) -> int:
    _check_word(w)
    return int("1" + w, 2) - 1


def _check_word(w: str):
    if any(ch not in "01" for ch in w):
        raise ValueError(f"not a binary word: {w!r}")


def _key(w: str):
    return (len(w), w)


@dataclass(frozen=True)
class CylinderUnion:
    """Canonical prefix-free, sibling-merged set of words, sorted by (length, bits)."""

    words: tuple

    @classmethod
    def empty(cls) -> "CylinderUnion":
        return cls(())

    @classmethod
    def full(cls) -> "CylinderUnion":
        return cls(("",))

    @classmethod
    def cylinder(cls, w: str) -> "CylinderUnion":
        _check_word(w)
        return cls((w,))

    def is_empty(self) -> bool:
        return not self.words

    def is_full(self) -> bool:
        return self.words == ("",)

    def depth(self) -> int:
        return max((len(w) for w in self.words), default=0)

    def covers(self, x: str) -> bool:
        """Whether [x] lies inside the union (x at least as long as every word)."""
        return any(x.startswith(w) for w in self.words)

    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return len(self.words)

    def __or__(self, other):
        return join(self, other)

    def __and__(self, other):
        return meet(self, other)

    def __invert__(self):
        return complement(self)

    def __str__(self):
        return serialize_union(self)


def normalize(words: Iterable[str]) -> CylinderUnion:
    kept: set = set()
    for w in sorted(set(words), key=len):
        _check_word(w)
        if not any(w[:i] in kept for i in range(len(w))):
            kept.add(w)
    changed = True
    while changed:
        changed = False
        for w in sorted(kept, key=len, reverse=True):
            if w and w in kept:
                sib = w[:-1] + ("1" if w[-1] == "0" else "0")
                if sib in kept:
                    kept.discard(w)
                    kept.discard(sib)
                    kept.add(w[:-1])
                    changed = True
    return CylinderUnion(tuple(sorted(kept, key=_key)))


def _split(words):
    has_eps = "" in words
    w0 = [w[1:] for w in words if w.startswith("0")]
    w1 = [w[1:] for w in words if w.startswith("1")]
    return has_eps, w0, w1


def _complement_words(words) -> list:
    if "" in words:
        return []
    if not words:
        return [""]
    _, w0, w1 = _split(words)
    return ["0" + w for w in _complement_words(w0)] + ["1" + w for w in _complement_words(w1)]


def complement(U: CylinderUnion) -> CylinderUnion:
    return normalize(_complement_words(list(U.words)))


def _meet_words(a, b) -> list:
    if not a or not b:
        return []
    if "" in a:
        return list(b)
    if "" in b:
        return list(a)
    _, a0, a1 = _split(a)
    _, b0, b1 = _split(b)
    return ["0" + w for w in _meet_words(a0, b0)] + ["1" + w for w in _meet_words(a1, b1)]


def meet(U: CylinderUnion, V: CylinderUnion) -> CylinderUnion:
    return normalize(_meet_words(list(U.words), list(V.words)))


def join(U: CylinderUnion, V: CylinderUnion) -> CylinderUnion:
    return normalize(U.words + V.words)


def difference(U: CylinderUnion, V: CylinderUnion) -> CylinderUnion:
    return meet(U, complement(V))


def serialize_union(U: CylinderUnion) -> str:
    if U.is_empty():
        return "{}"
    return ",".join(w if w else "ε" for w in U.words)


def parse_union(text: str) -> CylinderUnion:
    """Parse '01,001'; 'ε' (or '.') is the empty word and '{}' the empty set."""
    t = text.strip()
    if t in ("{}", "∅", ""):
        return CylinderUnion.empty()
    words = []
    for part in t.split(","):
        part = part.strip()
        if part in ("ε", "."):
            part = ""
        _check_word(part)
        words.append(part)
    return normalize(words)


# ---------------------------------------------------------------------------
# computable measures


class MeasureOracle:
    """A computable probability measure on the cylinder sigma-algebra.

    Subclasses implement ``cylinder_interval``; exactly rational measures also
    implement ``exact_cylinder`` so unions get exact values.
    """

    def exact_cylinder(self, w: str) -> Optional[Fraction]:
        return None

    def cylinder_interval(self, w: str, k: int) -> RationalInterval:
        q = self.exact_cylinder(w)
        if q is None:
            raise NotImplementedError
        return RationalInterval.exact(q)

    def exact(self, U: CylinderUnion) -> Optional[Fraction]:
        total = Fraction(0)
        for w in U.words:
            q = self.exact_cylinder(w)
            if q is None:
                return None
            total += q
        return total


@dataclass(frozen=True)
class Bernoulli(MeasureOracle):
    """Product measure with P(bit = 1) = p."""

    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        if not 0 <= self.p <= 1:
            raise ValueError("Bernoulli parameter must lie in [0, 1]")

    def exact_cylinder(self, w):
        ones = w.count("1")
        return self.p ** ones * (1 - self.p) ** (len(w) - ones)


@dataclass(frozen=True)
class Markov(MeasureOracle):
    """Two-state Markov measure: mu[w] = initial[w0] * prod transition[w_i][w_i+1]."""

    initial: tuple
    transition: tuple

    def __post_init__(self):
        init = tuple(Fraction(x) for x in self.initial)
        trans = tuple(tuple(Fraction(x) for x in row) for row in self.transition)
        if len(init) != 2 or len(trans) != 2 or any(len(r) != 2 for r in trans):
            raise ValueError("Markov measure needs a 2-vector and a 2x2 matrix")
        if sum(init) != 1 or any(x < 0 for x in init):
            raise ValueError("initial distribution must be a probability vector")
        for row in trans:
            if sum(row) != 1 or any(x < 0 for x in row):
                raise ValueError("transition rows must be probability vectors")
        object.__setattr__(self, "initial", init)
        object.__setattr__(self, "transition", trans)

    def exact_cylinder(self, w):
        if not w:
            return Fraction(1)
        q = self.initial[int(w[0])]
        for a, b in zip(w, w[1:]):
            q *= self.transition[int(a)][int(b)]
        return q


def measure(m: MeasureOracle, U: CylinderUnion, k: int) -> RationalInterval:
    """Enclosure of mu(U) of width < 2^-k."""
    q = m.exact(U)
    if q is not None:
        return RationalInterval.exact(q)
    extra = max(len(U.words), 1).bit_length() + 1
    total = RationalInterval.exact(0)
    for w in U.words:
        total = total + m.cylinder_interval(w, k + extra)
    return total


# ---------------------------------------------------------------------------
# computable actions


def _dovetail(iters: Sequence[Iterator[str]]) -> Iterator[str]:
    active = list(iters)
    while active:
        still = []
        for it in active:
            try:
                yield next(it)
                still.append(it)
            except StopIteration:
                pass
        active = still


def _compose(outer: Callable[[str], Iterator[str]], inner: Iterator[str]) -> Iterator[str]:
    """Words of the union over v in inner of outer(v), enumerated fairly."""
    active: list = []
    inner_done = False
    while True:
        if not inner_done:
            try:
                active.append(outer(next(inner)))
            except StopIteration:
                inner_done = True
        if inner_done and not active:
            return
        still = []
        for it in active:
            try:
                yield next(it)
                still.append(it)
            except StopIteration:
                pass
        active = still


class ActionOracle:
    """A computable action of ``group`` on C.

    Subclasses implement ``letter_stream(gen, sign, w)``: an enumeration of
    words whose cylinders union to alpha_{gen^sign}([w]).  For finite groups
    given by a table every element is a letter (sign is always +1).
    """

    group: GroupSpec
    measure: Optional[MeasureOracle] = None

    def letter_stream(self, gen: int, sign: int, w: str) -> Iterator[str]:
        raise NotImplementedError

    def element_stream(self, g: GroupElement, w: str) -> Optional[Iterator[str]]:
        """Image of [w] under a whole element at once; None means compose letters."""
        return None

    def image_stream(self, g: GroupElement, w: str) -> Iterator[str]:
        self.group._check(g)
        _check_word(w)
        direct = self.element_stream(g, w)
        if direct is not None:
            return direct
        letters = self.group.letters(g.word)
        if isinstance(self.group, FiniteGroup):
            letters = [(i, 1) for i, _ in g.word]
        it: Iterator[str] = iter([w])
        for gen, sign in reversed(letters):
            it = _compose(lambda v, gen=gen, sign=sign: self.letter_stream(gen, sign, v), it)
        return it

    def union_stream(self, g: GroupElement, U: CylinderUnion) -> Iterator[str]:
        return _dovetail([self.image_stream(g, w) for w in U.words])


EAGER_FREE = 12


def _perm_image(perm: dict, w: str):
    # y_{perm(i)} = w_i for i < |w|; unconstrained coordinates are free
    if not w:
        return [""]
    fixed = {perm.get(i, i): w[i] for i in range(len(w))}
    length = max(fixed) + 1
    free = [j for j in range(length) if j not in fixed]

    def words():
        for bits in itertools.product("01", repeat=len(free)):
            y = dict(fixed)
            y.update(zip(free, bits))
            yield "".join(y[j] for j in range(length))

    if len(free) > EAGER_FREE:
        # still a finite union, but too large to canonicalize up front
        return words()
    return list(normalize(words()).words)


def _check_perm(perm: dict) -> dict:
    perm = {int(a): int(b) for a, b in perm.items() if int(a) != int(b)}
    if sorted(perm) != sorted(perm.values()):
        raise ValueError(f"not a finitely supported permutation of N: {perm}")
    return perm


def _invert(perm: dict) -> dict:
    return {b: a for a, b in perm.items()}


def _compose_perm(p: dict, q: dict) -> dict:
    """p after q."""
    keys = set(p) | set(q)
    out = {}
    for i in keys:
        j = p.get(q.get(i, i), q.get(i, i))
        if j != i:
            out[i] = j
    return out


def _close_over_finite_group(group: GroupSpec, images: dict, compose, identity, eq) -> dict:
    """Extend generator images to a homomorphism on all of a finite group.

    ``images`` maps GroupElements to transformations; compose(a, b) is "a then
    applied after b".  Raises GroupError if the data is not a homomorphism.
    """
    out = {group.identity(): identity}
    for g, x in images.items():
        if g in out and not eq(out[g], x):
            raise GroupError(f"inconsistent image given for {g}")
        out[g] = x
    gens = list(images)
    frontier = list(out)
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                gh = g * h
                val = compose(images[g], out[h])
                if gh in out:
                    if not eq(out[gh], val):
                        raise GroupError(f"generator data is not a homomorphism (at {gh})")
                else:
                    out[gh] = val
                    nxt.append(gh)
        frontier = nxt
    if len(out) != group.order():
        raise GroupError("generator data does not generate the group")
    return out


class CoordinatePermutation(ActionOracle):
    """alpha_g(x)_{sigma_g(i)} = x_i for finitely supported permutations sigma_g.

    For a finite group pass permutations for a generating set of elements;
    they are extended to every element and checked to form a homomorphism.
    For infinite groups pass one permutation per generator.
    """

    def __init__(self, group: GroupSpec, perms: dict, measure: Optional[MeasureOracle] = None):
        self.group = group
        self.measure = measure
        self.elem_perms = None
        if group.is_finite():
            gen_perms = {_as_element(group, g): _check_perm(p) for g, p in perms.items()}
            self.elem_perms = _close_over_finite_group(group, gen_perms, _compose_perm, {},
                                                       lambda a, b: a == b)
        else:
            self.perms = {int(i): _check_perm(p) for i, p in perms.items()}
            self.inv_perms = {i: _invert(p) for i, p in self.perms.items()}

    def element_stream(self, g, w):
        if self.elem_perms is None:
            return None
        return iter(_perm_image(self.elem_perms[g], w))

    def letter_stream(self, gen, sign, w):
        p = self.perms[gen] if sign > 0 else self.inv_perms[gen]
        return iter(_perm_image(p, w))


def _as_element(group: GroupSpec, g) -> GroupElement:
    """A group element given as an element, a name/word, or (for generators) an index."""
    if isinstance(g, GroupElement):
        return g
    if isinstance(g, int):
        return group.gen(g)
    return group.parse(str(g))


def swap(i: int, j: int) -> dict:
    return {i: j, j: i}


def _xor(w: str, mask: str) -> str:
    return "".join(str(int(a) ^ int(mask[i])) if i < len(mask) else a for i, a in enumerate(w))


class XorAction(ActionOracle):
    """Each letter flips a fixed finite set of coordinates (XOR with a mask).

    Preserves Bernoulli(1/2).  For a finite group, masks for generating
    elements are extended to a homomorphism into (Z/2)^N.
    """

    def __init__(self, group: GroupSpec, masks: dict, measure: Optional[MeasureOracle] = None):
        self.group = group
        self.measure = measure if measure is not None else Bernoulli(Fraction(1, 2))

        def xor_masks(a, b):
            n = max(len(a), len(b))
            a, b = a.ljust(n, "0"), b.ljust(n, "0")
            return "".join(str(int(x) ^ int(y)) for x, y in zip(a, b)).rstrip("0")

        self.elem_masks = None
        if group.is_finite():
            gen_masks = {_as_element(group, g): str(m).rstrip("0") for g, m in masks.items()}
            self.elem_masks = _close_over_finite_group(group, gen_masks, xor_masks, "",
                                                       lambda a, b: a == b)
        else:
            self.masks = {int(i): str(m) for i, m in masks.items()}

    def element_stream(self, g, w):
        if self.elem_masks is None:
            return None
        return iter([_xor(w, self.elem_masks[g])])

    def letter_stream(self, gen, sign, w):
        return iter([_xor(w, self.masks[gen])])


class Odometer(ActionOracle):
    """Z acting on C by binary addition with carry (first bit least significant).

    The stream only emits cylinders whose image is decided by a finite prefix,
    so the image of [1^n] under +1 is the infinite union of [0^(n+m) 1].
    """

    def __init__(self, group: Optional[GroupSpec] = None):
        from .groups import FreeAbelian

        self.group = group if group is not None else FreeAbelian(1)
        if self.group.ngens != 1 or self.group.is_finite():
            raise GroupError("the odometer is an action of Z")
        self.measure = Bernoulli(Fraction(1, 2))

    def letter_stream(self, gen, sign, w):
        carry, flip = ("1", "0") if sign > 0 else ("0", "1")
        j = w.find(flip)
        if j >= 0:
            return iter([flip * j + carry + w[j + 1:]])
        n = len(w)
        return (flip * (n + m) + carry for m in itertools.count())


class BernoulliShift(ActionOracle):
    """G acting on {0,1}^G, identified with C through the enumeration of G.

    (g.x)_h = x_{g^-1 h}, i.e. coordinate n (element s_n) is carried to the
    coordinate of g s_n.  For finite G the coordinates past |G| are fixed.
    """

    def __init__(self, group: GroupSpec, measure: Optional[MeasureOracle] = None):
        self.group = group
        self.measure = measure if measure is not None else Bernoulli(Fraction(1, 2))
        self._perm_cache: dict = {}

    def _letter_element(self, gen, sign):
        if isinstance(self.group, FiniteGroup):
            return self.group.element_of(gen)
        g = self.group.gen(gen)
        return g if sign > 0 else g.inverse()

    def perm_prefix(self, gen, sign, length: int) -> dict:
        g = self._letter_element(gen, sign)
        order = self.group.order()
        out = {}
        if length == 0:
            return out
        elems = self.group.enumerate(length if order is None else min(length, order))
        for i, s in enumerate(elems):
            j = self.group.index(g * s)
            if j != i:
                out[i] = j
        return out

    def element_stream(self, g, w):
        if not self.group.is_finite():
            return None
        elems = self.group.elements()[:len(w)]
        perm = {i: self.group.index(g * s) for i, s in enumerate(elems)}
        return iter(_perm_image({i: j for i, j in perm.items() if i != j}, w))

    def letter_stream(self, gen, sign, w):
        return iter(_perm_image(self.perm_prefix(gen, sign, len(w)), w))


def _close_gap(action: ActionOracle, m: MeasureOracle, g: GroupElement, U: CylinderUnion,
               k: int, budget: int):
    """Bracket mu(alpha_g(U)); returns (interval, lower union, exact flag)."""
    target = Fraction(1, 2 ** k)
    low_it = action.union_stream(g, U)
    up_it = action.union_stream(g, complement(U))
    low_words: list = []
    up_words: list = []
    low_done = up_done = False
    spent = 0
    batch = 1
    while True:
        for _ in range(batch):
            if not low_done:
                try:
                    low_words.append(next(low_it))
                    spent += 1
                except StopIteration:
                    low_done = True
            if not up_done:
                try:
                    up_words.append(next(up_it))
                    spent += 1
                except StopIteration:
                    up_done = True
        low_union = normalize(low_words)
        up_union = normalize(up_words)
        lo_iv = measure(m, low_union, k + 2)
        up_iv = measure(m, up_union, k + 2)
        if low_done:
            return lo_iv, low_union, True
        if up_done:
            return 1 - up_iv, low_union, True
        lo, hi = lo_iv.lo, 1 - up_iv.lo
        hi = max(hi, lo)
        if hi - lo < target:
            return RationalInterval(lo, hi), low_union, False
        if spent >= budget:
            raise BudgetExceeded(
                f"image measure gap {hi - lo} still open after {spent} cylinders")
        batch = min(batch * 2, 1024)


def lower_image(action: ActionOracle, m: MeasureOracle, g: GroupElement, U: CylinderUnion,
                k: int, budget: int = 100_000):
    """A finite union L inside alpha_g(U) with mu(alpha_g(U) minus L) < 2^-k.

    Returns (L, gap) where gap is a rational upper bound on the missing mass.
    """
    target = Fraction(1, 2 ** k)
    low_it = action.union_stream(g, U)
    up_it = action.union_stream(g, complement(U))
    low_words: list = []
    up_words: list = []
    low_done = up_done = False
    spent = 0
    batch = 1
    while True:
        for _ in range(batch):
            if not low_done:
                try:
                    low_words.append(next(low_it))
                    spent += 1
                except StopIteration:
                    low_done = True
            if not up_done:
                try:
                    up_words.append(next(up_it))
                    spent += 1
                except StopIteration:
                    up_done = True
        low_union = normalize(low_words)
        if low_done:
            return low_union, Fraction(0)
        up_union = normalize(up_words)
        lo = measure(m, low_union, k + 2).lo
        hi = 1 - measure(m, up_union, k + 2).lo
        gap = max(hi - lo, Fraction(0))
        if gap < target:
            return low_union, gap
        if spent >= budget:
            raise BudgetExceeded(
                f"image gap {gap} still open after {spent} cylinders")
        batch = min(batch * 2, 1024)


def image_measure(action: ActionOracle, m: MeasureOracle, g: GroupElement, U: CylinderUnion,
                  k: int, budget: int = 100_000) -> RationalInterval:
    """Enclosure of mu(alpha_g(U)) of width < 2^-k.

    Lower bounds come from the enumerated part of alpha_g(U); upper bounds are
    1 minus the enumerated measure of alpha_g(complement of U).
    """
    iv, _, _ = _close_gap(action, m, g, U, k, budget)
    if iv.width >= Fraction(1, 2 ** k):
        # rounding slack of an inexact measure oracle; tighten once
        iv, _, _ = _close_gap(action, m, g, U, k + 2, budget)
    return iv


def image_union(action: ActionOracle, g: GroupElement, U: CylinderUnion, limit: int = 256):
    """alpha_g(U) if its enumeration is finite within ``limit`` words, else None."""
    words = []
    for w in action.union_stream(g, U):
        words.append(w)
        if len(words) > limit:
            return None
    return normalize(words)

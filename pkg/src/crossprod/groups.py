"""Discrete groups with a solvable word problem.

Elements are stored as canonical words, so deciding equality of two group
elements is comparing tuples.  Supported kinds are finite groups given by a
Cayley table, free abelian groups, free groups, direct products of these, and
user groups supplying their own canonical-form procedure.

The enumeration order of every group is fixed (identity first) because the
special points of crossed-product presentations are indexed through it.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .scalars import Cyc

Word = tuple  # tuple of (generator index, nonzero exponent)


class GroupError(ValueError):
    """Structural misuse: mismatched groups, malformed words, bad tables."""


class UnsupportedGroup(ValueError):
    """The requested operation needs a finite (abelian) group."""


def zigzag(i: int) -> int:
    """The i-th integer in the order 0, 1, -1, 2, -2, ..."""
    return (i + 1) // 2 if i % 2 else -(i // 2)


def zigzag_index(z: int) -> int:
    return 2 * z - 1 if z > 0 else -2 * z


class GroupSpec:
    """Base class; subclasses define ``canon`` and the enumeration."""

    names: tuple = ()

    def __init__(self):
        self._cache = {}

    # -- interface for subclasses --------------------------------------
    def canon(self, word: Word) -> Word:
        raise NotImplementedError

    def _iter_words(self) -> Iterator[Word]:
        raise NotImplementedError

    def order(self) -> Optional[int]:
        return None

    def is_abelian(self) -> bool:
        raise NotImplementedError

    # -- shared machinery ----------------------------------------------
    @property
    def ngens(self) -> int:
        return len(self.names)

    def modulus(self, g: "GroupElement") -> int:
        # discrete groups are unimodular
        return 1

    def is_finite(self) -> bool:
        return self.order() is not None

    def identity(self) -> "GroupElement":
        return GroupElement(self, ())

    def element(self, word) -> "GroupElement":
        word = tuple((int(g), int(e)) for g, e in word)
        for g, _ in word:
            if not 0 <= g < self.ngens:
                raise GroupError(f"generator index {g} out of range for {self}")
        return GroupElement(self, self.canon(word))

    def gen(self, i: int) -> "GroupElement":
        return self.element(((i, 1),))

    def mul_words(self, a: Word, b: Word) -> Word:
        return self.canon(a + b)

    def inv_word(self, a: Word) -> Word:
        return self.canon(tuple((g, -e) for g, e in reversed(a)))

    def letters(self, word: Word):
        """The word spelled out as single letters (gen, +1 or -1)."""
        out = []
        for g, e in word:
            out.extend([(g, 1 if e > 0 else -1)] * abs(e))
        return out

    def iter_elements(self) -> Iterator["GroupElement"]:
        for w in self._iter_words():
            yield GroupElement(self, w)

    def enumerate(self, n: int) -> list:
        """The first n elements of the fixed enumeration (element 0 is e)."""
        if n < 1:
            raise ValueError("n must be at least 1")
        seen = self._cache.setdefault("enum", [])
        if len(seen) < n:
            it = self._cache.get("enum_iter")
            if it is None:
                it = self._iter_words()
                self._cache["enum_iter"] = it
            for w in it:
                seen.append(GroupElement(self, w))
                if len(seen) >= n:
                    break
        return seen[:n]

    def elements(self) -> list:
        n = self.order()
        if n is None:
            raise UnsupportedGroup(f"{self} is infinite")
        return self.enumerate(n)

    def index(self, g: "GroupElement", limit: int = 10 ** 6) -> int:
        """Position of g in the enumeration."""
        self._check(g)
        idx = self._cache.setdefault("index", {})
        if g.word in idx:
            return idx[g.word]
        step = 16
        while True:
            n = len(self._cache.get("enum", []))
            bound = self.order()
            target = n + step if bound is None else min(bound, n + step)
            for i, h in enumerate(self.enumerate(max(target, 1))):
                idx.setdefault(h.word, i)
            if g.word in idx:
                return idx[g.word]
            if bound is not None and target >= bound or target > limit:
                raise GroupError(f"{g} not found in the enumeration of {self}")
            step *= 2

    def _check(self, g):
        if not isinstance(g, GroupElement) or g.spec is not self:
            raise GroupError(f"{g!r} is not an element of {self}")

    # -- text -----------------------------------------------------------
    def format(self, word: Word) -> str:
        if not word:
            return "e"
        parts = []
        for g, e in word:
            parts.append(self.names[g] if e == 1 else f"{self.names[g]}^{e}")
        return " ".join(parts)

    def parse(self, text: str) -> "GroupElement":
        """Parse a product of generators, e.g. 'a b^-1 a^2', 's*s', 'e'."""
        tokens = [t for t in re.split(r"[\s*.]+", text.strip()) if t]
        if not tokens:
            raise GroupError("empty group word")
        word = []
        for tok in tokens:
            word.extend(self._parse_token(tok))
        return GroupElement(self, self.canon(tuple(word)))

    def _parse_token(self, tok: str):
        if tok == "e" and "e" not in self.names:
            return []
        if tok in self.names:
            return [(self.names.index(tok), 1)]
        m = re.fullmatch(r"(.+?)\^\(?([+-]?\d+)\)?", tok)
        if m and m.group(1) in self.names:
            e = int(m.group(2))
            return [(self.names.index(m.group(1)), e)] if e else []
        if m and m.group(1) == "e":
            return []
        raise GroupError(f"unknown generator {tok!r} (known: {', '.join(self.names)})")


@dataclass(frozen=True, eq=True)
class GroupElement:
    spec: GroupSpec
    word: Word

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.spec is not self.spec:
            raise GroupError("cannot multiply elements of different groups")
        return GroupElement(self.spec, self.spec.mul_words(self.word, other.word))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.spec, self.spec.inv_word(self.word))

    def __pow__(self, k: int) -> "GroupElement":
        out = self.spec.identity()
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return not self.word

    def __hash__(self):
        return hash((id(self.spec), self.word))

    def __eq__(self, other):
        return isinstance(other, GroupElement) and other.spec is self.spec and other.word == self.word

    def __str__(self):
        return self.spec.format(self.word)

    def __repr__(self):
        return f"<{self.spec.format(self.word)}>"


def mul(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def is_identity(a: GroupElement) -> bool:
    return a.is_identity()


def enumerate_group(spec: GroupSpec, n: int) -> list:
    return spec.enumerate(n)


# ---------------------------------------------------------------------------
# finite groups


class FiniteGroup(GroupSpec):
    """A finite group given by its Cayley table; every element is a generator."""

    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0, names=None, label=None):
        super().__init__()
        table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise GroupError("Cayley table must be a non-empty square")
        if any(not 0 <= x < n for row in table for x in row):
            raise GroupError("Cayley table entries out of range")
        if not 0 <= identity < n:
            raise GroupError("identity index out of range")
        for a in range(n):
            if table[identity][a] != a or table[a][identity] != a:
                raise GroupError(f"index {identity} is not an identity")
        inv = []
        for a in range(n):
            cands = [b for b in range(n) if table[a][b] == identity]
            if len(cands) != 1 or table[cands[0]][a] != identity:
                raise GroupError(f"element {a} has no two-sided inverse")
            inv.append(cands[0])
        for a, b, c in itertools.product(range(n), repeat=3):
            if table[table[a][b]][c] != table[a][table[b][c]]:
                raise GroupError(f"table is not associative at ({a}, {b}, {c})")
        self.table = table
        self.identity_index = identity
        self.inv = tuple(inv)
        if names is None:
            names = ["e" if i == identity else f"x{i}" for i in range(n)]
        if len(names) != n or len(set(names)) != n:
            raise GroupError("need one distinct name per element")
        self.names = tuple(names)
        self.label = label or f"FiniteGroup({n})"

    def __repr__(self):
        return self.label

    def order(self):
        return len(self.table)

    def is_abelian(self):
        n = len(self.table)
        return all(self.table[a][b] == self.table[b][a] for a in range(n) for b in range(n))

    def _pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv[a], -e
        r = self.identity_index
        for _ in range(e):
            r = self.table[r][a]
        return r

    def value(self, word: Word) -> int:
        r = self.identity_index
        for g, e in word:
            r = self.table[r][self._pow(g, e)]
        return r

    def canon(self, word):
        r = self.value(word)
        return () if r == self.identity_index else ((r, 1),)

    def _iter_words(self):
        yield ()
        for i in range(len(self.table)):
            if i != self.identity_index:
                yield ((i, 1),)

    def element_of(self, index: int) -> GroupElement:
        return GroupElement(self, () if index == self.identity_index else ((index, 1),))

    def index_of(self, g: GroupElement) -> int:
        self._check(g)
        return self.identity_index if not g.word else g.word[0][0]

    def format(self, word):
        return self.names[self.value(word)]

    def letters(self, word):
        return [(g, 1) for g, _ in word]


def cyclic(n: int, name: str = "s") -> FiniteGroup:
    names = ["e"] + [name if k == 1 else f"{name}^{k}" for k in range(1, n)]
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(table, 0, names, label=f"Z/{n}")


def symmetric_group(n: int = 3) -> FiniteGroup:
    perms = sorted(itertools.permutations(range(n)))
    ident = perms.index(tuple(range(n)))
    pos = {p: i for i, p in enumerate(perms)}
    table = [[pos[tuple(a[b[i]] for i in range(n))] for b in perms] for a in perms]
    names = ["e" if p == tuple(range(n)) else "p" + "".join(map(str, p)) for p in perms]
    return FiniteGroup(table, ident, names, label=f"S{n}")


# ---------------------------------------------------------------------------
# infinite finitely generated groups


def _default_names(rank: int) -> tuple:
    return ("g",) if rank == 1 else tuple(f"g{i + 1}" for i in range(rank))


class FreeAbelian(GroupSpec):
    """Z^rank; canonical words are sorted exponent vectors without zeros."""

    def __init__(self, rank: int, names=None):
        super().__init__()
        if rank < 0:
            raise GroupError("rank must be non-negative")
        self.rank = rank
        self.names = tuple(names) if names else _default_names(rank)

    def __repr__(self):
        return "Z" if self.rank == 1 else f"Z^{self.rank}"

    def is_abelian(self):
        return True

    def order(self):
        return 1 if self.rank == 0 else None

    def canon(self, word):
        exps = [0] * self.rank
        for g, e in word:
            exps[g] += e
        return tuple((g, e) for g, e in enumerate(exps) if e)

    def vector(self, word) -> tuple:
        exps = [0] * self.rank
        for g, e in word:
            exps[g] += e
        return tuple(exps)

    def from_vector(self, vec) -> GroupElement:
        return GroupElement(self, tuple((g, e) for g, e in enumerate(vec) if e))

    def _iter_words(self):
        if self.rank == 0:
            yield ()
            return
        for grade in itertools.count():
            vecs = [v for v in _vectors_of_norm(self.rank, grade)]
            vecs.sort(key=lambda v: tuple(zigzag_index(x) for x in v))
            for v in vecs:
                yield tuple((g, e) for g, e in enumerate(v) if e)


def _vectors_of_norm(rank: int, norm: int):
    if rank == 1:
        yield (norm,)
        if norm:
            yield (-norm,)
        return
    for first in range(-norm, norm + 1):
        for rest in _vectors_of_norm(rank - 1, norm - abs(first)):
            yield (first,) + rest


class Free(GroupSpec):
    """The free group of the given rank; canonical words are freely reduced."""

    def __init__(self, rank: int, names=None):
        super().__init__()
        self.rank = rank
        self.names = tuple(names) if names else _default_names(rank)

    def __repr__(self):
        return f"F{self.rank}"

    def is_abelian(self):
        return self.rank <= 1

    def order(self):
        return 1 if self.rank == 0 else None

    def canon(self, word):
        out = []
        for g, e in word:
            if e == 0:
                continue
            if out and out[-1][0] == g:
                e2 = out[-1][1] + e
                out.pop()
                if e2:
                    out.append((g, e2))
            else:
                out.append((g, e))
        return tuple(out)

    def _iter_words(self):
        letters = [(g, s) for g in range(self.rank) for s in (1, -1)]
        layer = [()]
        yield ()
        if not letters:
            return
        while True:
            nxt = []
            for w in layer:
                last = w[-1] if w else None
                for g, s in letters:
                    if last is not None and last[0] == g and (last[1] > 0) != (s > 0):
                        continue
                    if last is not None and last[0] == g:
                        nw = w[:-1] + ((g, last[1] + s),)
                    else:
                        nw = w + ((g, s),)
                    nxt.append(nw)
                    yield nw
            layer = nxt


class CustomGroup(GroupSpec):
    """Extension point: a user-supplied canonical-form procedure on words.

    ``canon`` must map every word to a canonical representative such that two
    words denote the same element exactly when their canonical forms agree.
    """

    def __init__(self, names, canon: Callable[[Word], Word], order=None, abelian=False, label="Custom"):
        super().__init__()
        self.names = tuple(names)
        self._canon = canon
        self._order = order
        self._abelian = abelian
        self.label = label

    def __repr__(self):
        return self.label

    def canon(self, word):
        return tuple(self._canon(tuple(word)))

    def order(self):
        return self._order

    def is_abelian(self):
        return self._abelian

    def _iter_words(self):
        seen = set()
        letters = [((g, s),) for g in range(self.ngens) for s in (1, -1)]
        for length in itertools.count():
            for combo in itertools.product(letters, repeat=length):
                w = self.canon(sum(combo, ()))
                if w not in seen:
                    seen.add(w)
                    yield w
                    if self._order is not None and len(seen) >= self._order:
                        return


class DirectProduct(GroupSpec):
    """Direct product; generators are the factors' generators in order."""

    def __init__(self, factors: Sequence[GroupSpec]):
        super().__init__()
        if not factors:
            raise GroupError("direct product needs at least one factor")
        self.factors = tuple(factors)
        self.offsets = []
        names = []
        off = 0
        for f in self.factors:
            self.offsets.append(off)
            off += f.ngens
            names.extend(f.names)
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            renamed = []
            for i, f in enumerate(self.factors):
                renamed.extend(n if n not in dup else f"{n}_{i + 1}" for n in f.names)
            names = renamed
        self.names = tuple(names)

    def __repr__(self):
        return " x ".join(repr(f) for f in self.factors)

    def order(self):
        out = 1
        for f in self.factors:
            o = f.order()
            if o is None:
                return None
            out *= o
        return out

    def is_abelian(self):
        return all(f.is_abelian() for f in self.factors)

    def split(self, word) -> list:
        parts = [[] for _ in self.factors]
        for g, e in word:
            for i in range(len(self.factors) - 1, -1, -1):
                if g >= self.offsets[i]:
                    parts[i].append((g - self.offsets[i], e))
                    break
        return [tuple(p) for p in parts]

    def join(self, parts) -> Word:
        out = []
        for i, p in enumerate(parts):
            out.extend((g + self.offsets[i], e) for g, e in p)
        return tuple(out)

    def canon(self, word):
        return self.join(f.canon(p) for f, p in zip(self.factors, self.split(word)))

    def components(self, g: GroupElement) -> list:
        self._check(g)
        return [GroupElement(f, p) for f, p in zip(self.factors, self.split(g.word))]

    def from_components(self, comps) -> GroupElement:
        return GroupElement(self, self.join(c.word for c in comps))

    def letters(self, word):
        out = []
        for i, (f, p) in enumerate(zip(self.factors, self.split(word))):
            out.extend((g + self.offsets[i], s) for g, s in f.letters(p))
        return out

    def format(self, word):
        if not word:
            return "e"
        parts = []
        for i, (f, p) in enumerate(zip(self.factors, self.split(word))):
            if p:
                if isinstance(f, FiniteGroup):
                    parts.append(self.names[self.offsets[i] + f.value(p)])
                else:
                    for g, e in p:
                        nm = self.names[self.offsets[i] + g]
                        parts.append(nm if e == 1 else f"{nm}^{e}")
        return " ".join(parts)

    def _iter_words(self):
        lists = [[] for _ in self.factors]
        iters = [f._iter_words() for f in self.factors]
        done = [False] * len(self.factors)

        def get(i, j):
            while len(lists[i]) <= j and not done[i]:
                try:
                    lists[i].append(next(iters[i]))
                except StopIteration:
                    done[i] = True
            return lists[i][j] if j < len(lists[i]) else None

        k = len(self.factors)
        for total in itertools.count():
            emitted = False
            exhausted = True
            for idx in _compositions(total, k):
                ws = [get(i, j) for i, j in enumerate(idx)]
                if any(w is None for w in ws):
                    continue
                exhausted = False
                emitted = True
                yield self.join(ws)
            if exhausted and not emitted and all(done):
                return


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# Pontryagin duality for finite abelian groups


class Character:
    """A homomorphism G -> roots of unity; values stored as (k, n) = e^(2 pi i k/n)."""

    def __init__(self, group: GroupSpec, values: dict):
        self.group = group
        self.values = {g: _reduce_root(k, n) for g, (k, n) in values.items()}

    def exponent(self, g: GroupElement):
        self.group._check(g)
        return self.values[g]

    def __call__(self, g: GroupElement) -> Cyc:
        k, n = self.exponent(g)
        return Cyc.root_of_unity(k, n)

    def conj_value(self, g: GroupElement) -> Cyc:
        k, n = self.exponent(g)
        return Cyc.root_of_unity(-k, n)

    def __mul__(self, other: "Character") -> "Character":
        if other.group is not self.group:
            raise GroupError("characters of different groups")
        out = {}
        for g, (k1, n1) in self.values.items():
            k2, n2 = other.values[g]
            n = n1 * n2 // math.gcd(n1, n2)
            out[g] = (k1 * (n // n1) + k2 * (n // n2), n)
        return Character(self.group, out)

    def conj(self) -> "Character":
        return Character(self.group, {g: (-k, n) for g, (k, n) in self.values.items()})

    def is_trivial(self) -> bool:
        return all(k == 0 for k, _ in self.values.values())

    def _key(self):
        return tuple(sorted((g.word, kn) for g, kn in self.values.items()))

    def __eq__(self, other):
        return isinstance(other, Character) and other.group is self.group and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        items = ", ".join(f"{g}: {Fraction(k, n)}" for g, (k, n) in self.values.items())
        return f"Character({items})"


def _reduce_root(k: int, n: int):
    k %= n
    g = math.gcd(k, n)
    return (k // g, n // g) if k else (0, 1)


def _element_order(g: GroupElement) -> int:
    h, k = g, 1
    while not h.is_identity():
        h, k = h * g, k + 1
    return k


def characters(spec: GroupSpec) -> list:
    """All |G| characters of a finite abelian group, trivial character first."""
    if spec.order() is None:
        raise UnsupportedGroup(f"{spec} is infinite; its dual is not finite")
    if not spec.is_abelian():
        raise UnsupportedGroup(f"{spec} is not abelian")
    cached = spec._cache.get("characters")
    if cached is not None:
        return cached
    elems = spec.elements()
    ident = spec.identity()
    # greedy generating set and a spelling of every element in it
    gens: list = []
    span = {ident}
    for g in elems:
        if g not in span:
            gens.append(g)
            span = _closure(span, gens)
    spelled = {ident: (0,) * len(gens)}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for i, g in enumerate(gens):
                hg = h * g
                if hg not in spelled:
                    vec = list(spelled[h])
                    vec[i] += 1
                    spelled[hg] = tuple(vec)
                    nxt.append(hg)
        frontier = nxt
    orders = [_element_order(g) for g in gens]
    m = 1
    for o in orders:
        m = m * o // math.gcd(m, o)
    out = []
    for ks in itertools.product(*[range(0, m, m // o) for o in orders]):
        vals = {h: (sum(k * c for k, c in zip(ks, vec)) % m, m) for h, vec in spelled.items()}
        if all((vals[a][0] + vals[b][0]) % m == vals[a * b][0] for a in elems for b in elems):
            out.append(Character(spec, vals))
    if len(out) != len(elems):
        raise AssertionError("character count does not match group order")
    spec._cache["characters"] = out
    return out


def _closure(span: set, gens: list) -> set:
    out = set(span)
    frontier = list(out)
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                hg = h * g
                if hg not in out:
                    out.add(hg)
                    nxt.append(hg)
        frontier = nxt
    return out


def fourier(f: dict, spec: GroupSpec) -> dict:
    """f_hat(p) = sum_s f(s) conj(p(s)) with counting measure on G."""
    out = {}
    for p in characters(spec):
        acc = Cyc.rational(0)
        for s, v in f.items():
            acc = acc + Cyc.coerce(v) * p.conj_value(s)
        out[p] = acc
    return out


def inverse_fourier(fhat: dict, spec: GroupSpec) -> dict:
    """f(s) = (1/|G|) sum_p f_hat(p) p(s); counting measure / |G| on the dual."""
    n = spec.order()
    out = {}
    for s in spec.elements():
        acc = Cyc.rational(0)
        for p, v in fhat.items():
            acc = acc + Cyc.coerce(v) * p(s)
        out[s] = acc / n
    return out

"""Axiom schemas for G-actions on tracial/weighted algebras, as structured sentences.

Discrete schemas D1-D6 (for every s, r in G, n >= 1 and Gaussian rational
lambda) say that each alpha_s is an additive, multiplicative, *-preserving,
C-linear map, that s -> alpha_s is a homomorphism, and that alpha_s preserves
the inner product <x, y> = Phi(y^* x).  The L^1-sorted schemas L1-L4 talk
about sorts S_{f,n} = pi_f(S_n) indexed by points of an L^1 presentation.

Every sentence is a condition "value = 0" (or "value <= 0"); ``check``
evaluates the value on a finite-dimensional model by sampling the sort balls
and returns a rational lower bound for the worst sample, clamped at 0.

Sentence bodies are nested tuples ``(head, arg, ...)`` and serialize to
s-expressions, one sentence per line, schema tag first.
"""

from __future__ import annotations

import itertools
import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional

from .enumeration import gaussian_of_index
from .findim import FinBase
from .groups import GroupElement, GroupError, GroupSpec, UnsupportedGroup, cyclic
from .intervals import RationalInterval, sqrt_lower, sqrt_upper
from .l1group import (L1Discrete, L1DiscretePresentation, L1RealPresentation, convolve,
                      involution, l1_norm)
from .linalg import KMat
from .scalars import Cyc, ONE

DISCRETE_SCHEMAS = ("D1", "D2", "D3", "D4", "D5", "D6")
L1_SCHEMAS = ("L1", "L2", "L3", "L4")
NORM_BITS = 40


@dataclass(frozen=True)
class AxiomSentence:
    """One instance of an axiom schema.

    ``params`` is an ordered tuple of (name, value) pairs; ``body`` is the
    term tree whose value must vanish (or be <= 0 for the L3/L4 bounds).
    """

    schema: str
    group: str
    params: tuple
    body: tuple
    reconstructed: bool = False

    def param(self, name: str):
        for k, v in self.params:
            if k == name:
                return v
        raise KeyError(name)

    def to_text(self) -> str:
        items = [self.schema, ("group", self.group)]
        items.extend((k, v) for k, v in self.params)
        if self.reconstructed:
            items.append(("reconstructed",))
        items.append(("body", self.body))
        return write_sexpr(tuple(items))

    def __str__(self):
        return self.to_text()

    @classmethod
    def from_text(cls, text: str) -> "AxiomSentence":
        tree = read_sexpr(text)
        if not isinstance(tree, tuple) or not tree or tree[0] not in DISCRETE_SCHEMAS + L1_SCHEMAS:
            raise ValueError("a sentence starts with its schema tag")
        group = None
        body = None
        reconstructed = False
        params = []
        for item in tree[1:]:
            if not isinstance(item, tuple) or not item:
                raise ValueError(f"malformed sentence field {item!r}")
            if item[0] == "group":
                group = item[1]
            elif item[0] == "body":
                body = item[1]
            elif item[0] == "reconstructed":
                reconstructed = True
            else:
                params.append((item[0], item[1]))
        if group is None or body is None:
            raise ValueError("a sentence needs group and body fields")
        return cls(tree[0], group, tuple(params), body, reconstructed)


# ---------------------------------------------------------------------------
# s-expressions

_TOKEN = re.compile(r'\s*(?:(\()|(\))|"((?:[^"\\]|\\.)*)"|([^\s()"]+))')
_NUMBER = re.compile(r"-?\d+(?:/\d+)?$")
_BARE = re.compile(r"[A-Za-z0-9_+\-*/^.<=]+$")


def write_sexpr(x) -> str:
    if isinstance(x, tuple):
        return "(" + " ".join(write_sexpr(a) for a in x) + ")"
    if isinstance(x, bool):
        raise TypeError("booleans are not part of the sentence syntax")
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, str):
        if _BARE.match(x) and not _NUMBER.match(x):
            return x
        return '"' + x.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"cannot serialize {x!r}")


def read_sexpr(text: str):
    pos = 0
    stack: List[list] = [[]]
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ValueError(f"unexpected text at column {pos + 1}")
            break
        pos = m.end()
        if m.group(1):
            stack.append([])
        elif m.group(2):
            if len(stack) == 1:
                raise ValueError(f"unbalanced ')' at column {pos}")
            done = tuple(stack.pop())
            stack[-1].append(done)
        elif m.group(3) is not None:
            stack[-1].append(re.sub(r"\\(.)", r"\1", m.group(3)))
        else:
            tok = m.group(4)
            if _NUMBER.match(tok):
                v = Fraction(tok)
                stack[-1].append(int(v) if v.denominator == 1 else v)
            else:
                stack[-1].append(tok)
    if len(stack) != 1 or len(stack[0]) != 1:
        raise ValueError("expected exactly one balanced expression")
    return stack[0][0]


# ---------------------------------------------------------------------------
# discrete schemas


def _ceil_abs(re_: Fraction, im_: Fraction) -> int:
    """Smallest m >= 1 with m >= |lambda|."""
    a2 = re_ * re_ + im_ * im_
    m = max(1, math.isqrt(math.floor(a2)))
    while m * m < a2:
        m += 1
    return m


def _alpha(s: str, n: int, t):
    return ("alpha", s, n, t)


def discrete_sentence(spec: GroupSpec, schema: str, s: GroupElement, n: int,
                      r: Optional[GroupElement] = None, lam=None) -> AxiomSentence:
    """Build one D-schema instance; the body shape is fixed by the tag."""
    sw = spec.format(s.word)
    group = repr(spec)
    if schema == "D1":
        body = ("sup", ("x", "y"), n,
                ("d", 2 * n, ("+", _alpha(sw, n, "x"), _alpha(sw, n, "y")),
                 _alpha(sw, 2 * n, ("+", "x", "y"))))
        params = (("s", sw), ("n", n))
    elif schema == "D2":
        body = ("sup", ("x", "y"), n,
                ("d", n * n, ("*", _alpha(sw, n, "x"), _alpha(sw, n, "y")),
                 _alpha(sw, n * n, ("*", "x", "y"))))
        params = (("s", sw), ("n", n))
    elif schema == "D3":
        body = ("sup", ("x",), n,
                ("d", n, ("star", _alpha(sw, n, "x")), _alpha(sw, n, ("star", "x"))))
        params = (("s", sw), ("n", n))
    elif schema == "D4":
        re_, im_ = lam
        lam_t = ("gauss", re_, im_)
        m = n * _ceil_abs(re_, im_)
        body = ("sup", ("x",), n,
                ("d", m, ("scale", lam_t, _alpha(sw, n, "x")), _alpha(sw, m, ("scale", lam_t, "x"))))
        params = (("s", sw), ("n", n), ("lambda", lam_t))
    elif schema == "D5":
        rw = spec.format(r.word)
        srw = spec.format((s * r).word)
        body = ("sup", ("x",), n,
                ("d", n * n, _alpha(sw, n, _alpha(rw, n, "x")), _alpha(srw, n, "x")))
        params = (("s", sw), ("r", rw), ("n", n))
    elif schema == "D6":
        body = ("sup", ("x", "y"), n,
                ("abs", ("-", ("ip", _alpha(sw, n, "x"), _alpha(sw, n, "y")), ("ip", "x", "y"))))
        params = (("s", sw), ("n", n))
    else:
        raise ValueError(f"unknown discrete schema {schema}")
    return AxiomSentence(schema, group, params, body)


_ARITY = {"D1": 2, "D2": 2, "D3": 2, "D4": 3, "D5": 3, "D6": 2}


def _stage(arity: int, t: int):
    """Index tuples in range(t+1)^arity whose maximum is exactly t, in lexicographic order."""
    for tup in itertools.product(range(t + 1), repeat=arity):
        if max(tup) == t:
            yield tup


def stage_bound_discrete(B: int) -> int:
    """Every D-tuple with all indices <= B is emitted within this many sentences."""
    return 4 * (B + 1) ** 2 + 2 * (B + 1) ** 3


def iter_discrete(spec: GroupSpec) -> Iterator[AxiomSentence]:
    """The infinite, fair stream of D-sentences.

    Stage t emits, schema by schema (D1..D6), every parameter tuple whose
    largest index equals t.  Group elements are indexed by the group's fixed
    enumeration (skipping indices past a finite order), n by index + 1 and
    lambda by the zig-zag enumeration of Gaussian rationals.
    """
    order = spec.order()

    def element(i):
        if order is not None and i >= order:
            return None
        return spec.enumerate(i + 1)[i]

    for t in itertools.count():
        for schema in DISCRETE_SCHEMAS:
            for tup in _stage(_ARITY[schema], t):
                s = element(tup[0])
                if s is None:
                    continue
                if schema == "D5":
                    r = element(tup[1])
                    if r is None:
                        continue
                    yield discrete_sentence(spec, schema, s, tup[2] + 1, r=r)
                elif schema == "D4":
                    yield discrete_sentence(spec, schema, s, tup[1] + 1,
                                            lam=gaussian_of_index(tup[2]))
                else:
                    yield discrete_sentence(spec, schema, s, tup[1] + 1)


def enumerate_discrete(spec: GroupSpec, budget: int) -> List[AxiomSentence]:
    if budget < 1:
        raise ValueError("budget must be at least 1")
    return list(itertools.islice(iter_discrete(spec), budget))


# ---------------------------------------------------------------------------
# L^1-sorted schemas

RADIUS_BITS = 16


def _interval_node(iv: RationalInterval):
    return ("interval", iv.lo, iv.hi)


class _L1Context:
    """Evaluates point terms of an L^1 presentation to elements and norm intervals."""

    def __init__(self, pres):
        self.pres = pres
        if isinstance(pres, L1DiscretePresentation):
            self.count = pres.group.order()
            self.group = repr(pres.group)
        elif isinstance(pres, L1RealPresentation):
            self.count = None
            self.group = "R"
        else:
            raise TypeError("enumerate_l1 needs a presentation from module l1group")

    def has(self, i: int) -> bool:
        return self.count is None or i < self.count

    def value(self, term):
        head = term[0]
        if head == "pt":
            return self.pres.point(term[1])
        if head == "conv":
            return convolve(self.value(term[1]), self.value(term[2]))
        if head == "plus":
            return self.value(term[1]) + self.value(term[2])
        if head == "inv":
            return involution(self.value(term[1]))
        raise ValueError(f"unknown point term {head}")

    def point(self, i: int):
        return ("pt", i, self.pres.special_point(i))

    def norm(self, term) -> RationalInterval:
        if term[0] == "pt":
            return self.pres.info(term[1]).norm
        return l1_norm(self.value(term), RADIUS_BITS)

    def sort(self, fterm, n: int):
        return ("Sf", fterm, n, _interval_node(self.norm(fterm) * RationalInterval.exact(n)))


def _pi(h, n, f, t):
    return ("pi", h, n, f, t)


_L1_KINDS = (("L1", "add", 4), ("L1", "mul", 4), ("L1", "star", 3),
             ("L2", None, 3), ("L3", None, 3), ("L4", None, 3))


def _l1_sentence(ctx: _L1Context, schema: str, kind, idx) -> AxiomSentence:
    n = idx[-1] + 1
    if schema == "L1" and kind in ("add", "mul"):
        h1, h2, f = (ctx.point(i) for i in idx[:3])
        x_sort = ctx.sort(f, n)
        if kind == "add":
            lhs = ("+", _pi(h1, n, f, "x"), _pi(h2, n, f, "x"))
            rhs = _pi(("plus", h1, h2), n, f, "x")
        else:
            lhs = _pi(h1, n, ("conv", h2, f), _pi(h2, n, f, "x"))
            rhs = _pi(("conv", h1, h2), n, f, "x")
        body = ("sup", ("x",), x_sort, ("norm", ("-", lhs, rhs)))
        params = (("kind", kind), ("h1", h1[2]), ("h2", h2[2]), ("f", f[2]), ("n", n))
        return AxiomSentence(schema, ctx.group, params, body, reconstructed=True)
    h, f = ctx.point(idx[0]), ctx.point(idx[1])
    if schema == "L1":
        srt = ctx.sort(f, n)
        body = ("sup", ("x", "y"), srt,
                ("abs", ("-", ("ip", _pi(h, n, f, "x"), "y"), ("ip", "x", _pi(("inv", h), n, f, "y")))))
        params = (("kind", "star"), ("h", h[2]), ("f", f[2]), ("n", n))
        return AxiomSentence(schema, ctx.group, params, body, reconstructed=True)
    if schema == "L2":
        body = ("sup", ("x",), ctx.sort(("conv", h, f), n),
                ("inf", ("y",), ctx.sort(f, n), ("norm", ("-", _pi(h, n, f, "y"), "x"))))
        params = (("h", h[2]), ("f", f[2]), ("n", n))
    elif schema == "L3":
        body = ("sup", ("x",), ctx.sort(f, n),
                ("sub", ("norm", _pi(h, n, f, "x")),
                 ("mul", _interval_node(ctx.norm(h)), ("norm", "x"))))
        params = (("h", h[2]), ("f", f[2]), ("n", n))
    elif schema == "L4":
        # here idx = (f, h, n): every point of S_{f,n} is near S_{h,n}
        f, h = h, f
        diff = l1_norm(ctx.value(f) - ctx.value(h), RADIUS_BITS)
        body = ("sup", ("x",), ctx.sort(f, n),
                ("inf", ("y",), ctx.sort(h, n),
                 ("sub", ("norm", ("-", "x", "y")),
                  ("mul", n, _interval_node(diff)))))
        params = (("f", f[2]), ("h", h[2]), ("n", n))
    else:
        raise ValueError(f"unknown L^1 schema {schema}")
    return AxiomSentence(schema, ctx.group, params, body)


def iter_l1(pres) -> Iterator[AxiomSentence]:
    """Fair stream of L-sentences at presentation points, staged like ``iter_discrete``.

    Schema L1 (f -> pi_f is a *-homomorphism) is not written out in the
    source theory; the emitted additivity, convolution and involution
    instances are marked ``reconstructed``.
    """
    ctx = _L1Context(pres)
    for t in itertools.count():
        for schema, kind, arity in _L1_KINDS:
            for tup in _stage(arity, t):
                if all(ctx.has(i) for i in tup[:-1]):
                    yield _l1_sentence(ctx, schema, kind, tup)


def enumerate_l1(pres, budget: int) -> List[AxiomSentence]:
    if budget < 1:
        raise ValueError("budget must be at least 1")
    return list(itertools.islice(iter_l1(pres), budget))


# ---------------------------------------------------------------------------
# checking on finite-dimensional models


def _norm_interval(model: FinBase, a: KMat) -> RationalInterval:
    """||a||_Phi = sqrt(Phi(a^* a))."""
    if a.is_zero():
        return RationalInterval.exact(0)
    return _sqrt_of(model.tau(a.H @ a))


def _sqrt_of(v: Cyc) -> RationalInterval:
    if v.is_rational():
        q = v.to_fraction()
        a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if q >= 0 and a * a == q.numerator and b * b == q.denominator:
            return RationalInterval.exact(Fraction(a, b))
    (lo, hi), _ = v.enclose(NORM_BITS)
    lo, hi = max(lo, Fraction(0)), max(hi, Fraction(0))
    return RationalInterval(sqrt_lower(lo, NORM_BITS), sqrt_upper(hi, NORM_BITS))


def _abs_interval(c: Cyc) -> RationalInterval:
    if c.is_zero():
        return RationalInterval.exact(0)
    return _sqrt_of(c.abs2())


class _Evaluator:
    def __init__(self, model: FinBase, sentence: AxiomSentence, samples: int, seed: int):
        if repr(model.group) != sentence.group:
            raise GroupError(f"sentence is over {sentence.group}, model over {model.group!r}")
        self.model = model
        self.samples = samples
        self.seed = seed
        self._balls: dict = {}

    def group_element(self, word: str) -> GroupElement:
        return self.model.group.parse(word)

    def ball(self, n: int) -> list:
        """Deterministic elements of the radius-n ball: 1, the basis, then random ones."""
        if n not in self._balls:
            m = self.model
            out = [m.one()] + m.basis()
            rng = random.Random(f"{self.seed}:{n}")
            while len(out) < self.samples:
                x = m.random_element(rng)
                bound = sum((abs(c.as_gaussian()[0]) + abs(c.as_gaussian()[1])
                             for c in m.coordinates(x)), Fraction(0))
                if bound > n:
                    x = x.scale(Fraction(n) / bound)
                out.append(x)
            self._balls[n] = out[:max(self.samples, 1)]
        return self._balls[n]

    def l1_value(self, term) -> L1Discrete:
        head = term[0]
        g = self.model.group
        if head == "pt":
            label = term[2]
            if not label.startswith("d[") or not label.endswith("]"):
                raise UnsupportedGroup(f"point {label} is not a group element of {g!r}")
            return L1Discrete.delta(g, g.parse(label[2:-1]))
        if head == "conv":
            return convolve(self.l1_value(term[1]), self.l1_value(term[2]))
        if head == "plus":
            return self.l1_value(term[1]) + self.l1_value(term[2])
        if head == "inv":
            return involution(self.l1_value(term[1]))
        raise ValueError(f"unknown point term {head}")

    def pi(self, h: L1Discrete, x: KMat) -> KMat:
        out = self.model.zero()
        for g, c in h.coeffs:
            out = out + self.model.act(g, x).scale(c)
        return out

    def sort_elements(self, sort) -> list:
        if isinstance(sort, int):
            return self.ball(sort)
        if sort[0] == "Sf":
            f = self.l1_value(sort[1])
            return [self.pi(f, z) for z in self.ball(sort[2])]
        raise ValueError(f"unknown sort {sort!r}")

    # element-valued terms (KMat or Cyc)
    def elem(self, t, env):
        if isinstance(t, str):
            return env[t]
        head = t[0]
        if head == "alpha":
            return self.model.act(self.group_element(t[1]), self.elem(t[3], env))
        if head == "pi":
            return self.pi(self.l1_value(t[1]), self.elem(t[4], env))
        if head == "+":
            return self.elem(t[1], env) + self.elem(t[2], env)
        if head == "-":
            return self.elem(t[1], env) - self.elem(t[2], env)
        if head == "*":
            return self.elem(t[1], env) @ self.elem(t[2], env)
        if head == "star":
            return self.elem(t[1], env).H
        if head == "scale":
            lam = t[1]
            return self.elem(t[2], env).scale(Cyc.gauss(lam[1], lam[2]))
        if head == "ip":
            a, b = self.elem(t[1], env), self.elem(t[2], env)
            return self.model.tau(b.H @ a)
        raise ValueError(f"unknown term head {head}")

    # real-valued terms (RationalInterval)
    def real(self, t, env) -> RationalInterval:
        if isinstance(t, (int, Fraction)):
            return RationalInterval.exact(t)
        head = t[0]
        if head in ("sup", "inf"):
            names, sort, expr = t[1], t[2], t[3]
            values = [self.real(expr, {**env, **dict(zip(names, xs))})
                      for xs in self._tuples(self.sort_elements(sort), len(names))]
            if head == "sup":
                return RationalInterval(max(v.lo for v in values), max(v.hi for v in values))
            return RationalInterval(min(v.lo for v in values), min(v.hi for v in values))
        if head == "d":
            return _norm_interval(self.model, self.elem(t[2], env) - self.elem(t[3], env))
        if head == "norm":
            return _norm_interval(self.model, self.elem(t[1], env))
        if head == "abs":
            return _abs_interval(self.elem(t[1], env))
        if head == "sub":
            return self.real(t[1], env) - self.real(t[2], env)
        if head == "mul":
            return self.real(t[1], env) * self.real(t[2], env)
        if head == "interval":
            return RationalInterval(t[1], t[2])
        raise ValueError(f"unknown real-valued head {head}")

    @staticmethod
    def _tuples(elements: list, k: int):
        m = len(elements)
        if k == 1:
            for x in elements:
                yield (x,)
        elif k == 2:
            for i in range(m):
                for j in range(min(m, 3)):
                    yield elements[i], elements[(i + j) % m]
        else:
            raise ValueError("at most two bound variables per quantifier")


def check(sentence: AxiomSentence, model: FinBase, samples: int = 8, seed: int = 0) -> Fraction:
    """Largest certified violation over sampled points: 0 means no violation was seen.

    The sup is under-approximated by the samples, so 0 is necessary but not
    sufficient for the sentence to hold.  A positive return value is a
    rational lower bound of a genuine violation.
    """
    ev = _Evaluator(model, sentence, samples, seed)
    value = ev.real(sentence.body, {})
    return max(value.lo, Fraction(0))


# ---------------------------------------------------------------------------
# counter-models


class BrokenModel(FinBase):
    """A finite-dimensional structure whose 'action' is an arbitrary map.

    No validation is done: it exists to show that each schema can fail.
    """

    def __init__(self, group: GroupSpec, kind: str, n: int, state: KMat, act, label: str):
        self.group = group
        self.kind = kind
        self.n = n
        self.state = state
        self.label = label
        self.unitaries = {}
        self._act = act

    def act(self, g: GroupElement, a):
        return a if g.is_identity() else self._act(g, a)


def _flip(a: KMat) -> KMat:
    p = KMat.from_entries([[0, 1], [1, 0]])
    return p @ a @ p


def _square_corner(a: KMat) -> KMat:
    b = _flip(a)
    c = b.entry(0, 0)
    return b + KMat.from_entries([[c * c - c, 0], [0, 0]])


def _conj_diag(a: KMat) -> KMat:
    d = KMat.diag([1, 2])
    dinv = KMat.diag([1, Fraction(1, 2)])
    return d @ a @ dinv


def _entrywise_conj(a: KMat) -> KMat:
    return _flip(a).conj()


def counter_models() -> dict:
    """Schema tag -> (description, model) violating that schema."""
    z2, z3 = cyclic(2), cyclic(3)
    half = Fraction(1, 2)
    c2 = KMat.diag([half, half])
    m2 = KMat.identity(2).scale(half)
    return {
        "D1": ("C^2, Z/2 flip then square the first coordinate",
               BrokenModel(z2, "functions", 2, c2, lambda g, a: _square_corner(a), "nonlinear")),
        "D2": ("M_2, Z/2 by transpose",
               BrokenModel(z2, "matrices", 2, m2, lambda g, a: a.T, "transpose")),
        "D3": ("M_2, Z/2 by conjugation with diag(1,2)",
               BrokenModel(z2, "matrices", 2, m2, lambda g, a: _conj_diag(a), "non-unitary")),
        "D4": ("C^2, Z/2 flip composed with complex conjugation",
               BrokenModel(z2, "functions", 2, c2, lambda g, a: _entrywise_conj(a), "antilinear")),
        "D5": ("C^2, Z/3 with every non-identity element acting by the swap",
               BrokenModel(z3, "functions", 2, c2, lambda g, a: _flip(a), "not a homomorphism")),
        "D6": ("C^2 with weights (1/3, 2/3), Z/2 flip",
               BrokenModel(z2, "functions", 2, KMat.diag([Fraction(1, 3), Fraction(2, 3)]),
                           lambda g, a: _flip(a), "state not preserved")),
    }


def first_violation(schema: str, model: FinBase, budget: int = 200, samples: int = 8,
                    seed: int = 0):
    """The first sentence of ``schema`` among the first ``budget`` with a positive defect."""
    for sentence in enumerate_discrete(model.group, budget):
        if sentence.schema != schema:
            continue
        d = check(sentence, model, samples, seed)
        if d > 0:
            return sentence, d
    return None

"""Text front ends: the expression grammar, L^1 element formats and the YAML config.

Expression grammar (whitespace is insignificant, juxtaposition multiplies)::

    expr    := term (("+" | "-") term)*
    term    := unary (["*"] unary)*
    unary   := "-" unary | postfix
    postfix := atom ("^*" | "^" INT)*
    atom    := NUM ["/" NUM] | "I" | "zeta(" INT ")" | "p[" BITS "]" | "x[" INT "]"
             | "pi(" expr ")" | "u[" WORD "]" | "alpha[" WORD "](" expr ")" | "(" expr ")"

``^ INT`` is only allowed on scalars.  Errors carry 1-based line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import yaml

from .cantor import Bernoulli, CoordinatePermutation, Markov, Odometer, XorAction, BernoulliShift
from .cantor import index_of_word
from .crossed import CAdd, CMul, CScalar, CScale, CStar, CrossedExpr, Pi, U
from .groups import (DirectProduct, FiniteGroup, Free, FreeAbelian, GroupError, GroupSpec, cyclic,
                     symmetric_group)
from .l1group import L1Discrete, L1PiecewisePoly
from .presentations import Act, Add, Adjoint, Mul, Scalar, ScalarMul, SpecialPoint, StarPoly
from .scalars import Cyc, I, parse_gaussian


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class ConfigError(ParseError):
    pass


# ---------------------------------------------------------------------------
# tokens

_TOKENS = [
    ("NUM", r"\d+"),
    ("STARPOW", r"\^\s*\*"),
    ("OP", r"[+\-*/^()]"),
    ("BRACKET", r"\[[^\]\n]*\]"),
    ("NAME", r"[A-Za-z_][A-Za-z_0-9]*"),
    ("WS", r"\s+"),
]
_LEXER = re.compile("|".join(f"(?P<{k}>{v})" for k, v in _TOKENS))


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    out = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _LEXER.match(text, pos)
        if not m:
            ch = text[pos]
            if ch == "[":
                raise ParseError("unclosed '['", line, pos - line_start + 1)
            raise ParseError(f"unexpected character {ch!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "WS":
            out.append(Token(kind, m.group(), line, pos - line_start + 1))
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    out.append(Token("END", "", line, pos - line_start + 1))
    return out


# ---------------------------------------------------------------------------
# parser to a neutral tree


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.column)

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.take()

    def parse(self):
        if self.tok.kind == "END":
            raise self.error("empty expression")
        node = self.expr()
        if self.tok.kind != "END":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.take()
            rhs = self.term()
            node = ("add" if op.text == "+" else "sub", node, rhs, op)
        return node

    def _starts_factor(self) -> bool:
        t = self.tok
        return t.kind in ("NUM", "NAME") or t.text in ("(",)

    def term(self):
        node = self.unary()
        while True:
            if self.tok.text == "*":
                op = self.take()
                node = ("mul", node, self.unary(), op)
            elif self._starts_factor():
                op = self.tok
                node = ("mul", node, self.unary(), op)
            else:
                return node

    def unary(self):
        if self.tok.text == "-":
            op = self.take()
            return ("neg", self.unary(), op)
        return self.postfix()

    def postfix(self):
        node = self.atom()
        while True:
            if self.tok.kind == "STARPOW":
                op = self.take()
                node = ("star", node, op)
            elif self.tok.text == "^":
                op = self.take()
                if self.tok.kind != "NUM":
                    raise self.error("expected '*' or an integer after '^'")
                node = ("pow", node, int(self.take().text), op)
            else:
                return node

    def _bracket(self, what: str) -> str:
        if self.tok.kind != "BRACKET":
            raise self.error(f"expected '[...]' after {what}")
        return self.take().text[1:-1].strip()

    def atom(self):
        t = self.tok
        if t.kind == "NUM":
            self.take()
            value = Fraction(int(t.text))
            if self.tok.text == "/" and self.toks[self.i + 1].kind == "NUM":
                self.take()
                den = int(self.take().text)
                if den == 0:
                    raise self.error("division by zero", t)
                value /= den
            return ("num", Cyc.rational(value), t)
        if t.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "NAME":
            self.take()
            if t.text == "I":
                return ("num", I, t)
            if t.text == "zeta":
                self.expect("(")
                if self.tok.kind != "NUM":
                    raise self.error("expected an integer order in zeta(n)")
                n = int(self.take().text)
                if n < 1:
                    raise self.error("zeta(n) needs n >= 1", t)
                self.expect(")")
                return ("num", Cyc.root_of_unity(1, n), t)
            if t.text == "p":
                w = self._bracket("p")
                if any(ch not in "01" for ch in w):
                    raise self.error(f"cylinder word must be binary, got {w!r}", t)
                return ("p", w, t)
            if t.text == "x":
                s = self._bracket("x")
                if not s.isdigit():
                    raise self.error(f"x[...] needs a natural number index, got {s!r}", t)
                return ("x", int(s), t)
            if t.text == "u":
                return ("u", self._bracket("u"), t)
            if t.text == "pi":
                self.expect("(")
                node = self.expr()
                self.expect(")")
                return ("pi", node, t)
            if t.text == "alpha":
                word = self._bracket("alpha")
                self.expect("(")
                node = self.expr()
                self.expect(")")
                return ("alpha", word, node, t)
            raise self.error(f"unknown identifier {t.text!r}", t)
        if t.kind == "END":
            raise self.error("unexpected end of input")
        if t.kind == "BRACKET" or t.text == "[":
            raise self.error("unexpected '['")
        raise self.error(f"unexpected {t.text!r}")


def parse_tree(text: str):
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# conversion


def _tok_of(node) -> Token:
    return node[-1]


def _err(node, msg):
    t = _tok_of(node)
    return ParseError(msg, t.line, t.column)


def _element(group: Optional[GroupSpec], word: str, node):
    if group is None:
        raise _err(node, "group words need a configured group")
    try:
        return group.parse(word)
    except GroupError as exc:
        raise _err(node, str(exc)) from None


def _scalar_value(node) -> Optional[Cyc]:
    """The value of a scalar-only subtree, or None."""
    kind = node[0]
    if kind == "num":
        return node[1]
    if kind == "neg":
        v = _scalar_value(node[1])
        return None if v is None else -v
    if kind in ("add", "sub", "mul"):
        a, b = _scalar_value(node[1]), _scalar_value(node[2])
        if a is None or b is None:
            return None
        return a + b if kind == "add" else a - b if kind == "sub" else a * b
    if kind == "star":
        v = _scalar_value(node[1])
        return None if v is None else v.conj()
    if kind == "pow":
        v = _scalar_value(node[1])
        return None if v is None else v ** node[2]
    return None


def to_poly(node, group: Optional[GroupSpec] = None) -> StarPoly:
    c = _scalar_value(node)
    if c is not None:
        return Scalar(c)
    kind = node[0]
    if kind == "p":
        return SpecialPoint(index_of_word(node[1]), "p")
    if kind == "x":
        return SpecialPoint(node[1], "x")
    if kind == "add":
        return Add(to_poly(node[1], group), to_poly(node[2], group))
    if kind == "sub":
        return Add(to_poly(node[1], group), ScalarMul(Cyc.rational(-1), to_poly(node[2], group)))
    if kind == "neg":
        return ScalarMul(Cyc.rational(-1), to_poly(node[1], group))
    if kind == "mul":
        a = _scalar_value(node[1])
        if a is not None:
            return ScalarMul(a, to_poly(node[2], group))
        b = _scalar_value(node[2])
        if b is not None:
            return ScalarMul(b, to_poly(node[1], group))
        return Mul(to_poly(node[1], group), to_poly(node[2], group))
    if kind == "star":
        return Adjoint(to_poly(node[1], group))
    if kind == "alpha":
        return Act(_element(group, node[1], node), to_poly(node[2], group))
    if kind == "pow":
        raise _err(node, "only scalars can be raised to integer powers")
    if kind in ("pi", "u"):
        raise _err(node, f"{kind} is not allowed inside a base expression")
    raise _err(node, f"unexpected {kind}")


def to_crossed(node, group: GroupSpec) -> CrossedExpr:
    c = _scalar_value(node)
    if c is not None:
        return CScalar(c)
    kind = node[0]
    if kind == "pi":
        return Pi(to_poly(node[1], group))
    if kind == "u":
        return U(_element(group, node[1], node))
    if kind == "add":
        return CAdd(to_crossed(node[1], group), to_crossed(node[2], group))
    if kind == "sub":
        return CAdd(to_crossed(node[1], group),
                    CScale(Cyc.rational(-1), to_crossed(node[2], group)))
    if kind == "neg":
        return CScale(Cyc.rational(-1), to_crossed(node[1], group))
    if kind == "mul":
        a = _scalar_value(node[1])
        if a is not None:
            return CScale(a, to_crossed(node[2], group))
        b = _scalar_value(node[2])
        if b is not None:
            return CScale(b, to_crossed(node[1], group))
        return CMul(to_crossed(node[1], group), to_crossed(node[2], group))
    if kind == "star":
        return CStar(to_crossed(node[1], group))
    if kind == "pow":
        raise _err(node, "only scalars can be raised to integer powers")
    if kind in ("p", "x", "alpha"):
        raise _err(node, "base elements must be wrapped in pi(...)")
    raise _err(node, f"unexpected {kind}")


def parse_poly(text: str, group: Optional[GroupSpec] = None) -> StarPoly:
    return to_poly(parse_tree(text), group)


def parse_crossed(text: str, group: GroupSpec) -> CrossedExpr:
    return to_crossed(parse_tree(text), group)


# ---------------------------------------------------------------------------
# L^1 element formats


def _parse_cpoly(text: str, line: int, column: int):
    """A complex polynomial in t, as ((re coeffs), (im coeffs))."""
    try:
        tree = parse_tree(re.sub(r"\bt\b", "x[0]", text))
    except ParseError as exc:
        raise ParseError(exc.message, line, column + max(exc.column - 1, 0)) from None

    def go(node) -> dict:
        c = _scalar_value(node)
        if c is not None:
            g = c.as_gaussian()
            if g is None:
                raise ParseError("polynomial coefficients must be Gaussian rationals", line, column)
            return {0: c}
        kind = node[0]
        if kind == "x":
            return {1: Cyc.rational(1)}
        if kind in ("add", "sub"):
            a, b = go(node[1]), go(node[2])
            sign = 1 if kind == "add" else -1
            for k, v in b.items():
                a[k] = a.get(k, Cyc.rational(0)) + v * sign
            return a
        if kind == "neg":
            return {k: -v for k, v in go(node[1]).items()}
        if kind == "mul":
            a, b = go(node[1]), go(node[2])
            out: dict = {}
            for i, u in a.items():
                for j, v in b.items():
                    out[i + j] = out.get(i + j, Cyc.rational(0)) + u * v
            return out
        if kind == "pow":
            base = go(node[1])
            out = {0: Cyc.rational(1)}
            for _ in range(node[2]):
                nxt: dict = {}
                for i, u in out.items():
                    for j, v in base.items():
                        nxt[i + j] = nxt.get(i + j, Cyc.rational(0)) + u * v
                out = nxt
            return out
        raise ParseError(f"unexpected {kind} in a polynomial", line, column)

    coeffs = go(tree)
    deg = max(coeffs) if coeffs else 0
    re_, im_ = [], []
    for k in range(deg + 1):
        g = coeffs.get(k, Cyc.rational(0)).as_gaussian()
        re_.append(g[0])
        im_.append(g[1])
    return tuple(re_), tuple(im_)


_PIECE = re.compile(r"\s*([^:]+?)\s*\.\.\s*([^:]+?)\s*:(.*)$", re.S)


def parse_piecewise(text: str) -> L1PiecewisePoly:
    """'a..b: poly in t ; b..c: poly' -> L1PiecewisePoly; '0' is the zero function."""
    if text.strip() == "0":
        return L1PiecewisePoly.zero()
    breaks: list = []
    pieces = []
    offset = 0
    for chunk in text.split(";"):
        col = offset + 1 + (len(chunk) - len(chunk.lstrip()))
        offset += len(chunk) + 1
        m = _PIECE.match(chunk)
        if not m:
            raise ParseError("expected 'a..b: polynomial'", 1, col)
        try:
            a, b = Fraction(m.group(1)), Fraction(m.group(2))
        except (ValueError, ZeroDivisionError):
            raise ParseError("breakpoints must be rationals 'n' or 'n/d'", 1, col) from None
        if a >= b:
            raise ParseError(f"empty piece {a}..{b}", 1, col)
        if breaks and a != breaks[-1]:
            if a < breaks[-1]:
                raise ParseError("pieces must be sorted and non-overlapping", 1, col)
            pieces.append(((), ()))
            breaks.append(a)
        if not breaks:
            breaks.append(a)
        pieces.append(_parse_cpoly(m.group(3), 1, col + m.start(3)))
        breaks.append(b)
    return L1PiecewisePoly.make(breaks, pieces)


def parse_discrete(text: str, group: GroupSpec) -> L1Discrete:
    """'word re im ; word re im' triples -> an element of l^1(G)."""
    if text.strip() == "0":
        return L1Discrete.from_dict(group, {})
    out: dict = {}
    offset = 0
    for chunk in text.split(";"):
        col = offset + 1 + (len(chunk) - len(chunk.lstrip()))
        offset += len(chunk) + 1
        parts = chunk.split()
        if len(parts) < 3:
            raise ParseError("expected 'word re im'", 1, col)
        word = " ".join(parts[:-2])
        try:
            g = group.parse(word)
        except GroupError as exc:
            raise ParseError(str(exc), 1, col) from None
        try:
            c = Cyc.gauss(Fraction(parts[-2]), Fraction(parts[-1]))
        except (ValueError, ZeroDivisionError):
            raise ParseError("coefficients must be rationals", 1, col) from None
        out[g] = out.get(g, Cyc.rational(0)) + c
    return L1Discrete.from_dict(group, out)


# ---------------------------------------------------------------------------
# configuration


def _construct(node, marks: dict, path=()):
    marks[path] = (node.start_mark.line + 1, node.start_mark.column + 1)
    if isinstance(node, yaml.MappingNode):
        out = {}
        for k, v in node.value:
            key = str(_construct(k, marks, path + ("<key>",)))
            out[key] = _construct(v, marks, path + (key,))
        return out
    if isinstance(node, yaml.SequenceNode):
        return [_construct(v, marks, path + (i,)) for i, v in enumerate(node.value)]
    return yaml.safe_load(yaml.serialize(node)) if node.tag != "tag:yaml.org,2002:str" else node.value


class _Cfg:
    """Config values with their source positions."""

    def __init__(self, data, marks):
        self.data = data
        self.marks = marks

    def error(self, path, msg):
        line, col = self.marks.get(tuple(path), self.marks.get((), (1, 1)))
        return ConfigError(msg, line, col)

    def get(self, path, default=None, required=False):
        cur = self.data
        for p in path:
            if isinstance(cur, dict) and p in cur:
                cur = cur[p]
            elif isinstance(cur, list) and isinstance(p, int) and p < len(cur):
                cur = cur[p]
            else:
                if required:
                    raise self.error(path[:-1], f"missing key {'.'.join(map(str, path))}")
                return default
        return cur

    def rational(self, path, default=None, required=False) -> Fraction:
        v = self.get(path, default, required)
        try:
            return Fraction(str(v))
        except (ValueError, ZeroDivisionError):
            raise self.error(path, f"expected a rational 'num/den', got {v!r}") from None

    def integer(self, path, default=None, required=False) -> int:
        v = self.get(path, default, required)
        if not isinstance(v, int) or isinstance(v, bool):
            raise self.error(path, f"expected an integer, got {v!r}")
        return v


@dataclass
class WorkbenchConfig:
    group: GroupSpec
    base_kind: str  # measure | findim | l1
    measure: object = None
    action: object = None
    findim: object = None
    l1: object = None
    precision: int = 10
    budget: int = 100_000


def _group_from(cfg: _Cfg, path) -> GroupSpec:
    kind = cfg.get(path + ["kind"], required=True)
    names = cfg.get(path + ["names"])
    try:
        if kind == "cyclic":
            n = cfg.integer(path + ["order"], required=True)
            if n < 1:
                raise cfg.error(path + ["order"], "order must be positive")
            return cyclic(n, names[0] if names else "s")
        if kind == "symmetric":
            return symmetric_group(cfg.integer(path + ["n"], 3))
        if kind in ("free_abelian", "free"):
            rank = cfg.integer(path + ["rank"], 1)
            cls = FreeAbelian if kind == "free_abelian" else Free
            return cls(rank, names)
        if kind == "table":
            table = cfg.get(path + ["table"], required=True)
            return FiniteGroup(table, cfg.integer(path + ["identity"], 0), names,
                               label=cfg.get(path + ["label"]))
        if kind == "product":
            factors = cfg.get(path + ["factors"], required=True)
            return DirectProduct([_group_from(cfg, path + ["factors", i])
                                  for i in range(len(factors))])
    except GroupError as exc:
        raise cfg.error(path, str(exc)) from None
    raise cfg.error(path + ["kind"], f"unknown group kind {kind!r}")


def _measure_from(cfg: _Cfg, path):
    kind = cfg.get(path + ["kind"], "bernoulli")
    try:
        if kind == "bernoulli":
            return Bernoulli(cfg.rational(path + ["p"], "1/2"))
        if kind == "markov":
            init = [cfg.rational(path + ["initial", i]) for i in range(2)]
            trans = [[cfg.rational(path + ["transition", i, j]) for j in range(2)] for i in range(2)]
            return Markov(tuple(init), tuple(tuple(r) for r in trans))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise cfg.error(path, str(exc)) from None
    raise cfg.error(path + ["kind"], f"unknown measure kind {kind!r}")


def _gaussian_matrix(cfg: _Cfg, path):
    rows = cfg.get(path, required=True)
    out = []
    for i, row in enumerate(rows):
        r = []
        for j, v in enumerate(row):
            try:
                r.append(parse_gaussian(str(v)))
            except ValueError:
                raise cfg.error(path + [i, j], f"not a Gaussian rational: {v!r}") from None
        out.append(r)
    return out


def _findim_from(cfg: _Cfg, group: GroupSpec):
    from .findim import FinBase

    path = ["base"]
    kind = cfg.get(path + ["algebra"], "functions")
    label = str(cfg.get(path + ["label"], ""))
    try:
        if kind == "functions":
            weights = [cfg.rational(path + ["weights", i])
                       for i in range(len(cfg.get(path + ["weights"], required=True)))]
            if sum(weights) != 1 or any(w <= 0 for w in weights):
                raise cfg.error(path + ["weights"], "weights must be a faithful probability vector")
            perms = cfg.get(["action", "perms"], {}) or {}
            return FinBase.functions(group, weights, perms, label)
        if kind == "matrices":
            n = cfg.integer(path + ["n"], required=True)
            density = _gaussian_matrix(cfg, path + ["density"]) if cfg.get(path + ["density"]) else None
            us = {g: _gaussian_matrix(cfg, ["action", "unitaries", g])
                  for g in (cfg.get(["action", "unitaries"], {}) or {})}
            return FinBase.matrices(group, n, density, us, label)
    except (ValueError, GroupError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise cfg.error(["action"] if cfg.get(["action"]) else path, str(exc)) from None
    raise cfg.error(path + ["algebra"], f"unknown algebra kind {kind!r}")


def _action_from(cfg: _Cfg, group: GroupSpec, measure):
    path = ["action"]
    kind = cfg.get(path + ["kind"], "trivial")
    try:
        if kind == "trivial":
            return XorAction(group, {}, measure) if group.is_finite() else CoordinatePermutation(
                group, {i: {} for i in range(group.ngens)}, measure)
        if kind == "xor":
            masks = cfg.get(path + ["masks"], required=True)
            return XorAction(group, {k: str(v) for k, v in masks.items()}, measure)
        if kind == "permutation":
            perms = cfg.get(path + ["perms"], required=True)
            conv = {}
            for g, cycles in perms.items():
                p = {}
                for c in cycles:
                    for a, b in zip(c, c[1:] + c[:1]):
                        p[int(a)] = int(b)
                conv[g] = p
            return CoordinatePermutation(group, conv, measure)
        if kind == "odometer":
            return Odometer(group)
        if kind == "bernoulli_shift":
            return BernoulliShift(group, measure)
    except (ValueError, GroupError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise cfg.error(path, str(exc)) from None
    raise cfg.error(path + ["kind"], f"unknown action kind {kind!r}")


def load_config_text(text: str) -> WorkbenchConfig:
    try:
        node = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line, col = (mark.line + 1, mark.column + 1) if mark else (0, 0)
        raise ConfigError(getattr(exc, "problem", None) or str(exc), line, col) from None
    if node is None:
        raise ConfigError("empty configuration", 1, 1)
    marks: dict = {}
    data = _construct(node, marks)
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping", 1, 1)
    cfg = _Cfg(data, marks)
    for key in data:
        if key not in ("group", "base", "action", "precision", "budget"):
            raise cfg.error([key], f"unknown top-level key {key!r}")
    group = _group_from(cfg, ["group"])
    base_kind = cfg.get(["base", "kind"], "measure")
    out = WorkbenchConfig(group, base_kind,
                          precision=cfg.integer(["precision"], 10),
                          budget=cfg.integer(["budget"], 100_000))
    if base_kind == "measure":
        out.measure = _measure_from(cfg, ["base", "measure"])
        out.action = _action_from(cfg, group, out.measure)
    elif base_kind == "findim":
        out.findim = _findim_from(cfg, group)
    elif base_kind == "l1":
        out.l1 = cfg.get(["base", "space"], "discrete")
        if out.l1 not in ("discrete", "real"):
            raise cfg.error(["base", "space"], f"unknown L^1 space {out.l1!r}")
    else:
        raise cfg.error(["base", "kind"], f"unknown base kind {base_kind!r}")
    return out


def load_config(path: str) -> WorkbenchConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return load_config_text(text)

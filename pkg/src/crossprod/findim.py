"""Exact finite-dimensional crossed products.

A ``FinBase`` is either the algebra of functions on n points (diagonal n x n
matrices, state given by weights) or the full matrix algebra M_n (state
tr(density * x)).  A finite group acts by conjugation with exact unitaries;
point permutations are the special case of permutation matrices.

The crossed product is realized on functions G -> C^n:

    (pi(x) xi)(s)     = alpha_{s^-1}(x) xi(s)
    (lambda(r) xi)(s) = xi(r^-1 s)

so the (t, u) block of sum_s pi(a_s) lambda(s) is alpha_{t^-1}(a_{t u^-1}) and
the dual trace is the state of the (e, e) block.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cantor import _close_over_finite_group
from .crossed import (BaseAlgebra, CAdd, CMul, CrossedExpr, CrossedNormalForm, CrossedProduct,
                      CScalar, CScale, CStar, Pi, U)
from .groups import (Character, GroupElement, GroupError, GroupSpec, UnsupportedGroup,
                     characters)
from .intervals import RationalInterval
from .linalg import KMat, Span, hstack, vstack
from .presentations import (Act, Add, Adjoint, Combo, Mul, Scalar, ScalarMul, SpecialPoint,
                            StarPoly, format_poly)
from .scalars import Cyc, ONE, ZERO


class DimensionBudget(RuntimeError):
    """A requested realization is larger than the configured bound."""


def _is_scalar_matrix(m: KMat) -> bool:
    r, c = m.shape
    if r != c:
        return False
    d = m.entry(0, 0)
    return m == KMat.identity(r).scale(d)


def _perm_matrix(perm, n: int) -> KMat:
    """Matrix sending e_i to e_{perm[i]}."""
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[perm[i]][i] = 1
    return KMat.from_entries(rows)


class FinBase(BaseAlgebra):
    """A finite-dimensional algebra with a faithful state and a group action.

    Build with ``FinBase.functions`` or ``FinBase.matrices``.  Special points
    x[i] are the standard basis: point indicators e_i, or matrix units
    E_{ab} with i = a*n + b.
    """

    def __init__(self, group: GroupSpec, kind: str, n: int, state: KMat, unitaries: dict,
                 label: str = ""):
        if not group.is_finite():
            raise UnsupportedGroup("finite-dimensional models need a finite group")
        self.group = group
        self.kind = kind
        self.n = n
        self.state = state  # density matrix
        self.label = label
        images = {}
        for g, u in unitaries.items():
            g = g if isinstance(g, GroupElement) else group.parse(str(g))
            if not (u @ u.H == KMat.identity(n)):
                raise ValueError(f"implementing matrix for {g} is not unitary")
            images[g] = u
        if images:
            self.unitaries = _close_over_finite_group(
                group, images, lambda a, b: a @ b, KMat.identity(n),
                lambda a, b: _is_scalar_matrix(a @ b.H))
        else:
            self.unitaries = {g: KMat.identity(n) for g in group.elements()}
        for g, u in self.unitaries.items():
            for x in self.basis():
                if self.tau(self.act(g, x)) != self.tau(x):
                    raise ValueError(f"action of {g} does not preserve the state")
                if kind == "functions" and not self.contains(self.act(g, x)):
                    raise ValueError(f"action of {g} leaves the function algebra")

    @classmethod
    def functions(cls, group: GroupSpec, weights, perms: Optional[dict] = None, label: str = ""):
        """Functions on n points; perms maps group elements to point permutations."""
        weights = [Fraction(w) for w in weights]
        if sum(weights) != 1 or any(w <= 0 for w in weights):
            raise ValueError("weights must be a faithful probability vector")
        n = len(weights)
        unitaries = {}
        for g, p in (perms or {}).items():
            p = list(p)
            if sorted(p) != list(range(n)):
                raise ValueError(f"not a permutation of {n} points: {p}")
            unitaries[g] = _perm_matrix(p, n)
        return cls(group, "functions", n, KMat.diag(weights), unitaries, label)

    @classmethod
    def matrices(cls, group: GroupSpec, n: int, density=None, unitaries: Optional[dict] = None,
                 label: str = ""):
        """M_n with state tr(density x); density defaults to the normalized trace."""
        if density is None:
            density = KMat.identity(n).scale(Fraction(1, n))
        elif not isinstance(density, KMat):
            density = KMat.from_entries(density)
        if density.trace() != ONE or not (density.H == density):
            raise ValueError("density must be self-adjoint with trace 1")
        us = {}
        for g, u in (unitaries or {}).items():
            us[g] = u if isinstance(u, KMat) else KMat.from_entries(u)
        return cls(group, "matrices", n, density, us, label)

    def __repr__(self):
        return f"FinBase({self.label or self.kind}, n={self.n}, group={self.group!r})"

    # -- structure ------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.n if self.kind == "functions" else self.n * self.n

    def basis(self) -> list:
        return [self.basis_element(i) for i in range(self.dim)]

    def basis_element(self, i: int) -> KMat:
        if not 0 <= i < self.dim:
            raise IndexError(f"special point x[{i}] out of range (dimension {self.dim})")
        m = KMat.zeros(self.n, self.n)
        if self.kind == "functions":
            m.num[0, i, i] = 1
        else:
            m.num[0, i // self.n, i % self.n] = 1
        return m

    def contains(self, x: KMat) -> bool:
        if self.kind == "matrices":
            return True
        return all(x.num[:, i, j].any() == False for i in range(self.n)  # noqa: E712
                   for j in range(self.n) if i != j)

    def coordinates(self, x: KMat) -> list:
        if self.kind == "functions":
            return [x.entry(i, i) for i in range(self.n)]
        return [x.entry(i // self.n, i % self.n) for i in range(self.dim)]

    def is_tracial(self) -> bool:
        return self.kind == "functions" or _is_scalar_matrix(self.state)

    def tau(self, x: KMat) -> Cyc:
        return (self.state @ x).trace()

    # -- BaseAlgebra ------------------------------------------------------------
    def one(self):
        return KMat.identity(self.n)

    def zero(self):
        return KMat.zeros(self.n, self.n)

    def embed(self, poly):
        if isinstance(poly, KMat):
            return poly
        return self._eval(poly)

    def _eval(self, p):
        if isinstance(p, SpecialPoint):
            return self.basis_element(p.index)
        if isinstance(p, Scalar):
            return self.one().scale(p.value)
        if isinstance(p, Add):
            return self._eval(p.left) + self._eval(p.right)
        if isinstance(p, Mul):
            return self._eval(p.left) @ self._eval(p.right)
        if isinstance(p, ScalarMul):
            return self._eval(p.arg).scale(p.scalar)
        if isinstance(p, Adjoint):
            return self._eval(p.arg).H
        if isinstance(p, Act):
            return self.act(p.g, self._eval(p.arg))
        raise TypeError(f"cannot evaluate {p!r} in a finite-dimensional base")

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a @ b

    def adjoint(self, a):
        return a.H

    def scale(self, c, a):
        return a.scale(c)

    def act(self, g: GroupElement, a):
        u = self.unitaries[g]
        return u @ a @ u.H

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def eq(self, a, b) -> bool:
        return a == b

    def trace(self, a, k: int):
        v = self.tau(a)
        (rl, rh), (il, ih) = v.enclose(k + 2)
        return RationalInterval(rl, rh), RationalInterval(il, ih)

    def format(self, a) -> str:
        parts = []
        for i, c in enumerate(self.coordinates(a)):
            if not c.is_zero():
                parts.append(f"x[{i}]" if c == ONE else f"{format_poly(Scalar(c))}*x[{i}]")
        return " + ".join(parts) if parts else "0"

    def random_element(self, rng: random.Random, size: int = 3, gaussian: bool = True) -> KMat:
        coeffs = []
        for _ in range(self.dim):
            re_ = Fraction(rng.randint(-size, size), rng.randint(1, 3))
            im_ = Fraction(rng.randint(-size, size), rng.randint(1, 3)) if gaussian else 0
            coeffs.append(Cyc.gauss(re_, im_))
        out = self.zero()
        for c, b in zip(coeffs, self.basis()):
            out = out + b.scale(c)
        return out

    def random_poly(self, rng: random.Random, size: int = 2) -> StarPoly:
        """A random linear combination of special points, as a StarPoly."""
        out: Optional[StarPoly] = None
        for i in range(self.dim):
            c = Cyc.gauss(rng.randint(-size, size), rng.randint(-size, size))
            if c.is_zero():
                continue
            t = ScalarMul(c, SpecialPoint(i, "x"))
            out = t if out is None else Add(out, t)
        return out if out is not None else Scalar(ONE)


# ---------------------------------------------------------------------------
# shipped models


def trivial_action(group: GroupSpec, n: int = 1, label: str = "") -> FinBase:
    weights = [Fraction(1, n)] * n
    return FinBase.functions(group, weights, {}, label or f"C^{n} trivial")


def shipped_models() -> list:
    """The finite-dimensional models used by the test suites, as (name, FinBase)."""
    from .groups import DirectProduct, cyclic, symmetric_group

    out = []
    z2 = cyclic(2)
    z3 = cyclic(3)
    z4 = cyclic(4)
    k4 = DirectProduct([cyclic(2), cyclic(2)])
    s3 = symmetric_group(3)
    half = Fraction(1, 2)
    third = Fraction(1, 3)
    out.append(("C, Z/2 trivial", trivial_action(z2, 1)))
    out.append(("C^2, Z/2 flip", FinBase.functions(z2, [half, half], {"s": [1, 0]}, "C^2 flip")))
    out.append(("C^3, Z/2 swap(0,1)", FinBase.functions(
        z2, [Fraction(1, 4), Fraction(1, 4), half], {"s": [1, 0, 2]}, "C^3 swap")))
    out.append(("C^3, Z/3 rotation", FinBase.functions(
        z3, [third] * 3, {"s": [1, 2, 0]}, "C^3 rotation")))
    out.append(("C^2, Z/3 trivial", FinBase.functions(z3, [third, 2 * third], {}, "C^2 trivial")))
    out.append(("C^2, Z/4 flip", FinBase.functions(z4, [half, half], {"s": [1, 0]}, "C^2 flip")))
    out.append(("C^2, Z/2xZ/2 flip", FinBase.functions(
        k4, [half, half], {"s_1": [1, 0], "s_2": [0, 1]}, "C^2 flip first")))
    out.append(("C^3, Z/2xZ/2 swaps", FinBase.functions(
        k4, [third] * 3, {"s_1": [1, 0, 2], "s_2": [1, 0, 2]}, "C^3 diagonal swap")))
    out.append(("C^3, S3 permutation", FinBase.functions(
        s3, [third] * 3, {g: [int(ch) for ch in s3.format(g.word)[1:]]
                          for g in s3.elements() if not g.is_identity()}, "C^3 perm")))
    return out


# ---------------------------------------------------------------------------
# realization


def _elements(base: FinBase) -> list:
    return base.group.elements()


def rep_pi(base: FinBase, x: KMat) -> KMat:
    """Block diagonal operator with s-block alpha_{s^-1}(x)."""
    els = _elements(base)
    grid = [[None] * len(els) for _ in els]
    zero = base.zero()
    for i, s in enumerate(els):
        for j in range(len(els)):
            grid[i][j] = base.act(s.inverse(), x) if i == j else zero
    return KMat.blocks(grid)


def rep_lambda(base: FinBase, r: GroupElement) -> KMat:
    """(lambda(r) xi)(s) = xi(r^-1 s): identity block at (s, r^-1 s)."""
    els = _elements(base)
    pos = {g: i for i, g in enumerate(els)}
    size = len(els) * base.n
    out = KMat.zeros(size, size)
    ri = r.inverse()
    for i, s in enumerate(els):
        j = pos[ri * s]
        for a in range(base.n):
            out.num[0, i * base.n + a, j * base.n + a] = 1
    return out


def crossed_product(base: FinBase) -> CrossedProduct:
    return CrossedProduct(base)


def realize(x, base: Optional[FinBase] = None) -> KMat:
    """Matrix of a normal form or of an expression (evaluated directly, no rewriting)."""
    if isinstance(x, CrossedNormalForm):
        base = x.product.base
        els = _elements(base)
        size = len(els) * base.n
        out = KMat.zeros(size, size)
        for s, a in x.terms:
            out = out + rep_pi(base, a) @ rep_lambda(base, s)
        return out
    if base is None:
        raise ValueError("realizing an expression needs the base")
    return _realize_expr(base, x)


def _realize_expr(base: FinBase, x: CrossedExpr) -> KMat:
    if isinstance(x, Pi):
        return rep_pi(base, base.embed(x.arg))
    if isinstance(x, U):
        return rep_lambda(base, x.g)
    size = len(_elements(base)) * base.n
    if isinstance(x, CScalar):
        return KMat.identity(size).scale(x.value)
    if isinstance(x, CAdd):
        return _realize_expr(base, x.left) + _realize_expr(base, x.right)
    if isinstance(x, CMul):
        return _realize_expr(base, x.left) @ _realize_expr(base, x.right)
    if isinstance(x, CScale):
        return _realize_expr(base, x.arg).scale(x.scalar)
    if isinstance(x, CStar):
        return _realize_expr(base, x.arg).H
    raise TypeError(f"not a crossed expression: {x!r}")


def matrix_trace(base: FinBase, m: KMat) -> Cyc:
    """Dual trace read off a realized matrix: the state of its (e, e) block."""
    els = _elements(base)
    e = els.index(base.group.identity())
    return base.tau(m.block(e, e, base.n))


def exact_trace(x) -> Cyc:
    """tau(a_e) for a normal form sum_s pi(a_s) u_s."""
    base = x.product.base
    a = x.coeff(base.group.identity())
    return ZERO if a is None else base.tau(a)


def exact_norm2_squared(base: FinBase, m: KMat) -> Fraction:
    v = matrix_trace(base, m.H @ m)
    if not v.is_rational():
        raise ValueError("trace of x^* x is not rational")
    return v.to_fraction()


def normal_form_of_matrix(cp: CrossedProduct, m: KMat) -> CrossedNormalForm:
    """Recover sum_s pi(a_s) u_s from its realization: a_s is the (e, s^-1) block."""
    base = cp.base
    els = _elements(base)
    e = els.index(base.group.identity())
    coeffs = {}
    for s in els:
        j = els.index(s.inverse())
        coeffs[s] = m.block(e, j, base.n)
    nf = cp._make(coeffs)
    if not (realize(nf) == m):
        raise ValueError("matrix is not in the crossed product")
    return nf


# ---------------------------------------------------------------------------
# dual action and duality


def _require_abelian(group: GroupSpec):
    if not (group.is_finite() and group.is_abelian()):
        raise UnsupportedGroup(f"{group!r} is not finite abelian; duality needs a finite abelian group")


def dual_action_matrix(base: FinBase, p: Character) -> KMat:
    """v(p): multiplication by conj(p(s)) on the s-th block."""
    _require_abelian(base.group)
    return KMat.blocks([[KMat.identity(base.n).scale(p.conj_value(s)) if i == j else
                         KMat.zeros(base.n, base.n) for j in range(len(_elements(base)))]
                        for i, s in enumerate(_elements(base))])


def conjugate(v: KMat, m: KMat) -> KMat:
    return v @ m @ v.H


def fixed_point_dimension(base: FinBase) -> int:
    """Dimension of {x in M x G : v(p) x v(p)^* = x for all p}."""
    _require_abelian(base.group)
    chars = characters(base.group)
    vs = [dual_action_matrix(base, p) for p in chars]
    basis = [rep_pi(base, b) @ rep_lambda(base, s) for b in base.basis() for s in _elements(base)]
    columns = [vstack([(conjugate(v, m) - m).vec() for v in vs]) for m in basis]
    return len(basis) - Span(columns).rank


def plancherel_check(group: GroupSpec) -> bool:
    """The character transform diagonalizes every lambda(r) on l^2(G), exactly."""
    _require_abelian(group)
    base = trivial_action(group, 1)
    els = _elements(base)
    chars = characters(group)
    F = KMat.from_entries([[p.conj_value(s) for s in els] for p in chars])
    Finv = F.H.scale(Fraction(1, len(els)))
    if not (F @ Finv == KMat.identity(len(els))):
        return False
    for r in els:
        d = F @ rep_lambda(base, r) @ Finv
        for i in range(len(els)):
            for j in range(len(els)):
                if i != j and not d.entry(i, j).is_zero():
                    return False
    return True


@dataclass
class TakesakiReport:
    group: str
    base: str
    dim_double: int
    dim_target: int
    spans: bool
    multiplicative: bool
    star_preserving: bool
    injective: bool
    onto: bool
    unit: bool
    generator_pairs: int
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (self.spans and self.multiplicative and self.star_preserving and self.injective
                and self.onto and self.unit and self.dim_double == self.dim_target)

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        lines = [f"{status} takesaki {self.base} x {self.group}",
                 f"dims {self.dim_double} = {self.dim_target}" if self.dim_double == self.dim_target
                 else f"dims {self.dim_double} != {self.dim_target}",
                 f"spans {self.spans}",
                 f"multiplicative {self.multiplicative} ({self.generator_pairs} generator pairs)",
                 f"star {self.star_preserving}",
                 f"injective {self.injective}",
                 f"onto {self.onto}",
                 f"unit {self.unit}"]
        return "\n".join(lines + self.notes)


def takesaki_check(base: FinBase, max_order: int = 6, max_dim: int = 9) -> TakesakiReport:
    """Verify Takesaki duality for (base, G) by exact linear algebra.

    The double crossed product acts on functions G^ -> (G -> C^n):
    pihat(y) has p-block alphahat_{p^-1}(y) = v(p^-1) y v(p^-1)^* and
    lambdahat(q) has identity blocks at (p, q^-1 p).  Gamma sends
    pihat(pi(x)) -> pi(x), pihat(lambda(r)) -> lambda(r), lambdahat(p) -> v(p).
    """
    group = base.group
    _require_abelian(group)
    if group.order() > max_order or base.dim > max_dim:
        raise DimensionBudget(f"|G| = {group.order()}, dim M = {base.dim} exceeds the bound")
    els = _elements(base)
    chars = characters(group)
    g = len(els)
    inner = g * base.n

    v = {p: dual_action_matrix(base, p) for p in chars}
    char_pos = {p: i for i, p in enumerate(chars)}

    def pihat(y: KMat) -> KMat:
        grid = [[None] * len(chars) for _ in chars]
        for i, p in enumerate(chars):
            vp = v[p.conj()]
            for j in range(len(chars)):
                grid[i][j] = conjugate(vp, y) if i == j else KMat.zeros(inner, inner)
        return KMat.blocks(grid)

    def lambdahat(q: Character) -> KMat:
        size = len(chars) * inner
        out = KMat.zeros(size, size)
        qi = q.conj()
        for i, p in enumerate(chars):
            j = char_pos[qi * p]
            for a in range(inner):
                out.num[0, i * inner + a, j * inner + a] = 1
        return out

    pis = [rep_pi(base, x) for x in base.basis()]
    lams = [rep_lambda(base, r) for r in els]
    gens = ([(pihat(m), m) for m in pis] + [(pihat(m), m) for m in lams]
            + [(lambdahat(p), v[p]) for p in chars])

    basis = []
    images = []
    for i, x in enumerate(pis):
        for j, lam in enumerate(lams):
            left = pihat(x @ lam)
            for p in chars:
                basis.append(left @ lambdahat(p))
                images.append(x @ lam @ v[p])
    span = Span([b.vec() for b in basis])
    dim_double = span.rank
    dim_target = base.dim * g * g
    independent = dim_double == len(basis)

    def gamma_of(m: KMat):
        coords = span.coordinates(m.vec())
        if coords is None:
            return None
        out = KMat.zeros(inner, inner)
        for c, img in zip(coords.to_rows(), images):
            if not c[0].is_zero():
                out = out + img.scale(c[0])
        return out

    notes = []
    spans = independent
    multiplicative = independent
    star = independent
    pairs = 0
    if independent:
        # closure of the span under left multiplication by generators, and
        # Gamma(g b) = Gamma(g) Gamma(b) on every basis element
        for gm, gi in gens:
            prods = [gm @ b for b in basis]
            coords = span.coordinates(hstack([p.vec() for p in prods]))
            if coords is None:
                spans = False
                notes.append("span is not closed under a generator")
                break
            img_mat = hstack([im.vec() for im in images])
            lhs = img_mat @ coords
            rhs = hstack([(gi @ im).vec() for im in images])
            if not (lhs == rhs):
                multiplicative = False
        for ga, ia in gens:
            for gb, ib in gens:
                pairs += 1
                val = gamma_of(ga @ gb)
                if val is None or not (val == ia @ ib):
                    multiplicative = False
            val = gamma_of(ga.H)
            if val is None or not (val == ia.H):
                star = False
    injective = Span([im.vec() for im in images]).rank == len(images)
    onto = injective and len(images) == dim_target and all(_in_m_tensor_b(base, im) for im in images)
    unit = False
    e_lam = pihat(rep_lambda(base, group.identity()))
    val = gamma_of(e_lam) if independent else None
    unit = val is not None and val == KMat.identity(inner)
    return TakesakiReport(group=getattr(group, "label", repr(group)) or repr(group),
                          base=base.label or base.kind, dim_double=dim_double, dim_target=dim_target,
                          spans=spans, multiplicative=multiplicative, star_preserving=star,
                          injective=injective, onto=onto, unit=unit, generator_pairs=pairs,
                          notes=notes)


def _in_m_tensor_b(base: FinBase, m: KMat) -> bool:
    g = len(_elements(base))
    return all(base.contains(m.block(i, j, base.n)) for i in range(g) for j in range(g))

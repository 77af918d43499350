"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Gaussian rationals are the case N = 4 and rationals the case N = 1.  Values
from different fields are lifted to the field of the lcm of their orders, so
roots of unity coming from characters mix freely with Gaussian coefficients.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Union

import mpmath

Number = Union[int, Fraction, "Cyc"]


def _poly_divmod_int(num, den):
    # exact division of integer polynomials (ascending coefficients), den monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    return out, num[: len(den) - 1]


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple:
    """Ascending integer coefficients of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod_int(num, cyclotomic_poly(d))
            assert not any(rem)
    return tuple(num)


@lru_cache(maxsize=None)
def _field(n: int):
    """(phi, reduction table) where table[k] is x^k mod Phi_n, for k < 2n."""
    phi_poly = cyclotomic_poly(n)
    phi = len(phi_poly) - 1
    table = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(max(2 * n, 2 * phi)):
        table.append(tuple(cur))
        # multiply by x and reduce
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for j in range(phi):
                cur[j] -= top * phi_poly[j]
    return phi, tuple(table)


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class Cyc:
    """An element of Q(zeta_N) in the power basis 1, zeta, ..., zeta^(phi-1)."""

    __slots__ = ("n", "c", "_hash")

    def __init__(self, n: int, coeffs):
        phi, _ = _field(n)
        coeffs = tuple(Fraction(x) for x in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"Q(zeta_{n}) needs {phi} coefficients, got {len(coeffs)}")
        self.n = n
        self.c = coeffs
        self._hash = None

    # -- constructors ---------------------------------------------------
    @classmethod
    def rational(cls, q) -> "Cyc":
        return cls(1, (Fraction(q),))

    @classmethod
    def gauss(cls, re, im=0) -> "Cyc":
        return cls(4, (Fraction(re), Fraction(im)))

    @classmethod
    def root_of_unity(cls, k: int, n: int) -> "Cyc":
        """exp(2 pi i k / n)."""
        if n <= 0:
            raise ValueError("order must be positive")
        k %= n
        if n == 1:
            return cls.rational(1)
        phi, table = _field(n)
        return cls(n, table[k])

    @classmethod
    def coerce(cls, x) -> "Cyc":
        if isinstance(x, Cyc):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        if isinstance(x, complex):
            raise TypeError("floating complex numbers are not exact; use Cyc.gauss")
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyc")

    # -- field plumbing -------------------------------------------------
    def lift(self, m: int) -> "Cyc":
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"Q(zeta_{self.n}) does not embed in Q(zeta_{m})")
        phi, table = _field(m)
        step = m // self.n
        out = [Fraction(0)] * phi
        for j, cj in enumerate(self.c):
            if cj:
                for t, r in enumerate(table[j * step]):
                    if r:
                        out[t] += cj * r
        return Cyc(m, out)

    def _common(self, other):
        other = Cyc.coerce(other)
        if other.n == self.n:
            return self, other
        m = _lcm(self.n, other.n)
        return self.lift(m), other.lift(m)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return Cyc(a.n, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.n, [-x for x in self.c])

    def __sub__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return Cyc(a.n, [x - y for x, y in zip(a.c, b.c)])

    def __rsub__(self, other):
        return Cyc.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.n, [x * other for x in self.c])
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        phi, table = _field(a.n)
        if phi == 1:
            return Cyc(a.n, (a.c[0] * b.c[0],))
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, x in enumerate(a.c):
            if x:
                for j, y in enumerate(b.c):
                    if y:
                        prod[i + j] += x * y
        out = list(prod[:phi])
        for k in range(phi, 2 * phi - 1):
            if prod[k]:
                for t, r in enumerate(table[k]):
                    if r:
                        out[t] += prod[k] * r
        return Cyc(a.n, out)

    __rmul__ = __mul__

    def conj(self) -> "Cyc":
        phi, table = _field(self.n)
        if self.n <= 2:
            return self
        out = [Fraction(0)] * phi
        out[0] = self.c[0]
        for j in range(1, phi):
            cj = self.c[j]
            if cj:
                for t, r in enumerate(table[self.n - j]):
                    if r:
                        out[t] += cj * r
        return Cyc(self.n, out)

    def inverse(self) -> "Cyc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        phi, table = _field(self.n)
        if phi == 1:
            return Cyc(self.n, (1 / self.c[0],))
        # columns: self * zeta^j in the power basis; solve M v = e_0
        cols = [(self * Cyc(self.n, table[j])).c for j in range(phi)]
        rows = [[cols[j][i] for j in range(phi)] + [Fraction(int(i == 0))] for i in range(phi)]
        for col in range(phi):
            piv = next(r for r in range(col, phi) if rows[r][col] != 0)
            rows[col], rows[piv] = rows[piv], rows[col]
            p = rows[col][col]
            rows[col] = [x / p for x in rows[col]]
            for r in range(phi):
                if r != col and rows[r][col] != 0:
                    f = rows[r][col]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
        return Cyc(self.n, [rows[i][phi] for i in range(phi)])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyc(self.n, [x / other for x in self.c])
        return self * Cyc.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Cyc.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = Cyc.rational(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- predicates and views -------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self):
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def real(self) -> "Cyc":
        return (self + self.conj()) / 2

    def imag(self) -> "Cyc":
        return (self - self.conj()) / (2 * I)

    def abs2(self) -> "Cyc":
        """|x|^2 as a (real) field element."""
        return self * self.conj()

    def as_gaussian(self):
        """(re, im) as Fractions if the value lies in Q(i), else None."""
        if self.n in (1, 2):
            return self.c[0], Fraction(0)
        if self.n == 4:
            return self.c
        re_, im_ = self.real(), self.imag()
        if re_.is_rational() and im_.is_rational():
            return re_.c[0], im_.c[0]
        return None

    def minimal(self) -> "Cyc":
        """The same value written over the smallest cyclotomic field holding it."""
        if self.n == 1:
            return self
        if self.is_rational():
            return Cyc.rational(self.c[0])
        for m in sorted(d for d in range(2, self.n) if self.n % d == 0):
            cand = _descend(self, m)
            if cand is not None:
                return cand
        return self

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        if not isinstance(other, Cyc):
            return NotImplemented
        a, b = self._common(other)
        return a.c == b.c

    def __hash__(self):
        if self._hash is None:
            m = self.minimal()
            self._hash = hash(m.c[0]) if m.n == 1 else hash((m.n, m.c))
        return self._hash

    def enclose(self, bits: int = 64):
        """Rational intervals ((re_lo, re_hi), (im_lo, im_hi)) of width < 2^-bits."""
        g = self.as_gaussian()
        if g is not None:
            return (g[0], g[0]), (g[1], g[1])
        scale = sum(abs(x) for x in self.c) + 1
        extra = int(math.log2(scale)) + 8
        ctx = mpmath.iv
        saved = ctx.prec
        ctx.prec = bits + extra + 10
        try:
            re_ = mpmath.iv.mpf(0)
            im_ = mpmath.iv.mpf(0)
            for j, cj in enumerate(self.c):
                if cj:
                    ang = 2 * mpmath.iv.pi * j / self.n
                    q = mpmath.iv.mpf(cj.numerator) / cj.denominator
                    re_ += q * mpmath.iv.cos(ang)
                    im_ += q * mpmath.iv.sin(ang)
            return (_mpf_frac(re_.a), _mpf_frac(re_.b)), (_mpf_frac(im_.a), _mpf_frac(im_.b))
        finally:
            ctx.prec = saved

    def __repr__(self):
        return f"Cyc({self})"

    def __str__(self):
        g = self.as_gaussian()
        if g is not None:
            return format_gaussian(*g)
        terms = []
        for j, cj in enumerate(self.c):
            if cj:
                mono = "1" if j == 0 else (f"z{self.n}" if j == 1 else f"z{self.n}^{j}")
                terms.append(f"({cj})*{mono}" if j else f"{cj}")
        return " + ".join(terms)


def _mpf_frac(x) -> Fraction:
    # x is a degenerate ivmpf endpoint; read its raw (sign, man, exp, bc) tuple
    sign, man, exp, _ = x._mpi_[0]
    if not man and exp:
        raise ValueError("non-finite interval endpoint")
    v = Fraction(int(man)) * Fraction(2) ** exp
    return -v if sign else v


def _descend(x: Cyc, m: int):
    # x in Q(zeta_m) iff x is a Q-combination of zeta_n^(step*j), j < phi(m)
    phi_m, _ = _field(m)
    basis = [Cyc.root_of_unity(j, m).lift(x.n) for j in range(phi_m)]
    phi_n = len(x.c)
    rows = [[basis[j].c[i] for j in range(phi_m)] + [x.c[i]] for i in range(phi_n)]
    piv_row = 0
    pivots = []
    for col in range(phi_m):
        piv = next((r for r in range(piv_row, phi_n) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[piv_row], rows[piv] = rows[piv], rows[piv_row]
        p = rows[piv_row][col]
        rows[piv_row] = [v / p for v in rows[piv_row]]
        for r in range(phi_n):
            if r != piv_row and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[piv_row])]
        pivots.append(col)
        piv_row += 1
    if any(rows[r][phi_m] != 0 for r in range(piv_row, phi_n)):
        return None
    sol = [Fraction(0)] * phi_m
    for r, col in enumerate(pivots):
        sol[col] = rows[r][phi_m]
    return Cyc(m, sol)


ZERO = Cyc.rational(0)
ONE = Cyc.rational(1)
I = Cyc.gauss(0, 1)


def format_gaussian(re_: Fraction, im_: Fraction) -> str:
    """Canonical text of a Gaussian rational, e.g. '3+I', '-1/2*I', '2/3'."""
    if im_ == 0:
        return str(re_)
    if im_ == 1:
        im_s = "I"
    elif im_ == -1:
        im_s = "-I"
    else:
        im_s = f"{im_}*I"
    if re_ == 0:
        return im_s
    return f"{re_}{'' if im_s.startswith('-') else '+'}{im_s}"


_GAUSS_RE = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)?\s*(?:([+-])\s*(\d+(?:/\d+)?)?\s*\*?\s*I)?\s*$")


def parse_gaussian(text: str) -> Cyc:
    """Parse '3', '-1/2', '2+I', '1/3-2*I', 'I', '-I' into a Gaussian rational."""
    t = text.strip().replace(" ", "")
    if t in ("I", "+I"):
        return I
    if t == "-I":
        return -I
    m = re.fullmatch(r"([+-]?\d+(?:/\d+)?)\*?I", t)
    if m:
        return Cyc.gauss(0, Fraction(m.group(1)))
    m = _GAUSS_RE.match(t)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise ValueError(f"not a Gaussian rational: {text!r}")
    re_ = Fraction(m.group(1)) if m.group(1) else Fraction(0)
    im_ = Fraction(0)
    if m.group(2):
        mag = Fraction(m.group(3)) if m.group(3) else Fraction(1)
        im_ = mag if m.group(2) == "+" else -mag
    return Cyc.gauss(re_, im_)

"""Exact dense matrices over cyclotomic fields.

A matrix over Q(zeta_N) is stored as an integer array of shape (phi, rows,
cols), one layer per power-basis coefficient, over a single common
denominator.  Products are phi^2 integer matrix products followed by
reduction modulo the cyclotomic polynomial, so no floating point is involved
anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .scalars import Cyc, _field, _lcm


@lru_cache(maxsize=None)
def _tables(n: int):
    phi, table = _field(n)
    red = np.empty((max(2 * phi - 1, 1), phi), dtype=object)
    for k in range(red.shape[0]):
        red[k] = table[k]
    conj = np.empty((phi, phi), dtype=object)
    for j in range(phi):
        conj[j] = table[(n - j) % n] if n > 2 else table[j]
    return phi, red, conj


@lru_cache(maxsize=None)
def _lift_table(n: int, m: int):
    phi_n, _ = _field(n)
    phi_m, table = _field(m)
    step = m // n
    out = np.empty((phi_n, phi_m), dtype=object)
    for j in range(phi_n):
        out[j] = table[j * step]
    return out


def _ints(coeffs):
    """Fractions -> (integer numerators, common denominator)."""
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in coeffs], den


def _gcd_all(arr: np.ndarray, den: int) -> int:
    g = den
    for x in arr.flat:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                return 1
    return g


_SAFE = 1 << 62


def _as_int64(a: np.ndarray):
    try:
        out = a.astype(np.int64)
    except OverflowError:
        return None, 0
    return out, max(int(out.max()), -int(out.min())) if out.size else 0


def _int_dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer matrix product, through int64 when no overflow is possible."""
    a64, ma = _as_int64(a)
    if a64 is not None:
        b64, mb = _as_int64(b)
        if b64 is not None and ma * mb * max(a.shape[-1], 1) < _SAFE:
            return np.dot(a64, b64).astype(object)
    return np.dot(a, b)


class KMat:
    __slots__ = ("n", "num", "den")

    def __init__(self, n: int, num: np.ndarray, den: int = 1, reduce: bool = True):
        self.n = n
        self.num = num
        self.den = den
        if reduce:
            self._normalize()

    def _normalize(self):
        if self.den < 0:
            self.num = -self.num
            self.den = -self.den
        if not self.num.size or not any(x for x in self.num.flat):
            self.den = 1
            return
        g = _gcd_all(self.num, self.den)
        if g > 1:
            self.num = self.num // g
            self.den //= g

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, r: int, c: int, n: int = 1) -> "KMat":
        phi, _ = _field(n)
        return cls(n, np.zeros((phi, r, c), dtype=object), 1, reduce=False)

    @classmethod
    def identity(cls, r: int, n: int = 1) -> "KMat":
        out = cls.zeros(r, r, n)
        for i in range(r):
            out.num[0, i, i] = 1
        return out

    @classmethod
    def from_entries(cls, rows) -> "KMat":
        rows = [[Cyc.coerce(x) for x in row] for row in rows]
        r = len(rows)
        c = len(rows[0]) if r else 0
        n = 1
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged matrix")
            for x in row:
                n = _lcm(n, x.n)
        phi, _ = _field(n)
        den = 1
        lifted = [[x.lift(n) for x in row] for row in rows]
        for row in lifted:
            for x in row:
                for q in x.c:
                    den = den * q.denominator // math.gcd(den, q.denominator)
        num = np.zeros((phi, r, c), dtype=object)
        for i, row in enumerate(lifted):
            for j, x in enumerate(row):
                for t, q in enumerate(x.c):
                    num[t, i, j] = int(q * den)
        return cls(n, num, den)

    @classmethod
    def diag(cls, entries) -> "KMat":
        entries = list(entries)
        rows = [[entries[i] if i == j else 0 for j in range(len(entries))] for i in range(len(entries))]
        return cls.from_entries(rows)

    @classmethod
    def scalar(cls, c, size: int) -> "KMat":
        return cls.identity(size).scale(c)

    @classmethod
    def blocks(cls, grid) -> "KMat":
        """Assemble a block matrix from a 2-D list of KMats (None means zero)."""
        rows = len(grid)
        cols = len(grid[0])
        heights = [next(b.shape[0] for b in grid[i] if b is not None) for i in range(rows)]
        widths = [next(grid[i][j].shape[1] for i in range(rows) if grid[i][j] is not None)
                  for j in range(cols)]
        n = 1
        den = 1
        for row in grid:
            for b in row:
                if b is not None:
                    n = _lcm(n, b.n)
        for row in grid:
            for b in row:
                if b is not None:
                    den = den * b.den // math.gcd(den, b.den)
        phi, _ = _field(n)
        num = np.zeros((phi, sum(heights), sum(widths)), dtype=object)
        r0 = 0
        for i in range(rows):
            c0 = 0
            for j in range(cols):
                b = grid[i][j]
                if b is not None:
                    bl = b.lift(n)
                    num[:, r0:r0 + heights[i], c0:c0 + widths[j]] = bl.num * (den // bl.den)
                c0 += widths[j]
            r0 += heights[i]
        return cls(n, num, den)

    # -- views --------------------------------------------------------------
    @property
    def shape(self):
        return self.num.shape[1:]

    @property
    def phi(self):
        return self.num.shape[0]

    def entry(self, i: int, j: int) -> Cyc:
        return Cyc(self.n, [Fraction(int(self.num[t, i, j]), self.den) for t in range(self.phi)])

    def to_rows(self):
        r, c = self.shape
        return [[self.entry(i, j) for j in range(c)] for i in range(r)]

    def submatrix(self, rows, cols) -> "KMat":
        return KMat(self.n, self.num[:, rows][:, :, cols].copy(), self.den)

    def block(self, i: int, j: int, size: int) -> "KMat":
        return KMat(self.n, self.num[:, i * size:(i + 1) * size, j * size:(j + 1) * size].copy(), self.den)

    def is_zero(self) -> bool:
        return not any(x for x in self.num.flat)

    def lift(self, m: int) -> "KMat":
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError("field does not embed")
        L = _lift_table(self.n, m)
        num = np.tensordot(L, self.num, axes=(0, 0)) if self.phi > 1 or m > 1 else self.num
        if self.phi == 1:
            phi_m = _field(m)[0]
            num = np.zeros((phi_m,) + self.shape, dtype=object)
            num[0] = self.num[0]
        return KMat(m, num, self.den, reduce=False)

    def _common(self, other: "KMat"):
        if self.n == other.n:
            return self, other
        m = _lcm(self.n, other.n)
        return self.lift(m), other.lift(m)

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other: "KMat") -> "KMat":
        a, b = self._common(other)
        if a.shape != b.shape:
            raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
        den = a.den * b.den // math.gcd(a.den, b.den)
        return KMat(a.n, a.num * (den // a.den) + b.num * (den // b.den), den)

    def __neg__(self) -> "KMat":
        return KMat(self.n, -self.num, self.den, reduce=False)

    def __sub__(self, other: "KMat") -> "KMat":
        return self + (-other)

    def __matmul__(self, other: "KMat") -> "KMat":
        a, b = self._common(other)
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        phi, red, _ = _tables(a.n)
        if phi == 1:
            return KMat(a.n, _int_dot(a.num[0], b.num[0])[None], a.den * b.den)
        r, c = a.shape[0], b.shape[1]
        prod = np.zeros((2 * phi - 1, r, c), dtype=object)
        for i in range(phi):
            ai = a.num[i]
            if not ai.any():
                continue
            for j in range(phi):
                bj = b.num[j]
                if bj.any():
                    prod[i + j] += _int_dot(ai, bj)
        out = np.tensordot(red, prod, axes=(0, 0))
        return KMat(a.n, out, a.den * b.den)

    def scale(self, c) -> "KMat":
        c = Cyc.coerce(c)
        m = _lcm(self.n, c.n)
        a = self.lift(m)
        c = c.lift(m)
        ints, cden = _ints(c.c)
        phi, red, _ = _tables(m)
        if phi == 1:
            return KMat(m, a.num * ints[0], a.den * cden)
        prod = np.zeros((2 * phi - 1,) + a.shape, dtype=object)
        for i, ci in enumerate(ints):
            if ci:
                prod[i:i + phi] += a.num * ci
        out = np.tensordot(red, prod, axes=(0, 0))
        return KMat(m, out, a.den * cden)

    def conj(self) -> "KMat":
        phi, _, conj = _tables(self.n)
        if phi == 1:
            return self
        return KMat(self.n, np.tensordot(conj, self.num, axes=(0, 0)), self.den, reduce=False)

    @property
    def T(self) -> "KMat":
        return KMat(self.n, self.num.transpose(0, 2, 1).copy(), self.den, reduce=False)

    @property
    def H(self) -> "KMat":
        """Conjugate transpose."""
        return self.conj().T

    def trace(self) -> Cyc:
        r, c = self.shape
        return Cyc(self.n, [Fraction(int(sum(self.num[t, i, i] for i in range(r))), self.den)
                            for t in range(self.phi)])

    def kron(self, other: "KMat") -> "KMat":
        a, b = self._common(other)
        phi, red, _ = _tables(a.n)
        r = a.shape[0] * b.shape[0]
        c = a.shape[1] * b.shape[1]
        prod = np.zeros((max(2 * phi - 1, 1), r, c), dtype=object)
        for i in range(phi):
            for j in range(phi):
                prod[i + j] += np.kron(a.num[i], b.num[j])
        out = np.tensordot(red, prod, axes=(0, 0)) if phi > 1 else prod
        return KMat(a.n, out, a.den * b.den)

    def vec(self) -> "KMat":
        """Column vector of the entries in row-major order."""
        r, c = self.shape
        return KMat(self.n, self.num.reshape(self.phi, r * c, 1).copy(), self.den, reduce=False)

    def __eq__(self, other):
        if not isinstance(other, KMat):
            return NotImplemented
        if self.shape != other.shape:
            return False
        a, b = self._common(other)
        return bool(np.array_equal(a.num * b.den, b.num * a.den))

    def __hash__(self):
        raise TypeError("KMat is mutable-backed and unhashable")

    def __repr__(self):
        rows = self.to_rows()
        return "KMat([" + "; ".join(", ".join(str(x) for x in row) for row in rows) + "])"


def hstack(mats) -> KMat:
    return KMat.blocks([list(mats)])


def vstack(mats) -> KMat:
    return KMat.blocks([[m] for m in mats])


# ---------------------------------------------------------------------------
# exact row reduction


class _Row:
    """A row vector over Q(zeta_n): integer layers (phi, L) and a denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den


def _row_scale(n, row: _Row, c: Cyc) -> _Row:
    phi, red, _ = _tables(n)
    ints, cden = _ints(c.lift(n).c)
    if phi == 1:
        return _Row(row.num * ints[0], row.den * cden)
    prod = np.zeros((2 * phi - 1, row.num.shape[1]), dtype=object)
    for i, ci in enumerate(ints):
        if ci:
            prod[i:i + phi] += row.num * ci
    return _Row(np.tensordot(red, prod, axes=(0, 0)), row.den * cden)


def _row_sub(a: _Row, b: _Row) -> _Row:
    den = a.den * b.den // math.gcd(a.den, b.den)
    num = a.num * (den // a.den) - b.num * (den // b.den)
    g = _gcd_all(num, den)
    if g > 1:
        num = num // g
        den //= g
    return _Row(num, den)


def _row_entry(n, row: _Row, j: int) -> Cyc:
    return Cyc(n, [Fraction(int(x), row.den) for x in row.num[:, j]])


class Span:
    """Row-reduced span of a list of column vectors (KMats of shape (D, 1)).

    Keeps the transform from the original vectors so that coordinates of any
    vector in the span can be recovered exactly.
    """

    def __init__(self, vectors):
        vectors = list(vectors)
        self.count = len(vectors)
        n = 1
        for v in vectors:
            n = _lcm(n, v.n)
        self.n = n
        if not vectors:
            self.rank = 0
            self.pivots = []
            self.dim = 0
            return
        D = vectors[0].shape[0]
        self.dim = D
        m = len(vectors)
        phi, _ = _field(n)
        rows = []
        for i, v in enumerate(vectors):
            v = v.lift(n)
            num = np.zeros((phi, D + m), dtype=object)
            num[:, :D] = v.num[:, :, 0] if v.shape[1] == 1 else v.num.reshape(phi, -1)
            num[0, D + i] = v.den
            rows.append(_Row(num, v.den))
        pivots = []
        r = 0
        for col in range(D):
            if r == len(rows):
                break
            p = next((i for i in range(r, len(rows)) if rows[i].num[:, col].any()), None)
            if p is None:
                continue
            rows[r], rows[p] = rows[p], rows[r]
            inv = _row_entry(n, rows[r], col).inverse()
            rows[r] = _row_scale(n, rows[r], inv)
            for i in range(len(rows)):
                if i != r and rows[i].num[:, col].any():
                    f = _row_entry(n, rows[i], col)
                    rows[i] = _row_sub(rows[i], _row_scale(n, rows[r], f))
            pivots.append(col)
            r += 1
        self.rank = r
        self.pivots = pivots
        self._rows = rows
        # reduced rows R (rank x D) and transform T with R = T @ V^T
        self._R = self._assemble(rows[:r], slice(0, D)) if r else None
        self._T = self._assemble(rows[:r], slice(D, D + m)) if r else None

    def _assemble(self, rows, sl) -> KMat:
        den = 1
        for row in rows:
            den = den * row.den // math.gcd(den, row.den)
        num = np.stack([row.num[:, sl] * (den // row.den) for row in rows], axis=1)
        return KMat(self.n, num, den)

    def coordinates(self, V: KMat):
        """Coefficients c (count x q) with V = [vectors] @ c, or None if V is outside the span."""
        if self.rank == 0:
            return None if not V.is_zero() else KMat.zeros(self.count, V.shape[1], self.n)
        if self.rank != self.count:
            raise ValueError("vectors are dependent; coordinates are not unique")
        V = V.lift(_lcm(self.n, V.n))
        # c_R = V[pivots]; check V == R^T c_R
        cR = V.submatrix(self.pivots, list(range(V.shape[1])))
        if not (self._R.T @ cR == V):
            return None
        return self._T.T @ cR

    def contains(self, V: KMat) -> bool:
        if self.rank == 0:
            return V.is_zero()
        cR = V.submatrix(self.pivots, list(range(V.shape[1])))
        return self._R.T @ cR == V


def rank(vectors) -> int:
    return Span(vectors).rank

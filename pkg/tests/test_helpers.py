"""Exact linear algebra, real root isolation and the fixed enumerations."""

import random
from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from crossprod.enumeration import gaussian_of_index, interval_of_index, pair, rational_of_index, unpair
from crossprod.linalg import KMat, Span, rank
from crossprod.polyroots import (antiderivative, derivative, divmod_poly, evaluate, gcd, isolate_roots,
                                 mul, refine_root, squarefree, trim)
from crossprod.scalars import Cyc, I


def kmat(rows):
    return KMat.from_entries(rows)


def rand_gauss_matrix(rng, r, c):
    return kmat([[Cyc.gauss(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in range(c)] for _ in range(r)])


# -- linalg --------------------------------------------------------------

def test_kmat_basic_oracle():
    a = kmat([[1, 2], [3, 4]])
    b = kmat([[0, 1], [1, 0]])
    ref = np.array([[1, 2], [3, 4]]) @ np.array([[0, 1], [1, 0]])
    assert a @ b == kmat(ref.tolist())
    assert (a + b).entry(0, 1) == 3
    assert a.trace() == 5
    assert a.T.entry(0, 1) == 3


def test_kmat_adjoint_and_kron():
    a = kmat([[I, 1], [0, 2]])
    assert a.H.entry(0, 0) == Cyc.gauss(0, -1)
    assert a.H.entry(1, 0) == 1
    k = KMat.identity(2).kron(a)
    assert k.shape == (4, 4)
    assert k.block(1, 1, 2) == a
    assert k.block(0, 1, 2).is_zero()


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_kmat_ring_laws(seed):
    rng = random.Random(seed)
    a, b, c = (rand_gauss_matrix(rng, 3, 3) for _ in range(3))
    assert (a @ b) @ c == a @ (b @ c)
    assert a @ (b + c) == a @ b + a @ c
    assert (a @ b).H == b.H @ a.H
    assert (a @ b).trace() == (b @ a).trace()


def test_kmat_mixed_fields():
    z3 = Cyc.root_of_unity(1, 3)
    a = kmat([[z3, 0], [0, I]])
    assert (a @ a @ a).entry(0, 0) == 1
    assert (a @ a @ a).entry(1, 1) == Cyc.gauss(0, -1)


def test_span_rank_and_coordinates():
    v1 = kmat([[1], [0], [1]])
    v2 = kmat([[0], [1], [1]])
    v3 = kmat([[1], [1], [2]])
    assert rank([v1, v2, v3]) == 2
    sp = Span([v1, v2])
    target = v1.scale(Cyc.gauss(2, 1)) + v2.scale(-3)
    coords = sp.coordinates(target)
    assert coords.entry(0, 0) == Cyc.gauss(2, 1) and coords.entry(1, 0) == -3
    assert sp.coordinates(kmat([[1], [0], [0]])) is None
    assert not sp.contains(kmat([[1], [0], [0]]))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_span_coordinates_recover_combination(seed):
    rng = random.Random(seed)
    vecs = [rand_gauss_matrix(rng, 5, 1) for _ in range(3)]
    if rank(vecs) < 3:
        return
    coeffs = [Cyc.gauss(rng.randint(-5, 5), rng.randint(-5, 5)) for _ in range(3)]
    target = vecs[0].scale(coeffs[0]) + vecs[1].scale(coeffs[1]) + vecs[2].scale(coeffs[2])
    c = Span(vecs).coordinates(target)
    assert [c.entry(i, 0) for i in range(3)] == coeffs


# -- polynomial roots ------------------------------------------------------

def test_isolate_known_roots():
    # (x - 1/3)(x - 1/2)(x^2 - 2) on (-2, 2)
    p = mul(mul((Fraction(-1, 3), 1), (Fraction(-1, 2), 1)), (-2, 0, 1))
    ivs = isolate_roots(p, -2, 2)
    assert len(ivs) == 4
    roots = [-2 ** 0.5, 1 / 3, 1 / 2, 2 ** 0.5]
    for (lo, hi), r in zip(ivs, roots):
        assert float(lo) <= r <= float(hi)
    lo, hi = refine_root(p, *ivs[-1], Fraction(1, 2 ** 30))
    assert hi - lo < Fraction(1, 2 ** 30) and lo * lo <= 2 <= hi * hi


def test_root_at_endpoint_excluded():
    assert isolate_roots((0, 1), 0, 1) == []
    assert isolate_roots((-1, 1), 0, 1) == []  # root at the closed end b
    [(lo, hi)] = isolate_roots((-1, 1), 0, 2)
    assert lo <= 1 <= hi


def test_squarefree_and_gcd():
    p = mul((-1, 1), (-1, 1))  # (x - 1)^2
    assert trim(squarefree(p)) == (Fraction(-1), Fraction(1))
    q, r = divmod_poly(mul(p, (2, 1)), (-1, 1))
    assert not any(r)
    assert trim(gcd(p, (-1, 1))) == (Fraction(-1), Fraction(1))


@given(st.lists(st.fractions(-3, 3, max_denominator=4), min_size=1, max_size=4, unique=True))
@settings(max_examples=50, deadline=None)
def test_isolation_finds_every_rational_root(roots):
    p = (Fraction(1),)
    for r in roots:
        p = mul(p, (-r, Fraction(1)))
    ivs = isolate_roots(p, -4, 4)
    assert len(ivs) == len(roots)
    for (lo, hi), r in zip(ivs, sorted(roots)):
        assert lo <= r <= hi


@given(st.lists(st.fractions(-5, 5, max_denominator=5), min_size=1, max_size=5))
def test_antiderivative_inverts_derivative(p):
    assert trim(derivative(antiderivative(tuple(p)))) == trim(tuple(p))
    x = Fraction(7, 3)
    assert evaluate(antiderivative(tuple(p)), 0) == 0
    assert evaluate(tuple(p), x) == sum(c * x ** i for i, c in enumerate(p))


# -- enumerations -------------------------------------------------------------

def test_pairing_is_a_bijection():
    seen = set()
    for n in range(500):
        i, j = unpair(n)
        assert pair(i, j) == n
        seen.add((i, j))
    assert len(seen) == 500


def test_rational_enumeration_prefix():
    assert [rational_of_index(n) for n in range(7)] == [0, 1, -1, Fraction(1, 2), Fraction(-1, 2), 2, -2]
    qs = [rational_of_index(n) for n in range(2000)]
    assert len(set(qs)) == len(qs)
    assert Fraction(3, 7) in qs and Fraction(-5, 2) in qs


def test_gaussian_and_interval_enumerations():
    assert gaussian_of_index(0) == (0, 0)
    assert gaussian_of_index(1) == (0, 1)
    assert interval_of_index(0) == (0, 1)
    ivs = [interval_of_index(n) for n in range(200)]
    assert all(a < b for a, b in ivs)
    assert len(set(ivs)) == len(ivs)

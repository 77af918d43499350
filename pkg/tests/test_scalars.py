from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossprod.intervals import (RationalInterval, round_out, sqrt_exact, sqrt_interval,
                                 sqrt_lower, sqrt_upper)
from crossprod.scalars import Cyc, I, ONE, ZERO, cyclotomic_poly, format_gaussian, parse_gaussian

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def cyc(draw, orders=(1, 3, 4, 5, 8, 12)):
    n = draw(st.sampled_from(orders))
    coeffs = [draw(small) for _ in range(n)]
    return sum((Cyc.root_of_unity(j, n) * c for j, c in enumerate(coeffs)), Cyc.rational(0)), n, coeffs


def test_cyclotomic_polys():
    # Phi_1 = x - 1, Phi_4 = x^2 + 1, Phi_12 = x^4 - x^2 + 1 (lowest degree first)
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_roots_of_unity():
    z = Cyc.root_of_unity(1, 8)
    assert z ** 8 == ONE
    assert z ** 4 == Cyc.rational(-1)
    assert z ** 2 == I
    assert Cyc.root_of_unity(1, 3) + Cyc.root_of_unity(2, 3) == Cyc.rational(-1)


def test_gaussian_text():
    assert format_gaussian(Fraction(3), Fraction(1)) == "3+I"
    assert format_gaussian(Fraction(0), Fraction(-1, 2)) == "-1/2*I"
    assert format_gaussian(Fraction(2, 3), Fraction(0)) == "2/3"
    for text in ["3", "-1/2", "2+I", "1/3-2*I", "I", "-I", "5/2*I"]:
        assert str(parse_gaussian(text)) == text


def test_parse_gaussian_rejects_garbage():
    with pytest.raises(ValueError):
        parse_gaussian("3+")
    with pytest.raises(ValueError):
        parse_gaussian("x")


@given(cyc(), cyc(), cyc())
@settings(max_examples=60, deadline=None)
def test_field_axioms(a, b, c):
    a, b, c = a[0], b[0], c[0]
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ZERO
    if not a.is_zero():
        assert a * a.inverse() == ONE


@given(cyc(), cyc())
@settings(max_examples=60, deadline=None)
def test_conjugation_is_a_field_automorphism(a, b):
    a, b = a[0], b[0]
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()
    assert a.conj().conj() == a
    assert a.abs2().imag() == ZERO


@given(cyc())
@settings(max_examples=40, deadline=None)
def test_enclosure_matches_floating_value(drawn):
    a, n, coeffs = drawn
    (rl, rh), (il, ih) = a.enclose(40)
    assert rh - rl < Fraction(1, 2 ** 40) and ih - il < Fraction(1, 2 ** 40)
    z = sum(complex(float(c)) * complex(mpmath.exp(2j * mpmath.pi * j / n)) for j, c in enumerate(coeffs))
    assert float(rl) - 1e-9 <= z.real <= float(rh) + 1e-9
    assert float(il) - 1e-9 <= z.imag <= float(ih) + 1e-9


def test_equality_across_fields():
    # i lives in Q(zeta_4) and Q(zeta_12); equality does not depend on the chosen field
    assert I == Cyc.root_of_unity(3, 12)
    assert hash(I) == hash(Cyc.root_of_unity(3, 12))
    assert Cyc.root_of_unity(2, 8).minimal().n == 4


def test_sqrt_bounds():
    lo, hi = sqrt_lower(2, 30), sqrt_upper(2, 30)
    assert lo * lo <= 2 <= hi * hi
    assert hi - lo < Fraction(1, 2 ** 29)
    iv = sqrt_exact(Fraction(1, 2), 12)
    assert iv.width < Fraction(1, 2 ** 12)
    assert iv.lo ** 2 <= Fraction(1, 2) <= iv.hi ** 2
    iv2 = sqrt_interval(RationalInterval(Fraction(1, 4), Fraction(1, 4)), 10)
    assert iv2.contains(Fraction(1, 2))


@given(st.fractions(min_value=-10, max_value=10), st.fractions(min_value=0, max_value=3),
       st.integers(min_value=1, max_value=20))
def test_round_out_contains(a, w, bits):
    iv = RationalInterval(a, a + w)
    r = round_out(iv, bits)
    assert r.contains_interval(iv)
    assert r.lo.denominator <= 2 ** bits and r.hi.denominator <= 2 ** bits


@given(st.fractions(-3, 3), st.fractions(0, 2), st.fractions(-3, 3), st.fractions(0, 2))
def test_interval_arithmetic_is_inclusion_monotone(a, w, b, v):
    x, y = RationalInterval(a, a + w), RationalInterval(b, b + v)
    for p in (a, a + w, a + w / 2):
        for q in (b, b + v, b + v / 3):
            assert (x + y).contains(p + q)
            assert (x - y).contains(p - q)
            assert (x * y).contains(p * q)


def test_interval_invariant():
    with pytest.raises(ValueError):
        RationalInterval(Fraction(1), Fraction(0))

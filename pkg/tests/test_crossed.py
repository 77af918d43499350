import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossprod.cantor import Bernoulli, CoordinatePermutation, Odometer, XorAction, swap
from crossprod.crossed import (CAdd, CMul, CScalar, CStar, CrossedProduct, LInfinityBase, Pi, U,
                               random_expr)
from crossprod.findim import exact_trace, realize, shipped_models
from crossprod.groups import DirectProduct, FreeAbelian, GroupError, UnsupportedGroup, characters, cyclic
from crossprod.presentations import IndicatorCombination, SpecialPoint, indicator
from crossprod.scalars import Cyc

HALF = Bernoulli(Fraction(1, 2))
Z2 = cyclic(2)
S = Z2.parse("s")


def flip_product():
    return CrossedProduct(LInfinityBase(HALF, XorAction(Z2, {"s": "1"})))


def leaf_indicator(rng):
    p = SpecialPoint(rng.randrange(15))  # words of length <= 3
    if rng.random() < 0.3:
        return Cyc.gauss(rng.randint(-2, 2), rng.randint(-2, 2)) * p
    return p


def comb(d):
    return IndicatorCombination.from_dict(d)


# -- examples ------------------------------------------------------------

def test_normalize_examples():
    cp = flip_product()
    p0 = indicator("0")
    x = cp.normalize(CMul(CMul(U(S), Pi(p0)), U(S.inverse())))
    assert x.support() == [Z2.identity()]
    assert x.coeff(Z2.identity()) == IndicatorCombination.indicator("1")
    a = Cyc.gauss(1, 1) * indicator("01")
    y = cp.normalize(CStar(CMul(Pi(a), U(S))))
    # alpha_s(a^*) = (1 - i) p[11]
    assert y.coeff(S) == comb({"11": Cyc.gauss(1, -1)})
    assert cp.normalize(CMul(U(S), U(S.inverse()))) == cp.one()


def test_normal_form_algebra_examples():
    cp = flip_product()
    a = cp.pi(indicator("0"))
    b = cp.term(indicator("10"), S)
    # {e: p0} * {s: p10} = {s: p0 * p10} = 0
    assert cp.mul(a, b).is_zero()
    b2 = cp.term(indicator("01"), S)
    assert cp.mul(a, b2) == cp.term(indicator("01"), S)
    assert cp.mul(cp.u(S), cp.u(S.inverse())) == cp.one()
    assert cp.adjoint(cp.term(indicator("0"), S)) == cp.term(indicator("1"), S.inverse())


def test_dual_trace_examples():
    cp = flip_product()
    re_, im_ = cp.dual_trace(cp.term(indicator("0"), S), 10)
    assert re_.lo == re_.hi == 0 and im_.lo == im_.hi == 0
    re_, _ = cp.dual_trace(cp.pi(indicator("0")), 10)
    assert re_.contains(Fraction(1, 2))
    re_, _ = cp.dual_trace(cp.one(), 10)
    assert re_.contains(1)


def test_norm_examples():
    cp = flip_product()
    for g in Z2.elements():
        assert cp.norm2(cp.u(g), 20).contains(1)
    iv = cp.norm2(cp.term(indicator("0"), S), 20)
    assert iv.lo ** 2 <= Fraction(1, 2) <= iv.hi ** 2
    assert iv.width < Fraction(1, 2 ** 20)
    assert cp.norm2(cp.pi(indicator("0")) + cp.pi(indicator("1")), 20).contains(1)


def test_dual_action_examples():
    cp = flip_product()
    p0, p1 = characters(Z2)
    a = indicator("0")
    assert cp.dual_action(p1, cp.term(a, S)) == cp.term(-1 * a, S)
    assert cp.dual_action(p1, cp.pi(a)) == cp.pi(a)
    x = cp.pi(indicator("1")) + cp.term(a, S)
    avg = cp.scale(Fraction(1, 2), cp.dual_action(p0, x) + cp.dual_action(p1, x))
    assert avg == cp.pi(indicator("1"))


def test_dual_action_needs_abelian_group():
    from crossprod.findim import FinBase
    from crossprod.groups import symmetric_group
    s3 = symmetric_group(3)
    base = FinBase.functions(s3, [Fraction(1)], {})
    cp = CrossedProduct(base)
    z3 = cyclic(3)
    with pytest.raises((UnsupportedGroup, GroupError)):
        cp.dual_action(characters(z3)[1], cp.one())


def test_mismatched_products_rejected():
    a, b = flip_product(), flip_product()
    with pytest.raises(GroupError):
        a.mul(a.one(), b.one())


def test_infinite_images_stay_symbolic():
    odo = Odometer()
    cp = CrossedProduct(LInfinityBase(HALF, odo))
    g = odo.group.parse("g")
    x = cp.normalize(CMul(CMul(U(g), Pi(indicator("1"))), CStar(U(g))))
    # alpha_g(p[1]) is the indicator of the infinite union of [0^k 1]
    assert x.support() == [odo.group.identity()]
    assert cp.norm2(x, 12).contains_interval(cp.norm2(x, 14)) or cp.norm2(x, 12).overlaps(cp.norm2(x, 14))
    iv = cp.norm2(x, 12)
    assert iv.lo ** 2 <= Fraction(1, 2) + Fraction(1, 2 ** 10) and iv.hi ** 2 >= Fraction(1, 2) - Fraction(1, 2 ** 10)
    re_, _ = cp.dual_trace(x, 12)
    assert re_.contains(Fraction(1, 2)) or abs(re_.midpoint - Fraction(1, 2)) < Fraction(1, 2 ** 11)


# -- properties ------------------------------------------------------------

L_INF_PRODUCTS = [
    ("Z2 xor", lambda: CrossedProduct(LInfinityBase(HALF, XorAction(Z2, {"s": "101"})))),
    ("Z perm", lambda: CrossedProduct(LInfinityBase(Bernoulli(Fraction(1, 3)),
                                                    CoordinatePermutation(FreeAbelian(1), {0: swap(0, 2)})))),
    ("Z2xZ2 xor", lambda: CrossedProduct(LInfinityBase(HALF, XorAction(
        DirectProduct([cyclic(2), cyclic(2)]), {"s_1": "1", "s_2": "01"})))),
]


@pytest.mark.parametrize("name,make", L_INF_PRODUCTS, ids=[n for n, _ in L_INF_PRODUCTS])
def test_normalize_is_confluent_and_compatible(name, make):
    cp = make()
    rng = random.Random(name)
    for i in range(25):
        x = random_expr(rng, cp.group, leaf_indicator, max_depth=4)
        y = random_expr(rng, cp.group, leaf_indicator, max_depth=4)
        nx = cp.normalize(x)
        assert cp.normalize(x, method="expand") == nx
        assert cp.normalize(x, method="expand", strategy="random", seed=i) == nx
        ny = cp.normalize(y)
        assert cp.normalize(CMul(x, y)) == cp.mul(nx, ny)
        assert cp.normalize(CAdd(x, y)) == cp.add(nx, ny)
        assert cp.normalize(CStar(x)) == cp.adjoint(nx)
        assert cp.adjoint(cp.adjoint(nx)) == nx


@pytest.mark.parametrize("name,make", L_INF_PRODUCTS, ids=[n for n, _ in L_INF_PRODUCTS])
def test_trace_property_and_sharp_norm(name, make):
    cp = make()
    rng = random.Random(name + "tr")
    for _ in range(15):
        x = cp.normalize(random_expr(rng, cp.group, leaf_indicator, max_depth=3))
        y = cp.normalize(random_expr(rng, cp.group, leaf_indicator, max_depth=3))
        for k in (4, 12, 20):
            a_re, a_im = cp.dual_trace(cp.mul(x, y), k)
            b_re, b_im = cp.dual_trace(cp.mul(y, x), k)
            assert a_re.overlaps(b_re) and a_im.overlaps(b_im)
        assert cp.norm2(x, 10).overlaps(cp.sharp_norm(x, 10))


def test_fixed_points_of_dual_action():
    cp = flip_product()
    chars = characters(Z2)
    rng = random.Random(7)
    for _ in range(30):
        x = cp.normalize(random_expr(rng, Z2, leaf_indicator, max_depth=3))
        fixed = all(cp.dual_action(p, x) == x for p in chars)
        assert fixed == all(g.is_identity() for g in x.support())
        # the dual action is a *-automorphism and a group action
        y = cp.normalize(random_expr(rng, Z2, leaf_indicator, max_depth=3))
        for p in chars:
            assert cp.dual_action(p, cp.mul(x, y)) == cp.mul(cp.dual_action(p, x), cp.dual_action(p, y))
            assert cp.dual_action(p, cp.adjoint(x)) == cp.adjoint(cp.dual_action(p, x))
            for q in chars:
                assert cp.dual_action(p, cp.dual_action(q, x)) == cp.dual_action(p * q, x)


@pytest.mark.parametrize("name,base", shipped_models()[:6], ids=[n for n, _ in shipped_models()[:6]])
def test_findim_oracle_agreement(name, base):
    cp = CrossedProduct(base)
    rng = random.Random(name)
    for _ in range(15):
        x = random_expr(rng, base.group, lambda r: base.random_poly(r), max_depth=4)
        nf = cp.normalize(x)
        m = realize(x, base)
        assert realize(nf) == m
        for k in (5, 20, 30):
            sq = cp.norm2(nf, k)
            exact = exact_trace(cp.mul(cp.adjoint(nf), nf)).to_fraction()
            assert sq.lo ** 2 <= exact <= sq.hi ** 2
        if not nf.is_zero():
            assert cp.norm2(nf, 30).lo > 0


@given(st.integers(0, 10 ** 6))
@settings(max_examples=20, deadline=None)
def test_scalar_and_unit_laws(seed):
    cp = flip_product()
    rng = random.Random(seed)
    x = cp.normalize(random_expr(rng, Z2, leaf_indicator, max_depth=3))
    assert cp.mul(cp.one(), x) == x == cp.mul(x, cp.one())
    assert cp.normalize(CMul(CScalar(Cyc.gauss(0, 1)), U(Z2.identity()))) == cp.scale(Cyc.gauss(0, 1), cp.one())
    assert cp.add(x, cp.scale(-1, x)).is_zero()

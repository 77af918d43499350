import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossprod.crossed import CrossedProduct, random_expr
from crossprod.findim import (DimensionBudget, FinBase, conjugate, dual_action_matrix, exact_norm2_squared,
                              exact_trace, fixed_point_dimension, matrix_trace, normal_form_of_matrix,
                              plancherel_check, realize, rep_lambda, rep_pi, shipped_models,
                              takesaki_check, trivial_action)
from crossprod.groups import DirectProduct, FreeAbelian, UnsupportedGroup, characters, cyclic, symmetric_group
from crossprod.linalg import KMat
from crossprod.scalars import Cyc

from test_groups import abelian_groups

HALF = Fraction(1, 2)
Z2 = cyclic(2)
S = Z2.parse("s")
MODELS = shipped_models()
ABELIAN_MODELS = [(n, b) for n, b in MODELS if b.group.is_abelian()]


def flip():
    return FinBase.functions(Z2, [HALF, HALF], {"s": [1, 0]}, "C^2 flip")


def diag(*vals):
    return KMat.diag([Cyc.rational(v) if not isinstance(v, Cyc) else v for v in vals])


def m2_conjugation():
    # M_2 with Z/2 acting by Ad diag(1, -1)
    return FinBase.matrices(Z2, 2, unitaries={"s": [[1, 0], [0, -1]]}, label="M_2 Ad")


# -- examples ------------------------------------------------------------

def test_rep_pi_examples():
    triv = trivial_action(Z2, 2)
    x = diag(3, Cyc.gauss(0, 1))
    assert rep_pi(triv, x) == KMat.identity(2).kron(x)
    base = flip()
    a, b = Cyc.gauss(1, 2), Fraction(-5, 3)
    m = rep_pi(base, diag(a, b))
    assert m.block(0, 0, 2) == diag(a, b)
    assert m.block(1, 1, 2) == diag(b, a)
    assert m.block(0, 1, 2).is_zero() and m.block(1, 0, 2).is_zero()
    assert rep_pi(base, base.one()) == KMat.identity(4)


def test_rep_lambda_examples():
    base = flip()
    assert rep_lambda(base, Z2.identity()) == KMat.identity(4)
    ls = rep_lambda(base, S)
    assert ls @ ls == KMat.identity(4)
    assert ls.block(0, 1, 2) == KMat.identity(2) and ls.block(0, 0, 2).is_zero()


def test_exact_trace_examples():
    base = flip()
    cp = CrossedProduct(base)
    assert exact_trace(cp.u(S)) == 0
    assert exact_trace(cp.u(Z2.identity())) == 1
    x = cp.term(diag(1, 0), S)
    assert exact_trace(cp.mul(cp.adjoint(x), x)) == HALF
    assert exact_norm2_squared(base, realize(x)) == HALF
    assert matrix_trace(base, realize(cp.u(S))) == 0


def test_dual_action_examples():
    base = flip()
    p0, p1 = characters(Z2)
    v = dual_action_matrix(base, p1)
    rng = random.Random(1)
    for _ in range(10):
        x = rep_pi(base, base.random_element(rng))
        assert conjugate(v, x) == x
    ls = rep_lambda(base, S)
    assert conjugate(v, ls) == ls.scale(-1)
    assert conjugate(dual_action_matrix(base, p0), ls) == ls


def test_fixed_point_dimension_examples():
    for _, base in ABELIAN_MODELS:
        assert fixed_point_dimension(base) == base.dim
    assert fixed_point_dimension(m2_conjugation()) == 4


def test_takesaki_examples():
    rep = takesaki_check(trivial_action(Z2, 1))
    assert rep.passed and rep.dim_double == rep.dim_target == 4
    rep = takesaki_check(flip())
    assert rep.passed and rep.dim_double == rep.dim_target == 8
    assert str(rep).startswith("PASS takesaki")
    assert "dims 8 = 8" in str(rep)
    assert rep.unit


def test_takesaki_on_matrix_algebra():
    rep = takesaki_check(m2_conjugation())
    assert rep.passed and rep.dim_double == 4 * 4


def test_takesaki_budget():
    with pytest.raises(DimensionBudget):
        takesaki_check(trivial_action(cyclic(7), 1))
    with pytest.raises(DimensionBudget):
        takesaki_check(flip(), max_dim=1)


def test_nonabelian_duality_unsupported():
    base = dict(MODELS)["C^3, S3 permutation"]
    with pytest.raises(UnsupportedGroup):
        fixed_point_dimension(base)
    with pytest.raises(UnsupportedGroup):
        takesaki_check(base)
    with pytest.raises(UnsupportedGroup):
        plancherel_check(symmetric_group(3))


def test_bad_models_rejected():
    with pytest.raises(UnsupportedGroup):
        FinBase.functions(FreeAbelian(1), [1], {})
    with pytest.raises(ValueError):
        FinBase.functions(Z2, [Fraction(1, 4), Fraction(3, 4)], {"s": [1, 0]})  # not state preserving
    with pytest.raises(ValueError):
        FinBase.functions(Z2, [HALF, HALF], {"s": [0, 0]})
    with pytest.raises(ValueError):
        FinBase.functions(Z2, [1, 0], {})
    with pytest.raises(ValueError):
        FinBase.matrices(Z2, 2, unitaries={"s": [[1, 1], [0, 1]]})
    with pytest.raises(ValueError):
        FinBase.matrices(Z2, 2, density=[[1, 0], [0, 1]])


# -- properties ------------------------------------------------------------

@pytest.mark.parametrize("name,base", MODELS + [("M_2 Ad", m2_conjugation())],
                         ids=[n for n, _ in MODELS] + ["M_2 Ad"])
def test_covariance_and_star_homomorphism(name, base):
    rng = random.Random(name)
    els = base.group.elements()
    size = len(els) * base.n
    for _ in range(50):
        r = rng.choice(els)
        x, y = base.random_element(rng), base.random_element(rng)
        lam = rep_lambda(base, r)
        assert lam @ lam.H == KMat.identity(size)
        assert lam @ rep_pi(base, x) @ lam.H == rep_pi(base, base.act(r, x))
        assert rep_pi(base, x @ y) == rep_pi(base, x) @ rep_pi(base, y)
        assert rep_pi(base, x.H) == rep_pi(base, x).H
        assert rep_pi(base, x + y) == rep_pi(base, x) + rep_pi(base, y)
    for r, t in itertools.product(els, repeat=2):
        assert rep_lambda(base, r) @ rep_lambda(base, t) == rep_lambda(base, r * t)


@pytest.mark.parametrize("name,base", MODELS, ids=[n for n, _ in MODELS])
def test_trace_is_tracial(name, base):
    cp = CrossedProduct(base)
    rng = random.Random(name + "tau")
    for _ in range(20):
        x = cp.normalize(random_expr(rng, base.group, base.random_poly, max_depth=3))
        y = cp.normalize(random_expr(rng, base.group, base.random_poly, max_depth=3))
        assert exact_trace(cp.mul(x, y)) == exact_trace(cp.mul(y, x))
        assert matrix_trace(base, realize(x) @ realize(y)) == exact_trace(cp.mul(x, y))


@pytest.mark.parametrize("name,base", MODELS, ids=[n for n, _ in MODELS])
def test_realization_round_trip(name, base):
    cp = CrossedProduct(base)
    rng = random.Random(name + "rt")
    for _ in range(10):
        x = cp.normalize(random_expr(rng, base.group, base.random_poly, max_depth=3))
        assert normal_form_of_matrix(cp, realize(x)) == x
        assert realize(cp.adjoint(x)) == realize(x).H


@pytest.mark.parametrize("name,base", ABELIAN_MODELS, ids=[n for n, _ in ABELIAN_MODELS])
def test_dual_action_laws(name, base):
    rng = random.Random(name + "dual")
    chars = characters(base.group)
    cp = CrossedProduct(base)
    for _ in range(10):
        x = cp.normalize(random_expr(rng, base.group, base.random_poly, max_depth=3))
        m = realize(x)
        for p in chars:
            v = dual_action_matrix(base, p)
            # the matrix dual action agrees with the symbolic one
            assert conjugate(v, m) == realize(cp.dual_action(p, x))
            for s in base.group.elements():
                lam = rep_lambda(base, s)
                assert conjugate(v, lam) == lam.scale(p.conj_value(s))


@pytest.mark.parametrize("spec", list(abelian_groups(8)), ids=repr)
def test_plancherel_diagonalizes_lambda(spec):
    assert plancherel_check(spec)


@pytest.mark.parametrize("name,base", ABELIAN_MODELS[:6], ids=[n for n, _ in ABELIAN_MODELS[:6]])
def test_takesaki_shipped_models(name, base):
    rep = takesaki_check(base)
    assert rep.passed, str(rep)
    assert rep.dim_double == base.dim * base.group.order() ** 2


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_state_is_positive_and_faithful(seed):
    rng = random.Random(seed)
    name, base = rng.choice(MODELS)
    x = base.random_element(rng)
    v = base.tau(x.H @ x)
    assert v.is_rational() and v.to_fraction() >= 0
    assert (v.to_fraction() == 0) == x.is_zero()
    assert base.tau(base.one()) == 1

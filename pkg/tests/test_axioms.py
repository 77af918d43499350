import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossprod.axioms import (DISCRETE_SCHEMAS, AxiomSentence, check, counter_models, discrete_sentence,
                              enumerate_discrete, enumerate_l1, first_violation, iter_discrete,
                              read_sexpr, stage_bound_discrete, write_sexpr)
from crossprod.enumeration import gaussian_of_index
from crossprod.findim import FinBase, shipped_models
from crossprod.groups import Free, FreeAbelian, GroupError, cyclic, symmetric_group
from crossprod.l1group import L1DiscretePresentation, L1RealPresentation

Z2 = cyclic(2)
HALF = Fraction(1, 2)
MODELS = shipped_models()


def flip():
    return FinBase.functions(Z2, [HALF, HALF], {"s": [1, 0]})


# -- examples ------------------------------------------------------------

def test_first_sentence_is_d1_at_identity():
    for spec in (Z2, FreeAbelian(1), Free(2), symmetric_group(3)):
        first = enumerate_discrete(spec, 1)[0]
        assert first.schema == "D1"
        assert first.param("s") == "e" and first.param("n") == 1


def test_z2_stream_contains_d5_at_s_s():
    bound = stage_bound_discrete(1)
    sents = enumerate_discrete(Z2, bound)
    hits = [x for x in sents if x.schema == "D5" and x.param("s") == "s" and x.param("r") == "s"]
    assert hits
    # alpha_s alpha_s x against alpha_e x
    assert "(alpha e" in hits[0].to_text()


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        enumerate_discrete(Z2, 0)
    with pytest.raises(ValueError):
        enumerate_l1(L1RealPresentation(), 0)


def test_check_examples():
    base = flip()
    d5 = discrete_sentence(Z2, "D5", Z2.parse("s"), 3, r=Z2.parse("s"))
    assert check(d5, base, samples=12) == 0
    d6 = discrete_sentence(Z2, "D6", Z2.parse("s"), 2)
    assert check(d6, base) == 0
    _, perturbed = counter_models()["D6"]
    assert check(discrete_sentence(Z2, "D6", Z2.parse("s"), 1), perturbed) >= Fraction(1, 3)


def test_mismatched_group_rejected():
    sentence = enumerate_discrete(cyclic(3), 1)[0]
    with pytest.raises(GroupError):
        check(sentence, flip())


def test_l1_examples():
    sents = enumerate_l1(L1DiscretePresentation(FreeAbelian(1)), 60)
    l3 = [x for x in sents if x.schema == "L3" and x.param("h") == "d[g]"]
    assert l3
    assert "(interval 1 1)" in l3[0].to_text()  # the bound ||delta_1||_1 = 1
    real = enumerate_l1(L1RealPresentation(), 300)
    l4 = [x for x in real if x.schema == "L4" and x.param("f") == "1[0,1]" and x.param("h") == "1[0,1/2]"]
    assert l4
    # ||1_[0,1] - 1_[0,1/2]||_1 = 1/2 sits in the Hausdorff bound
    body = read_sexpr(l4[0].to_text())
    assert "1/2" in write_sexpr(body)


def test_l1_schema_marked_reconstructed():
    sents = enumerate_l1(L1DiscretePresentation(Z2), 40)
    assert all(x.reconstructed == (x.schema == "L1") for x in sents)
    assert {x.schema for x in sents} == {"L1", "L2", "L3", "L4"}


def test_sexpr_round_trip_examples():
    for text in ['(a (b 1/2) "x y" (c))', "(D1 (group Z/2))", "()"]:
        assert write_sexpr(read_sexpr(text)) == text
    with pytest.raises(ValueError):
        read_sexpr("(a (b)")


# -- properties ------------------------------------------------------------

@pytest.mark.parametrize("name,model", MODELS, ids=[n for n, _ in MODELS])
def test_soundness_first_200(name, model):
    for sentence in enumerate_discrete(model.group, 200):
        assert check(sentence, model) == 0, sentence.to_text()


@pytest.mark.parametrize("name,model", MODELS[:4], ids=[n for n, _ in MODELS[:4]])
def test_l1_sentences_hold_on_true_models(name, model):
    for sentence in enumerate_l1(L1DiscretePresentation(model.group), 80):
        assert check(sentence, model) == 0, sentence.to_text()


@pytest.mark.parametrize("schema", DISCRETE_SCHEMAS)
def test_discrimination(schema):
    desc, model = counter_models()[schema]
    found = first_violation(schema, model)
    assert found is not None, desc
    sentence, defect = found
    assert sentence.schema == schema and defect >= Fraction(1, 100)


@pytest.mark.parametrize("spec", [Z2, cyclic(3), FreeAbelian(1), Free(2)], ids=repr)
def test_prefix_stability_and_no_repeats(spec):
    full = enumerate_discrete(spec, 300)
    for n in (1, 7, 50, 299):
        assert enumerate_discrete(spec, n) == full[:n]
    texts = [x.to_text() for x in full]
    assert len(set(texts)) == len(texts)
    pres = L1DiscretePresentation(spec)
    l1 = enumerate_l1(pres, 120)
    assert enumerate_l1(pres, 50) == l1[:50]
    assert len({x.to_text() for x in l1}) == len(l1)


@pytest.mark.parametrize("spec", [Z2, cyclic(3), FreeAbelian(1), Free(2)], ids=repr)
@pytest.mark.parametrize("B", [0, 1, 2, 3])
def test_fairness_bound(spec, B):
    limit = stage_bound_discrete(B)
    seen = {x.to_text() for x in itertools.islice(iter_discrete(spec), limit)}
    order = spec.order()
    elems = spec.enumerate(B + 1 if order is None else min(B + 1, order))
    for s in elems:
        for n in range(1, B + 2):
            for schema in ("D1", "D2", "D3", "D6"):
                assert discrete_sentence(spec, schema, s, n).to_text() in seen
            for r in elems:
                assert discrete_sentence(spec, "D5", s, n, r=r).to_text() in seen
            for j in range(B + 1):
                assert discrete_sentence(spec, "D4", s, n, lam=gaussian_of_index(j)).to_text() in seen


def test_sentence_text_round_trip():
    sents = enumerate_discrete(symmetric_group(3), 200) + enumerate_l1(L1RealPresentation(), 60)
    sents += enumerate_l1(L1DiscretePresentation(Free(2)), 60)
    for x in sents:
        back = AxiomSentence.from_text(x.to_text())
        assert back == x
        assert back.to_text() == x.to_text()


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_check_is_deterministic_and_sound(seed):
    rng = random.Random(seed)
    name, model = rng.choice(MODELS)
    sentence = rng.choice(enumerate_discrete(model.group, 120))
    assert check(sentence, model, samples=4, seed=seed) == 0
    _, broken = counter_models()["D6"]
    bad = discrete_sentence(Z2, "D6", Z2.parse("s"), rng.randint(1, 3))
    assert check(bad, broken, seed=seed) == check(bad, broken, seed=seed) > 0

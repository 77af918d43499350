import itertools
import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossprod.cantor import (Bernoulli, BernoulliShift, BudgetExceeded, CoordinatePermutation,
                              CylinderUnion, Markov, Odometer, XorAction, complement, difference,
                              image_measure, image_union, index_of_word, join, lower_image, measure,
                              meet, normalize, parse_union, serialize_union, swap, word_of_index)
from crossprod.groups import Free, FreeAbelian, cyclic, symmetric_group

DEPTH = 6
POINTS = ["".join(bits) for bits in itertools.product("01", repeat=DEPTH)]

words = st.text(alphabet="01", max_size=5)
unions = st.lists(words, max_size=6).map(normalize)


def as_set(U):
    return frozenset(x for x in POINTS if U.covers(x))


def random_union(rng, max_len=5, max_words=5):
    return normalize("".join(rng.choice("01") for _ in range(rng.randint(0, max_len)))
                     for _ in range(rng.randint(0, max_words)))


# -- examples ------------------------------------------------------------

@pytest.mark.parametrize("given_words,expected", [
    (["0", "1"], ("",)),
    (["01", "0"], ("0",)),
    (["00", "01", "11"], ("0", "11")),
])
def test_normalize_examples(given_words, expected):
    assert normalize(given_words).words == expected


@pytest.mark.parametrize("text,expected", [("0", "1"), ("01", "1,00"), ("ε", "{}")])
def test_complement_examples(text, expected):
    assert serialize_union(complement(parse_union(text))) == expected


def test_meet_join_examples():
    assert meet(parse_union("0"), parse_union("01")).words == ("01",)
    assert meet(parse_union("0"), parse_union("1")).is_empty()
    assert join(parse_union("00"), parse_union("01")).words == ("0",)


def test_measure_examples():
    half = Bernoulli(Fraction(1, 2))
    for n in range(0, 21):
        w = "01" * (n // 2) + "1" * (n % 2)
        iv = measure(half, CylinderUnion.cylinder(w), 20)
        assert iv.contains(Fraction(1, 2 ** n))
    assert measure(Bernoulli(Fraction(1, 3)), parse_union("01"), 10).contains(Fraction(2, 9))


def test_markov_uniform_agrees_with_bernoulli():
    rng = random.Random(100)
    mk = Markov((Fraction(1, 2), Fraction(1, 2)), ((Fraction(1, 2), Fraction(1, 2)),) * 2)
    b = Bernoulli(Fraction(1, 2))
    for _ in range(100):
        U = random_union(rng, max_len=8)
        assert measure(mk, U, 20) == measure(b, U, 20)


def test_markov_rejects_bad_rows():
    with pytest.raises(ValueError):
        Markov((Fraction(1, 2), Fraction(1, 2)), ((Fraction(1, 2), Fraction(1, 3)), (1, 0)))


def test_odometer_examples():
    odo = Odometer()
    half = Bernoulli(Fraction(1, 2))
    g = odo.group.parse("g")
    assert image_union(odo, g, parse_union("0")).words == ("1",)
    # [1] + 1 is the infinite union of [0^k 1]; the stream never ends
    stream = odo.image_stream(g, "1")
    assert list(itertools.islice(stream, 4)) == ["01", "001", "0001", "00001"]
    assert image_union(odo, g, parse_union("1")) is None
    assert image_measure(odo, half, g, parse_union("1"), 12).contains(Fraction(1, 2))
    low, gap = lower_image(odo, half, g, parse_union("1"), 8)
    assert gap < Fraction(1, 2 ** 8)
    assert all(w.endswith("1") and set(w[:-1]) <= {"0"} for w in low.words)


def test_coordinate_swap_example():
    z2 = cyclic(2)
    act = CoordinatePermutation(z2, {"s": swap(0, 1)})
    s = z2.parse("s")
    U = image_union(act, s, parse_union("01"))
    assert U.words == ("10",)
    assert measure(Bernoulli(Fraction(1, 2)), U, 10).contains(Fraction(1, 4))


def test_budget_exceeded_reported():
    odo = Odometer()
    g = odo.group.parse("g^2")
    with pytest.raises(BudgetExceeded):
        image_measure(odo, Bernoulli(Fraction(1, 2)), g, parse_union("01"), 30, budget=8)


def test_word_index_bijection():
    assert [word_of_index(i) for i in range(7)] == ["", "0", "1", "00", "01", "10", "11"]
    assert all(index_of_word(word_of_index(i)) == i for i in range(300))


def test_union_text_round_trip():
    for text in ["{}", "ε", "0,11", "1,00,011"]:
        assert serialize_union(parse_union(text)) == text


def test_bad_word_rejected():
    with pytest.raises(ValueError):
        parse_union("012")


def test_bernoulli_cylinders_fast():
    half = Bernoulli(Fraction(1, 2))
    for n in range(21):
        start = time.perf_counter()
        iv = measure(half, CylinderUnion.cylinder("1" * n), 40)
        assert iv.lo == iv.hi == Fraction(1, 2 ** n)
        assert time.perf_counter() - start < 1


# -- properties ------------------------------------------------------------

@given(st.lists(words, max_size=8))
def test_normalize_canonical(ws):
    U = normalize(ws)
    assert normalize(U.words) == U
    for a, b in itertools.permutations(U.words, 2):
        assert not b.startswith(a)
    for w in U.words:
        if w:
            assert w[:-1] + ("1" if w[-1] == "0" else "0") not in U.words
    # same set as the input
    assert as_set(U) == frozenset(x for x in POINTS if any(x.startswith(w) for w in ws))


def test_boolean_algebra_500_unions():
    rng = random.Random(500)
    full = frozenset(POINTS)
    for _ in range(500):
        U, V, W = (random_union(rng) for _ in range(3))
        u, v, w = as_set(U), as_set(V), as_set(W)
        assert as_set(complement(U)) == full - u
        assert complement(complement(U)) == U
        assert as_set(meet(U, V)) == u & v
        assert as_set(join(U, V)) == u | v
        assert as_set(difference(U, V)) == u - v
        assert meet(U, join(V, W)) == join(meet(U, V), meet(U, W))
        assert join(U, meet(V, W)) == meet(join(U, V), join(U, W))
        assert complement(meet(U, V)) == join(complement(U), complement(V))
        assert complement(join(U, V)) == meet(complement(U), complement(V))
        # equal sets have equal codes
        assert (as_set(U) == as_set(V)) == (U == V)


MEASURES = [Bernoulli(Fraction(1, 2)), Bernoulli(Fraction(1, 3)),
            Markov((Fraction(1, 4), Fraction(3, 4)), ((Fraction(1, 5), Fraction(4, 5)), (Fraction(2, 3), Fraction(1, 3))))]


@pytest.mark.parametrize("m", MEASURES, ids=repr)
@given(U=unions, V=unions, k=st.integers(1, 30))
@settings(max_examples=40)
def test_measure_additivity(m, U, V, k):
    V = difference(V, U)
    whole = measure(m, join(U, V), k)
    parts = measure(m, U, k) + measure(m, V, k)
    assert whole.overlaps(parts)
    assert (measure(m, U, k) + measure(m, complement(U), k)).contains(Fraction(1))
    assert whole.width < Fraction(1, 2 ** k)


@given(U=unions, k=st.integers(1, 30))
def test_monotone_precision(U, k):
    m = Bernoulli(Fraction(1, 3))
    a, b = measure(m, U, k), measure(m, U, k + 1)
    assert b.width < Fraction(1, 2 ** (k + 1))
    assert a.overlaps(b)


def _actions():
    z2 = cyclic(2)
    s3 = symmetric_group(3)
    third = Bernoulli(Fraction(1, 3))
    half = Bernoulli(Fraction(1, 2))
    # (name, action, measure, group elements drawn from, longest word)
    # the free-group shift moves coordinate i to an index exponential in word length,
    # so its cylinder images are only tractable for generators and short words
    return [
        ("xor-Z2", XorAction(z2, {"s": "101"}), half, 2, 4),
        ("perm-S3", CoordinatePermutation(s3, {"p102": swap(0, 1), "p021": swap(1, 2)}), third, 6, 4),
        ("perm-Z", CoordinatePermutation(FreeAbelian(1), {0: {0: 2, 2: 3, 3: 0}}), third, 12, 4),
        ("odometer", Odometer(), half, 12, 4),
        ("shift-Z", BernoulliShift(FreeAbelian(1), third), third, 12, 4),
        ("shift-F2", BernoulliShift(Free(2), half), half, 5, 3),
    ]


@pytest.mark.parametrize("name,action,m,n_elems,max_len", _actions(), ids=[a[0] for a in _actions()])
def test_measure_preservation(name, action, m, n_elems, max_len):
    rng = random.Random(name)
    pool = action.group.enumerate(n_elems)
    k = 12
    for _ in range(100):
        g = rng.choice(pool)
        U = random_union(rng, max_len=max_len, max_words=3)
        img = image_measure(action, m, g, U, k)
        orig = measure(m, U, k)
        assert img.width < Fraction(1, 2 ** k)
        assert abs(img.midpoint - orig.midpoint) <= Fraction(1, 2 ** (k - 1))


@pytest.mark.parametrize("name,action,m,n_elems,max_len", _actions(), ids=[a[0] for a in _actions()])
def test_action_is_a_homomorphism_on_cylinders(name, action, m, n_elems, max_len):
    # alpha_g(alpha_h([w])) = alpha_gh([w]) whenever both are finite unions
    rng = random.Random(name + "hom")
    pool = action.group.enumerate(min(n_elems, 8))
    for _ in range(30):
        g, h = rng.choice(pool), rng.choice(pool)
        w = "".join(rng.choice("01") for _ in range(rng.randint(0, max_len - 1)))
        inner = image_union(action, h, CylinderUnion.cylinder(w))
        if inner is None:
            continue
        outer = image_union(action, g, inner)
        direct = image_union(action, g * h, CylinderUnion.cylinder(w))
        if outer is not None and direct is not None:
            assert outer == direct

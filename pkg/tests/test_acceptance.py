"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected into the terminal summary by conftest.py, so
``pytest tests/test_acceptance.py`` shows them without ``-s``.
"""
import itertools
import random
import time
from fractions import Fraction

from crossprod.cantor import Bernoulli, CylinderUnion, Odometer, image_measure, image_union, measure, parse_union
from crossprod.crossed import CrossedProduct, random_expr
from crossprod.findim import (FinBase, exact_trace, matrix_trace, realize, shipped_models, takesaki_check)
from crossprod.groups import DirectProduct, GroupError, characters, cyclic, fourier, inverse_fourier
from crossprod.l1group import L1PiecewisePoly, convolve, l1_norm
from crossprod.presentations import LInfinityPresentation, Mul, Add, Adjoint, indicator, l2_norm, reduce
from crossprod.scalars import Cyc
from crossprod.axioms import DISCRETE_SCHEMAS, check, counter_models, enumerate_discrete, first_violation

from test_cantor import _actions, random_union
from test_groups import abelian_groups
from test_l1group import random_pp
from test_presentations import POINTS6, point_value, random_poly

MODELS = shipped_models()


# -- 1. rewriting agrees with the matrix oracle ------------------------------

ORACLE_GROUPS = ("Z/2", "Z/3", "Z/2 x Z/2", "S3")


def test_criterion_1_rewriting_matches_oracle(verdict):
    start = time.perf_counter()
    failures = []
    models = [(n, b) for n, b in MODELS if repr(b.group) in ORACLE_GROUPS and b.dim <= 3]
    assert {repr(b.group) for _, b in models} == set(ORACLE_GROUPS)
    for name, base in models:
        cp = CrossedProduct(base)
        rng = random.Random("c1" + name)
        for i in range(200):
            x = random_expr(rng, base.group, base.random_poly, max_depth=6)
            nf = cp.normalize(x)
            m = realize(x, base)
            if realize(nf) != m:
                failures.append(f"{name} #{i}: realize(normal form) differs")
                continue
            exact = matrix_trace(base, m.H @ m).to_fraction()
            iv = cp.norm2(nf, 20)
            if not (iv.lo ** 2 <= exact <= iv.hi ** 2 and iv.width < Fraction(1, 2 ** 20)):
                failures.append(f"{name} #{i}: norm^2 {exact} outside [{iv.lo}, {iv.hi}]^2")
    elapsed = time.perf_counter() - start
    if elapsed >= 60:
        failures.append(f"runtime {elapsed:.1f} s >= 60 s")
    verdict(1, f"{200 * len(models)} expressions over {len(models)} models agree with the matrix oracle "
               f"({elapsed:.1f} s)", failures)


# -- 2. Takesaki duality ---------------------------------------------------------

def duality_models():
    """Every function-algebra model with dim <= 3 over an abelian group of order <= 4."""
    groups = [cyclic(1), cyclic(2), cyclic(3), cyclic(4), DirectProduct([cyclic(2), cyclic(2)])]
    out = []
    for group in groups:
        gens = [group.format(group.gen(i).word) for i in range(group.ngens)]
        for n in range(1, 4):
            weights = [Fraction(1, n)] * n
            for perms in itertools.product(itertools.permutations(range(n)), repeat=len(gens)):
                try:
                    base = FinBase.functions(group, weights, dict(zip(gens, perms)))
                except (GroupError, ValueError):
                    continue
                out.append((f"{group!r} n={n} {list(perms)}", base))
    out += [(n, b) for n, b in MODELS if b.group.is_abelian() and b.group.order() <= 4 and b.dim <= 3]
    return out


def test_criterion_2_takesaki_duality(verdict):
    failures = []
    models = duality_models()
    pairs = 0
    for name, base in models:
        rep = takesaki_check(base)
        pairs += rep.generator_pairs
        expected = base.dim * base.group.order() ** 2
        if not rep.passed or rep.dim_double != expected or rep.dim_target != expected:
            failures.append(f"{name}: {rep}")
    verdict(2, f"takesaki_check on {len(models)} models, dims dim(M)|G|^2 exact, "
               f"{pairs} generator pairs multiplicative", failures)


# -- 3. dual weight ------------------------------------------------------------------

def test_criterion_3_dual_weight(verdict):
    failures = []
    rng = random.Random("c3")
    for i in range(100):
        name, base = MODELS[i % len(MODELS)]
        cp = CrossedProduct(base)
        a = base.random_element(rng)
        tau = base.tau(a)
        if exact_trace(cp.pi(a)) != tau:
            failures.append(f"{name}: tau_hat(pi(a)) != tau(a)")
        re_t, im_t = (Fraction(v) for v in tau.as_gaussian())
        for s in base.group.elements():
            x = cp.term(a, s)
            value = exact_trace(x)
            if not s.is_identity() and value != 0:
                failures.append(f"{name}: tau_hat(pi(a) u_{s}) = {value}")
            want_re, want_im = (re_t, im_t) if s.is_identity() else (0, 0)
            for k in range(21):
                re_, im_ = cp.dual_trace(x, k)
                if not (re_.contains(want_re) and im_.contains(want_im)):
                    failures.append(f"{name}: enclosure at k={k} misses the exact value")
                    break
    verdict(3, "dual weight exact on 100 elements, enclosed at every k <= 20", failures)


# -- 4. computable measure and action --------------------------------------------

def test_criterion_4_measure_and_action(verdict):
    failures = []
    half = Bernoulli(Fraction(1, 2))
    slowest = 0.0
    rng = random.Random("c4")
    for n in range(21):
        w = "".join(rng.choice("01") for _ in range(n))
        start = time.perf_counter()
        iv = measure(half, CylinderUnion.cylinder(w), 40)
        elapsed = time.perf_counter() - start
        slowest = max(slowest, elapsed)
        if not iv.lo == iv.hi == Fraction(1, 2 ** n):
            failures.append(f"mu[{w}] = [{iv.lo}, {iv.hi}]")
        if elapsed >= 1:
            failures.append(f"mu[{w}] took {elapsed:.2f} s")
    odo = Odometer()
    g = odo.group.parse("g")
    if image_union(odo, g, parse_union("1")) is not None:
        failures.append("odometer image of [1] reported as a finite union")
    if not image_measure(odo, half, g, parse_union("1"), 12).contains(Fraction(1, 2)):
        failures.append("odometer image measure misses 1/2")
    k = 12
    cases = 0
    for name, action, m, n_elems, max_len in _actions():
        rng = random.Random("c4" + name)
        pool = action.group.enumerate(n_elems)
        for _ in range(100):
            h = rng.choice(pool)
            U = random_union(rng, max_len=max_len, max_words=3)
            img, orig = image_measure(action, m, h, U, k), measure(m, U, k)
            cases += 1
            if abs(img.midpoint - orig.midpoint) > Fraction(1, 2 ** (k - 1)):
                failures.append(f"{name}: gap {abs(img.midpoint - orig.midpoint)} for {h}, {U}")
    verdict(4, f"Bernoulli cylinders exact (slowest {slowest:.3f} s), odometer encloses 1/2, "
               f"{cases} preservation cases within 2^-11", failures)


# -- 5. L-infinity presentation --------------------------------------------------

def test_criterion_5_linfinity_presentation(verdict):
    failures = []
    rng = random.Random("c5")
    for i in range(200):
        f, g = random_poly(rng), random_poly(rng)
        rf, prod, total, adj = reduce(f), reduce(Mul(f, g)), reduce(Add(f, g)), reduce(Adjoint(f))
        for x in POINTS6:
            vf, vg = point_value(f, x), point_value(g, x)
            if (rf.value_at(x), prod.value_at(x), total.value_at(x), adj.value_at(x)) != \
                    (vf, vf * vg, vf + vg, vf.conj()):
                failures.append(f"poly #{i} at {x}")
                break
    pres = LInfinityPresentation(Bernoulli(Fraction(1, 2)))
    for k in range(21):
        if not l2_norm(pres, indicator(""), k).contains(1):
            failures.append(f"||1||_2 misses 1 at k={k}")
    verdict(5, "reduce is a *-homomorphism on 200 polys at all 64 points, ||1||_2 encloses 1 for k <= 20",
            failures)


# -- 6. L1(R) presentation --------------------------------------------------------------

def test_criterion_6_l1_real(verdict):
    failures = []
    box = L1PiecewisePoly.indicator(0, 1)
    start = time.perf_counter()
    iv = l1_norm(convolve(box, box), 10)
    elapsed = time.perf_counter() - start
    if not (iv.contains(1) and iv.width < Fraction(1, 2 ** 10)):
        failures.append(f"triangle norm [{iv.lo}, {iv.hi}]")
    if elapsed >= 5:
        failures.append(f"triangle norm took {elapsed:.2f} s")
    k = 10
    rng = random.Random("c6")
    for i in range(100):
        f, g = random_pp(rng), random_pp(rng)
        lhs = l1_norm(convolve(f, g), k)
        nf, ng = l1_norm(f, k), l1_norm(g, k)
        if lhs.lo > nf.hi * ng.hi + Fraction(1, 2 ** (k - 2)):
            failures.append(f"pair #{i}: {float(lhs.lo)} > {float(nf.hi * ng.hi)}")
    verdict(6, f"triangle norm encloses 1 ({elapsed:.3f} s), Banach inequality on 100 pairs at k=10", failures)


# -- 7. axioms --------------------------------------------------------------------------

def test_criterion_7_axioms(verdict):
    failures = []
    for name, model in MODELS:
        for sentence in enumerate_discrete(model.group, 200):
            defect = check(sentence, model)
            if defect != 0:
                failures.append(f"{name}: defect {defect} on {sentence.to_text()}")
    for schema in DISCRETE_SCHEMAS:
        desc, model = counter_models()[schema]
        found = first_violation(schema, model)
        if found is None or found[1] < Fraction(1, 100):
            failures.append(f"{schema} not violated by {desc}")
    for name, model in MODELS:
        full = enumerate_discrete(model.group, 200)
        for n in (1, 10, 100):
            if enumerate_discrete(model.group, n) != full[:n]:
                failures.append(f"{name}: prefix of length {n} unstable")
    verdict(7, f"200 sentences sound on {len(MODELS)} models, {len(DISCRETE_SCHEMAS)} schemas discriminated, "
               "prefix stable", failures)


# -- 8. characters and Plancherel ----------------------------------------------------

def test_criterion_8_plancherel(verdict):
    failures = []
    groups = list(abelian_groups(8))
    for spec in groups:
        chars = characters(spec)
        elems = spec.elements()
        n = len(elems)
        for p, q in itertools.product(chars, repeat=2):
            total = sum((p(s) * q.conj_value(s) for s in elems), Cyc.rational(0)) / n
            if total != (1 if p == q else 0):
                failures.append(f"{spec!r}: <{p}, {q}> = {total}")
        rng = random.Random(repr(spec))
        for _ in range(5):
            f = {s: Cyc.gauss(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), rng.randint(-9, 9)) for s in elems}
            fh = fourier(f, spec)
            if inverse_fourier(fh, spec) != f:
                failures.append(f"{spec!r}: inversion failed")
            lhs = sum((v * v.conj() for v in f.values()), Cyc.rational(0))
            rhs = sum((v * v.conj() for v in fh.values()), Cyc.rational(0)) / n
            if lhs != rhs:
                failures.append(f"{spec!r}: Plancherel identity failed")
    verdict(8, f"orthogonality, inversion and Plancherel exact on {len(groups)} abelian groups of order <= 8",
            failures)

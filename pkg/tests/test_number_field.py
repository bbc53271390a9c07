import math
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from polylcm.hnf import IdealHNF, hnf_mod
from polylcm.number_field import LcmAccumulator, NonMonogenicField, NumberField, UnsupportedField, accumulate

Q = NumberField.from_spec("x")
QI = NumberField.from_spec("x^2+1")
QW = NumberField.from_spec("x^2+x+1")
Q7 = NumberField.from_spec("x^2-x+2")
CUBIC = NumberField.from_spec("x^3-x-1")
REAL = NumberField.from_spec("x^2-2")
FIELDS = [Q, QI, QW, Q7, CUBIC, REAL]
FINITE_UNITS = [Q, QI, QW, Q7]


def sympy_norm(K, a):
    t = sympy.Symbol("t")
    g = sympy.Poly(list(reversed(K.min_poly)), t)
    e = sympy.Poly(list(reversed(a)) or [0], t)
    return int(sympy.resultant(g, e))


def test_field_construction_and_discriminants():
    assert [K.disc for K in (QI, QW, Q7, CUBIC, REAL)] == [-4, -3, -7, -23, 8]
    assert Q.degree == 1 and Q.unit_group_finite
    assert QI.unit_group_finite and not REAL.unit_group_finite and not CUBIC.unit_group_finite
    with pytest.raises(NonMonogenicField):
        NumberField.from_spec("x^2+4")
    with pytest.raises(NonMonogenicField):
        NumberField.from_spec("x^2-5")  # Z[sqrt 5] misses (1 + sqrt 5)/2
    with pytest.raises(ValueError):
        NumberField.from_spec("x^2-1")
    with pytest.raises(ValueError):
        NumberField.from_spec("x^3-8")
    with pytest.raises(ValueError):
        NumberField.from_spec("2x^2+1")


def test_norm_examples():
    assert QI.norm((3, 2)) == 13
    for K in FIELDS:
        assert K.norm(K.one()) == 1
        d = K.degree
        if d > 1:
            assert K.norm(K.theta()) == (-1) ** d * K.min_poly[0]


@st.composite
def field_and_elements(draw, fields=FIELDS, k=2, bound=50):
    K = draw(st.sampled_from(fields))
    elems = [tuple(draw(st.integers(-bound, bound)) for _ in range(K.degree)) for _ in range(k)]
    return K, elems


@given(field_and_elements())
@settings(max_examples=300, deadline=None)
def test_norm_is_resultant_and_multiplicative(args):
    K, (a, b) = args
    assert K.norm(a) == sympy_norm(K, a)
    assert K.norm(K.mul(a, b)) == K.norm(a) * K.norm(b)


def test_factor_prime_examples():
    five = QI.factor_prime(5)
    assert [(P.e, P.f) for P in five] == [(1, 1), (1, 1)]
    assert [(P.e, P.f) for P in QI.factor_prime(3)] == [(1, 2)]
    assert [(P.e, P.f) for P in QI.factor_prime(2)] == [(2, 1)]
    with pytest.raises(ValueError):
        QI.factor_prime(4)


@pytest.mark.parametrize("K", FIELDS, ids=lambda K: K.spec)
def test_factor_prime_degree_sum(K):
    from polylcm.arith import primes_below

    for p in primes_below(10**4):
        primes = K.factor_prime(p)
        assert sum(P.e * P.f for P in primes) == K.degree
        assert [P.sort_key() for P in primes] == sorted(P.sort_key() for P in primes)


def test_reduce_examples():
    P2 = [P for P in QI.factor_prime(5) if P.local_factor == (3, 1)][0]  # x - 2
    assert QI.reduce((3, 2), P2) == 2
    assert QI.reduce((0, 0), P2) == 0
    (P,) = QI.factor_prime(2)
    assert QI.reduce((1, 1), P) == 0


def test_valuation_examples():
    (P2,) = QI.factor_prime(2)
    assert QI.valuation((2, 0), P2) == 2
    assert QI.valuation_hnf((2, 0), P2) == 2
    for K in FIELDS:
        for P in K.factor_prime(5):
            assert K.valuation(K.one(), P) == 0
    P5 = [P for P in QI.factor_prime(5) if P.local_factor == (3, 1)][0]
    assert QI.valuation((5, 0), P5) == 1
    assert QI.valuation_fast((5, 0), P5) == 1


def _random_element(rng, K, bound):
    while True:
        a = tuple(rng.randint(-bound, bound) for _ in range(K.degree))
        if any(a):
            return a


@pytest.mark.parametrize("K", FIELDS, ids=lambda K: K.spec)
def test_norm_product_identity(K):
    rng = random.Random(K.degree * 1000 + abs(K.disc))
    for _ in range(300):
        a = _random_element(rng, K, 10**4)
        fac = K.ideal_factorization(a)
        assert math.prod(P.p ** (P.f * v) for P, v in fac) == abs(K.norm(a))


@pytest.mark.parametrize("K", [QI, QW, Q7, CUBIC], ids=lambda K: K.spec)
def test_fast_and_hnf_valuations_agree(K):
    rng = random.Random(5)
    from polylcm.arith import primes_below

    split = [P for p in primes_below(60) for P in K.factor_prime(p) if P.e == 1 and P.f == 1]
    for _ in range(500):
        P = rng.choice(split)
        # bias towards high valuations: multiply by a power of p
        a = K.scale(P.p ** rng.randint(0, 3), _random_element(rng, K, 200))
        assert K.valuation_fast(a, P) == K.valuation_hnf(a, P)


def test_valuation_at_ramified_and_inert_primes():
    (P3,) = QI.factor_prime(3)
    assert P3.f == 2 and QI.valuation((9, 0), P3) == 2
    assert QI.valuation((3, 6), P3) == 1
    (P2,) = QI.factor_prime(2)
    assert QI.valuation((1, 1), P2) == 1
    assert QI.valuation((4, 4), P2) == 5


def test_accumulate_examples():
    acc = accumulate(LcmAccumulator(Q), (12,))
    assert {P.p: v for P, v in acc.exponents.items()} == {2: 2, 3: 1}
    acc = accumulate(acc, (8,))
    assert {P.p: v for P, v in acc.exponents.items()} == {2: 3, 3: 1}
    acc = LcmAccumulator(Q)
    for k in range(1, 11):
        acc.add((k,))
    assert acc.norm() == 2520
    assert acc.log_norm() == pytest.approx(math.log(2520), rel=1e-12)
    assert LcmAccumulator(Q).log_norm() == 0
    (P2,) = QI.factor_prime(2)
    assert LcmAccumulator(QI, {P2: 2}).log_norm() == pytest.approx(2 * math.log(2), rel=1e-12)


@given(field_and_elements(fields=FIELDS, k=6, bound=300), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_accumulate_is_order_independent(args, rnd):
    K, elems = args
    elems = [e for e in elems if any(e)]
    a, b = LcmAccumulator(K), LcmAccumulator(K)
    for e in elems:
        a.add(e)
    shuffled = list(elems)
    rnd.shuffle(shuffled)
    for e in shuffled:
        b.add(e)
    assert a == b
    half = len(elems) // 2
    left, right = LcmAccumulator(K), LcmAccumulator(K)
    for e in elems[:half]:
        left.add(e)
    for e in elems[half:]:
        right.add(e)
    assert left.merge(right) == a == right.merge(left)


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=4), st.integers(1, 150))
@settings(max_examples=150, deadline=None)
def test_rational_accumulator_is_integer_lcm(coeffs, M):
    vals = [sum(c * x**i for i, c in enumerate(coeffs)) for x in range(1, M + 1)]
    acc = LcmAccumulator(Q)
    for v in vals:
        if v:
            acc.add((v,))
    assert acc.norm() == oracles.lcm_all(v for v in vals if v)


def test_primes_up_to_examples():
    assert Q.pi(10) == 4
    assert QI.pi(10) == 4
    assert sorted(P.norm for P in QI.primes_up_to(10)) == [2, 5, 5, 9]
    assert all(K.primes_up_to(1) == [] for K in FIELDS)
    for K in FIELDS:
        norms = [P.norm for P in K.primes_up_to(500)]
        assert norms == sorted(norms)
        it = K.iter_primes()
        first = [next(it) for _ in range(len(norms))]
        assert first == K.primes_up_to(500)


def test_elements_up_to_norm_examples():
    assert Q.elements_up_to_norm(5) == [(1,), (2,), (3,), (4,), (5,)]
    all8 = QI.elements_up_to_norm(2, all_units=True)
    assert sorted(all8) == sorted([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)])
    assert sorted(QI.elements_up_to_norm(2)) == [(1, 0), (1, 1)]
    with pytest.raises(UnsupportedField):
        REAL.elements_up_to_norm(10)


@pytest.mark.parametrize("K", [QI, QW, Q7], ids=lambda K: K.spec)
def test_enumeration_matches_box_scan(K):
    M = 60
    brute = [(x, y) for x in range(-20, 21) for y in range(-20, 21) if (x, y) != (0, 0) and K.norm((x, y)) <= M]
    assert sorted(K.elements_up_to_norm(M, all_units=True)) == sorted(brute)
    units = K.torsion_units()
    assert len(units) == {-4: 4, -3: 6}.get(K.disc, 2)
    reps = K.elements_up_to_norm(M)
    assert len(reps) * len(units) == len(brute)
    assert len({K.canonical_associate(b) for b in brute}) == len(reps)


def test_hnf_of_principal_ideal():
    nu = (3, 2)  # norm 13 in Z[i]
    rows = [nu, QI.mul(nu, QI.theta())]
    H = IdealHNF(hnf_mod(rows, 2, 13), 13)
    assert H.norm == 13
    assert H.contains(nu) and H.contains(QI.mul(nu, (5, -7)))
    assert not H.contains((1, 0))
    for i, row in enumerate(H.matrix):
        assert row[i] > 0
        for j in range(i):
            assert 0 <= H.matrix[j][i] < row[i]


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-50, 50), st.integers(-50, 50))
@settings(max_examples=200, deadline=None)
def test_hnf_membership_matches_divisibility(a, b, x, y):
    nu = (a, b)
    D = abs(QI.norm(nu))
    if D == 0:
        return
    H = IdealHNF(hnf_mod([nu, QI.mul(nu, QI.theta())], 2, D), D)
    assert H.norm == D
    # x + y i lies in (nu) iff (x + y i) * conj(nu) is divisible by N(nu)
    c = QI.mul((x, y), (a, -b))
    assert H.contains((x, y)) == (c[0] % D == 0 and c[1] % D == 0)
    r = H.reduce((x, y))
    assert H.reduce(r) == r and H.contains(QI.sub((x, y), r))


def test_prime_labels():
    assert [P.label() for P in Q.factor_prime(7)] == ["(7)"]
    assert [P.label() for P in QI.factor_prime(3)] == ["(3)"]
    assert [P.label() for P in QI.factor_prime(2)] == ["(2,1/1)"]
    assert [P.label() for P in Q7.factor_prime(2)] == ["(2,t)", "(2,1/1)"]

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polylcm.ensembles import (
    CERTIFIED,
    RAMIFIED,
    UNKNOWN,
    PolynomialSample,
    certify_sn,
    enumerate_box,
    frobenius_type,
    non_sn_fraction,
    pi_fr,
    s_wp,
    sample,
    sample_stream,
)
from polylcm.number_field import NumberField
from polylcm.parsing import format_coeffs, parse_poly

Q = NumberField.from_spec("x")
QI = NumberField.from_spec("x^2+1")
QW = NumberField.from_spec("x^2+x+1")


def poly(text, K=Q):
    return PolynomialSample(K, 1, parse_poly(text, K))


def prime(K, p, i=0):
    return K.factor_prime(p)[i]


def test_sample_space_and_determinism():
    seen = set()
    for i in range(400):
        f = sample(2, 1, Q, sample_stream(3, i))
        assert f.n == 2 and f.height <= 1
        seen.add(f.coeffs)
    assert len(seen) == 9
    a = [sample(3, 100, QI, sample_stream(42, i)).coeffs for i in range(20)]
    b = [sample(3, 100, QI, sample_stream(42, i)).coeffs for i in range(20)]
    assert a == b
    assert sample(3, 100, QI, sample_stream(43, 0)).coeffs != a[0]
    with pytest.raises(ValueError):
        sample(2, 0, Q, sample_stream(0, 0))


def test_sample_mean_is_centred():
    rng = sample_stream(1, 0)
    draws = np.array([sample(1, 10, Q, rng).coeffs[0][0] for _ in range(10**5)])
    sigma = math.sqrt(((2 * 10 + 1) ** 2 - 1) / 12)
    assert abs(draws.mean()) <= 3 * sigma / math.sqrt(len(draws))
    assert draws.min() == -10 and draws.max() == 10


def test_enumerate_box():
    box = list(enumerate_box(2, 1, Q))
    assert len(box) == 9 and len({f.coeffs for f in box}) == 9
    assert len(list(enumerate_box(1, 1, QI))) == 9


def test_frobenius_type_examples():
    f = poly("x^2+1")
    assert frobenius_type(f, prime(Q, 5)) == (2, 0)
    assert frobenius_type(f, prime(Q, 2)) is RAMIFIED
    assert frobenius_type(f, prime(Q, 7)) == (0, 1)
    # primes ramified in K are reported as such regardless of f
    (P2,) = QI.factor_prime(2)
    assert frobenius_type(poly("x^2+t", QI), P2) is RAMIFIED


def test_pi_fr_examples():
    f = poly("x^2+1")
    assert pi_fr(f, (2, 0), 10) == 1
    assert pi_fr(f, (0, 1), 10) == 2
    assert pi_fr(f, (2, 0), 1.5) == 0


def test_s_wp_examples():
    f = poly("x^2+1")
    assert s_wp(f, prime(Q, 5)) == 2
    assert s_wp(f, prime(Q, 3)) == 0
    assert s_wp(f, prime(Q, 2)) == 1


def test_certificate_examples():
    c = certify_sn(poly("x^3-x-1"), 100)
    assert c.status == CERTIFIED
    roles = {role: r for role, _, r in c.witnesses}
    assert roles["n-cycle"] == (0, 0, 1) and roles["transposition"] == (1, 1, 0)
    assert certify_sn(poly("x^3-3x-1"), 2000).status == UNKNOWN
    assert certify_sn(poly("x^2+1"), 10).status == CERTIFIED
    assert certify_sn(poly("x^2+1"), 1).status == UNKNOWN  # only p = 2 examined


@pytest.mark.parametrize(
    "text",
    ["x^3-3x-1", "x^4+1", "x^4-x^2+1", "x^4+5x^2+5", "x^6+x^2+1", "x^4-10x^2+1", "x^5-5x+12", "x^3-x^2-2x+1"],
)
def test_non_symmetric_groups_are_never_certified(text):
    assert certify_sn(poly(text), 1500).status == UNKNOWN


@pytest.mark.parametrize("text", ["x^4-x-1", "x^5-x-1", "x^6-x-1", "x^4+2x+2"])
def test_symmetric_examples_certify(text):
    c = certify_sn(poly(text), 500)
    assert c.certified
    ps = [P for _, P, _ in c.witnesses]
    assert len(set(ps)) == len(ps) == 3


def test_certify_over_quadratic_field():
    assert certify_sn(poly("x^3-x-t", QI), 300).certified
    # i is not a square in Q(i)
    assert certify_sn(poly("x^2-t", QI), 300).certified
    # x^2 + 1 splits over Q(i)
    assert certify_sn(poly("x^2+1", QI), 500).status == UNKNOWN


def test_non_sn_fraction_edge_cases():
    assert non_sn_fraction(3, 100, Q, 10, 0, 0).fraction == 1
    with pytest.raises(ValueError):
        non_sn_fraction(3, 100, Q, 0, 0, 10)


def test_n2_box_uncertified_are_exactly_the_rational_root_cases():
    for f in enumerate_box(2, 1, Q):
        b, c = f.coeffs[1][0], f.coeffs[0][0]
        has_root = any(x * x + b * x + c == 0 for x in range(-2, 3))
        assert certify_sn(f, 200).certified == (not has_root)


def test_worker_count_does_not_change_results():
    a = non_sn_fraction(3, 30, Q, 40, 9, 20, workers=1)
    b = non_sn_fraction(3, 30, Q, 40, 9, 20, workers=2)
    assert a == b


@st.composite
def sampled_poly(draw):
    K = draw(st.sampled_from([Q, QI, QW]))
    n = draw(st.integers(2, 4))
    seed = draw(st.integers(0, 2**32))
    return sample(n, 20, K, sample_stream(seed, 0))


@given(sampled_poly())
@settings(max_examples=60, deadline=None)
def test_ramified_primes_divide_discriminants(f):
    K = f.field
    D = f.discriminant_norm() * abs(K.disc)
    for P in K.primes_up_to(200):
        r = frobenius_type(f, P)
        if r is RAMIFIED:
            assert D % P.p == 0
        else:
            assert s_wp(f, P) == r[0]
            assert sum((k + 1) * c for k, c in enumerate(r)) == f.n


@given(sampled_poly())
@settings(max_examples=40, deadline=None)
def test_certificates_are_reproducible(f):
    assert certify_sn(f, 60) == certify_sn(f, 60)


def test_parse_and_format_round_trip():
    coeffs = parse_poly("x^3 + (1+2*t)*x - 4", QI)
    assert coeffs == ((-4, 0), (1, 2), (0, 0))
    assert parse_poly(format_coeffs(coeffs), QI) == coeffs
    assert parse_poly("1,0;0,0", QI) == ((1, 0), (0, 0))
    with pytest.raises(ValueError):
        parse_poly("2x^2+1", Q)
    with pytest.raises(ValueError):
        parse_poly("x^2+y", Q)
    with pytest.raises(ValueError):
        parse_poly("1,2;3", QI)

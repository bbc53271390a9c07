import math
from fractions import Fraction

import pytest

import oracles
from polylcm.arith import RationalPoly
from polylcm.finite_field import NOT_SQUAREFREE, gf
from polylcm.splitting import (
    BudgetExceeded,
    all_types,
    brute_force_census,
    brute_force_count,
    c_r,
    c_r_closed_form,
    census,
    class_size,
    density,
    density_closed_form,
    format_type,
    parse_type,
)

q = RationalPoly.monomial(1)


def test_all_types_counts_and_order():
    assert len(all_types(2)) == 2
    assert len(all_types(3)) == 3
    assert len(all_types(5)) == 7
    assert all(len(all_types(n)) == oracles.partitions_count(n) for n in range(1, 11))
    assert all_types(3) == [(0, 0, 1), (1, 1, 0), (3, 0, 0)]
    with pytest.raises(ValueError):
        all_types(0)


def test_census_examples():
    assert census(1, (1,)).poly == q
    assert census(2, (2, 0)).poly == (q * q - q) / 2
    assert census(3, (1, 1, 0)).poly == RationalPoly([0, 0, -1, 1]) / 2
    assert census(3, (0, 0, 1)).poly == RationalPoly([0, -1, 0, 1]) / 3


def test_census_rejects_bad_type():
    with pytest.raises(ValueError):
        census(3, (1, 0, 0))


def test_density_examples():
    assert density(3, (1, 1, 0)) == Fraction(1, 2)
    assert density(3, (0, 0, 1)) == Fraction(1, 3)
    for n in range(1, 8):
        assert density(n, (n,) + (0,) * (n - 1)) == Fraction(1, math.factorial(n))


def test_c_r_examples_and_closed_form_disagreement():
    assert c_r(2, (2, 0)) == Fraction(-1, 2)
    assert c_r(2, (0, 1)) == Fraction(-1, 2)
    assert c_r(3, (0, 0, 1)) == 0
    # the closed form is carried for comparison only; it differs already at n = 2
    assert c_r_closed_form(2, (0, 1)) == Fraction(1, 4)
    with pytest.raises(ValueError):
        c_r(1, (1,))


def test_brute_force_examples():
    assert brute_force_count(2, (2, 0), 3) == 3
    assert brute_force_count(2, (0, 1), 2) == 1
    assert brute_force_count(3, (3, 0, 0), 2) == 0
    with pytest.raises(BudgetExceeded):
        brute_force_census(8, 9)


@pytest.mark.parametrize("n", range(2, 9))
def test_symbolic_identities(n):
    types = all_types(n)
    total = sum((census(n, r).poly for r in types), RationalPoly())
    assert total == RationalPoly.monomial(n) - RationalPoly.monomial(n - 1)
    assert sum(density(n, r) for r in types) == 1
    assert sum(c_r(n, r) for r in types) == -1
    for r in types:
        assert census(n, r).poly.degree == n
        assert density(n, r) * math.factorial(n) == class_size(n, r)
        assert density(n, r) == density_closed_form(n, r)


@pytest.mark.parametrize("n", range(1, 8))
def test_class_sizes_match_permutation_count(n):
    counts = oracles.cycle_type_counts(n)
    for r in all_types(n):
        assert class_size(n, r) == counts[r]
        assert density(n, r) == Fraction(counts[r], math.factorial(n))


@pytest.mark.parametrize("qq,n", [(2, 4), (3, 3), (4, 3), (5, 3), (9, 2), (2, 5)])
def test_census_matches_independent_trial_division(qq, n):
    F = gf(qq)
    tally = oracles.census_by_trial_division(oracles.NaiveGF(F.p, F.modulus), n)
    for r in all_types(n):
        assert census(n, r)(qq) == tally.get(r, 0)
    bf = brute_force_census(n, qq)
    assert bf.get(NOT_SQUAREFREE, 0) == tally.get(None, 0)


@pytest.mark.parametrize("qq", [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 49, 64, 81, 125])
def test_census_values_are_nonnegative_integers(qq):
    for n in range(1, 7):
        for r in all_types(n):
            assert census(n, r)(qq) >= 0


def test_type_text_round_trip():
    for r in all_types(5):
        assert parse_type(format_type(r)) == r
    assert format_type((1, 1, 0)) == "1,1,0"

"""Census of squarefree factorization types over F_q as exact polynomials in q."""

from __future__ import annotations

import functools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import RationalPoly, moebius, poly_binomial
from .finite_field import NOT_SQUAREFREE, gf, monic_polys, splitting_type_codes

__all__ = [
    "BudgetExceeded",
    "CensusPolynomial",
    "all_types",
    "brute_force_census",
    "brute_force_count",
    "c_r",
    "c_r_closed_form",
    "census",
    "class_size",
    "density",
    "format_type",
    "irreducible_count_poly",
    "parse_type",
]

BRUTE_FORCE_LIMIT = 10**7

SplittingType = tuple  # (r_1, ..., r_n) with sum k r_k = n


class BudgetExceeded(RuntimeError):
    pass


def _partitions(n: int, largest: int):
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def all_types(n: int) -> list[SplittingType]:
    """All splitting types for degree n, largest part decreasing (reverse lex on partitions)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = []
    for parts in _partitions(n, n):
        r = [0] * n
        for k in parts:
            r[k - 1] += 1
        out.append(tuple(r))
    return out


def check_type(n: int, r: Sequence[int]) -> SplittingType:
    r = tuple(int(x) for x in r)
    if len(r) != n or any(x < 0 for x in r) or sum((k + 1) * x for k, x in enumerate(r)) != n:
        raise ValueError(f"{r} is not a splitting type for degree {n}")
    return r


def format_type(r: Sequence[int]) -> str:
    return ",".join(map(str, r))


def parse_type(text: str) -> SplittingType:
    return tuple(int(s) for s in text.split(","))


@functools.lru_cache(maxsize=None)
def irreducible_count_poly(k: int) -> RationalPoly:
    """A_{q,k} = (1/k) sum_{d | k} mu(d) q^{k/d} as a polynomial in q."""
    out = RationalPoly()
    for d in range(1, k + 1):
        if k % d == 0:
            mu = moebius(d)
            if mu:
                out = out + RationalPoly.monomial(k // d, mu)
    return out / k


@dataclass(frozen=True)
class CensusPolynomial:
    """Number of squarefree monic degree-n polynomials of type r over F_q, as a polynomial in q."""

    n: int
    r: SplittingType
    poly: RationalPoly

    def __call__(self, q: int) -> int:
        v = self.poly(q)
        assert v.denominator == 1
        return int(v)

    @property
    def density(self) -> Fraction:
        return self.poly.coeff(self.n)

    @property
    def second_order(self) -> Fraction:
        return self.poly.coeff(self.n - 1)


@functools.lru_cache(maxsize=None)
def census(n: int, r: SplittingType) -> CensusPolynomial:
    """prod_k binom(A_{q,k}, r_k), expanded exactly."""
    r = check_type(n, r)
    out = RationalPoly([1])
    for k, rk in enumerate(r, start=1):
        if rk:
            out = out * poly_binomial(irreducible_count_poly(k), rk)
    return CensusPolynomial(n, r, out)


def density(n: int, r: SplittingType) -> Fraction:
    """Leading coefficient of the census polynomial."""
    return census(n, tuple(r)).density


def density_closed_form(n: int, r: SplittingType) -> Fraction:
    r = check_type(n, r)
    out = Fraction(1)
    for k, rk in enumerate(r, start=1):
        out /= math.factorial(rk) * k**rk
    return out


def class_size(n: int, r: SplittingType) -> int:
    """Size of the conjugacy class of S_n with cycle type r."""
    r = check_type(n, r)
    denom = 1
    for k, rk in enumerate(r, start=1):
        denom *= math.factorial(rk) * k**rk
    return math.factorial(n) // denom


def c_r(n: int, r: SplittingType) -> Fraction:
    """Coefficient of q^{n-1} in the census polynomial."""
    if n < 2:
        raise ValueError("second-order constant needs n >= 2")
    return census(n, tuple(r)).second_order


def c_r_closed_form(n: int, r: SplittingType) -> Fraction:
    """-delta(r) C(r_2) (r_1+1)(r_1+2) / (2 r_1!), where C(r_2) is the q^{2 r_2 - 1}
    coefficient of binom((q^2-q)/2, r_2).

    Kept for side-by-side reporting; it does not match the exact coefficient
    in general (already at n = 2, r = (0, 1)).
    """
    r = check_type(n, r)
    r1 = r[0]
    r2 = r[1] if n >= 2 else 0
    c2 = poly_binomial(irreducible_count_poly(2), r2).coeff(2 * r2 - 1) if r2 else Fraction(0)
    return -density(n, r) * c2 * (r1 + 1) * (r1 + 2) / (2 * math.factorial(r1))


@functools.lru_cache(maxsize=None)
def brute_force_census(n: int, q: int) -> dict[SplittingType, int]:
    """Tally of splitting types over all q^n monic degree-n polynomials over F_q.

    Non-squarefree polynomials are tallied under NOT_SQUAREFREE.
    """
    if q**n > BRUTE_FORCE_LIMIT:
        raise BudgetExceeded(f"q^n = {q}^{n} exceeds the enumeration limit {BRUTE_FORCE_LIMIT}")
    F = gf(q)
    tally: Counter = Counter()
    for a in monic_polys(F, n):
        tally[splitting_type_codes(F, a, n)] += 1
    return dict(tally)


def brute_force_count(n: int, r: SplittingType, q: int) -> int:
    r = check_type(n, r)
    return brute_force_census(n, q).get(r, 0)


def squarefree_count(n: int, q: int) -> int:
    """Oracle side only: squarefree monic degree-n count from the brute-force tally."""
    return sum(v for k, v in brute_force_census(n, q).items() if k is not NOT_SQUAREFREE)

"""Random monic polynomials over O_K, Frobenius splitting types and S_n certificates."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .finite_field import NOT_SQUAREFREE, count_roots_codes, splitting_type_codes
from .number_field import NumberField, PrimeIdeal
from .parsing import format_coeffs

__all__ = [
    "CERTIFIED",
    "RAMIFIED",
    "UNKNOWN",
    "FractionEstimate",
    "PolynomialSample",
    "SnCertificate",
    "certify_sn",
    "enumerate_box",
    "frobenius_type",
    "non_sn_fraction",
    "pi_fr",
    "s_wp",
    "sample",
    "sample_stream",
]

CERTIFIED = "CertifiedSn"
UNKNOWN = "Unknown"


class _Ramified:
    __slots__ = ()

    def __repr__(self) -> str:
        return "RAMIFIED"

    def __reduce__(self):
        return "RAMIFIED"


RAMIFIED = _Ramified()


@dataclass(frozen=True)
class PolynomialSample:
    """Monic f = X^n + alpha_{n-1} X^{n-1} + ... + alpha_0 over O_K with ht(f) <= N."""

    field: NumberField
    N: int
    coeffs: tuple[tuple[int, ...], ...]  # alpha_0 .. alpha_{n-1}

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def height(self) -> int:
        return max((abs(c) for a in self.coeffs for c in a), default=0)

    def full_coeffs(self) -> list[tuple[int, ...]]:
        return list(self.coeffs) + [self.field.one()]

    def __call__(self, x: tuple[int, ...]) -> tuple[int, ...]:
        return self.field.eval_poly(self.full_coeffs(), x)

    def text(self) -> str:
        return format_coeffs(self.coeffs)

    def reduce(self, P: PrimeIdeal) -> list[int]:
        """Codes of f mod P in the residue field (monic, degree n)."""
        return self.field.reduce_poly(self.full_coeffs(), P)

    def discriminant_norm(self) -> int:
        """|N_{K/Q}(disc f)|; zero iff f has a repeated root."""
        import sympy

        K = self.field
        x, t = sympy.symbols("x t")
        expr = sum(
            sum(c * t**j for j, c in enumerate(a)) * x**k for k, a in enumerate(self.full_coeffs())
        )
        disc = sympy.Poly(sympy.discriminant(expr, x), t)
        g = sympy.Poly(list(reversed(K.min_poly)), t)
        rem = disc.rem(g).all_coeffs()[::-1]
        return abs(K.norm(K.element(int(c) for c in rem)))


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based generator for sample ``index`` of a run seeded with ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def sample(n: int, N: int, field: NumberField, rng: np.random.Generator) -> PolynomialSample:
    """All n*d coordinates i.i.d. uniform on {-N, ..., N}."""
    if N < 1:
        raise ValueError("height bound N must be >= 1")
    d = field.degree
    raw = rng.integers(-N, N + 1, size=(n, d))
    return PolynomialSample(field, N, tuple(tuple(int(v) for v in row) for row in raw))


def enumerate_box(n: int, N: int, field: NumberField) -> Iterator[PolynomialSample]:
    """Every monic degree-n polynomial of height <= N, in lexicographic coordinate order."""
    d = field.degree
    for flat in itertools.product(range(-N, N + 1), repeat=n * d):
        yield PolynomialSample(field, N, tuple(tuple(flat[k * d : (k + 1) * d]) for k in range(n)))


def frobenius_type(f: PolynomialSample, P: PrimeIdeal):
    """Splitting type of f mod P, or RAMIFIED if P ramifies in K or f mod P is not squarefree."""
    if P.e != 1:
        return RAMIFIED
    F = f.field.residue_field(P)
    r = splitting_type_codes(F, f.reduce(P), f.n)
    return RAMIFIED if r is NOT_SQUAREFREE else r


def indicator(f: PolynomialSample, r: tuple[int, ...], P: PrimeIdeal) -> int:
    return int(frobenius_type(f, P) == r)


def pi_fr(f: PolynomialSample, r: Sequence[int], x: float) -> int:
    """Number of primes P with N(P) <= x, unramified for f, whose splitting type is r."""
    r = tuple(r)
    return sum(1 for P in f.field.primes_up_to(x) if frobenius_type(f, P) == r)


def s_wp(f: PolynomialSample, P: PrimeIdeal) -> int:
    """Number of distinct roots of f mod P in the residue field."""
    F = f.field.residue_field(P)
    return count_roots_codes(F, f.reduce(P))


def _required_roles(n: int) -> dict[str, Callable[[tuple[int, ...]], bool]]:
    def n_cycle(r):
        return r[n - 1] == 1

    def n1_cycle(r):
        return r[0] == 1 and r[n - 2] == 1

    def transposition(r):
        return r[1] == 1 and r[0] == n - 2

    if n == 2:
        return {"n-cycle": n_cycle}
    if n == 3:
        return {"n-cycle": n_cycle, "transposition": transposition}
    return {"n-cycle": n_cycle, "(n-1)-cycle": n1_cycle, "transposition": transposition}


@dataclass(frozen=True)
class SnCertificate:
    status: str
    witnesses: tuple[tuple[str, PrimeIdeal, tuple[int, ...]], ...]
    primes_examined: int

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED


def certify_sn(f: PolynomialSample, prime_budget: int) -> SnCertificate:
    """One-sided proof that Gal(K_f / K) = S_n from Frobenius cycle types.

    An n-cycle makes the group transitive, an (n-1)-cycle then makes it
    2-transitive hence primitive, and a primitive group with a transposition
    is S_n.  For n = 2 the n-cycle alone suffices, for n = 3 the n-cycle and
    a transposition.  Unknown is inconclusive.
    """
    n = f.n
    if n <= 1:
        return SnCertificate(CERTIFIED, (), 0)
    roles = _required_roles(n)
    found: dict[str, tuple[PrimeIdeal, tuple[int, ...]]] = {}
    examined = 0
    if prime_budget > 0:
        for P in f.field.iter_primes():
            examined += 1
            if P.e == 1:
                r = frobenius_type(f, P)
                if r is not RAMIFIED:
                    for role, test in roles.items():
                        if role not in found and test(r):
                            found[role] = (P, r)
                    if len(found) == len(roles):
                        break
            if examined >= prime_budget:
                break
    witnesses = tuple((role, *found[role]) for role in roles if role in found)
    status = CERTIFIED if len(found) == len(roles) else UNKNOWN
    return SnCertificate(status, witnesses, examined)


@dataclass(frozen=True)
class FractionEstimate:
    count: int
    samples: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.count, self.samples) if self.samples else Fraction(0)

    @property
    def stderr(self) -> float:
        if not self.samples:
            return 0.0
        p = self.count / self.samples
        return math.sqrt(p * (1 - p) / self.samples)


def non_sn_fraction(
    n: int,
    N: int,
    field: NumberField,
    samples: int,
    seed: int,
    budget: int,
    *,
    workers: int = 1,
) -> FractionEstimate:
    """Fraction of random samples left uncertified at the given prime budget."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    from .parallel import map_indexed

    status = map_indexed(_certify_one, range(samples), (n, N, field, seed, budget), workers)
    return FractionEstimate(sum(1 for s in status if not s), samples)


def _certify_one(index: int, n: int, N: int, field: NumberField, seed: int, budget: int) -> bool:
    f = sample(n, N, field, sample_stream(seed, index))
    return certify_sn(f, budget).certified


def sampled(n: int, N: int, field: NumberField, seed: int, indices: Iterable[int]) -> Iterator[PolynomialSample]:
    for i in indices:
        yield sample(n, N, field, sample_stream(seed, i))

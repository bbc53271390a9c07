"""Exact integer arithmetic: primality, factorization, Moebius, rational polynomials."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "FactorizationError",
    "RationalPoly",
    "factor",
    "is_prime",
    "moebius",
    "poly_binomial",
    "primality",
    "primes_below",
    "valuation_int",
]

# Strong-pseudoprime witnesses proven sufficient for n < 3.3e24 (Sorenson & Webster).
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_DETERMINISTIC_LIMIT = 3317044064679887385961981
_EXTRA_ROUNDS = 64  # 4^-64 = 2^-128

_TRIAL_BOUND = 1000


def primes_below(n: int) -> list[int]:
    """All primes p < n (sieve of Eratosthenes)."""
    if n < 3:
        return []
    sieve = bytearray([1]) * n
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n - 1) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, n, i)))
    return [i for i, b in enumerate(sieve) if b]


_SMALL_PRIMES = primes_below(_TRIAL_BOUND)
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)


class FactorizationError(ArithmeticError):
    """A composite cofactor resisted Pollard rho within the iteration budget."""

    def __init__(self, n: int, cofactor: int, budget: int):
        self.n = n
        self.cofactor = cofactor
        self.budget = budget
        super().__init__(
            f"could not split composite cofactor {cofactor} of {n} within {budget} iterations"
        )


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def primality(n: int) -> tuple[bool, bool]:
    """Return ``(is_prime, proven)``.

    ``proven`` is False only when n exceeds the range of the deterministic
    witness set; the answer then carries an error probability below 2^-128.
    """
    if n < 2:
        return False, True
    if n in _SMALL_PRIME_SET:
        return True, True
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return False, True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _DETERMINISTIC_BASES:
        if not _strong_probable_prime(n, a, d, s):
            return False, True
    if n < _DETERMINISTIC_LIMIT:
        return True, True
    # seeded by n so that repeated calls agree
    rng = random.Random(n)
    for _ in range(_EXTRA_ROUNDS):
        if not _strong_probable_prime(n, rng.randrange(2, n - 1), d, s):
            return False, True
    return True, False


def is_prime(n: int) -> bool:
    return primality(n)[0]


def _brent(n: int, c: int, budget: int) -> int | None:
    """One Brent-cycle rho run with f(x) = x^2 + c; returns a nontrivial factor or None."""
    y, r, q, g = 2, 1, 1, 1
    x = ys = 2
    m = 128
    steps = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        steps += r
        r *= 2
        if steps > budget:
            return None
    if g == n:
        # product collapsed; backtrack one step at a time
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split(n: int, budget: int) -> int | None:
    if n % 2 == 0:
        return 2
    r = math.isqrt(n)
    if r * r == n:
        return r
    per_try = max(budget // 8, 1)
    for c in range(1, 9):
        g = _brent(n, c, per_try)
        if g is not None:
            return g
    return None


def factor(n: int, budget: int = 10**7) -> list[tuple[int, int]]:
    """Prime factorization of ``n >= 1`` as ``[(p, e), ...]`` with p increasing.

    Trial division below 1000, then Brent's variant of Pollard rho on the
    cofactor, certifying every piece with :func:`is_prime`.
    """
    if n < 1:
        raise ValueError(f"factor expects n >= 1, got {n}")
    original = n
    found: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if m < _TRIAL_BOUND * _TRIAL_BOUND or is_prime(m):
                # cofactors below 10^6 that survived trial division are prime
                found[m] = found.get(m, 0) + 1
                continue
            d = _split(m, budget)
            if d is None:
                raise FactorizationError(original, m, budget)
            stack.extend((d, m // d))
    return sorted(found.items())


def valuation_int(n: int, p: int) -> int:
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius expects n >= 1")
    mu = 1
    for _, e in factor(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


class RationalPoly:
    """Univariate polynomial with exact rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, k: int, c: Fraction | int = 1) -> RationalPoly:
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: RationalPoly | int | Fraction) -> RationalPoly:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> RationalPoly:
        return RationalPoly(-c for c in self.coeffs)

    def __sub__(self, other: RationalPoly | int | Fraction) -> RationalPoly:
        return self + (-_as_poly(other))

    def __rsub__(self, other: RationalPoly | int | Fraction) -> RationalPoly:
        return _as_poly(other) - self

    def __mul__(self, other: RationalPoly | int | Fraction) -> RationalPoly:
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, c: int | Fraction) -> RationalPoly:
        return RationalPoly(x / c for x in self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalPoly([other])
        if not isinstance(other, RationalPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPoly({self})"

    def __str__(self) -> str:
        return format_poly(self.coeffs, "q")


def _as_poly(x: RationalPoly | int | Fraction) -> RationalPoly:
    return x if isinstance(x, RationalPoly) else RationalPoly([x])


def format_poly(coeffs: Sequence[Fraction | int], var: str = "x") -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def poly_binomial(P: RationalPoly, r: int) -> RationalPoly:
    """``P (P-1) ... (P-r+1) / r!`` expanded exactly."""
    if r < 0:
        raise ValueError("r must be >= 0")
    out = RationalPoly([1])
    for j in range(r):
        out = out * (P - j)
    return out / math.factorial(r)

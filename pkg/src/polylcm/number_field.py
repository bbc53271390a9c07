"""Monogenic number fields Z[theta], prime ideals, valuations and ideal lcm accumulation.

Elements are tuples of d integers: coordinates in the power basis
1, theta, ..., theta^{d-1}, where theta is a root of the defining polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .arith import factor, is_prime, primes_below, valuation_int
from .finite_field import FiniteField, FqPoly, factor_fq, field_with_modulus, gf, poly_gcd
from .hnf import IdealHNF, hnf_mod

__all__ = [
    "LcmAccumulator",
    "NonMonogenicField",
    "NumberField",
    "PrimeIdeal",
    "UnsupportedField",
]

FieldElement = tuple  # tuple[int, ...] of length d


class NonMonogenicField(ValueError):
    """Z[theta] is not the maximal order at some prime."""


class UnsupportedField(ValueError):
    """The requested operation needs a field with finite unit group."""


@dataclass(frozen=True)
class PrimeIdeal:
    """The prime (p, T(theta)) where T is a monic irreducible factor of g mod p."""

    p: int
    e: int
    f: int
    local_factor: tuple[int, ...]
    inert: bool = field(default=False, compare=False)

    @property
    def norm(self) -> int:
        return self.p**self.f

    def sort_key(self) -> tuple:
        return (self.p, self.local_factor)

    def label(self) -> str:
        if self.inert:
            return f"({self.p})"
        if self.local_factor == (0, 1):
            return f"({self.p},t)"
        return f"({self.p},{'/'.join(map(str, self.local_factor))})"

    def __str__(self) -> str:
        return self.label()


def _poly_mul_int(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    m = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


class NumberField:
    """K = Q(theta) with theta a root of the monic irreducible ``min_poly``.

    Construction verifies irreducibility and that Z[theta] is maximal at every
    prime whose square divides the discriminant (Dedekind's criterion).
    """

    def __init__(self, min_poly: Sequence[int]):
        g = tuple(int(c) for c in min_poly)
        while len(g) > 1 and g[-1] == 0:
            g = g[:-1]
        if len(g) < 2 or g[-1] != 1:
            raise ValueError("defining polynomial must be monic of degree >= 1")
        self.min_poly = g
        self.degree = d = len(g) - 1
        self._red = [-c for c in g[:-1]]  # theta^d = sum _red[i] theta^i
        self._prime_cache: dict[int, list[PrimeIdeal]] = {}
        self._power_cache: dict[tuple[PrimeIdeal, int], IdealHNF] = {}
        self._root_cache: dict[tuple[PrimeIdeal, int], int] = {}
        self._primes_upto_cache: dict[int, tuple[PrimeIdeal, ...]] = {}
        self._check_irreducible()
        deriv = [i * g[i] for i in range(1, d + 1)]
        self.disc = (-1) ** (d * (d - 1) // 2) * self.norm(self.element(deriv)) if d > 1 else 1
        self._check_monogenic()
        self.unit_group_finite = d == 1 or (d == 2 and self.disc < 0)
        self._torsion: list[FieldElement] | None = None

    @classmethod
    def from_spec(cls, spec: str) -> NumberField:
        from .parsing import parse_field_spec

        return cls(parse_field_spec(spec))

    @property
    def spec(self) -> str:
        from .arith import format_poly

        return format_poly(self.min_poly, "x").replace(" ", "")

    def __repr__(self) -> str:
        return f"NumberField({self.spec})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self) -> int:
        return hash(self.min_poly)

    def __reduce__(self):
        return (NumberField, (self.min_poly,))

    # -- construction checks ------------------------------------------------

    def _check_irreducible(self) -> None:
        d = self.degree
        if d == 1:
            return
        if d == 2:
            c, b = self.min_poly[0], self.min_poly[1]
            disc = b * b - 4 * c
            if disc >= 0 and math.isqrt(disc) ** 2 == disc:
                raise ValueError(f"{self.min_poly} is reducible over Q")
            return
        import sympy

        x = sympy.Symbol("x")
        if not sympy.Poly(list(reversed(self.min_poly)), x).is_irreducible:
            raise ValueError(f"{self.min_poly} is reducible over Q")

    def _check_monogenic(self) -> None:
        if self.degree == 1:
            return
        for p, e in factor(abs(self.disc)):
            if e >= 2 and not self._dedekind_maximal(p):
                raise NonMonogenicField(
                    f"Z[theta] is not maximal at p={p} for min poly {self.min_poly}"
                )

    def _dedekind_maximal(self, p: int) -> bool:
        F = gf(p)
        gbar = FqPoly.from_ints(F, self.min_poly)
        facs = factor_fq(gbar)
        lifted = [1]
        t_bar = [1]
        for h, m in facs:
            hl = list(h.coeffs)
            for _ in range(m):
                lifted = _poly_mul_int(lifted, hl)
            t_bar = _poly_mul_int(t_bar, hl)
        diff = [a - b for a, b in zip(self.min_poly, lifted + [0] * (len(self.min_poly) - len(lifted)))]
        assert all(c % p == 0 for c in diff)
        fbar = FqPoly.from_ints(F, [c // p for c in diff]).coeffs
        t_bar = FqPoly.from_ints(F, t_bar).coeffs
        u_bar = list(gbar.coeffs)
        from .finite_field import poly_divmod

        u_bar = poly_divmod(F, u_bar, list(t_bar))[0]
        g1 = poly_gcd(F, list(fbar), list(t_bar))
        return len(poly_gcd(F, g1, u_bar)) == 1

    # -- element arithmetic -------------------------------------------------

    def element(self, coeffs: Iterable[int]) -> FieldElement:
        """Element from polynomial coefficients in theta (any length), reduced mod g."""
        cs = list(coeffs)
        d = self.degree
        red = self._red
        for k in range(len(cs) - 1, d - 1, -1):
            c = cs[k]
            if c:
                for i in range(d):
                    cs[k - d + i] += c * red[i]
        cs = cs[:d] + [0] * (d - len(cs))
        return tuple(cs)

    def one(self) -> FieldElement:
        return (1,) + (0,) * (self.degree - 1)

    def zero(self) -> FieldElement:
        return (0,) * self.degree

    def theta(self) -> FieldElement:
        return self.element([0, 1])

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: FieldElement) -> FieldElement:
        return tuple(-x for x in a)

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.degree == 1:
            return (a[0] * b[0],)
        return self.element(_poly_mul_int(a, b))

    def scale(self, c: int, a: FieldElement) -> FieldElement:
        return tuple(c * x for x in a)

    def eval_poly(self, coeffs: Sequence[FieldElement], x: FieldElement) -> FieldElement:
        """Horner evaluation of sum coeffs[k] X^k at X = x."""
        acc = self.zero()
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def norm(self, a: FieldElement) -> int:
        """N_{K/Q}(a) as the determinant of multiplication by a."""
        d = self.degree
        if d == 1:
            return a[0]
        if d == 2:
            c, b = self.min_poly[0], self.min_poly[1]
            x, y = a
            return x * x - b * x * y + c * y * y
        cols = []
        v = list(a)
        for _ in range(d):
            cols.append(v)
            v = list(self.mul(tuple(v), self.theta()))
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        return _bareiss_det(mat)

    # -- prime ideals -------------------------------------------------------

    def factor_prime(self, p: int) -> list[PrimeIdeal]:
        """Primes above p from the factorization of g mod p, sorted by local factor."""
        cached = self._prime_cache.get(p)
        if cached is not None:
            return cached
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        F = gf(p)
        out = []
        for h, m in factor_fq(FqPoly.from_ints(F, self.min_poly)):
            out.append(PrimeIdeal(p, m, h.degree, tuple(h.coeffs), inert=h.degree == self.degree))
        out.sort(key=PrimeIdeal.sort_key)
        self._prime_cache[p] = out
        return out

    def residue_field(self, P: PrimeIdeal) -> FiniteField:
        return field_with_modulus(P.p, P.local_factor)

    def reduce(self, a: FieldElement, P: PrimeIdeal) -> int:
        """Image of a in O_K / P = F_p[t]/(local factor), theta -> t."""
        if P.f == 1:
            p = P.p
            r = -P.local_factor[0] % p
            acc = 0
            for c in reversed(a):
                acc = (acc * r + c) % p
            return acc
        return self.residue_field(P).from_int_poly(a)

    def reduce_poly(self, coeffs: Sequence[FieldElement], P: PrimeIdeal) -> list[int]:
        """Coefficientwise image of a polynomial over O_K in the residue field."""
        out = [self.reduce(c, P) for c in coeffs]
        while out and out[-1] == 0:
            out.pop()
        return out

    def _hensel_root(self, P: PrimeIdeal, k: int) -> int:
        """Root of g modulo p^k lifting the simple root of g mod p defined by P."""
        key = (P, k)
        r = self._root_cache.get(key)
        if r is not None:
            return r
        p = P.p
        g = self.min_poly
        dg = [i * g[i] for i in range(1, len(g))]
        r = -P.local_factor[0] % p
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            mod = p**prec
            gv = dg_v = 0
            for c in reversed(g):
                gv = (gv * r + c) % mod
            for c in reversed(dg):
                dg_v = (dg_v * r + c) % mod
            r = (r - gv * pow(dg_v, -1, mod)) % mod
        self._root_cache[key] = r
        return r

    def valuation_fast(self, a: FieldElement, P: PrimeIdeal, bound: int | None = None) -> int:
        """v_P(a) for e = f = 1 via the p-adic root of g that P picks out."""
        if P.e != 1 or P.f != 1:
            raise ValueError("fast valuation path needs e = f = 1")
        if not any(a):
            raise ValueError("valuation of zero")
        p = P.p
        if self.degree == 1:
            return valuation_int(a[0], p)
        if bound is None:
            bound = valuation_int(self.norm(a), p)
        k = bound + 1
        mod = p**k
        r = self._hensel_root(P, k)
        acc = 0
        for c in reversed(a):
            acc = (acc * r + c) % mod
        return valuation_int(acc, p) if acc else k

    def prime_power(self, P: PrimeIdeal, k: int) -> IdealHNF:
        """HNF of P^k (k >= 0)."""
        d = self.degree
        if k == 0:
            return IdealHNF(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)), 1)
        key = (P, k)
        got = self._power_cache.get(key)
        if got is not None:
            return got
        if k == 1:
            T = list(P.local_factor)
            gens = [self.element([0] * j + [P.p]) for j in range(d)]
            gens += [self.element([0] * j + T) for j in range(d)]
            H = IdealHNF(hnf_mod(gens, d, P.p), P.p)
        else:
            A = self.prime_power(P, k - 1)
            B = self.prime_power(P, 1)
            D = P.p**k
            prods = [self.mul(a, b) for a in A.matrix for b in B.matrix]
            H = IdealHNF(hnf_mod(prods, d, D), D)
        self._power_cache[key] = H
        return H

    def valuation_hnf(self, a: FieldElement, P: PrimeIdeal, bound: int | None = None) -> int:
        """v_P(a) as the largest k with a in P^k (doubling then bisection)."""
        if not any(a):
            raise ValueError("valuation of zero")
        if bound is None:
            bound = valuation_int(self.norm(a), P.p) // P.f
        if bound == 0 or not self.prime_power(P, 1).contains(a):
            return 0
        lo, hi = 1, 2
        while hi <= bound and self.prime_power(P, hi).contains(a):
            lo, hi = hi, 2 * hi
        hi = min(hi, bound + 1)  # a not in P^hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.prime_power(P, mid).contains(a):
                lo = mid
            else:
                hi = mid
        return lo

    def valuation(self, a: FieldElement, P: PrimeIdeal, bound: int | None = None) -> int:
        """v_P(a O_K).  ``bound`` is v_p(N(a)) when already known."""
        if P.e == 1 and P.f == 1:
            return self.valuation_fast(a, P, bound)
        if bound is not None:
            bound //= P.f
        return self.valuation_hnf(a, P, bound)

    def ideal_factorization(self, a: FieldElement) -> list[tuple[PrimeIdeal, int]]:
        """Prime ideal factorization of the principal ideal a O_K."""
        N = abs(self.norm(a))
        if N == 0:
            raise ValueError("zero has no factorization")
        out = []
        if self.degree == 1:
            return [(self.factor_prime(p)[0], e) for p, e in factor(N)]
        for p, vp in factor(N):
            primes = self.factor_prime(p)
            for P in primes:
                v = self.valuation(a, P, vp)
                if v:
                    out.append((P, v))
        return out

    # -- enumeration --------------------------------------------------------

    def primes_up_to(self, x: float) -> list[PrimeIdeal]:
        """All prime ideals of norm <= x, sorted by (norm, p, local factor)."""
        if x < 2:
            return []
        x = int(x)
        cached = self._primes_upto_cache.get(x)
        if cached is not None:
            return list(cached)
        out = []
        for p in primes_below(int(x) + 1):
            for P in self.factor_prime(p):
                if P.norm <= x:
                    out.append(P)
        out.sort(key=lambda P: (P.norm,) + P.sort_key())
        self._primes_upto_cache[x] = tuple(out)
        return out

    def iter_primes(self) -> Iterator[PrimeIdeal]:
        """All prime ideals in increasing (norm, p, local factor) order, without end."""
        lo, hi = 0, 256
        while True:
            for P in self.primes_up_to(hi):
                if P.norm > lo:
                    yield P
            lo, hi = hi, hi * 4

    def pi(self, x: float) -> int:
        return len(self.primes_up_to(x))

    def _scan_norm_ball(self, M: int) -> list[FieldElement]:
        """Every nonzero element of norm <= M (finite unit group fields only)."""
        if self.degree == 1:
            return [(a,) for a in range(-M, M + 1) if a]
        c, b = self.min_poly[0], self.min_poly[1]
        dp = 4 * c - b * b  # N(x + y theta) = ((2x - b y)^2 + dp y^2) / 4
        out = []
        ymax = math.isqrt(4 * M // dp) if dp else 0
        for y in range(-ymax, ymax + 1):
            rem = 4 * M - dp * y * y
            if rem < 0:
                continue
            tmax = math.isqrt(rem)
            for t in range(-tmax, tmax + 1):
                if (t + b * y) % 2:
                    continue
                x = (t + b * y) // 2
                if x or y:
                    out.append((x, y))
        return out

    def torsion_units(self) -> list[FieldElement]:
        if not self.unit_group_finite:
            raise UnsupportedField("unit group is infinite")
        if self._torsion is None:
            self._torsion = sorted(e for e in self._scan_norm_ball(1) if abs(self.norm(e)) == 1)
        return self._torsion

    def canonical_associate(self, a: FieldElement) -> FieldElement:
        """Lexicographically largest element of the unit orbit of a."""
        return max(self.mul(u, a) for u in self.torsion_units())

    def elements_up_to_norm(self, M: int, all_units: bool = False) -> list[FieldElement]:
        """Nonzero lambda with N(lambda) <= M, sorted by (norm, coordinates).

        By default one representative per unit orbit (the lexicographically
        largest associate); with ``all_units`` every element.
        """
        if not self.unit_group_finite:
            raise UnsupportedField(
                f"elements of bounded norm are infinite in number for {self.spec}"
            )
        if M < 1:
            return []
        if self.degree == 1:
            elems = [(a,) for a in range(1, M + 1)]
            if all_units:
                elems += [(-a,) for a in range(1, M + 1)]
        else:
            elems = self._scan_norm_ball(M)
            if not all_units:
                elems = [e for e in elems if self.canonical_associate(e) == e]
        elems.sort(key=lambda e: (abs(self.norm(e)), e))
        return elems


@dataclass
class LcmAccumulator:
    """lcm of principal ideals as ``{prime: max exponent}``.

    Mutated in place by :meth:`add`; :meth:`merge` is the pointwise max and is
    commutative and associative.
    """

    field: NumberField
    exponents: dict[PrimeIdeal, int] = field(default_factory=dict)
    count: int = 0

    def add(self, a: FieldElement) -> list[tuple[PrimeIdeal, int]]:
        fac = self.field.ideal_factorization(a)
        ex = self.exponents
        for P, v in fac:
            if v > ex.get(P, 0):
                ex[P] = v
        self.count += 1
        return fac

    def copy(self) -> LcmAccumulator:
        return LcmAccumulator(self.field, dict(self.exponents), self.count)

    def merge(self, other: LcmAccumulator) -> LcmAccumulator:
        out = self.copy()
        for P, v in other.exponents.items():
            if v > out.exponents.get(P, 0):
                out.exponents[P] = v
        out.count += other.count
        return out

    def log_norm(self) -> float:
        return math.fsum(v * P.f * math.log(P.p) for P, v in self.exponents.items())

    def norm(self) -> int:
        """|N(lcm)| as an exact integer."""
        out = 1
        for P, v in self.exponents.items():
            out *= P.p ** (P.f * v)
        return out

    def items(self) -> list[tuple[PrimeIdeal, int]]:
        return sorted(self.exponents.items(), key=lambda t: t[0].sort_key())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LcmAccumulator):
            return NotImplemented
        return self.field == other.field and self.exponents == other.exponents


def accumulate(acc: LcmAccumulator, a: FieldElement) -> LcmAccumulator:
    """Functional form: a new accumulator including the ideal a O_K."""
    out = acc.copy()
    out.add(a)
    return out

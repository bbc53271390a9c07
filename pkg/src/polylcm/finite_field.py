"""Finite fields F_{p^f} and factorization of univariate polynomials over them.

Field elements are ints: the element c_0 + c_1 t + ... + c_{f-1} t^{f-1} of
F_p[t]/(modulus) is encoded as sum(c_i * p**i).  Polynomials over a field are
lists of such codes, lowest degree first, with no trailing zeros (the zero
polynomial is ``[]``).
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from .arith import factor, is_prime, moebius

__all__ = [
    "FiniteField",
    "FqPoly",
    "NOT_SQUAREFREE",
    "count_irreducibles",
    "factor_fq",
    "gf",
    "splitting_type",
]

_TABLE_LIMIT = 1 << 16
_ADD_TABLE_LIMIT = 1 << 10


class FiniteField:
    """The field F_p[t]/(modulus).

    For f = 1 the modulus is normalised to ``(0, 1)`` and elements are plain
    residues mod p.
    """

    def __init__(self, p: int, modulus: Sequence[int] = (0, 1), *, check: bool = True):
        modulus = tuple(c % p for c in modulus)
        if not modulus or modulus[-1] != 1 or len(modulus) < 2:
            raise ValueError("modulus must be monic of degree >= 1")
        if check and not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        self.p = p
        self.f = len(modulus) - 1
        if self.f == 1:
            modulus = (0, 1)
        self.modulus = modulus
        self.q = p**self.f
        if self.f > 1 and check and not _is_irreducible_prime(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self._build()

    def __reduce__(self):
        return (_field_with_modulus, (self.p, self.modulus))

    def __repr__(self) -> str:
        if self.f == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.f}, modulus={self.modulus})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    # -- element arithmetic -------------------------------------------------

    def _build(self) -> None:
        p, q = self.p, self.q
        if self.f == 1:
            self.add = lambda a, b: (a + b) % p
            self.sub = lambda a, b: (a - b) % p
            self.neg = lambda a: -a % p
            self.mul = lambda a, b: a * b % p
            self.inv = lambda a: pow(a, p - 2, p)
            return
        self._digits = None
        self.add = self._add_digits
        self.sub = self._sub_digits
        self.neg = self._neg_digits
        self.mul = self._mul_poly
        self.inv = lambda a: self.pow(a, q - 2)
        if q <= _TABLE_LIMIT:
            self._digits = [self._to_digits(a) for a in range(q)]
            exp, log = self._exp_log_tables()
            order = q - 1

            def mul(a, b):
                if a == 0 or b == 0:
                    return 0
                return exp[(log[a] + log[b]) % order]

            def inv(a):
                return exp[-log[a] % order]

            self.mul, self.inv = mul, inv
            if p == 2:
                self.add = self.sub = lambda a, b: a ^ b
                self.neg = lambda a: a
            elif q <= _ADD_TABLE_LIMIT:
                add_t = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
                neg_t = [self._neg_digits(a) for a in range(q)]
                self.add = lambda a, b: add_t[a][b]
                self.neg = neg_t.__getitem__
                self.sub = lambda a, b: add_t[a][neg_t[b]]

    def _to_digits(self, a: int) -> tuple[int, ...]:
        if self._digits is not None:
            return self._digits[a]
        out = []
        for _ in range(self.f):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def _from_digits(self, ds: Sequence[int]) -> int:
        a = 0
        for c in reversed(ds):
            a = a * self.p + c
        return a

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        return self._from_digits([(x + y) % p for x, y in zip(self._to_digits(a), self._to_digits(b))])

    def _sub_digits(self, a: int, b: int) -> int:
        p = self.p
        return self._from_digits([(x - y) % p for x, y in zip(self._to_digits(a), self._to_digits(b))])

    def _neg_digits(self, a: int) -> int:
        p = self.p
        return self._from_digits([-x % p for x in self._to_digits(a)])

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _mul_prime(list(self._to_digits(a)), list(self._to_digits(b)), self.p)
        rem = _mod_prime(prod, list(self.modulus), self.p)
        return self._from_digits(rem + [0] * (self.f - len(rem)))

    def _exp_log_tables(self) -> tuple[list[int], list[int]]:
        q = self.q
        for g in range(2, q):
            exp = [1]
            x = 1
            while True:
                x = self._mul_poly(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                log = [0] * q
                for i, v in enumerate(exp):
                    log[v] = i
                return exp, log
        raise AssertionError("no primitive element found")  # pragma: no cover

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        result = 1
        mul = self.mul
        while e:
            if e & 1:
                result = mul(result, a)
            a = mul(a, a)
            e >>= 1
        return result

    def from_coords(self, coords: Sequence[int]) -> int:
        """Element with the given coordinates in the basis 1, t, ..., t^{f-1}."""
        return self._from_digits([c % self.p for c in coords])

    def coords(self, a: int) -> tuple[int, ...]:
        return self._to_digits(a)

    def from_int_poly(self, coeffs: Sequence[int]) -> int:
        """Image of the integer polynomial sum(c_i t^i) in the field."""
        rem = _mod_prime(_trim([c % self.p for c in coeffs]), list(self.modulus), self.p)
        return self._from_digits(rem + [0] * (self.f - len(rem)))

    def elements(self) -> range:
        return range(self.q)

    def pth_root(self, a: int) -> int:
        return self.pow(a, self.q // self.p)


@functools.lru_cache(maxsize=None)
def _field_with_modulus(p: int, modulus: tuple[int, ...]) -> FiniteField:
    return FiniteField(p, modulus)


def field_with_modulus(p: int, modulus: Sequence[int]) -> FiniteField:
    """Cached constructor; every linear modulus yields the prime field."""
    modulus = tuple(c % p for c in modulus)
    if len(modulus) == 2:
        modulus = (0, 1)
    return _field_with_modulus(p, modulus)


@functools.lru_cache(maxsize=None)
def gf(q: int) -> FiniteField:
    """F_q with the first monic irreducible modulus in enumeration order.

    Candidate moduli t^f + c_{f-1} t^{f-1} + ... + c_0 are enumerated by the
    integer sum(c_i p^i), smallest first.
    """
    fac = factor(q) if q > 1 else []
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    p, f = fac[0]
    if f == 1:
        return _field_with_modulus(p, (0, 1))
    for code in range(p**f):
        low = [(code // p**i) % p for i in range(f)]
        if low[0] == 0:
            continue
        if _is_irreducible_prime(low + [1], p):
            return _field_with_modulus(p, tuple(low + [1]))
    raise AssertionError("unreachable")  # pragma: no cover


# -- polynomials over F_p with int coefficients (used for moduli) -----------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mul_prime(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def _mod_prime(a: list[int], m: list[int], p: int) -> list[int]:
    a = list(a)
    dm = len(m) - 1
    inv = pow(m[-1], p - 2, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _trim(a[:dm] if len(a) > dm else a)


def _is_irreducible_prime(m: list[int], p: int) -> bool:
    F = _field_with_modulus(p, (0, 1))
    return is_irreducible(F, m)


# -- polynomials over a FiniteField -----------------------------------------


def poly_add(F: FiniteField, a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    add = F.add
    out = list(a)
    for i, y in enumerate(b):
        out[i] = add(out[i], y)
    return _trim(out)


def poly_sub(F: FiniteField, a: list[int], b: list[int]) -> list[int]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    sub = F.sub
    for i, y in enumerate(b):
        out[i] = sub(out[i], y)
    return _trim(out)


def poly_mul(F: FiniteField, a: list[int], b: list[int]) -> list[int]:
    if not a or not b:
        return []
    if F.f == 1:
        return _mul_prime(a, b, F.p)
    mul, add = F.mul, F.add
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return _trim(out)


def poly_divmod(F: FiniteField, a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], list(a)
    a = list(a)
    quot = [0] * (len(a) - db)
    if F.f == 1:
        p = F.p
        inv = pow(b[-1], p - 2, p)
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i] * inv % p
            quot[i - db] = c
            if c:
                for j in range(db):
                    a[i - db + j] = (a[i - db + j] - c * b[j]) % p
        return _trim(quot), _trim(a[:db])
    mul, sub = F.mul, F.sub
    inv = F.inv(b[-1])
    for i in range(len(a) - 1, db - 1, -1):
        c = mul(a[i], inv)
        quot[i - db] = c
        if c:
            for j in range(db):
                a[i - db + j] = sub(a[i - db + j], mul(c, b[j]))
    return _trim(quot), _trim(a[:db])


def poly_mod(F: FiniteField, a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        return list(a)
    return poly_divmod(F, a, b)[1]


def poly_monic(F: FiniteField, a: list[int]) -> list[int]:
    if not a or a[-1] == 1:
        return list(a)
    inv = F.inv(a[-1])
    mul = F.mul
    return [mul(c, inv) for c in a]


def poly_gcd(F: FiniteField, a: list[int], b: list[int]) -> list[int]:
    while b:
        a, b = b, poly_mod(F, a, b)
    return poly_monic(F, a)


def poly_deriv(F: FiniteField, a: list[int]) -> list[int]:
    p = F.p
    if F.f == 1:
        return _trim([i * a[i] % p for i in range(1, len(a))])
    out = []
    for i in range(1, len(a)):
        k = i % p
        if k == 0:
            out.append(0)
        else:
            # k * a[i] as repeated addition is avoided via the prime-field embedding
            out.append(F.mul(F.from_coords([k]), a[i]))
    return _trim(out)


def poly_powmod(F: FiniteField, base: list[int], e: int, m: list[int]) -> list[int]:
    result = [1]
    base = poly_mod(F, base, m)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, base), m)
        e >>= 1
        if e:
            base = poly_mod(F, poly_mul(F, base, base), m)
    return result


def poly_eval(F: FiniteField, a: Sequence[int], x: int) -> int:
    acc = 0
    mul, add = F.mul, F.add
    for c in reversed(a):
        acc = add(mul(acc, x), c)
    return acc


def is_irreducible(F: FiniteField, a: list[int]) -> bool:
    """Rabin-style test: a has no factor of degree <= deg/2 and divides x^{q^n} - x."""
    n = len(a) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    a = poly_monic(F, a)
    h = [0, 1]
    for k in range(1, n // 2 + 1):
        h = poly_powmod(F, h, F.q, a)
        if len(poly_gcd(F, a, poly_sub(F, h, [0, 1]))) > 1:
            return False
    return True


def squarefree_decomposition(F: FiniteField, a: list[int]) -> list[tuple[list[int], int]]:
    """Monic a = prod g_i^{m_i} with each g_i squarefree and pairwise coprime."""
    out: list[tuple[list[int], int]] = []
    _sqf(F, poly_monic(F, a), 1, out)
    return out


def _sqf(F: FiniteField, a: list[int], mult: int, out: list[tuple[list[int], int]]) -> None:
    p = F.p
    i = 1
    da = poly_deriv(F, a)
    c = poly_gcd(F, a, da)
    w = poly_divmod(F, a, c)[0]
    while len(w) > 1:
        y = poly_gcd(F, w, c)
        z = poly_divmod(F, w, y)[0]
        if len(z) > 1:
            out.append((z, i * mult))
        i += 1
        w = y
        c = poly_divmod(F, c, y)[0]
    if len(c) > 1:
        # c is a p-th power: take coefficientwise p-th roots
        root = [F.pth_root(c[k]) for k in range(0, len(c), p)]
        _sqf(F, root, mult * p, out)


def distinct_degree(F: FiniteField, a: list[int]) -> list[tuple[list[int], int]]:
    """For squarefree monic a: [(g_k, k)] with g_k the product of degree-k factors."""
    out = []
    h = [0, 1]
    k = 0
    while len(a) - 1 >= 2 * (k + 1):
        k += 1
        h = poly_powmod(F, h, F.q, a)
        g = poly_gcd(F, a, poly_sub(F, h, [0, 1]))
        if len(g) > 1:
            out.append((g, k))
            a = poly_divmod(F, a, g)[0]
            h = poly_mod(F, h, a)
    if len(a) > 1:
        out.append((a, len(a) - 1))
    return out


def equal_degree(F: FiniteField, a: list[int], k: int, rng: random.Random) -> list[list[int]]:
    """Split squarefree monic a, all of whose factors have degree k (Cantor-Zassenhaus)."""
    n = len(a) - 1
    if n == k:
        return [a]
    q = F.q
    while True:
        r = _trim([rng.randrange(q) for _ in range(n)])
        if len(r) < 2:
            continue
        if q % 2:
            t = poly_powmod(F, r, (q**k - 1) // 2, a)
            t = poly_sub(F, t, [1])
        else:
            # absolute trace to F_2 composed with the relative trace
            t = list(r)
            s = r
            for _ in range(F.f * k - 1):
                s = poly_mod(F, poly_mul(F, s, s), a)
                t = poly_add(F, t, s)
        g = poly_gcd(F, a, t)
        if 1 < len(g) < len(a):
            return equal_degree(F, g, k, rng) + equal_degree(F, poly_divmod(F, a, g)[0], k, rng)


# -- public API --------------------------------------------------------------


@dataclass(frozen=True)
class FqPoly:
    """Polynomial over ``field`` with coefficient codes, lowest degree first."""

    field: FiniteField
    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = list(self.coeffs)
        _trim(cs)
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_ints(cls, field: FiniteField, coeffs: Sequence[int]) -> FqPoly:
        return cls(field, tuple(field.from_coords([c]) for c in coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __mul__(self, other: FqPoly) -> FqPoly:
        return FqPoly(self.field, tuple(poly_mul(self.field, list(self.coeffs), list(other.coeffs))))

    def __pow__(self, e: int) -> FqPoly:
        out = FqPoly(self.field, (1,))
        for _ in range(e):
            out = out * self
        return out

    def __str__(self) -> str:
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            cs = str(c) if self.field.f == 1 else "[" + ",".join(map(str, self.field.coords(c))) + "]"
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                parts.append(mono)
            else:
                parts.append(cs + ("*" + mono if mono else ""))
        return " + ".join(parts) or "0"


def _canonical_key(g: FqPoly) -> tuple:
    return (g.degree, g.coeffs)


def factor_fq(f: FqPoly, rng: random.Random | None = None) -> list[tuple[FqPoly, int]]:
    """Complete factorization of monic f into monic irreducibles with multiplicities.

    Squarefree decomposition, then distinct-degree, then equal-degree splitting
    (randomized, driven by ``rng``).  Output is sorted by degree then by the
    coefficient codes, so it does not depend on the random choices.
    """
    if f.degree < 1 or not f.is_monic():
        raise ValueError("factor_fq expects a monic polynomial of degree >= 1")
    F = f.field
    rng = rng if rng is not None else random.Random(0)
    out = []
    for part, mult in squarefree_decomposition(F, list(f.coeffs)):
        for g, k in distinct_degree(F, part):
            for h in equal_degree(F, g, k, rng):
                out.append((FqPoly(F, tuple(h)), mult))
    out.sort(key=lambda t: _canonical_key(t[0]))
    return out


class _NotSquarefree:
    __slots__ = ()

    def __repr__(self) -> str:
        return "NOT_SQUAREFREE"

    def __reduce__(self):
        return "NOT_SQUAREFREE"


NOT_SQUAREFREE = _NotSquarefree()


def splitting_type_codes(F: FiniteField, a: list[int], n: int):
    """Splitting type of the monic degree-n code list a, or NOT_SQUAREFREE."""
    if len(poly_gcd(F, a, poly_deriv(F, a))) > 1:
        return NOT_SQUAREFREE
    r = [0] * n
    for g, k in distinct_degree(F, a):
        r[k - 1] += (len(g) - 1) // k
    return tuple(r)


def splitting_type(f: FqPoly, n: int | None = None):
    """Type (r_1, ..., r_n) of squarefree monic f, r_k = number of degree-k factors."""
    n = f.degree if n is None else n
    if f.degree != n or not f.is_monic():
        raise ValueError(f"expected a monic polynomial of degree {n}")
    return splitting_type_codes(f.field, list(f.coeffs), n)


def count_roots_codes(F: FiniteField, a: list[int]) -> int:
    """Number of distinct roots in F of the monic code list a."""
    if len(a) < 2:
        return 0
    h = poly_powmod(F, [0, 1], F.q, a)
    return len(poly_gcd(F, a, poly_sub(F, h, [0, 1]))) - 1


def count_irreducibles(q: int, k: int) -> int:
    """Monic irreducible polynomials of degree k over F_q: (1/k) sum mu(d) q^{k/d}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    total = sum(moebius(d) * q ** (k // d) for d in range(1, k + 1) if k % d == 0)
    assert total % k == 0
    return total // k


def monic_polys(F: FiniteField, n: int) -> Iterator[list[int]]:
    """All q^n monic degree-n code lists over F."""
    for low in itertools.product(range(F.q), repeat=n):
        yield list(low) + [1]

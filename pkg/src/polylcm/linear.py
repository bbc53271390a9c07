"""Degree-one case: lcm of an arithmetic progression in O_K and the ray class constant."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import factor, primes_below
from .experiments import ExperimentReport, _field_params, _Timer
from .hnf import IdealHNF, hnf_mod
from .number_field import LcmAccumulator, NumberField, PrimeIdeal, UnsupportedField

__all__ = [
    "NonCoprimeResidue",
    "RayClassData",
    "classical_constant",
    "classical_progression_lcm_log",
    "ray_class_data",
    "run_linear_case",
]

FieldElement = tuple


class NonCoprimeResidue(ValueError):
    pass


def _principal_ideal(K: NumberField, nu: FieldElement) -> IdealHNF:
    D = abs(K.norm(nu))
    theta = K.theta() if K.degree > 1 else None
    rows, cur = [], nu
    for _ in range(K.degree):
        rows.append(cur)
        if theta is not None:
            cur = K.mul(cur, theta)
    return IdealHNF(hnf_mod(rows, K.degree, D), D)


@dataclass(frozen=True)
class RayClassData:
    """(O_K / nu)^x modulo the image of the torsion units, with minimal norms."""

    field: NumberField
    nu: FieldElement
    ideal: IdealHNF
    primes: tuple[PrimeIdeal, ...]  # primes dividing nu
    classes: tuple[tuple[FieldElement, ...], ...]  # each orbit sorted, representative first
    min_norms: tuple[int, ...]  # N_c per class
    witnesses: tuple[FieldElement, ...]  # an element of norm N_c per class

    @property
    def h(self) -> int:
        return len(self.classes)

    @property
    def representatives(self) -> list[FieldElement]:
        return [c[0] for c in self.classes]

    @property
    def constant(self) -> Fraction:
        """(1/h) sum_c 1/N_c."""
        return sum((Fraction(1, n) for n in self.min_norms), Fraction(0)) / self.h

    def residue(self, a: FieldElement) -> FieldElement:
        return self.ideal.reduce(a)

    def is_unit_residue(self, a: FieldElement) -> bool:
        return all(self.field.reduce(a, P) for P in self.primes)

    def class_of(self, a: FieldElement) -> int:
        r = self.residue(a)
        if not self.is_unit_residue(r):
            raise NonCoprimeResidue(f"{a} shares a prime factor with {self.nu}")
        for i, c in enumerate(self.classes):
            if r in c:
                return i
        raise AssertionError("every unit residue lies in some class")


def ray_class_data(field: NumberField, nu: Sequence[int]) -> RayClassData:
    """Classes of (O_K / nu)^x under the torsion units; a unit nu gives the trivial group."""
    K = field
    if not K.unit_group_finite:
        raise UnsupportedField(f"{K.spec} has infinitely many units")
    nu = K.element(nu)
    D = abs(K.norm(nu))
    if D == 0:
        raise ValueError("modulus must be nonzero")
    ideal = _principal_ideal(K, nu)
    primes = tuple(P for p, _ in factor(D) for P in K.factor_prime(p) if K.valuation(nu, P) > 0)
    diag = [ideal.matrix[i][i] for i in range(K.degree)]
    residues = []
    for idx in range(math.prod(diag)):
        v, rest = [], idx
        for m in diag:
            v.append(rest % m)
            rest //= m
        r = ideal.reduce(v)
        if all(K.reduce(r, P) for P in primes):
            residues.append(r)
    seen: set = set()
    classes = []
    units = K.torsion_units()
    for r in sorted(residues):
        if r in seen:
            continue
        orbit = sorted({ideal.reduce(K.mul(u, r)) for u in units})
        seen.update(orbit)
        classes.append(tuple(orbit))
    lookup = {r: i for i, c in enumerate(classes) for r in c}
    min_norms: list[int | None] = [None] * len(classes)
    witnesses: list[FieldElement | None] = [None] * len(classes)
    bound, done = max(D, 4), 0
    while done < len(classes):
        for b in K.elements_up_to_norm(bound, all_units=True):
            i = lookup.get(ideal.reduce(b))
            if i is not None and min_norms[i] is None:
                min_norms[i], witnesses[i] = abs(K.norm(b)), b
                done += 1
        bound *= 4
    return RayClassData(K, nu, ideal, primes, tuple(classes), tuple(min_norms), tuple(witnesses))


def classical_constant(k: int) -> Fraction:
    """(k / phi(k)) sum_{n <= k, (n, k) = 1} 1/n."""
    units = [n for n in range(1, k + 1) if math.gcd(n, k) == 1]
    return Fraction(k, len(units)) * sum((Fraction(1, n) for n in units), Fraction(0))


def classical_progression_lcm_log(k: int, a: int, M: int) -> float:
    """log lcm(k X + a : 1 <= X <= M) from the largest prime power hitting the progression."""
    if math.gcd(k, a) != 1:
        raise NonCoprimeResidue(f"gcd({k}, {a}) != 1")
    top = k * M + a
    total = []
    for p in primes_below(top + 1):
        if k % p == 0:
            continue
        e, pe = 0, p
        while pe <= top:
            x0 = (-a * pow(k, -1, pe)) % pe or pe  # least X >= 1 with p^e | kX + a
            if x0 > M:
                break
            e, pe = e + 1, pe * p
        if e:
            total.append(e * math.log(p))
    return math.fsum(total)


def run_linear_case(
    field: NumberField,
    alpha: Sequence[int],
    nu: Sequence[int],
    M: int | Sequence[int],
) -> ExperimentReport:
    """Slope log|N lcm(S)| / M for S = {eta alpha + nu lambda : norm <= M} against (1/h) sum 1/N_c.

    An element beta lies in S exactly when beta = eta alpha mod nu for a
    torsion unit eta, so S is read off the norm ball directly, one element
    per unit orbit.
    """
    K = field
    alpha, nu = K.element(alpha), K.element(nu)
    Ms = [M] if isinstance(M, int) else list(M)
    report = ExperimentReport(
        "linear", {**_field_params(K), "alpha": list(alpha), "nu": list(nu), "M": Ms}
    )
    with _Timer(report):
        data = ray_class_data(K, nu)
        if not data.is_unit_residue(data.residue(alpha)):
            raise NonCoprimeResidue(f"alpha = {alpha} is not coprime to nu = {nu}")
        targets = {data.residue(K.mul(u, alpha)) for u in K.torsion_units()}
        const = data.constant
        classical = K.degree == 1 and alpha[0] > 0
        for m_ in sorted(Ms):
            acc = LcmAccumulator(K)
            for b in K.elements_up_to_norm(m_):
                if data.residue(b) in targets:
                    acc.add(b)
            slope = acc.log_norm() / m_
            row = {"M": m_, "values": acc.count, "log_norm": acc.log_norm(), "slope": slope,
                   "constant": float(const), "ratio": slope / float(const), "h": data.h}
            if classical:
                k, a = abs(nu[0]), alpha[0]
                cl = classical_progression_lcm_log(k, a, m_) / m_
                cc = classical_constant(k)
                row |= {"classical_slope": cl, "classical_constant": float(cc), "classical_ratio": cl / float(cc)}
            report.rows.append(row)
        report.summary = {
            "h": data.h, "constant": str(const),
            "classes": [{"representative": list(c[0]), "size": len(c), "min_norm": n, "witness": list(w)}
                        for c, n, w in zip(data.classes, data.min_norms, data.witnesses)],
        }
        if classical:
            report.summary["classical_constant"] = str(classical_constant(abs(nu[0])))
    return report

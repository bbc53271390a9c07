"""Desk-scale experiments: estimators next to exact reference values."""

from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .arith import FactorizationError
from .ensembles import (
    RAMIFIED,
    PolynomialSample,
    certify_sn,
    enumerate_box,
    frobenius_type,
    pi_fr,
    sample,
    sample_stream,
)
from .finite_field import is_irreducible, monic_polys
from .number_field import LcmAccumulator, NumberField, PrimeIdeal, UnsupportedField
from .parallel import map_indexed
from .splitting import census, check_type, format_type

__all__ = [
    "DEFAULT_BUDGET",
    "DEFAULT_XI",
    "ExperimentReport",
    "PsiFactorizationError",
    "PsiValue",
    "compute_psi",
    "run_expectation_pi",
    "run_indicator_moments",
    "run_lemma11",
    "run_psi_ensemble",
]

DEFAULT_XI = 0.49  # any value below 1/2 is admissible for n >= 3
DEFAULT_BUDGET = 200


@dataclass
class ExperimentReport:
    name: str
    params: dict[str, Any]
    rows: list[dict[str, Any]] = field(default_factory=list)
    raw: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    elapsed: float = 0.0


class _Timer:
    def __init__(self, report: ExperimentReport):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.elapsed = time.perf_counter() - self.t0
        return False


def _field_params(K: NumberField) -> dict[str, Any]:
    return {"field": K.spec, "d": K.degree}


def _mean_var(values: Sequence[float]) -> tuple[float, float]:
    """Mean and population variance (ddof = 0)."""
    m = len(values)
    if not m:
        return float("nan"), float("nan")
    mean = math.fsum(values) / m
    return mean, math.fsum((v - mean) ** 2 for v in values) / m


def _sample_certified(index: int, n: int, N: int, K: NumberField, seed: int, budget: int):
    f = sample(n, N, K, sample_stream(seed, index))
    return f, certify_sn(f, budget).certified


# -- Lemma: P(f = g mod P) ~ 1 / q^n ------------------------------------------


def default_residue(K: NumberField, P: PrimeIdeal, n: int) -> list[int]:
    """First monic irreducible degree-n polynomial over the residue field (an n-cycle type)."""
    F = K.residue_field(P)
    for a in monic_polys(F, n):
        if is_irreducible(F, a):
            return a
    raise AssertionError("irreducible polynomials exist in every degree")


def _lemma11_one(index, n, N, K, seed, budget, primes, targets):
    f, ok = _sample_certified(index, n, N, K, seed, budget)
    return ok, tuple(f.reduce(P) == g for P, g in zip(primes, targets)), f.text()


def run_lemma11(
    field: NumberField,
    n: int,
    N: int,
    primes: Sequence[PrimeIdeal],
    samples: int,
    seed: int,
    *,
    residues: Sequence[Sequence[int]] | None = None,
    xi: float = DEFAULT_XI,
    budget: int = DEFAULT_BUDGET,
    exhaustive: bool = False,
    workers: int = 1,
) -> ExperimentReport:
    """Frequency of f = g mod P over the certified ensemble against 1/q^n.

    Exhaustive mode runs over the whole box of height <= N without
    conditioning on the certificate.
    """
    K = field
    primes = list(primes)
    targets = [list(g) for g in residues] if residues is not None else [default_residue(K, P, n) for P in primes]
    report = ExperimentReport(
        "lemma11",
        {**_field_params(K), "n": n, "N": N, "primes": [P.label() for P in primes], "samples": samples,
         "seed": seed, "xi": xi, "budget": budget, "exhaustive": exhaustive},
    )
    with _Timer(report):
        guard = N ** (K.degree * xi / n)
        for P in primes:
            if P.norm >= guard:
                report.warnings.append(f"q = {P.norm} is outside the range q < N^(d xi / n) = {guard:.4g}")
        if exhaustive:
            results = [(True, tuple(f.reduce(P) == g for P, g in zip(primes, targets)), f.text())
                       for f in enumerate_box(n, N, K)]
        elif samples <= 0:
            results = []
        else:
            results = map_indexed(_lemma11_one, range(samples), (n, N, K, seed, budget, primes, targets), workers)
        kept = [r for r in results if r[0]]
        m = len(kept)
        report.raw = [{"index": i, "coefficients": r[2], "certified": int(r[0]),
                       **{f"match_{P.label()}": int(h) for P, h in zip(primes, r[1])}}
                      for i, r in enumerate(results)]
        for j, (P, g) in enumerate(zip(primes, targets)):
            hits = sum(1 for r in kept if r[1][j])
            ref = Fraction(1, P.norm**n)
            freq = hits / m if m else float("nan")
            se = math.sqrt(float(ref) * (1 - float(ref)) / m) if m else float("nan")
            z = (freq - float(ref)) / se if m else float("nan")
            report.rows.append({
                "prime": P.label(), "q": P.norm, "residue": "/".join(map(str, g)), "hits": hits,
                "samples": m, "frequency": freq, "reference": float(ref), "stderr": se, "z": z,
                "in_range": int(P.norm < guard),
            })
        report.summary = {"certified": m, "uncertified": len(results) - m,
                          "max_abs_z": max((abs(r["z"]) for r in report.rows if m), default=float("nan"))}
    return report


# -- indicator moments ----------------------------------------------------------


def _types_one(index, n, N, K, seed, budget, primes):
    f, ok = _sample_certified(index, n, N, K, seed, budget)
    return ok, tuple(frobenius_type(f, P) for P in primes)


def run_indicator_moments(
    field: NumberField,
    n: int,
    N: int,
    r: Sequence[int],
    x: float,
    samples: int,
    seed: int,
    *,
    xi: float = DEFAULT_XI,
    budget: int = DEFAULT_BUDGET,
    exhaustive: bool = False,
    workers: int = 1,
) -> ExperimentReport:
    """Mean and variance of 1[type of f mod P = r] per prime of norm <= x."""
    K = field
    r = check_type(n, r)
    cp = census(n, r)
    delta, C = cp.density, cp.second_order
    primes = K.primes_up_to(x)
    report = ExperimentReport(
        "moments",
        {**_field_params(K), "n": n, "N": N, "r": format_type(r), "x": x, "samples": samples, "seed": seed,
         "xi": xi, "budget": budget, "exhaustive": exhaustive},
    )
    with _Timer(report):
        guard = N ** (K.degree * xi / (n + 1))
        if x >= guard:
            report.warnings.append(f"x = {x} is outside the range x < N^(d xi / (n+1)) = {guard:.4g}")
        if exhaustive:
            results = [(True, tuple(frobenius_type(f, P) for P in primes)) for f in enumerate_box(n, N, K)]
        elif samples <= 0:
            results = []
        else:
            results = map_indexed(_types_one, range(samples), (n, N, K, seed, budget, primes), workers)
        kept = [t for ok, t in results if ok]
        m = len(kept)
        for j, P in enumerate(primes):
            q = P.norm
            ind = [1.0 if t[j] == r else 0.0 for t in kept]
            mean, var = _mean_var(ind)
            ref_mean = delta + C / q
            ref_var = (delta - delta**2) + C * (1 - 2 * delta) / q
            report.rows.append({
                "prime": P.label(), "q": q, "samples": m, "hits": int(sum(ind)),
                "ramified": sum(1 for t in kept if t[j] is RAMIFIED),
                "mean": mean, "variance": var,
                "stderr": math.sqrt(var / m) if m else float("nan"),
                "ref_mean": float(ref_mean), "ref_variance": float(ref_var),
                "exact_mean": float(Fraction(cp(q), q**n)) if P.e == 1 else float("nan"),
                "delta": float(delta), "C_r": float(C),
            })
        report.summary = {"certified": m, "uncertified": len(results) - m, "delta": str(delta), "C_r": str(C),
                          "primes": len(primes)}
    return report


# -- expectation of pi_{f,r}(x) -------------------------------------------------


def _pi_one(index, n, N, K, seed, budget, r, x):
    f, ok = _sample_certified(index, n, N, K, seed, budget)
    return ok, (pi_fr(f, r, x) if ok else -1), f.text()


def run_expectation_pi(
    field: NumberField,
    n: int,
    N: int,
    r: Sequence[int],
    x: float,
    samples: int,
    seed: int,
    *,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> ExperimentReport:
    """Sample mean of pi_{f,r}(x) over certified f against delta(r) pi_K(x) + C_r log log x."""
    K = field
    r = check_type(n, r)
    if x < 16:
        raise ValueError("x must be >= 16 so that log log x is positive")
    cp = census(n, r)
    delta, C = cp.density, cp.second_order
    piK = K.pi(x)
    report = ExperimentReport(
        "expectation_pi",
        {**_field_params(K), "n": n, "N": N, "r": format_type(r), "x": x, "samples": samples, "seed": seed,
         "budget": budget},
    )
    with _Timer(report):
        results = map_indexed(_pi_one, range(samples), (n, N, K, seed, budget, r, x), workers) if samples > 0 else []
        values = [v for ok, v, _ in results if ok]
        report.raw = [{"index": i, "coefficients": t, "certified": int(ok), "pi_fr": v}
                      for i, (ok, v, t) in enumerate(results)]
        mean, var = _mean_var(values)
        lead = float(delta) * piK
        ref = lead + float(C) * math.log(math.log(x))
        m = len(values)
        report.summary = {
            "certified": m, "uncertified": len(results) - m, "mean": mean, "variance": var,
            "stderr": math.sqrt(var / m) if m else float("nan"), "pi_K": piK, "delta": str(delta), "C_r": str(C),
            "leading_reference": lead, "reference": ref, "ratio": mean / lead if lead else float("nan"),
        }
        report.rows = [report.summary | {"x": x}]
    return report


# -- Psi_f(N, M) -----------------------------------------------------------------


class PsiFactorizationError(ArithmeticError):
    def __init__(self, lam, value, cause: FactorizationError):
        super().__init__(f"cannot factor f({lam}) = {value}: {cause}")
        self.lam, self.value, self.cause = lam, value, cause


@dataclass
class PsiValue:
    psi: float
    count: int  # |Lambda(M)|
    log_product: float  # sum of log |N f(lambda)| over nonzero values
    beta_histogram: dict[int, int]  # exponent -> number of primes with that lcm exponent
    accumulator: LcmAccumulator
    zeros: int = 0

    @property
    def lcm_norm(self) -> int:
        return self.accumulator.norm()


def compute_psi(f: PolynomialSample, M: int, mode: str = "orbits") -> PsiValue:
    """log |N lcm(f(lambda) : N(lambda) <= M)|, one lambda per unit orbit unless mode == "all"."""
    K = f.field
    if not K.unit_group_finite:
        raise UnsupportedField(f"{K.spec} has infinitely many units; lambda of bounded norm are not finite")
    if mode not in ("orbits", "all"):
        raise ValueError(f"unknown enumeration mode {mode!r}")
    lams = K.elements_up_to_norm(M, all_units=(mode == "all"))
    acc = LcmAccumulator(K)
    logs = []
    zeros = 0
    coeffs = f.full_coeffs()
    for lam in lams:
        v = K.eval_poly(coeffs, lam)
        if not any(v):
            zeros += 1
            continue
        try:
            acc.add(v)
        except FactorizationError as exc:
            raise PsiFactorizationError(lam, v, exc) from exc
        logs.append(math.log(abs(K.norm(v))))
    hist = Counter(acc.exponents.values())
    return PsiValue(acc.log_norm(), len(lams), math.fsum(logs), dict(sorted(hist.items())), acc, zeros)


def _psi_one(index, n, N, K, seed, budget, Ms, mode, fixed):
    if fixed is not None:
        f, ok = fixed, True
    else:
        f, ok = _sample_certified(index, n, N, K, seed, budget)
    if not ok:
        return False, f.text(), ()
    out = []
    for M in Ms:
        pv = compute_psi(f, M, mode)
        out.append((pv.psi, pv.log_product, pv.count))
    return True, f.text(), tuple(out)


def run_psi_ensemble(
    field: NumberField,
    n: int,
    N: int,
    M: int | Sequence[int],
    samples: int,
    seed: int,
    *,
    budget: int = DEFAULT_BUDGET,
    mode: str = "orbits",
    fixed: PolynomialSample | None = None,
    workers: int = 1,
) -> ExperimentReport:
    """Mean and spread of Psi_f(N, M) over certified samples against (n-1)|Lambda(M)| log M.

    With several M the same sample indices are reused for every M, so the
    ratio trend is read off one set of polynomials.
    """
    K = field
    if n < 2:
        raise ValueError("degree-1 polynomials follow a different law; use the linear-case experiment")
    if not K.unit_group_finite:
        raise UnsupportedField(f"{K.spec} has infinitely many units")
    Ms = [M] if isinstance(M, int) else list(M)
    report = ExperimentReport(
        "psi_ensemble",
        {**_field_params(K), "n": n, "N": N, "M": Ms, "samples": samples, "seed": seed, "budget": budget,
         "mode": mode, "fixed": fixed.text() if fixed is not None else None},
    )
    with _Timer(report):
        if n < 3:
            report.warnings.append("the asymptotic law is established for n >= 3")
        for m_ in Ms:
            upper = m_ * math.log(m_) / math.log(math.log(m_)) if m_ > 15 else float("inf")
            if N < m_ or N > upper:
                report.warnings.append(f"N = {N} is outside the window M <= N <= M log M / log log M at M = {m_}")
        if fixed is not None:
            samples = 1
        results = (map_indexed(_psi_one, range(samples), (n, N, K, seed, budget, Ms, mode, fixed), workers)
                   if samples > 0 else [])
        ratios = []
        for j, m_ in enumerate(Ms):
            kept = [res[2][j] for res in results if res[0]]
            psis = [v[0] for v in kept]
            count = kept[0][2] if kept else len(K.elements_up_to_norm(m_))
            ref = (n - 1) * count * math.log(m_)
            mean, var = _mean_var(psis)
            ratio = mean / ref if kept else float("nan")
            ratios.append(ratio)
            report.rows.append({
                "M": m_, "samples": len(kept), "lambda_count": count, "mean_psi": mean, "variance": var,
                "rel_spread": math.sqrt(var) / mean if kept and mean else float("nan"),
                "reference": ref, "ratio": ratio,
                "mean_log_product": _mean_var([v[1] for v in kept])[0],
            })
            for i, res in enumerate(results):
                if res[0]:
                    psi, logp, _ = res[2][j]
                    report.raw.append({"M": m_, "index": i, "coefficients": res[1], "psi": psi, "log_product": logp,
                                       "ratio": psi / ref})
        dist = [abs(x - 1) for x in ratios]
        report.summary = {
            "certified": sum(1 for r in results if r[0]),
            "uncertified": sum(1 for r in results if not r[0]),
            "ratios": ratios,
            "approaching_one": all(b < a for a, b in zip(dist, dist[1:])),
        }
    return report

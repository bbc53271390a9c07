"""Command-line front end.

Polynomials over O_K are given as an expression in x with t standing for
theta (e.g. "x^3 + (1+2*t)*x - 4"), or in the canonical coefficient form
"a_0;a_1;...;a_{n-1}" with comma-separated coordinates and the leading 1
left implicit.  Fields are monic integer polynomials in x; "x" is Q.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from dataclasses import field as dc_field
from pathlib import Path
from typing import Any, Callable, Sequence

from .arith import FactorizationError
from .ensembles import PolynomialSample, certify_sn, non_sn_fraction, sample, sample_stream
from .experiments import (
    DEFAULT_BUDGET,
    DEFAULT_XI,
    PsiFactorizationError,
    compute_psi,
    run_expectation_pi,
    run_indicator_moments,
    run_lemma11,
    run_psi_ensemble,
)
from .linear import NonCoprimeResidue, run_linear_case
from .number_field import NonMonogenicField, NumberField, UnsupportedField
from .output import output_dir, read_manifest, write_run
from .parsing import format_coeffs, parse_poly
from .splitting import (
    BudgetExceeded,
    all_types,
    brute_force_census,
    c_r_closed_form,
    census,
    format_type,
    parse_type,
)

EXIT_PARAM, EXIT_FIELD, EXIT_BUDGET = 2, 3, 4


class ParameterError(ValueError):
    pass


class FieldSpecError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    field: str = "x"
    n: int | None = None
    N: int | None = None
    M: list[int] = dc_field(default_factory=list)
    x: float | None = None
    samples: int = 0
    seed: int = 0
    r: str | None = None
    xi: float = DEFAULT_XI
    budget: int = DEFAULT_BUDGET
    all_units: bool = False
    exhaustive: bool = False
    workers: int = 1
    f: str | None = None
    q: list[int] = dc_field(default_factory=list)
    primes: list[int] = dc_field(default_factory=list)
    alpha: str | None = None
    nu: str | None = None
    oracle: bool = False
    degree_check: bool = False
    pmax: int = 50

    def validate(self) -> None:
        for name in ("n", "N"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ParameterError(f"--{name} must be positive")
        if any(m < 1 for m in self.M):
            raise ParameterError("--M values must be positive")
        if self.samples < 0 or self.budget < 0 or self.workers < 1:
            raise ParameterError("--samples and --budget must be >= 0, --workers >= 1")
        if not 0 < self.xi <= 1:
            raise ParameterError("--xi must lie in (0, 1]")

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) in (None, [])]
        if missing:
            raise ParameterError(f"{self.command} needs " + ", ".join(f"--{m}" for m in missing))


def _ints(text: str) -> list[int]:
    return [int(s) for s in text.split(",") if s.strip()]


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polylcm", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, field_arg=True):
        if field_arg:
            sp.add_argument("--field", default="x", help='defining polynomial of K, e.g. "x^2+1" ("x" is Q)')
        sp.add_argument("--out", help="output directory (default: $POLYLCM_OUT or ./polylcm_out)")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--quiet", action="store_true")

    def sampling(sp, need_r=False):
        sp.add_argument("--n", type=int, required=True, help="degree")
        sp.add_argument("--N", type=int, required=True, help="height bound")
        sp.add_argument("--samples", type=int, default=1000)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="primes scanned per S_n certificate")
        if need_r:
            sp.add_argument("--r", required=True, help="splitting type r_1,...,r_n")

    sp = sub.add_parser("census", help="exact splitting-type counts over F_q")
    common(sp, field_arg=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--q", type=_ints, default=[], help="comma list of prime powers to evaluate at")
    sp.add_argument("--oracle", action="store_true", help="add brute-force counts over F_q")

    sp = sub.add_parser("lemma11", help="P(f = g mod P) against 1/q^n")
    common(sp)
    sampling(sp)
    sp.add_argument("--primes", type=_ints, required=True, help="rational primes; every prime of K above them is used")
    sp.add_argument("--xi", type=float, default=DEFAULT_XI)
    sp.add_argument("--exhaustive", action="store_true", help="enumerate the whole box, unconditioned")

    sp = sub.add_parser("moments", help="mean and variance of the splitting indicator per prime")
    common(sp)
    sampling(sp, need_r=True)
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--xi", type=float, default=DEFAULT_XI)
    sp.add_argument("--exhaustive", action="store_true")

    sp = sub.add_parser("expectation-pi", help="mean of pi_{f,r}(x) over certified samples")
    common(sp)
    sampling(sp, need_r=True)
    sp.add_argument("--x", type=float, required=True)

    sp = sub.add_parser("psi", help="Psi_f(M) for one polynomial")
    common(sp)
    sp.add_argument("--f", help="polynomial over O_K; if omitted a random one is drawn")
    sp.add_argument("--n", type=int)
    sp.add_argument("--N", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--M", type=_ints, required=True)
    sp.add_argument("--all-units", action="store_true", help="every lambda instead of one per unit orbit")
    sp.add_argument("--degree-check", action="store_true", help="reject degree < 2; over Q cross-check the integer lcm")

    sp = sub.add_parser("psi-ensemble", help="mean and spread of Psi over certified samples")
    common(sp)
    sampling(sp)
    sp.add_argument("--M", type=_ints, required=True, help="comma list of norm bounds")
    sp.add_argument("--all-units", action="store_true")

    sp = sub.add_parser("linear", help="degree-one case against the ray class constant")
    common(sp)
    sp.add_argument("--alpha", required=True, help="comma coordinates of alpha")
    sp.add_argument("--nu", required=True, help="comma coordinates of the modulus nu")
    sp.add_argument("--M", type=_ints, required=True)

    sp = sub.add_parser("certify", help="S_n certificate for one polynomial, or the uncertified fraction")
    common(sp)
    sp.add_argument("--f")
    sp.add_argument("--n", type=int)
    sp.add_argument("--N", type=int)
    sp.add_argument("--samples", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    sp = sub.add_parser("factor-field", help="prime decomposition for p <= pmax")
    common(sp)
    sp.add_argument("--pmax", type=int, default=50)

    sp = sub.add_parser("replay", help="re-run from a manifest")
    sp.add_argument("manifest")
    sp.add_argument("--out", help="output directory (default: <manifest dir>/replay)")
    sp.add_argument("--quiet", action="store_true")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=ns.command)
    for k in RunConfig.__dataclass_fields__:
        if k != "command" and hasattr(ns, k) and getattr(ns, k) is not None:
            setattr(cfg, k, getattr(ns, k))
    cfg.validate()
    return cfg


def _field(cfg: RunConfig) -> NumberField:
    try:
        return NumberField.from_spec(cfg.field)
    except (NonMonogenicField, UnsupportedField):
        raise
    except ValueError as exc:
        raise FieldSpecError(f"unknown field spec {cfg.field!r}: {exc}") from None


# -- subcommands ----------------------------------------------------------------


def _cmd_census(cfg: RunConfig):
    cfg.require("n")
    n = cfg.n
    rows = []
    for r in all_types(n):
        cp = census(n, r)
        base = {"n": n, "r": format_type(r), "census_poly": str(cp.poly), "delta": str(cp.density),
                "C_r": str(cp.second_order) if n >= 2 else "", "C_r_closed_form": str(c_r_closed_form(n, r)) if n >= 2 else ""}
        if not cfg.q:
            rows.append(base)
        for q in cfg.q:
            row = dict(base, q=q, exact=cp(q))
            if cfg.oracle:
                bf = brute_force_census(n, q).get(r, 0)
                row |= {"brute_force": bf, "equal": int(bf == cp(q))}
            rows.append(row)
    summary = {"types": len(all_types(n))}
    if cfg.oracle and cfg.q:
        summary["all_equal"] = all(row["equal"] for row in rows)
    return "census", {"main": rows}, summary, [], 0.0


def _cmd_report(rep):
    return rep.name, {"main": rep.rows, "samples": rep.raw}, rep.summary, rep.warnings, rep.elapsed


def _cmd_lemma11(cfg: RunConfig):
    cfg.require("n", "N", "primes")
    K = _field(cfg)
    primes = [P for p in cfg.primes for P in K.factor_prime(p)]
    return _cmd_report(run_lemma11(K, cfg.n, cfg.N, primes, cfg.samples, cfg.seed, xi=cfg.xi, budget=cfg.budget,
                                   exhaustive=cfg.exhaustive, workers=cfg.workers))


def _cmd_moments(cfg: RunConfig):
    cfg.require("n", "N", "r", "x")
    K = _field(cfg)
    return _cmd_report(run_indicator_moments(K, cfg.n, cfg.N, parse_type(cfg.r), cfg.x, cfg.samples, cfg.seed,
                                             xi=cfg.xi, budget=cfg.budget, exhaustive=cfg.exhaustive,
                                             workers=cfg.workers))


def _cmd_expectation_pi(cfg: RunConfig):
    cfg.require("n", "N", "r", "x")
    K = _field(cfg)
    return _cmd_report(run_expectation_pi(K, cfg.n, cfg.N, parse_type(cfg.r), cfg.x, cfg.samples, cfg.seed,
                                          budget=cfg.budget, workers=cfg.workers))


def _one_poly(cfg: RunConfig, K: NumberField) -> PolynomialSample:
    if cfg.f is not None:
        coeffs = parse_poly(cfg.f, K)
        N = max((abs(c) for a in coeffs for c in a), default=0)
        return PolynomialSample(K, max(N, 1), coeffs)
    cfg.require("n", "N")
    return sample(cfg.n, cfg.N, K, sample_stream(cfg.seed, 0))


def _cmd_psi(cfg: RunConfig):
    cfg.require("M")
    K = _field(cfg)
    f = _one_poly(cfg, K)
    if f.n < 2:
        raise ParameterError("Psi needs degree >= 2; for degree one use the `linear` subcommand")
    mode = "all" if cfg.all_units else "orbits"
    rows = []
    for M in cfg.M:
        pv = compute_psi(f, M, mode)
        row = {"M": M, "coefficients": f.text(), "psi": pv.psi, "lambda_count": pv.count, "zeros": pv.zeros,
               "log_product": pv.log_product, "lcm_norm": pv.lcm_norm,
               "beta_histogram": ";".join(f"{k}:{v}" for k, v in pv.beta_histogram.items())}
        if cfg.degree_check and K.degree == 1:
            lams = K.elements_up_to_norm(M, all_units=cfg.all_units)
            vals = [abs(f(l)[0]) for l in lams if f(l)[0]]
            oracle = math.lcm(*vals) if vals else 1
            row |= {"integer_lcm": oracle, "integer_lcm_equal": int(oracle == pv.lcm_norm)}
        rows.append(row)
    return "psi", {"main": rows}, {"coefficients": f.text()}, [], 0.0


def _cmd_psi_ensemble(cfg: RunConfig):
    cfg.require("n", "N", "M")
    K = _field(cfg)
    return _cmd_report(run_psi_ensemble(K, cfg.n, cfg.N, cfg.M, cfg.samples, cfg.seed, budget=cfg.budget,
                                        mode="all" if cfg.all_units else "orbits", workers=cfg.workers))


def _cmd_linear(cfg: RunConfig):
    cfg.require("alpha", "nu", "M")
    K = _field(cfg)
    return _cmd_report(run_linear_case(K, _ints(cfg.alpha), _ints(cfg.nu), cfg.M))


def _cmd_certify(cfg: RunConfig):
    K = _field(cfg)
    if cfg.f is None and cfg.samples:
        cfg.require("n", "N")
        est = non_sn_fraction(cfg.n, cfg.N, K, cfg.samples, cfg.seed, cfg.budget, workers=cfg.workers)
        summary = {"uncertified": est.count, "samples": est.samples, "fraction": str(est.fraction),
                   "stderr": est.stderr}
        return "certify", {"main": [summary]}, summary, [], 0.0
    f = _one_poly(cfg, K)
    cert = certify_sn(f, cfg.budget)
    rows = [{"coefficients": f.text(), "status": cert.status, "primes_examined": cert.primes_examined,
             "role": role, "prime": P.label(), "type": format_type(r)} for role, P, r in cert.witnesses]
    if not rows:
        rows = [{"coefficients": f.text(), "status": cert.status, "primes_examined": cert.primes_examined}]
    return "certify", {"main": rows}, {"status": cert.status, "primes_examined": cert.primes_examined}, [], 0.0


def _cmd_factor_field(cfg: RunConfig):
    K = _field(cfg)
    from .arith import primes_below

    rows = []
    for p in primes_below(cfg.pmax + 1):
        for P in K.factor_prime(p):
            rows.append({"p": p, "prime": P.label(), "e": P.e, "f": P.f, "norm": P.norm,
                         "local_factor": "/".join(map(str, P.local_factor))})
    return "factor_field", {"main": rows}, {"disc": K.disc, "degree": K.degree}, [], 0.0


COMMANDS: dict[str, Callable[[RunConfig], tuple]] = {
    "census": _cmd_census,
    "lemma11": _cmd_lemma11,
    "moments": _cmd_moments,
    "expectation-pi": _cmd_expectation_pi,
    "psi": _cmd_psi,
    "psi-ensemble": _cmd_psi_ensemble,
    "linear": _cmd_linear,
    "certify": _cmd_certify,
    "factor-field": _cmd_factor_field,
}


def execute(cfg: RunConfig, out: Path, quiet: bool = False) -> Path:
    name, tables, summary, warnings, elapsed = COMMANDS[cfg.command](cfg)
    path = write_run(out, name, tables, command=cfg.command, config=asdict(cfg), summary=summary,
                     warnings=warnings, elapsed=elapsed)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if not quiet:
        print(json.dumps({"manifest": str(path), "summary": summary}, default=str))
    return path


def _replay(manifest: str, out: str | None, quiet: bool) -> Path:
    data = read_manifest(manifest)
    params = dict(data["parameters"])
    cfg = RunConfig(**{k: v for k, v in params.items() if k in RunConfig.__dataclass_fields__})
    cfg.validate()
    target = Path(out) if out else Path(manifest).parent / "replay"
    return execute(cfg, target, quiet)


def _fail(kind: str, exc: BaseException, code: int) -> int:
    print(json.dumps({"error": kind, "message": str(exc)}), file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    ns = _build_parser().parse_args(argv)
    try:
        if ns.command == "replay":
            _replay(ns.manifest, ns.out, ns.quiet)
        else:
            execute(_config(ns), output_dir(ns.out), ns.quiet)
    except NonMonogenicField as exc:
        return _fail("non_monogenic_field", exc, EXIT_FIELD)
    except UnsupportedField as exc:
        return _fail("unsupported_field", exc, EXIT_FIELD)
    except FieldSpecError as exc:
        return _fail("field_spec", exc, EXIT_FIELD)
    except (FactorizationError, PsiFactorizationError) as exc:
        return _fail("factorization_budget", exc, EXIT_BUDGET)
    except BudgetExceeded as exc:
        return _fail("budget_exceeded", exc, EXIT_BUDGET)
    except (ParameterError, NonCoprimeResidue) as exc:
        return _fail("parameter", exc, EXIT_PARAM)
    except ValueError as exc:
        return _fail("parameter", exc, EXIT_PARAM)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

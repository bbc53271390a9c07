"""Text forms: field specs such as "x^2+1" and polynomials over O_K.

Polynomials over O_K are written either as an expression in ``x`` whose
coefficients may involve ``t`` (standing for theta), e.g. "x^3 + (1+2*t)*x - 4",
or in the canonical coefficient form "a_0;a_1;...;a_{n-1}" where each a_k is
a comma-separated coordinate vector and the monic leading term is implicit.
"""

from __future__ import annotations

from typing import Sequence

__all__ = ["format_coeffs", "parse_field_spec", "parse_poly"]


def _sympy_expr(text: str):
    import sympy
    from sympy.parsing.sympy_parser import (
        convert_xor,
        implicit_multiplication_application,
        parse_expr,
        standard_transformations,
    )

    x, t = sympy.symbols("x t")
    try:
        expr = parse_expr(
            text,
            local_dict={"x": x, "t": t},
            transformations=standard_transformations + (implicit_multiplication_application, convert_xor),
        )
    except Exception as exc:  # sympy raises a variety of types here
        raise ValueError(f"cannot parse polynomial {text!r}: {exc}") from None
    return sympy, expr, x, t


def parse_field_spec(text: str) -> tuple[int, ...]:
    """Monic integer polynomial in x, lowest degree first; "x" denotes Q."""
    sympy, expr, x, t = _sympy_expr(text)
    if expr.free_symbols - {x}:
        raise ValueError(f"field spec {text!r} may only use the variable x")
    try:
        poly = sympy.Poly(expr, x)
    except sympy.PolynomialError as exc:
        raise ValueError(f"field spec {text!r} is not a polynomial: {exc}") from None
    coeffs = poly.all_coeffs()[::-1]
    if not all(c.is_integer for c in coeffs):
        raise ValueError(f"field spec {text!r} must have integer coefficients")
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) < 2 or coeffs[-1] != 1:
        raise ValueError(f"field spec {text!r} must be monic of degree >= 1")
    return coeffs


def parse_poly(text: str, field) -> tuple[tuple[int, ...], ...]:
    """Coefficients alpha_0..alpha_{n-1} of a monic polynomial over O_K."""
    if ";" in text or ("," in text and "x" not in text):
        return _parse_coeff_form(text, field)
    sympy, expr, x, t = _sympy_expr(text)
    if expr.free_symbols - {x, t}:
        raise ValueError(f"polynomial {text!r} may only use x and t")
    poly = sympy.Poly(sympy.expand(expr), x, t)
    n = poly.degree(x)
    rows: dict[int, dict[int, int]] = {}
    for (i, j), c in poly.terms():
        if not c.is_integer:
            raise ValueError(f"polynomial {text!r} must have integral coefficients")
        rows.setdefault(i, {})[j] = int(c)
    coeffs = []
    for i in range(n + 1):
        terms = rows.get(i, {})
        width = max(terms, default=-1) + 1
        coeffs.append(field.element([terms.get(j, 0) for j in range(width)]))
    if n < 1 or coeffs[n] != field.one():
        raise ValueError(f"polynomial {text!r} must be monic in x of degree >= 1")
    return tuple(coeffs[:n])


def _parse_coeff_form(text: str, field) -> tuple[tuple[int, ...], ...]:
    out = []
    for part in text.split(";"):
        coords = tuple(int(s) for s in part.split(",") if s.strip())
        if len(coords) != field.degree:
            raise ValueError(f"coefficient {part!r} needs {field.degree} coordinates")
        out.append(coords)
    return tuple(out)


def format_coeffs(coeffs: Sequence[Sequence[int]]) -> str:
    """Canonical text form: "a_0;a_1;...;a_{n-1}" with comma-joined coordinates."""
    return ";".join(",".join(str(c) for c in a) for a in coeffs)

"""Hermite normal form of full-rank integer lattices given a known multiple of the determinant."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf_mod(rows: Iterable[Sequence[int]], d: int, D: int) -> tuple[tuple[int, ...], ...]:
    """Upper-triangular row HNF of the lattice spanned by ``rows`` and D * Z^d.

    D must be a positive integer with D * Z^d contained in the lattice, which
    lets every entry be kept reduced modulo D.  Diagonal entries are positive
    and divide D; entries above the diagonal lie in [0, pivot of their column).
    """
    if D <= 0:
        raise ValueError("D must be positive")
    work = [[x % D for x in r] for r in rows]
    basis: list[list[int]] = []
    for i in range(d):
        cur = [0] * d
        cur[i] = D
        rest = []
        for r in work:
            a = r[i]
            if a == 0:
                rest.append(r)
                continue
            g, u, v = _xgcd(cur[i], a)
            ci, ai = cur[i] // g, a // g
            new_cur = [(u * x + v * y) % D for x, y in zip(cur, r)]
            new_r = [(ci * y - ai * x) % D for x, y in zip(cur, r)]
            new_cur[i] = g
            cur = new_cur
            if any(new_r):
                rest.append(new_r)
        # cur[i] divides D; zero out column i of the remaining rows for good measure
        work = rest
        basis.append(cur)
    for j in range(d):
        pj = basis[j][j]
        for i in range(j):
            c = basis[i][j] // pj
            if c:
                basis[i] = [x - c * y for x, y in zip(basis[i], basis[j])]
    return tuple(tuple(r) for r in basis)


@dataclass(frozen=True)
class IdealHNF:
    """An ideal of Z[theta] as the row HNF of its lattice in the power basis."""

    matrix: tuple[tuple[int, ...], ...]
    modulus: int  # a positive integer contained in the ideal

    @property
    def norm(self) -> int:
        out = 1
        for i, row in enumerate(self.matrix):
            out *= row[i]
        return out

    def contains(self, v: Sequence[int]) -> bool:
        D = self.modulus
        w = [x % D for x in v]
        for i, row in enumerate(self.matrix):
            piv = row[i]
            if w[i] % piv:
                return False
            c = w[i] // piv
            if c:
                w = [x - c * y for x, y in zip(w, row)]
        return True

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of v modulo the ideal: 0 <= w_i < pivot_i."""
        w = list(v)
        for i, row in enumerate(self.matrix):
            c = w[i] // row[i]
            if c:
                w = [x - c * y for x, y in zip(w, row)]
        return tuple(w)

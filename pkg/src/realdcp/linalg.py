"""Small exact linear-algebra kernels (integers, rationals, Q(sqrt 5))."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .scalar import Scalar


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = None
        for i in range(rank, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            a = m[i][col]
            row_i, row_r = m[i], m[rank]
            m[i] = [(p * row_i[j] - a * row_r[j]) // prev for j in range(ncols)]
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


def rref(rows: Sequence[Sequence], zero=None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field (Fraction or Scalar entries).

    Returns the nonzero rows (pivot entries equal to one) and the pivot columns.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                c = m[i][col]
                m[i] = [x - c * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def field_rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def reduce_mod(v: Sequence, basis: list[list], pivots: list[int]) -> list:
    """Residue of ``v`` modulo the row space of an rref basis."""
    out = list(v)
    for row, p in zip(basis, pivots):
        c = out[p]
        if c:
            out = [x - c * y for x, y in zip(out, row)]
    return out


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of ``{x : rows @ x = 0}`` over the entries' field."""
    basis, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    one = 1
    out = []
    for f in free:
        x = [0] * ncols
        x[f] = one
        for row, p in zip(basis, piv):
            x[p] = -row[f]
        out.append(x)
    return out


def to_fractions(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in r] for r in rows]


def as_field(x):
    """Scalar entries with zero surd part become Fractions (faster)."""
    if isinstance(x, Scalar) and x.b == 0:
        return x.a
    return x

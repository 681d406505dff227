"""Dense linear algebra over the prime field F_p.

Vectors are tuples or lists of ints; everything is reduced into ``[0, p)``.
Matrices are lists of rows.  Sizes in this package stay in the low hundreds,
so plain Python integers are fast enough and avoid overflow questions.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Row = Sequence[int]


def rref(rows: Iterable[Row], p: int, ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form mod ``p``.

    Returns ``(basis, pivots)`` where ``basis`` holds the nonzero reduced rows
    in pivot order and ``pivots[k]`` is the pivot column of ``basis[k]``.
    """
    mat = [[x % p for x in r] for r in rows]
    if not mat:
        return [], []
    if ncols is None:
        ncols = len(mat[0])
    pivots: list[int] = []
    lead = 0
    for col in range(ncols):
        pr = next((i for i in range(lead, len(mat)) if mat[i][col]), None)
        if pr is None:
            continue
        mat[lead], mat[pr] = mat[pr], mat[lead]
        inv = pow(mat[lead][col], -1, p)
        prow = [(x * inv) % p for x in mat[lead]]
        mat[lead] = prow
        for i in range(len(mat)):
            if i != lead and mat[i][col]:
                f = mat[i][col]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], prow)]
        pivots.append(col)
        lead += 1
        if lead == len(mat):
            break
    return mat[:lead], pivots


def rank(rows: Iterable[Row], p: int) -> int:
    return len(rref(rows, p)[0])


def fp_span_dim(rows: Iterable[Row], p: int) -> int:
    """Dimension of the F_p-span of ``rows``."""
    return rank(rows, p)


def nullspace(rows: Sequence[Row], p: int, ncols: int | None = None) -> list[list[int]]:
    """Basis of ``{v : M v = 0}`` for the matrix with the given rows."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    basis, pivots = rref(rows, p, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(basis, pivots):
            v[pc] = (-row[f]) % p
        out.append(v)
    return out


def left_nullspace(rows: Sequence[Row], p: int) -> list[list[int]]:
    """Basis of ``{v : v M = 0}``."""
    if not rows:
        return []
    ncols = len(rows[0])
    cols = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
    return nullspace(cols, p, len(rows))


def reduce_mod_span(v: Row, basis: Sequence[Row], pivots: Sequence[int], p: int) -> list[int]:
    """Reduce ``v`` against an RREF basis; zero result means ``v`` is in the span."""
    w = [x % p for x in v]
    for row, pc in zip(basis, pivots):
        if w[pc]:
            f = w[pc]
            w = [(a - f * b) % p for a, b in zip(w, row)]
    return w


def in_span(v: Row, basis: Sequence[Row], pivots: Sequence[int], p: int) -> bool:
    return not any(reduce_mod_span(v, basis, pivots, p))


def intersection_dim(a: Sequence[Row], b: Sequence[Row], p: int) -> int:
    """dim(span a ∩ span b) by inclusion-exclusion."""
    return rank(a, p) + rank(b, p) - rank(list(a) + list(b), p)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True

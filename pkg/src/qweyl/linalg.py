"""Exact Gaussian elimination over ``Fraction`` or ``ExactScalar``.

Matrices are lists of rows.  Plain field elimination is used; the sizes in
this package stay small enough that coefficient growth is not an issue.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

Matrix = List[List[object]]


def _copy(rows: Sequence[Sequence[object]]) -> Matrix:
    return [list(r) for r in rows]


def rref(rows: Sequence[Sequence[object]]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and the pivot column list."""
    M = _copy(rows)
    if not M:
        return M, []
    nr, nc = len(M), len(M[0])
    pivots: List[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        p = next((i for i in range(r, nr) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        inv = piv.inverse() if hasattr(piv, "inverse") else Fraction(1) / piv
        M[r] = [x * inv if x else x for x in M[r]]
        for i in range(nr):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b if b else a for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(rows: Sequence[Sequence[object]]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence[object]], ncols: int | None = None) -> Tuple[List[List[object]], List[int]]:
    """Basis of the right kernel and the free column of each basis vector.

    The vector attached to free column ``f`` has a 1 at ``f`` and zeros at
    the other free columns, so the free positions give kernel coordinates.
    """
    if not rows:
        n = ncols or 0
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)], list(range(n))
    R, piv = rref(rows)
    n = len(R[0])
    pset = set(piv)
    free = [c for c in range(n) if c not in pset]
    basis = []
    for f in free:
        v: List[object] = [0] * n
        v[f] = 1
        for i, p in enumerate(piv):
            if R[i][f]:
                v[p] = -R[i][f]
        basis.append(v)
    return basis, free


def inverse(rows: Sequence[Sequence[object]], one=1) -> Matrix:
    n = len(rows)
    aug = [list(r) + [one if i == j else 0 for j in range(n)] for i, r in enumerate(rows)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def solve(A: Sequence[Sequence[object]], b: Sequence[object]) -> List[object]:
    """Unique solution of ``A x = b``; raises if singular or inconsistent."""
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        raise ValueError("inconsistent system")
    if len(piv) < n:
        raise ValueError("system is underdetermined")
    return [R[i][n] for i in range(n)]


def matmul(A: Sequence[Sequence[object]], B: Sequence[Sequence[object]]) -> Matrix:
    out = []
    Bt = list(zip(*B))
    for row in A:
        new = []
        for col in Bt:
            acc = 0
            for a, b in zip(row, col):
                if a and b:
                    acc = acc + a * b
            new.append(acc)
        out.append(new)
    return out

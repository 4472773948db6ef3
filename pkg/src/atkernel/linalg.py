"""Exact linear algebra over Q used by the graded solvers.

Matrices are lists of rows of Fractions.  Everything here is
allocation-per-call; no shared scratch state.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = list[Fraction]
Matrix = list[Row]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def rank(mat: Matrix) -> int:
    work = [row[:] for row in mat]
    rows = len(work)
    cols = len(work[0]) if rows else 0
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = 1 / work[r][c]
        work[r] = [v * inv for v in work[r]]
        for i in range(rows):
            if i != r and work[i][c] != 0:
                factor = work[i][c]
                work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
        r += 1
        if r == rows:
            break
    return r


def solve(mat: Matrix, rhs: Row) -> Row | None:
    """One particular solution of mat*x = rhs, or None if inconsistent.

    Free variables are set to zero, so the output is deterministic.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    if rows != len(rhs):
        raise ValueError("rhs length mismatch")
    work = [mat[i][:] + [rhs[i]] for i in range(rows)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = 1 / work[r][c]
        work[r] = [v * inv for v in work[r]]
        for i in range(rows):
            if i != r and work[i][c] != 0:
                factor = work[i][c]
                work[i] = [a - factor * b for a, b in zip(work[i], work[r])]
        pivots.append((r, c))
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if work[i][cols] != 0:
            return None
    x = [Fraction(0)] * cols
    for prow, pcol in pivots:
        x[pcol] = work[prow][cols]
    return x


def solve_fraction_system(
    equations: Sequence[tuple[dict[int, Fraction], Fraction]], num_vars: int
) -> Row | None:
    """Solve a sparse system given as (coefficient map, rhs) pairs."""
    mat = zeros(len(equations), num_vars)
    rhs: Row = []
    for i, (coeffs, b) in enumerate(equations):
        for j, v in coeffs.items():
            mat[i][j] = v
        rhs.append(b)
    if num_vars == 0:
        return [] if all(b == 0 for b in rhs) else None
    return solve(mat, rhs)

"""Integral-closure membership for monomial ideals and the dimension
invariants built from it.

Membership in the integral closure of a monomial ideal is membership of
the exponent vector in the Newton polyhedron conv(generators) + R_+^n,
decided by exact rational linear programming with certificates attached
either way: a convex-combination witness on YES, a separating linear
functional on NO.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg


class MonomialIdealError(ValueError):
    pass


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal by its minimal generating exponent vectors."""

    n: int
    gens: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_exponents(n: int, exponents: Iterable[Sequence[int]]) -> "MonomialIdeal":
        vecs = sorted({tuple(int(e) for e in v) for v in exponents})
        if not vecs:
            raise MonomialIdealError("zero ideal")
        for v in vecs:
            if len(v) != n or any(e < 0 for e in v):
                raise MonomialIdealError(f"bad exponent vector {v}")
        if (0,) * n in vecs:
            raise MonomialIdealError("unit ideal")
        minimal = [
            v
            for v in vecs
            if not any(w != v and all(a <= b for a, b in zip(w, v)) for w in vecs)
        ]
        return MonomialIdeal(n, tuple(sorted(minimal)))

    def multiply_by_maximal_ideal(self) -> "MonomialIdeal":
        bumped = []
        for g in self.gens:
            for i in range(self.n):
                e = list(g)
                e[i] += 1
                bumped.append(tuple(e))
        return MonomialIdeal.from_exponents(self.n, bumped)


@dataclass
class ClosureCertificate:
    """Verdict plus an exactly checkable witness or separator."""

    query: tuple[int, ...]
    verdict: bool
    lambdas: tuple[Fraction, ...] | None = None
    slack: tuple[Fraction, ...] | None = None
    separator: tuple[Fraction, ...] | None = None
    threshold: Fraction | None = None

    def verify(self, ideal: MonomialIdeal) -> bool:
        a = self.query
        if self.verdict:
            lam = self.lambdas
            if lam is None or len(lam) != len(ideal.gens):
                return False
            if any(v < 0 for v in lam) or sum(lam) != 1:
                return False
            for i in range(ideal.n):
                lhs = sum(v * g[i] for v, g in zip(lam, ideal.gens))
                if lhs > a[i]:
                    return False
                if self.slack is not None and lhs + self.slack[i] != a[i]:
                    return False
            return True
        c, mu = self.separator, self.threshold
        if c is None or mu is None or len(c) != ideal.n:
            return False
        if any(v < 0 for v in c):
            return False
        dot_a = sum(ci * ai for ci, ai in zip(c, a))
        if dot_a >= mu:
            return False
        return all(sum(ci * gi for ci, gi in zip(c, g)) >= mu for g in ideal.gens)


def _phase1_lp(a_eq: list[list[Fraction]], b: list[Fraction]):
    """Phase-1 simplex for {x >= 0 : A x = b}; returns ("x", x) or ("y", y).

    On infeasibility the dual vector y from the final basis satisfies
    y.A_j <= 0 for every column and y.b > 0 (a Farkas certificate).
    """
    rows = len(a_eq)
    cols = len(a_eq[0]) if rows else 0
    a_eq = [row[:] for row in a_eq]
    b = b[:]
    for i in range(rows):
        if b[i] < 0:
            a_eq[i] = [-v for v in a_eq[i]]
            b[i] = -b[i]
    # tableau [A | I | b]
    tab = [a_eq[i] + [Fraction(1 if j == i else 0) for j in range(rows)] + [b[i]] for i in range(rows)]
    total = cols + rows
    basis = [cols + i for i in range(rows)]
    cost = [Fraction(0)] * cols + [Fraction(1)] * rows

    while True:
        # reduced costs z_j - c_j for the min problem
        entering = -1
        for j in range(total):
            if j in basis:
                continue
            z = sum(cost[basis[i]] * tab[i][j] for i in range(rows))
            if z - cost[j] > 0:
                entering = j
                break
        if entering < 0:
            break
        best = None
        for i in range(rows):
            if tab[i][entering] > 0:
                ratio = tab[i][total] / tab[i][entering]
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise AssertionError("phase-1 objective unbounded")
        _, pivot_row = best
        pv = tab[pivot_row][entering]
        tab[pivot_row] = [v / pv for v in tab[pivot_row]]
        for i in range(rows):
            if i != pivot_row and tab[i][entering] != 0:
                factor = tab[i][entering]
                tab[i] = [u - factor * v for u, v in zip(tab[i], tab[pivot_row])]
        basis[pivot_row] = entering

    objective = sum(cost[basis[i]] * tab[i][total] for i in range(rows))
    if objective == 0:
        x = [Fraction(0)] * cols
        for i, bv in enumerate(basis):
            if bv < cols:
                x[bv] = tab[i][total]
        return "x", x
    # duals: solve B^T y = c_B over the original columns
    orig = [row[:] + [Fraction(1 if j == i else 0) for j in range(rows)] for i, row in enumerate(a_eq)]
    bt = [[orig[i][basis[k]] for i in range(rows)] for k in range(rows)]
    rhs = [cost[basis[k]] for k in range(rows)]
    y = linalg.solve(bt, rhs)
    if y is None:
        raise AssertionError("singular basis in dual extraction")
    return "y", y


def closure_member(ideal: MonomialIdeal, query: Sequence[int]) -> ClosureCertificate:
    """Is x^query integral over the ideal (Newton-polyhedron membership)?"""
    a = tuple(int(e) for e in query)
    if len(a) != ideal.n:
        raise MonomialIdealError("query arity mismatch")
    if any(e < 0 for e in a):
        raise MonomialIdealError("negative exponent in query")
    m = len(ideal.gens)
    n = ideal.n
    # columns: lambda_1..lambda_m, s_1..s_n
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(n):
        row = [Fraction(g[i]) for g in ideal.gens] + [
            Fraction(1 if j == i else 0) for j in range(n)
        ]
        rows.append(row)
        rhs.append(Fraction(a[i]))
    rows.append([Fraction(1)] * m + [Fraction(0)] * n)
    rhs.append(Fraction(1))
    kind, vec = _phase1_lp(rows, rhs)
    if kind == "x":
        lam = tuple(vec[:m])
        slack = tuple(vec[m : m + n])
        cert = ClosureCertificate(a, True, lambdas=lam, slack=slack)
    else:
        # y.col_lambda_j <= 0 gives c.g_j >= y_last; y.b > 0 gives c.a < y_last
        c = tuple(-v for v in vec[:n])
        mu = vec[n]
        cert = ClosureCertificate(a, False, separator=c, threshold=mu)
    if not cert.verify(ideal):
        raise AssertionError("certificate failed exact verification")
    return cert


def curvilinear_dim(ideal: MonomialIdeal) -> int:
    """Number of minimal generators not integral over m*I.

    This is dim of I modulo (closure of m*I inside I) + m*I, since the
    minimal generators present a basis of I/mI.
    """
    bumped = ideal.multiply_by_maximal_ideal()
    count = 0
    for g in ideal.gens:
        if not closure_member(bumped, g).verdict:
            count += 1
    return count


def t1_dim(ideal: MonomialIdeal) -> int:
    """Number of minimal monomial generators; needs I inside m^2."""
    for g in ideal.gens:
        if sum(g) < 2:
            raise MonomialIdealError(
                "ideal has a degree-1 generator; the Hom(I,k) description needs I in m^2"
            )
    return len(ideal.gens)


def quotient_dimension(ideal: MonomialIdeal) -> int:
    """Krull dimension of R/I for monomial I: n minus the smallest vertex
    cover of the supports of the minimal generators."""
    supports = [frozenset(i for i, e in enumerate(g) if e > 0) for g in ideal.gens]
    for size in range(ideal.n + 1):
        for cover in itertools.combinations(range(ideal.n), size):
            cset = set(cover)
            if all(s & cset for s in supports):
                return ideal.n - size
    raise AssertionError("no vertex cover found")


@dataclass
class DimBoundReport:
    dim_quotient: int
    bound: int
    curv_dim: int
    holds: bool


def dim_bound_check(ideal: MonomialIdeal) -> DimBoundReport:
    """dim R/I against the curvilinear bound dim R - dim I/(J + mI)."""
    dim_a = quotient_dimension(ideal)
    curv = curvilinear_dim(ideal)
    bound = ideal.n - curv
    return DimBoundReport(dim_a, bound, curv, bound <= dim_a)

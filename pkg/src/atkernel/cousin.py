"""Cousin complexes with supports in a complete intersection, and the
local trace from Koszul endomorphisms to Cousin representatives.

A Cousin element in degree p is a finite family, indexed by size-p
subsets alpha of {1..q}, of form-valued fractions with denominator a
power of f_alpha = prod_{i in alpha} f_i.  The local trace expands a map
in the dual-gamma basis, pairs against the canonical section of
K (x) Cousin, and applies the supertrace; the resulting closed formula
is a signed partial trace over entry pairs gf_alpha -> gf_beta with
beta contained in alpha.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Sequence

from . import linalg
from .chaincore import ChainMap, ShapeError
from .koszul import KoszulComplex, RegularSequenceIdeal, index_sets
from .polyforms import Form, Poly, contract_form, form_to_text, poly_to_text


@dataclass(frozen=True)
class LocalizedForm:
    """numerator / f_alpha^m with the index set alpha implicit from context."""

    num: Form
    m: int

    def is_zero(self) -> bool:
        return self.num.is_zero()


def _lf_canonical(lf: LocalizedForm, f_alpha: Poly) -> LocalizedForm:
    """Divide out common f_alpha factors of the numerator, exactly."""
    num, m = lf.num, lf.m
    if num.is_zero():
        return LocalizedForm(num, 0)
    while m > 0:
        quotients = {}
        ok = True
        for idx, coeff in num.terms.items():
            quot, rem = coeff.divmod_single(f_alpha)
            if not rem.is_zero():
                ok = False
                break
            quotients[idx] = quot
        if not ok:
            break
        num = Form(num.n, num.degree, quotients)
        m -= 1
    return LocalizedForm(num, m)


def _lf_equal(a: LocalizedForm, b: LocalizedForm, f_alpha: Poly) -> bool:
    """Cross-multiplied equality in the localization (f_alpha nonzero)."""
    left = a.num.mul_poly(f_alpha ** b.m)
    right = b.num.mul_poly(f_alpha ** a.m)
    return left == right


def _lf_add(a: LocalizedForm, b: LocalizedForm, f_alpha: Poly) -> LocalizedForm:
    m = max(a.m, b.m)
    num = a.num.mul_poly(f_alpha ** (m - a.m)) + b.num.mul_poly(f_alpha ** (m - b.m))
    return _lf_canonical(LocalizedForm(num, m), f_alpha)


class CousinElement:
    """Degree-p element of the Cousin complex of a sequence f_1..f_q."""

    def __init__(
        self,
        n: int,
        seq: Sequence[Poly],
        degree: int,
        entries: dict[tuple[int, ...], LocalizedForm] | None = None,
    ):
        self.n = n
        self.seq = tuple(seq)
        q = len(self.seq)
        if not 0 <= degree <= q:
            raise ValueError(f"cousin degree {degree} out of range for q={q}")
        self.degree = degree
        self.entries: dict[tuple[int, ...], LocalizedForm] = {}
        for alpha, lf in (entries or {}).items():
            alpha = tuple(alpha)
            if len(alpha) != degree or list(alpha) != sorted(set(alpha)):
                raise ValueError(f"bad index set {alpha} for degree {degree}")
            if any(not 1 <= i <= q for i in alpha):
                raise ValueError(f"index out of range in {alpha}")
            lf = _lf_canonical(lf, self.f_alpha(alpha))
            if not lf.is_zero():
                self.entries[alpha] = lf

    @property
    def q(self) -> int:
        return len(self.seq)

    def f_alpha(self, alpha: Sequence[int]) -> Poly:
        out = Poly.one(self.n)
        for i in alpha:
            out = out * self.seq[i - 1]
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "CousinElement") -> "CousinElement":
        if self.n != other.n or self.seq != other.seq:
            raise ShapeError("cousin elements over different data")
        if self.degree != other.degree:
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise ShapeError("cousin degree mismatch")
        entries = dict(self.entries)
        for alpha, lf in other.entries.items():
            if alpha in entries:
                entries[alpha] = _lf_add(entries[alpha], lf, self.f_alpha(alpha))
            else:
                entries[alpha] = lf
        return CousinElement(self.n, self.seq, self.degree, entries)

    def __neg__(self) -> "CousinElement":
        return self.scale(-1)

    def __sub__(self, other: "CousinElement") -> "CousinElement":
        return self + (-other)

    def scale(self, c) -> "CousinElement":
        return CousinElement(
            self.n,
            self.seq,
            self.degree,
            {a: LocalizedForm(lf.num.scale(c), lf.m) for a, lf in self.entries.items()},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, CousinElement):
            return NotImplemented
        if self.n != other.n or self.seq != other.seq or self.degree != other.degree:
            return False
        for alpha in set(self.entries) | set(other.entries):
            a = self.entries.get(alpha, LocalizedForm(Form.zero(self.n, 0), 0))
            b = other.entries.get(alpha, LocalizedForm(Form.zero(self.n, 0), 0))
            if not _lf_equal(a, b, self.f_alpha(alpha)):
                return False
        return True

    def __repr__(self):
        return f"CousinElement({cousin_to_text(self)!r})"


def cousin_zero(n: int, seq: Sequence[Poly], degree: int = 0) -> CousinElement:
    return CousinElement(n, seq, degree, {})


def cousin_differential(c: CousinElement) -> CousinElement:
    """d(delta f_alpha) = -sum_i delta f_i ^ delta f_alpha, coefficients
    re-expressed in the larger localization."""
    if c.degree >= c.q:
        raise ValueError("cousin differential out of range")
    out: dict[tuple[int, ...], LocalizedForm] = {}
    for alpha, lf in c.entries.items():
        for i in range(1, c.q + 1):
            if i in alpha:
                continue
            inversions = sum(1 for a in alpha if a < i)
            sign = -((-1) ** inversions)
            bigger = tuple(sorted(alpha + (i,)))
            lifted = LocalizedForm(
                lf.num.mul_poly(c.seq[i - 1] ** lf.m).scale(sign), lf.m
            )
            if bigger in out:
                out[bigger] = _lf_add(out[bigger], lifted, c.f_alpha(bigger))
            else:
                out[bigger] = lifted
    return CousinElement(c.n, c.seq, c.degree + 1, out)


def omega_class(ideal: RegularSequenceIdeal) -> CousinElement:
    """The top-degree class delta f_1/f_1 ^ ... ^ delta f_q/f_q."""
    full = tuple(range(1, ideal.q + 1))
    one = Form.from_poly(Poly.one(ideal.n))
    return CousinElement(
        ideal.n, ideal.polys, ideal.q, {full: LocalizedForm(one, 1)}
    )


def psi_section(ideal: RegularSequenceIdeal) -> dict[tuple[int, ...], tuple[int, int]]:
    """Table alpha -> (sign (-1)^{binom(|alpha|,2)}, denominator exponent 1)."""
    out = {}
    for p in range(ideal.q + 1):
        for alpha in index_sets(ideal.q, p):
            out[alpha] = ((-1) ** comb(p, 2), 1 if p else 0)
    return out


def _shuffle_sign(beta: tuple[int, ...], alpha_prime: tuple[int, ...]) -> int:
    inversions = sum(1 for b in beta for a in alpha_prime if b > a)
    return (-1) ** inversions


def local_trace(u: ChainMap, k: KoszulComplex | None = None) -> CousinElement:
    """Trace a Koszul endomorphism into a Cousin representative.

    Expands u in the dual-gamma basis, pairs against the canonical
    section (the psi table), and applies the supertrace.  The entry from
    gf_alpha to gf_beta contributes only when beta is contained in alpha,
    landing on delta f_{alpha minus beta}.
    """
    if k is None:
        if u.source != u.target or u.source.support() not in ([0], []):
            raise ShapeError("local_trace without a Koszul complex needs a degree-0 module")
        n = u.source.n
        acc = Form.zero(n, u.form_degree)
        mat = u.matrix(0)
        for t in range(len(mat)):
            acc = acc + mat[t][t]
        return CousinElement(
            n, (), 0, {(): LocalizedForm(acc, 0)} if not acc.is_zero() else {}
        )
    if u.source != k.complex or u.target != k.complex:
        raise ShapeError("local_trace needs an endomorphism of the Koszul complex")
    d = u.degree
    if d < 0 or d > k.q:
        return cousin_zero(k.n, k.ideal.polys, min(max(d, 0), k.q))
    psi = psi_section(k.ideal)
    acc: dict[tuple[int, ...], Form] = {}
    for i, mat in u.mats.items():
        p_alpha = -i
        p_beta = p_alpha - d
        if p_beta < 0 or p_beta > k.q:
            continue
        sources = index_sets(k.q, p_alpha)
        targets = index_sets(k.q, p_beta)
        for s, alpha in enumerate(sources):
            aset = set(alpha)
            for t, beta in enumerate(targets):
                if not set(beta) <= aset:
                    continue
                entry = mat[t][s]
                if entry.is_zero():
                    continue
                alpha_prime = tuple(sorted(aset - set(beta)))
                psi_sign, _ = psi[alpha_prime]
                sign = (
                    psi_sign
                    * _shuffle_sign(beta, alpha_prime)
                    * (-1) ** (p_beta * (1 + len(alpha_prime)))
                )
                add = entry.scale(sign)
                acc[alpha_prime] = acc.get(alpha_prime, Form.zero(k.n, u.form_degree)) + add
    entries = {
        alpha: LocalizedForm(num, 1 if alpha else 0)
        for alpha, num in acc.items()
        if not num.is_zero()
    }
    return CousinElement(k.n, k.ideal.polys, d, entries)


def contract_cousin(values: Sequence[Poly], c: CousinElement) -> CousinElement:
    """Contract each numerator form against a derivation; degree-0
    numerators are killed."""
    entries = {}
    for alpha, lf in c.entries.items():
        if lf.num.degree == 0:
            continue
        num = contract_form(values, lf.num)
        if not num.is_zero():
            entries[alpha] = LocalizedForm(num, lf.m)
    return CousinElement(c.n, c.seq, c.degree, entries)


def cousin_coboundary_solve(
    target: CousinElement, m_bound: int = 4, extra_degree: int = 2
) -> CousinElement | None:
    """Search for b of degree q-1 with d(b) = target, bounded denominators.

    Unknown numerators run over monomials up to a degree bound derived
    from the cleared target; returns the witness or None.
    """
    q = target.q
    if target.degree != q or q == 0:
        return None
    n = target.n
    full = tuple(range(1, q + 1))
    fdeg = target.entries.get(full)
    form_degree = fdeg.num.degree if fdeg else 0
    for m in range(1, m_bound + 1):
        lifted = target.entries.get(full)
        t_m = lifted.m if lifted else 0
        if lifted and t_m > m:
            continue
        target_num = (
            lifted.num.mul_poly(target.f_alpha(full) ** (m - t_m))
            if lifted
            else Form.zero(n, form_degree)
        )
        target_deg = max(
            (c.total_degree() for c in target_num.terms.values()), default=0
        )
        # unknowns: coefficients of num_i, i = missing index, over monomials
        idx_tuples = list(itertools.combinations(range(n), form_degree))
        var_index: dict[tuple, int] = {}
        for i in range(1, q + 1):
            fdeg_i = target.seq[i - 1].total_degree()
            deg_bound = max(target_deg - m * fdeg_i + extra_degree, 0)
            monos = []
            for total in range(deg_bound + 1):
                monos.extend(
                    e
                    for e in itertools.product(range(total + 1), repeat=n)
                    if sum(e) == total
                )
            for idx in idx_tuples:
                for e in monos:
                    var_index[(i, idx, e)] = len(var_index)
        # d(b) at full = sum_i -(-1)^{i-1} num_i * f_i^m
        rows: dict[tuple, dict[int, object]] = {}
        rhs: dict[tuple, object] = {}
        for idx, coeff in target_num.terms.items():
            for e, c in coeff.terms.items():
                rhs[(idx, e)] = c
        for (i, idx, e), vi in var_index.items():
            sign = -((-1) ** (i - 1))
            fpow = target.seq[i - 1] ** m
            for e2, c2 in fpow.terms.items():
                key = (idx, tuple(a + b for a, b in zip(e, e2)))
                rows.setdefault(key, {})
                rows[key][vi] = rows[key].get(vi, 0) + sign * c2
        keys = set(rows) | set(rhs)
        equations = []
        from fractions import Fraction

        for key in keys:
            coeffs = {vi: Fraction(v) for vi, v in rows.get(key, {}).items()}
            equations.append((coeffs, Fraction(rhs.get(key, 0))))
        solution = linalg.solve_fraction_system(equations, len(var_index))
        if solution is None:
            continue
        entries: dict[tuple[int, ...], LocalizedForm] = {}
        for (i, idx, e), vi in var_index.items():
            value = solution[vi]
            if value == 0:
                continue
            alpha = tuple(j for j in full if j != i)
            add = Form(n, form_degree, {idx: Poly.monomial(n, e, value)})
            lf = LocalizedForm(add, m)
            if alpha in entries:
                prev = entries[alpha]
                entries[alpha] = LocalizedForm(prev.num + add, m)
            else:
                entries[alpha] = lf
        witness = CousinElement(n, target.seq, q - 1, entries)
        if cousin_differential(witness) == target:
            return witness
    return None


def cousin_to_text(c: CousinElement, names: Sequence[str] | None = None) -> str:
    if c.is_zero():
        return "0"
    chunks = []
    for alpha in sorted(c.entries):
        lf = c.entries[alpha]
        num = form_to_text(lf.num, names)
        delta = "delta[" + "^".join(f"f{i}" for i in alpha) + "]"
        if alpha:
            den = poly_to_text(c.f_alpha(alpha), names)
            chunks.append(f"({num}) / ({den})^{lf.m} * {delta}")
        else:
            chunks.append(f"({num}) * {delta}")
    return " + ".join(chunks)

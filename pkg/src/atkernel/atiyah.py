"""Connections on free complexes, Atiyah cocycles, and contractions.

The basis connection sends every basis element to zero, which makes the
degree-1 Atiyah cocycle the negated entrywise exterior derivative of the
differential matrices.  Higher powers are compositions with wedged
coefficients; contraction against a derivation replaces the leftmost
form slot.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .chaincore import (
    ChainMap,
    FreeComplex,
    ShapeError,
    compose,
    hom_bracket,
    identity_map,
)
from .koszul import KoszulComplex, RegularSequenceIdeal, build_koszul
from .polyforms import Form, Poly, contract_form, exterior_derivative


@dataclass
class ConnectionSpec:
    """Values of a connection on the basis; defaults to the basis connection.

    columns[i][t][s] is the coefficient of target basis t in the image of
    source basis s of homological degree i, a degree-1 form.
    """

    complex: FreeComplex
    columns: dict[int, Sequence[Sequence[Form]]] = field(default_factory=dict)

    def perturbation_map(self) -> ChainMap:
        return ChainMap(self.complex, self.complex, 0, 1, dict(self.columns))


@dataclass
class AtiyahCocycle:
    chain_map: ChainMap
    power: int
    connection: ConnectionSpec


@dataclass(frozen=True)
class DerivationSpec:
    """A derivation given by its values on the ring variables."""

    values: tuple[Poly, ...]
    degree: int = 0

    def apply(self, p: Poly) -> Poly:
        return p.apply_derivation(self.values)


def atiyah_cocycle(p: FreeComplex, connection: ConnectionSpec | None = None) -> AtiyahCocycle:
    """[d, nabla] for the given connection (basis connection by default)."""
    conn = connection or ConnectionSpec(p)
    if conn.complex != p:
        raise ShapeError("connection is for a different complex")
    mats = {}
    for i, dmat in p.diff.items():
        mats[i] = tuple(
            tuple(-exterior_derivative(entry) for entry in row) for row in dmat
        )
    base = ChainMap(p, p, 1, 1, mats)
    if conn.columns:
        base = base + hom_bracket(conn.perturbation_map())
    return AtiyahCocycle(base, 1, conn)


def atiyah_power(at: AtiyahCocycle, k: int) -> AtiyahCocycle:
    """k-fold composition of the degree-1 cocycle; k = 0 is the identity."""
    if k < 0:
        raise ValueError("power must be nonnegative")
    cx = at.chain_map.source
    if k == 0:
        return AtiyahCocycle(identity_map(cx), 0, at.connection)
    acc = at.chain_map
    for _ in range(k - 1):
        acc = compose(at.chain_map, acc)
    return AtiyahCocycle(acc, k, at.connection)


def contract_derivation(xi: DerivationSpec, a: AtiyahCocycle | ChainMap) -> ChainMap:
    """Interior product of every matrix entry against the derivation."""
    u = a.chain_map if isinstance(a, AtiyahCocycle) else a
    if u.form_degree < 1:
        raise ShapeError("cannot contract a form-degree-0 map")
    if len(xi.values) != u.source.n:
        raise ShapeError("derivation arity mismatch")
    mats = {
        i: tuple(tuple(contract_form(xi.values, f) for f in row) for row in mat)
        for i, mat in u.mats.items()
    }
    return ChainMap(u.source, u.target, u.degree, u.form_degree - 1, mats)


def obstruction_cocycle(
    ideal_or_koszul: RegularSequenceIdeal | KoszulComplex, delta: DerivationSpec
) -> ChainMap:
    """[d, delta~] for the extension of delta killing every gamma generator.

    The extension acts on coefficients only, so the bracket applies delta
    entrywise to the differential and negates.
    """
    k = (
        ideal_or_koszul
        if isinstance(ideal_or_koszul, KoszulComplex)
        else build_koszul(ideal_or_koszul)
    )
    cx = k.complex
    if len(delta.values) != cx.n:
        raise ShapeError("derivation arity mismatch")
    mats = {}
    for i, dmat in cx.diff.items():
        mats[i] = tuple(
            tuple(Form.from_poly(-delta.apply(entry)) for entry in row) for row in dmat
        )
    return ChainMap(cx, cx, 1, 0, mats)

"""Line-based session files naming rings, sequences, homs, and derivations.

Grammar, one declaration per line, `#` comments:

    ring Q[x, y:2, z]
    seq Z = x^2 - y*z ; y^2 - x*z
    hom phi on Z = 1 ; 0
    der dx = x: 1, y: 0, z: 0

Weights default to 1; a sequence that is inhomogeneous for the declared
weights is kept ungraded (graded-only operations will refuse it).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .atiyah import DerivationSpec
from .chaincore import GradingError
from .koszul import RegularSequenceIdeal
from .polyforms import ParseError, Poly, parse_poly
from .semireg import NormalHom


class SessionError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


@dataclass
class SessionFile:
    var_names: tuple[str, ...] = ()
    var_weights: tuple[int, ...] = ()
    sequences: dict[str, RegularSequenceIdeal] = field(default_factory=dict)
    homs: dict[str, tuple[str, NormalHom]] = field(default_factory=dict)
    derivations: dict[str, DerivationSpec] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.var_names)

    def sequence(self, name: str) -> RegularSequenceIdeal:
        if name not in self.sequences:
            raise SessionError(f"unknown sequence {name!r}", 0)
        return self.sequences[name]

    def hom(self, name: str) -> tuple[str, NormalHom]:
        if name not in self.homs:
            raise SessionError(f"unknown hom {name!r}", 0)
        return self.homs[name]

    def derivation(self, name: str) -> DerivationSpec:
        if name not in self.derivations:
            raise SessionError(f"unknown derivation {name!r}", 0)
        return self.derivations[name]


def _parse_ring(body: str, lineno: int) -> tuple[tuple[str, ...], tuple[int, ...]]:
    body = body.strip()
    if not (body.startswith("Q[") and body.endswith("]")):
        raise SessionError("ring declaration must look like `ring Q[x, y]`", lineno)
    names, weights = [], []
    for chunk in body[2:-1].split(","):
        chunk = chunk.strip()
        if not chunk:
            raise SessionError("empty variable name in ring declaration", lineno)
        if ":" in chunk:
            name, w = chunk.split(":", 1)
            name = name.strip()
            try:
                weight = int(w)
            except ValueError:
                raise SessionError(f"bad weight {w!r}", lineno) from None
        else:
            name, weight = chunk, 1
        if not name.isidentifier():
            raise SessionError(f"bad variable name {name!r}", lineno)
        if weight < 1:
            raise SessionError("weights must be positive", lineno)
        names.append(name)
        weights.append(weight)
    if len(set(names)) != len(names):
        raise SessionError("duplicate variable names", lineno)
    return tuple(names), tuple(weights)


def parse_session(text: str) -> SessionFile:
    session = SessionFile()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "ring":
            if session.var_names:
                raise SessionError("ring already declared", lineno)
            session.var_names, session.var_weights = _parse_ring(rest, lineno)
            continue
        if not session.var_names:
            raise SessionError("ring must be declared before anything else", lineno)
        if head == "seq":
            name, _, body = rest.partition("=")
            name = name.strip()
            if not name.isidentifier() or not body.strip():
                raise SessionError("expected `seq <name> = f1 ; f2`", lineno)
            if name in session.sequences:
                raise SessionError(f"sequence {name!r} redeclared", lineno)
            polys = []
            for chunk in body.split(";"):
                chunk = chunk.strip()
                if not chunk:
                    raise SessionError("empty polynomial in sequence", lineno)
                try:
                    polys.append(parse_poly(chunk, session.var_names))
                except ParseError as exc:
                    raise SessionError(f"bad polynomial {chunk!r}: {exc}", lineno) from None
            try:
                ideal = RegularSequenceIdeal(
                    session.n, tuple(polys), session.var_weights
                )
            except GradingError:
                ideal = RegularSequenceIdeal(session.n, tuple(polys), None)
            except ValueError as exc:
                raise SessionError(str(exc), lineno) from None
            session.sequences[name] = ideal
        elif head == "hom":
            name, _, tail = rest.partition(" on ")
            name = name.strip()
            seq_name, _, body = tail.partition("=")
            seq_name = seq_name.strip()
            if not name.isidentifier() or not seq_name:
                raise SessionError("expected `hom <name> on <seq> = g1 ; g2`", lineno)
            if seq_name not in session.sequences:
                raise SessionError(f"undeclared sequence {seq_name!r}", lineno)
            ideal = session.sequences[seq_name]
            values = []
            for chunk in body.split(";"):
                chunk = chunk.strip()
                if not chunk:
                    raise SessionError("empty value in hom", lineno)
                try:
                    values.append(parse_poly(chunk, session.var_names))
                except ParseError as exc:
                    raise SessionError(f"bad polynomial {chunk!r}: {exc}", lineno) from None
            if len(values) != ideal.q:
                raise SessionError(
                    f"hom needs {ideal.q} values for sequence {seq_name!r}", lineno
                )
            session.homs[name] = (seq_name, NormalHom(ideal, tuple(values)))
        elif head == "der":
            name, _, body = rest.partition("=")
            name = name.strip()
            if not name.isidentifier() or not body.strip():
                raise SessionError("expected `der <name> = x: g1, y: g2`", lineno)
            values = {v: Poly.zero(session.n) for v in session.var_names}
            for chunk in body.split(","):
                chunk = chunk.strip()
                if not chunk:
                    continue
                var, _, expr = chunk.partition(":")
                var = var.strip()
                if var not in session.var_names:
                    raise SessionError(f"unknown variable {var!r} in derivation", lineno)
                try:
                    values[var] = parse_poly(expr.strip(), session.var_names)
                except ParseError as exc:
                    raise SessionError(f"bad polynomial in derivation: {exc}", lineno) from None
            session.derivations[name] = DerivationSpec(
                tuple(values[v] for v in session.var_names)
            )
        else:
            raise SessionError(f"unknown declaration {head!r}", lineno)
    return session

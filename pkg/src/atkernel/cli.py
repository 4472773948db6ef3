"""Command-line front end: parse a session file, dispatch, print verdicts.

Exit codes: 0 on success, 1 when a comparison reports FAIL or a selftest
group misses, 2 on usage, parse, or semantic errors.  All numeric output
is exact rational text.
"""
from __future__ import annotations

import argparse
import os
import sys

from .atiyah import atiyah_cocycle, atiyah_power, contract_derivation, obstruction_cocycle
from .chaincore import GradingError, ShapeError, map_to_text
from .cousin import cousin_to_text
from .integraldep import (
    MonomialIdeal,
    MonomialIdealError,
    closure_member,
    curvilinear_dim,
    dim_bound_check,
)
from .koszul import build_koszul, verify_regular
from .polyforms import ParseError, parse_poly
from .semireg import (
    chern_character,
    compare_semireg,
    connecting_delta,
    delta_dprime_matches_minus_atiyah,
    euler_generator_forms,
    euler_preset,
    ext1_representative,
    hypersurface_ladder,
    second_fundamental_form,
    sigma_component,
)
from .session import SessionError, SessionFile, parse_session


def degree_bound_override() -> int | None:
    raw = os.environ.get("ATK_DEGREE_BOUND")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise SessionError(f"bad ATK_DEGREE_BOUND {raw!r}", 0) from None


def _load_session(path: str | None) -> SessionFile:
    if path is None:
        raise SessionError("this command needs --input <session file>", 0)
    with open(path, "r", encoding="utf-8") as fh:
        return parse_session(fh.read())


def _guarded_koszul(ideal):
    """Build the resolution after the truncated regularity guard.

    Nonzero first Koszul homology in low degrees proves the sequence is
    not regular, so the guard refuses; ungraded input skips the check.
    """
    if ideal.var_weights is not None and ideal.q >= 2:
        if not verify_regular(ideal, degree_bound_override()):
            raise SessionError("sequence failed the regularity guard", 0)
    return build_koszul(ideal)


def _monomial_ideal_from_text(text: str) -> tuple[MonomialIdeal, tuple[str, ...]]:
    chunks = [c.strip() for c in text.split(",") if c.strip()]
    if not chunks:
        raise MonomialIdealError("empty ideal")
    names = sorted({tok for c in chunks for tok in _variable_tokens(c)})
    if not names:
        raise MonomialIdealError("no variables found in ideal")
    names = tuple(names)
    exps = []
    for c in chunks:
        p = parse_poly(c, names)
        if len(p.terms) != 1 or next(iter(p.terms.values())) != 1:
            raise MonomialIdealError(f"not a monomial: {c!r}")
        exps.append(next(iter(p.terms)))
    return MonomialIdeal.from_exponents(len(names), exps), names


def _variable_tokens(text: str) -> list[str]:
    out, cur = [], ""
    for ch in text:
        if ch.isalnum() or ch == "_":
            cur += ch
        else:
            if cur and not cur[0].isdigit():
                out.append(cur)
            cur = ""
    if cur and not cur[0].isdigit():
        out.append(cur)
    return out


def _cmd_atk(args) -> int:
    session = _load_session(args.input)
    ideal = session.sequence(args.seq)
    kz = _guarded_koszul(ideal)
    at = atiyah_power(atiyah_cocycle(kz.complex), args.power)
    result = at.chain_map
    label = f"at^{args.power}"
    if args.derivation:
        deriv = _resolve_derivation(session, args.derivation)
        result = contract_derivation(deriv, result)
        label = f"contract({args.derivation}, {label})"
    print(map_to_text(result, label, session.var_names))
    return 0


def _resolve_derivation(session: SessionFile, text: str):
    """A named derivation, or an inline `x: g1, y: g2` literal."""
    if text in session.derivations:
        return session.derivations[text]
    if ":" not in text:
        raise SessionError(f"unknown derivation {text!r}", 0)
    from .polyforms import Poly
    from .atiyah import DerivationSpec

    values = {v: Poly.zero(session.n) for v in session.var_names}
    for chunk in text.split(","):
        var, _, expr = chunk.partition(":")
        var = var.strip()
        if var not in values:
            raise SessionError(f"unknown variable {var!r} in derivation", 0)
        values[var] = parse_poly(expr.strip(), session.var_names)
    return DerivationSpec(tuple(values[v] for v in session.var_names))


def _cmd_ch(args) -> int:
    session = _load_session(args.input)
    ideal = session.sequence(args.seq)
    _guarded_koszul(ideal)
    k = args.k if args.k is not None else ideal.q
    out = chern_character(ideal, k)
    print(cousin_to_text(out, session.var_names))
    return 0


def _cmd_semireg(args) -> int:
    session = _load_session(args.input)
    seq_name, hom = session.hom(args.hom)
    kz = build_koszul(hom.ideal)
    k = args.k if args.k is not None else hom.ideal.q - 1
    rep = ext1_representative(hom, kz)
    out = sigma_component(rep, k, kz)
    print(cousin_to_text(out, session.var_names))
    return 0


def _cmd_blochcmp(args) -> int:
    session = _load_session(args.input)
    _, hom = session.hom(args.hom)
    report = compare_semireg(hom)
    print(f"mu:  {cousin_to_text(report.mu_route, session.var_names)}")
    print(f"tau: {cousin_to_text(report.atiyah_route, session.var_names)}")
    verdict = {
        "representative-exact": "exact",
        "coboundary": "coboundary",
        "fail": "FAIL",
    }[report.verdict]
    print(f"VERDICT: {verdict}")
    return 0 if verdict != "FAIL" else 1


def _cmd_obstruct(args) -> int:
    session = _load_session(args.input)
    ideal = session.sequence(args.seq)
    deriv = session.derivation(args.derivation)
    kz = _guarded_koszul(ideal)
    ob = obstruction_cocycle(kz, deriv)
    print(map_to_text(ob, "obstruction", session.var_names))
    contracted = contract_derivation(deriv, atiyah_cocycle(kz.complex))
    agree = ob == contracted
    print(f"VERDICT: {'exact' if agree else 'FAIL'}")
    return 0 if agree else 1


def _cmd_sff(args) -> int:
    preset = args.preset
    if preset.startswith("euler"):
        n_proj = 1
        if ":" in preset:
            n_proj = int(preset.split(":", 1)[1])
        sigma, names = euler_preset(n_proj)
        print(map_to_text(sigma, "sigma", names))
        gens = euler_generator_forms(n_proj)
        mat = sigma.matrix(0)
        good = all(mat[0][s] == -gens[s] for s in range(len(gens)))
        print(f"sigma on generators: {'-id' if good else 'mismatch'}")
        print(f"VERDICT: {'exact' if good else 'FAIL'}")
        return 0 if good else 1
    if preset.startswith("hypersurface:"):
        text = preset.split(":", 1)[1]
        names = tuple(sorted(set(_variable_tokens(text)))) or ("x",)
        f = parse_poly(text, names)
        weights = (1,) * f.n
        if f.homogeneous_degree(weights) is None:
            weights = None
        ladder = hypersurface_ladder(f, weights)
        sigma = second_fundamental_form(
            ladder.j_matrix, ladder.p_matrix, ladder.middle, relations=ladder.relations
        )
        print(map_to_text(sigma, "sigma", names))
        delta_prime, delta_dd = connecting_delta(ladder, sigma)
        print(map_to_text(delta_dd, "delta_second", names))
        verdict = delta_dprime_matches_minus_atiyah(ladder, sigma)
        prime_ok = delta_prime.is_zero()
        print(f"delta_first: {'0' if prime_ok else map_to_text(delta_prime, 'd1', names)}")
        print(f"VERDICT: {verdict if prime_ok else 'FAIL'}")
        return 0 if verdict != "FAIL" and prime_ok else 1
    raise SessionError(f"unknown preset {preset!r}", 0)


def _cmd_iclosure(args) -> int:
    ideal, names = _monomial_ideal_from_text(args.ideal)
    query_poly = parse_poly(args.test, names)
    if len(query_poly.terms) != 1:
        raise MonomialIdealError(f"not a monomial: {args.test!r}")
    query = next(iter(query_poly.terms))
    cert = closure_member(ideal, query)
    if cert.verdict:
        lam = ", ".join(str(v) for v in cert.lambdas)
        slack = ", ".join(str(v) for v in cert.slack)
        print(f"YES lambda=({lam}) slack=({slack})")
    else:
        sep = ", ".join(str(v) for v in cert.separator)
        print(f"NO separator=({sep}) threshold={cert.threshold}")
    return 0


def _cmd_curvdim(args) -> int:
    ideal, _ = _monomial_ideal_from_text(args.ideal)
    print(curvilinear_dim(ideal))
    return 0


def _cmd_dimcheck(args) -> int:
    ideal, _ = _monomial_ideal_from_text(args.ideal)
    report = dim_bound_check(ideal)
    print(
        f"dim = {report.dim_quotient}; bound = {report.bound}; "
        f"curvilinear = {report.curv_dim}; holds: {'yes' if report.holds else 'NO'}"
    )
    return 0 if report.holds else 1


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results, all_pass = run_selftest(jobs=args.jobs)
    for name, passed, total in results:
        status = "ok" if passed == total else "FAIL"
        print(f"{name}: {passed}/{total} {status}")
    print(f"selftest: {'PASS' if all_pass else 'FAIL'}")
    return 0 if all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atk",
        description="exact kernel for cocycle-level characteristic class identities",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, seq=False, hom=False, derivation=False, k=False, power=False):
        p.add_argument("--input", help="session file")
        if seq:
            p.add_argument("--seq", required=True, help="sequence name")
        if hom:
            p.add_argument("--hom", required=True, help="normal hom name")
        if derivation:
            p.add_argument("--derivation", help="derivation name")
        if k:
            p.add_argument("--k", type=int, default=None, help="component index")
        if power:
            p.add_argument("--power", type=int, default=1, help="cocycle power")

    p = sub.add_parser("atk", help="print cocycle power matrices")
    add_common(p, seq=True, derivation=True, power=True)
    p.set_defaults(func=_cmd_atk)

    p = sub.add_parser("ch", help="chern character component")
    add_common(p, seq=True, k=True)
    p.set_defaults(func=_cmd_ch)

    p = sub.add_parser("semireg", help="semiregularity component of a hom")
    add_common(p, hom=True, k=True)
    p.set_defaults(func=_cmd_semireg)

    p = sub.add_parser("blochcmp", help="compare both semiregularity routes")
    add_common(p, hom=True)
    p.set_defaults(func=_cmd_blochcmp)

    p = sub.add_parser("obstruct", help="obstruction cocycle of a derivation")
    p.add_argument("--input")
    p.add_argument("--seq", required=True)
    p.add_argument("--derivation", required=True)
    p.set_defaults(func=_cmd_obstruct)

    p = sub.add_parser("sff", help="second fundamental form presets")
    p.add_argument("--preset", required=True, help="euler[:n] or hypersurface:<f>")
    p.set_defaults(func=_cmd_sff)

    p = sub.add_parser("iclosure", help="integral closure membership")
    p.add_argument("--ideal", required=True, help="comma-separated monomials")
    p.add_argument("--test", required=True, help="monomial to test")
    p.set_defaults(func=_cmd_iclosure)

    p = sub.add_parser("curvdim", help="curvilinear extension dimension")
    p.add_argument("--ideal", required=True)
    p.set_defaults(func=_cmd_curvdim)

    p = sub.add_parser("dimcheck", help="dimension bound report")
    p.add_argument("--ideal", required=True)
    p.set_defaults(func=_cmd_dimcheck)

    p = sub.add_parser("selftest", help="run the invariant corpus")
    p.add_argument("--jobs", type=int, default=None)
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, SessionError, MonomialIdealError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ShapeError, GradingError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Atiyah cocycles, powers, contractions, and the obstruction bracket."""
import random
from math import comb, factorial

import pytest

from atkernel.atiyah import (
    ConnectionSpec,
    DerivationSpec,
    atiyah_cocycle,
    atiyah_power,
    contract_derivation,
    obstruction_cocycle,
)
from atkernel.chaincore import (
    BasisElement,
    FreeComplex,
    ShapeError,
    hom_bracket,
    is_cocycle,
    solve_coboundary,
)
from atkernel.corpus import corpus_entries, graded_random_connection
from atkernel.koszul import RegularSequenceIdeal, build_koszul, index_sets
from atkernel.polyforms import Form, Poly, exterior_derivative, parse_form, parse_poly, wedge

X = ("x",)
XY = ("x", "y")


def kos(texts, names, weights):
    return build_koszul(
        RegularSequenceIdeal(
            len(names), tuple(parse_poly(t, names) for t in texts), weights
        )
    )


class TestCocycle:
    def test_free_module_has_zero_cocycle(self):
        free = FreeComplex(2, {0: [BasisElement("e")]}, {}, (1, 1))
        assert atiyah_cocycle(free).chain_map.is_zero()

    def test_double_point_matrix(self):
        kz = kos(["x^2"], X, (1,))
        at = atiyah_cocycle(kz.complex).chain_map
        assert at.matrix(-1)[0][0] == parse_form("-2*x*dx", X)

    def test_two_variable_matrix(self):
        kz = kos(["x", "y"], XY, (1, 1))
        at = atiyah_cocycle(kz.complex).chain_map
        assert at.matrix(-1)[0][0] == parse_form("-dx", XY)
        assert at.matrix(-1)[0][1] == parse_form("-dy", XY)

    def test_always_a_cocycle(self):
        for entry in corpus_entries():
            kz = build_koszul(entry.ideal)
            at = atiyah_cocycle(kz.complex)
            for k in range(1, kz.q + 1):
                assert is_cocycle(atiyah_power(at, k).chain_map)

    def test_negated_entrywise_derivative_of_differential(self):
        for entry in corpus_entries():
            cx = build_koszul(entry.ideal).complex
            at = atiyah_cocycle(cx).chain_map
            for i, dmat in cx.diff.items():
                got = at.matrix(i)
                for t, row in enumerate(dmat):
                    for s, p in enumerate(row):
                        assert got[t][s] == -exterior_derivative(p)


class TestPowers:
    def test_power_zero_is_identity(self):
        kz = kos(["x", "y"], XY, (1, 1))
        at = atiyah_cocycle(kz.complex)
        from atkernel.chaincore import identity_map

        assert atiyah_power(at, 0).chain_map == identity_map(kz.complex)

    def test_vanishes_beyond_length(self):
        kz = kos(["x", "y"], XY, (1, 1))
        at = atiyah_cocycle(kz.complex)
        assert atiyah_power(at, 3).chain_map.is_zero()

    def test_component_on_codim_one_layer(self):
        # top-but-one source: gamma with one index removed maps to
        # (-1)^{binom(q,2)} 1 (x) (df wedge with that slot removed)
        for texts, names, weights in ((["x", "y"], XY, (1, 1)), (["x", "y", "z"], ("x", "y", "z"), (1, 1, 1))):
            kz = kos(texts, names, weights)
            q = kz.q
            power = atiyah_power(atiyah_cocycle(kz.complex), q - 1).chain_map.scale(
                1 / __import__("fractions").Fraction(factorial(q - 1))
            )
            dfs = [exterior_derivative(f) for f in kz.ideal.polys]
            mat = power.matrix(-(q - 1))
            for col, alpha in enumerate(index_sets(q, q - 1)):
                (missing,) = [i for i in range(1, q + 1) if i not in alpha]
                expected = Form.from_poly(Poly.const(kz.n, (-1) ** comb(q, 2)))
                for j in range(1, q + 1):
                    if j != missing:
                        expected = wedge(expected, dfs[j - 1])
                assert mat[0][col] == expected

    def test_component_on_top_layer(self):
        # the top gamma maps to the signed sum of gamma_i (x) df-hat-i;
        # the global sign is opposite to the codim-one display's companion
        for texts, names, weights in ((["x", "y"], XY, (1, 1)), (["x", "y", "z"], ("x", "y", "z"), (1, 1, 1))):
            kz = kos(texts, names, weights)
            q = kz.q
            from fractions import Fraction

            power = atiyah_power(atiyah_cocycle(kz.complex), q - 1).chain_map.scale(
                Fraction(1, factorial(q - 1))
            )
            dfs = [exterior_derivative(f) for f in kz.ideal.polys]
            mat = power.matrix(-q)
            for row in range(q):
                i = row + 1
                expected = Form.from_poly(
                    Poly.const(kz.n, -((-1) ** (comb(q - 1, 2) + i)))
                )
                for j in range(1, q + 1):
                    if j != i:
                        expected = wedge(expected, dfs[j - 1])
                assert mat[row][0] == expected


class TestConnections:
    def test_perturbation_changes_cocycle_by_bracket(self):
        rng = random.Random(21)
        for entry in corpus_entries()[:3]:
            cx = build_koszul(entry.ideal).complex
            conn = graded_random_connection(rng, cx, internal_degree=1)
            base = atiyah_cocycle(cx).chain_map
            perturbed = atiyah_cocycle(cx, conn).chain_map
            assert perturbed - base == hom_bracket(conn.perturbation_map())
            assert is_cocycle(perturbed)

    def test_difference_is_certified_coboundary(self):
        rng = random.Random(22)
        cx = build_koszul(corpus_entries()[1].ideal).complex
        conn = graded_random_connection(rng, cx, internal_degree=2)
        diff = atiyah_cocycle(cx, conn).chain_map - atiyah_cocycle(cx).chain_map
        assert solve_coboundary(diff).solvable

    def test_wrong_complex_refused(self):
        cx = build_koszul(corpus_entries()[1].ideal).complex
        other = build_koszul(corpus_entries()[0].ideal).complex
        with pytest.raises(ShapeError):
            atiyah_cocycle(cx, ConnectionSpec(other))


class TestContraction:
    def test_at_of_double_point(self):
        kz = kos(["x^2"], X, (1,))
        at = atiyah_cocycle(kz.complex)
        xi = DerivationSpec((Poly.one(1),))
        contracted = contract_derivation(xi, at)
        assert contracted.matrix(-1)[0][0].to_poly() == parse_poly("-2*x", X)

    def test_refuses_form_degree_zero(self):
        kz = kos(["x^2"], X, (1,))
        xi = DerivationSpec((Poly.one(1),))
        with pytest.raises(ShapeError):
            contract_derivation(xi, contract_derivation(xi, atiyah_cocycle(kz.complex)))

    def test_leibniz_on_wedges(self):
        # <xi, a^b> = <xi,a>^b + (-1)^{deg a} a^<xi,b> on coefficients
        from atkernel.polyforms import contract_form

        rng = random.Random(23)
        checked = 0
        while checked < 30:
            n = 3
            values = [
                Poly.monomial(n, tuple(rng.randint(0, 1) for _ in range(n)), rng.randint(-2, 2))
                for _ in range(n)
            ]
            a = Form(n, 1, {(rng.randrange(n),): Poly.one(n)})
            b = Form(n, rng.choice([1, 2]), {})
            if b.degree == 1:
                b = Form(n, 1, {(rng.randrange(n),): Poly.one(n)})
            else:
                idx = tuple(sorted(rng.sample(range(n), 2)))
                b = Form(n, 2, {idx: Poly.one(n)})
            ab = wedge(a, b)
            if ab.is_zero():
                continue
            lhs = contract_form(values, ab)
            rhs = wedge(contract_form(values, a), b) - wedge(a, contract_form(values, b))
            assert lhs == rhs
            checked += 1


class TestObstruction:
    def test_zero_derivation(self):
        kz = kos(["x^2"], X, (1,))
        delta = DerivationSpec((Poly.zero(1),))
        assert obstruction_cocycle(kz, delta).is_zero()

    def test_double_point(self):
        kz = kos(["x^2"], X, (1,))
        delta = DerivationSpec((Poly.one(1),))
        ob = obstruction_cocycle(kz, delta)
        assert ob.matrix(-1)[0][0].to_poly() == parse_poly("-2*x", X)
        assert ob == contract_derivation(delta, atiyah_cocycle(kz.complex))

    def test_two_variables_coordinate_derivation(self):
        kz = kos(["x", "y"], XY, (1, 1))
        delta = DerivationSpec((Poly.one(2), Poly.zero(2)))
        ob = obstruction_cocycle(kz, delta)
        assert ob.matrix(-1)[0][0].to_poly() == Poly.const(2, -1)
        assert ob.matrix(-1)[0][1].is_zero()

    def test_matches_contraction_on_corpus(self):
        from atkernel.corpus import derivations_for

        for entry in corpus_entries():
            kz = build_koszul(entry.ideal)
            at = atiyah_cocycle(kz.complex)
            for delta in derivations_for(entry):
                assert obstruction_cocycle(kz, delta) == contract_derivation(delta, at)

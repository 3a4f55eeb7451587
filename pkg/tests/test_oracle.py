import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import all_graphs, leibniz
from sparseminors.errors import InvalidArgument, ResourceLimit
from sparseminors.graphcore import Forest, Graph, spanning_forest
from sparseminors.ideals import build_matrix, generic_minors, minor_generators
from sparseminors.oracle import (
    RationalMatrix,
    bareiss_det,
    buchberger_check,
    failing_s_pair,
    normal_form,
    principally_regular_check,
    s_polynomial,
)
from sparseminors.polycore import ZERO, CompositeWeightOrder, LexOrder, Monomial, Polynomial, var, variables


def test_normal_form_examples():
    lex = LexOrder()
    gens = [var(1, 1), var(2, 2)]
    assert normal_form(var(1, 1), gens, lex) == ZERO
    assert normal_form(var(1, 1) * var(2, 2) - var(1, 2) ** 2, gens, lex) == -var(1, 2) ** 2
    p = var(1, 2) + var(1, 3)
    assert normal_form(p, gens, lex) == p
    with pytest.raises(InvalidArgument):
        normal_form(p, [ZERO], lex)


def test_buchberger_examples():
    lex = LexOrder()
    assert buchberger_check([var(1, 1) * var(2, 2), var(1, 2) * var(2, 2), var(1, 3)], lex)
    assert not buchberger_check([var(1, 1) - var(1, 2), var(1, 1)], lex)
    g = Graph.complete(3)
    t = Forest.from_edges(g, [(1, 2), (2, 3)])
    order = CompositeWeightOrder.for_forest(3, g.edges, t.edges)
    assert buchberger_check([p for _, _, p in generic_minors(3)], order)


def test_s_polynomial_cancels_leading_terms():
    lex = LexOrder()
    f, g = var(1, 1) * var(2, 2) + var(1, 2), var(1, 1) * var(3, 3) - var(2, 3)
    s = s_polynomial(f, g, lex)
    lcm = lex.leading_term(f)[0].lcm(lex.leading_term(g)[0])
    assert lcm not in s.terms


def test_pair_cap():
    gens = [var(i, j) for i, j in [(1, 1), (2, 2), (3, 3), (1, 2)]]
    with pytest.raises(ResourceLimit):
        failing_s_pair(gens, LexOrder(), pair_cap=3)


def test_normal_form_of_ideal_combinations():
    rng = random.Random(5)
    for g in list(all_graphs(3)) + [Graph.complete(4), Graph.path(4)]:
        t = spanning_forest(g)
        order = CompositeWeightOrder.for_forest(g.n, g.edges, t.edges)
        gens = [p for _, _, p in minor_generators(build_matrix(g)) if p]
        assert buchberger_check(gens, order)
        vs = variables(g.n)
        for _ in range(5):
            combo = ZERO
            for p in gens:
                mult = Polynomial({Monomial.of(rng.choice(vs)): rng.randint(-3, 3)}) + rng.randint(-2, 2)
                combo = combo + mult * p
            assert normal_form(combo, gens, order) == ZERO


def test_bareiss_examples():
    assert bareiss_det([[2, 1], [1, 1]]) == 1
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert bareiss_det([[Fraction(1, 2), 0], [0, 4]]) == 2
    assert bareiss_det([]) == 1
    assert bareiss_det([[1, 2], [2, 4]]) == 0
    # Rational input: an intermediate integer quotient -2 / -3 must stay exact.
    assert bareiss_det([[-3, 0, 0], [0, Fraction(1, 3), 0], [0, 0, Fraction(-2, 3)]]) == Fraction(2, 3)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(
    st.lists(st.builds(Fraction, st.integers(-5, 5), st.integers(1, 3)), min_size=n, max_size=n),
    min_size=n, max_size=n)))
def test_bareiss_matches_leibniz_on_rationals(a):
    assert bareiss_det(a) == leibniz(a)


def test_principal_regularity_examples():
    r = principally_regular_check(RationalMatrix(((1, 0), (0, 1))))
    assert (r.principally_regular, r.condition_holds, r.diagonal) == (True, True, True)
    r = principally_regular_check(RationalMatrix(((1, 1), (1, 1))))
    assert not r.principally_regular and r.condition_holds is None
    r = principally_regular_check(RationalMatrix(((2, 1), (1, 1))))
    assert r.principally_regular and r.condition_holds is False
    assert RationalMatrix(((2, 1), (1, 1))).inverse()[0][1] == -1


def test_rational_matrix_json_round_trip():
    a = RationalMatrix(((Fraction(1, 2), 3), (3, -1)))
    assert RationalMatrix.from_json(json.dumps(a.to_json())) == a
    with pytest.raises(InvalidArgument):
        RationalMatrix(((1, 2), (3, 4)))
    with pytest.raises(InvalidArgument):
        RationalMatrix.from_json('{"n": 3, "entries": [["1", "0"], ["0", "1"]]}')

import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from helpers import all_forests, all_graphs, random_graphs
from sparseminors.errors import InvalidArgument, ResourceLimit
from sparseminors.graphcore import Forest, Graph, connected_components, spanning_forest
from sparseminors.ideals import (
    SquarefreeMonomialIdeal,
    bijection_fd,
    build_generic,
    build_matrix,
    face_vector,
    hf_closed_form,
    hf_polynomial_ring,
    hf_recursion,
    hilbert_from_faces,
    ideal_height,
    ideal_hf,
    initial_ideal_of_minors,
    it_generators,
    minor_generators,
    monomial_colon,
    path_determinant_rhs,
    simple_paths,
    squarefree_nonface_counts,
    substitute_ideal,
)
from sparseminors.oracle import sqfree_count
from sparseminors.polycore import (
    ZERO,
    CompositeWeightOrder,
    Monomial,
    var,
    variables,
    x,
)


def ideal(*gens):
    return SquarefreeMonomialIdeal(frozenset(frozenset(g) for g in gens))


def mono(*pairs):
    return Monomial.of(*(x(i, j) for i, j in pairs))


def test_sparse_matrix_examples():
    m = build_matrix(Graph.edgeless(2))
    assert m.zero_vars == {x(1, 2)}
    assert m.matrix.entries[0][1] == ZERO
    assert build_matrix(Graph.complete(3)).zero_vars == frozenset()


def test_minor_generator_examples():
    assert [p for _, _, p in minor_generators(build_generic(2))] == [var(2, 2), var(1, 1), -var(1, 2)]
    got = minor_generators(build_matrix(Graph.edgeless(3)))
    assert [p for _, _, p in got] == [var(2, 2) * var(3, 3), var(1, 1) * var(3, 3), var(1, 1) * var(2, 2),
                                      ZERO, ZERO, ZERO]
    assert minor_generators(build_matrix(Graph.from_edges(3, [(1, 2)])))[4][2] == ZERO
    for n in range(2, 7):
        assert len(minor_generators(build_generic(n))) == comb(n + 1, 2)


def test_it_generators_examples():
    path = Graph.path(3)
    want = {mono((2, 2), (3, 3)), mono((1, 1), (3, 3)), mono((1, 1), (2, 2)), mono((3, 3), (1, 2)),
            mono((1, 1), (2, 3)), mono((1, 2), (2, 3))}
    assert set(it_generators(path, spanning_forest(path)).monomials()) == want
    assert set(it_generators(Graph.edgeless(2)).monomials()) == {mono((2, 2)), mono((1, 1)), mono((1, 2))}


def test_it_generators_shape_for_all_forests():
    for n in range(2, 6):
        for t in all_forests(n):
            gens = it_generators(t.graph, t)
            assert len(gens) == comb(n + 1, 2)
            assert all(len(g) == n - 1 for g in gens.generators)


def test_substitute_ideal_examples():
    i = it_generators(Graph.edgeless(2))
    assert set(substitute_ideal(i, {x(1, 2)}).monomials()) == {mono((1, 1)), mono((2, 2))}
    assert substitute_ideal(i, ()) == i
    g = Graph.path(4)
    assert substitute_ideal(it_generators(g), build_matrix(g).zero_vars) == it_generators(g)


def test_path_determinant_examples():
    assert path_determinant_rhs(Graph.path(3), 1, 3) == var(1, 2) * var(2, 3)
    assert path_determinant_rhs(Graph.from_edges(3, [(1, 2)]), 1, 3) == ZERO
    # Two paths: 1-2 with sign -1 and minor x33, then 1-3-2 with sign +1.
    assert path_determinant_rhs(Graph.complete(3), 1, 2) == var(1, 3) * var(2, 3) - var(3, 3) * var(1, 2)
    with pytest.raises(InvalidArgument):
        path_determinant_rhs(Graph.path(3), 2, 1)


def test_path_cap_is_enforced():
    with pytest.raises(ResourceLimit):
        list(simple_paths(Graph.complete(6), 1, 2, cap=10))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_path_determinant_identity_small(n):
    for g in all_graphs(n):
        cof = {(k, l): p for k, l, p in minor_generators(build_matrix(g))}
        comps = connected_components(g)
        for k, l in itertools.combinations(range(1, n + 1), 2):
            assert cof[(k, l)] == path_determinant_rhs(g, k, l)
            assert cof[(k, l)].is_zero() == (comps.block_of(k) != comps.block_of(l))


def test_face_vector_examples():
    assert face_vector(ideal(), 3) == (1, 3, 3, 1)
    assert face_vector(ideal({x(1, 1), x(2, 2)}), 2) == (1, 2)
    assert sqfree_count(ideal({x(1, 1)}), 1, 2) == 1
    assert sqfree_count(ideal({x(1, 1)}), 0, 2) == 0


sq_ideals = st.lists(
    st.sets(st.sampled_from(variables(3)), min_size=1, max_size=4), max_size=6
).map(lambda gs: SquarefreeMonomialIdeal(frozenset(frozenset(g) for g in gs)))


@settings(max_examples=100, deadline=None)
@given(sq_ideals)
def test_counting_methods_agree(i):
    n_vars = 6
    a = squarefree_nonface_counts(i, n_vars, "enumerate")
    b = squarefree_nonface_counts(i, n_vars, "inclusion-exclusion")
    assert a == b
    assert a == [sqfree_count(i, d, n_vars) for d in range(n_vars + 1)]


@settings(max_examples=50, deadline=None)
@given(sq_ideals, st.integers(0, 6))
def test_hilbert_from_faces_matches_brute_force(i, d):
    # Count all monomials of degree d whose support is a face.
    vs = variables(3)
    outside = 0
    for combo in itertools.combinations_with_replacement(vs, d):
        if not i.contains(set(combo)):
            outside += 1
    assert hilbert_from_faces(face_vector(i, 6), d) == outside


def test_hilbert_from_faces_simplex():
    for m in range(1, 6):
        f = tuple(comb(m, k) for k in range(m + 1))
        for d in range(6):
            assert hilbert_from_faces(f, d) == hf_polynomial_ring(m, d)


def test_closed_form_examples():
    assert hf_closed_form(2, 1) == 3
    assert hf_recursion(2, 0) == 0
    assert hf_recursion(2, 2) == 6
    for n in range(2, 7):
        assert hf_closed_form(n, n - 2) == 0
        assert hf_closed_form(n, n - 1) == comb(n + 1, 2)


def test_closed_form_equals_recursion_up_to_n6():
    for n in range(2, 7):
        for d in range(2 * n + 1):
            assert hf_closed_form(n, d) == hf_recursion(n, d)


def test_monomial_colon():
    a, b, c = x(1, 1), x(2, 2), x(1, 2)
    assert set(monomial_colon([frozenset({a, b}), frozenset({a, c})], frozenset({a}))) == \
        {frozenset({b}), frozenset({c})}


def test_bijection_examples():
    g = Graph.path(3)
    t = spanning_forest(g)
    assert bijection_fd(g, t, mono((2, 2), (1, 3))) == mono((1, 2), (2, 3))
    assert bijection_fd(g, t, mono((2, 2), (1, 3), (2, 3))) == mono((1, 2), (2, 3), (1, 3))
    m = mono((1, 1), (2, 2), (1, 3))
    assert bijection_fd(g, t, m) == m
    with pytest.raises(InvalidArgument):
        bijection_fd(g, t, mono((2, 2)))
    with pytest.raises(InvalidArgument):
        bijection_fd(g, t, Monomial({x(1, 1): 2, x(2, 2): 1}))


def test_bijection_identity_across_trees():
    g = Graph.from_edges(3, [(1, 2)])
    m = mono((2, 2), (1, 3))
    assert bijection_fd(g, spanning_forest(g), m) == m


def test_bijection_is_degree_preserving_on_k4():
    g = Graph.complete(4)
    t = spanning_forest(g)
    src, tgt = it_generators(Graph.edgeless(4)), it_generators(g, t)
    seen = set()
    for d in range(3, 6):
        for combo in itertools.combinations(variables(4), d):
            if src.contains(combo):
                img = bijection_fd(g, t, Monomial.of(*combo))
                assert img.degree == d and img.is_squarefree() and tgt.contains(img.support())
                seen.add(img)
    assert len(seen) == sum(1 for d in range(3, 6) for c in itertools.combinations(variables(4), d)
                            if src.contains(c))


def test_height_examples():
    assert ideal_height(ideal({x(1, 1), x(2, 2)})) == 1
    assert ideal_height(ideal({x(1, 1)}, {x(2, 2)}, {x(1, 2)})) == 3
    with pytest.raises(InvalidArgument):
        ideal_height(ideal())
    for g in all_graphs(4):
        h = ideal_height(initial_ideal_of_minors(g))
        assert h == (3 if g.is_connected() else 2)


def test_initial_ideal_examples():
    k3 = Graph.complete(3)
    t = Forest.from_edges(k3, [(1, 2), (1, 3)])
    assert initial_ideal_of_minors(k3, t) == it_generators(k3, t)
    assert set(initial_ideal_of_minors(Graph.edgeless(2)).monomials()) == {mono((1, 1)), mono((2, 2))}


def test_initial_ideal_equals_it_for_n5_default_forests():
    for g in random_graphs(5, 60, seed=3):
        t = spanning_forest(g)
        assert initial_ideal_of_minors(g, t, generic=True) == it_generators(g, t)
        assert initial_ideal_of_minors(g, t) == substitute_ideal(it_generators(g, t), build_matrix(g).zero_vars)


def test_initial_ideal_rejects_foreign_forest():
    with pytest.raises(InvalidArgument):
        initial_ideal_of_minors(Graph.complete(3), spanning_forest(Graph.path(3)))


class RevLexRefinement(CompositeWeightOrder):
    """Same weights, reverse-lex tie-break on the variable order."""

    def key(self, m):
        exps = tuple(-m.exponent(v) for v in reversed(variables(4, with_t=True)))
        return (self.weight_key(m), m.degree, exps)


def test_leading_ideal_does_not_depend_on_tiebreak():
    for g in all_graphs(4):
        t = spanning_forest(g)
        base = CompositeWeightOrder.for_forest(4, g.edges, t.edges)
        alt = RevLexRefinement(base.weights)
        for minors in (minor_generators(build_generic(4)), minor_generators(build_matrix(g))):
            lead_a = {base.leading_term(p)[0] for _, _, p in minors if p}
            lead_b = {alt.leading_term(p)[0] for _, _, p in minors if p}
            assert lead_a == lead_b


def test_ideal_hf_matches_quotient():
    i = it_generators(Graph.edgeless(3))
    for d in range(7):
        assert ideal_hf(i, 6, d) == hf_closed_form(3, d)

from __future__ import annotations

import pytest

from sip3.core.errors import MinorBudgetExceeded, PreconditionError
from sip3.models.graph import VertexPair, build_graph, complete_graph, cycle_graph, path_graph
from sip3.models.minor import MinorConstraints, MinorMap
from sip3.services.fixtures import connected_graphs
from sip3.services.minors import (
    apply_exchange,
    brute_force_minor_oracle,
    contract_edge,
    find_preserving_forbidden_minor,
    find_retaining_induced_forbidden_minor,
    find_rooted_minor,
    has_preserving_forbidden_minor,
    has_retaining_induced_forbidden_minor,
    induced_minor_pairs,
    pattern_automorphism_orbits,
    quotient_graph,
    satisfies,
    validate_minor_map,
)
from sip3.services.patterns import catalog


def test_complete_graph_is_its_own_minor():
    m = find_rooted_minor(complete_graph(5), complete_graph(5))
    assert m is not None
    assert validate_minor_map(m)
    assert sorted(len(s) for s in m.branch_sets) == [1, 1, 1, 1, 1]


def test_known_minor_free_graphs():
    cat = catalog()
    assert find_rooted_minor(cat.k222, cat.k5) is None  # octahedron is planar
    assert find_rooted_minor(cat.v8, cat.k5) is None
    assert find_rooted_minor(cycle_graph(7), cat.k4) is None
    assert find_rooted_minor(cat.k222, cat.k4) is not None


def test_disconnected_host_has_no_total_minor():
    G = complete_graph(4).without_edges([(0, 1), (0, 2), (0, 3)])
    assert find_rooted_minor(G, complete_graph(3)) is None


def test_pins_and_preserve():
    cat = catalog()
    m = find_rooted_minor(complete_graph(5), cat.k5, MinorConstraints(pins=((0, 4), (1, 2))))
    assert m is not None and m.image(0) == 4 and m.image(1) == 2

    # the triangle u-w-v + uv keeps uv apart
    tri = path_graph(3).with_edges([(0, 2)])
    m = find_rooted_minor(tri, cat.k3, MinorConstraints(preserve=((0, 2),)))
    assert m is not None and m.is_preserved((0, 2))


def test_preserve_can_make_the_search_fail():
    # triangle 0 1 2 with a pendant 3 on 0: the K3 minor must absorb 3 into 0's branch set
    G = build_graph(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
    k3 = complete_graph(3)
    c = MinorConstraints(preserve=((0, 3),))
    assert find_rooted_minor(G, k3) is not None
    assert find_rooted_minor(G, k3, c) is None
    assert not brute_force_minor_oracle(G, k3, c)


def test_conflicting_pins_are_rejected():
    with pytest.raises(PreconditionError):
        MinorConstraints(pins=((0, 1), (0, 2)))


def test_retain_and_doubled():
    # K4 onto K3 by contracting 23: both edges into {2,3} double up
    G = complete_graph(4)
    m = MinorMap(G, complete_graph(3), (0, 1, 2, 2))
    assert validate_minor_map(m)
    assert m.is_retained((0, 1))
    assert m.is_doubled((0, 2))
    assert m.is_contracted((2, 3))
    assert not satisfies(m, MinorConstraints(retain=((1, 3),)))


def test_budget_exhaustion_raises():
    with pytest.raises(MinorBudgetExceeded) as info:
        find_rooted_minor(catalog().c5xc2, catalog().k5, budget=1)
    assert info.value.budget == 1


def test_preserving_forbidden_minor_in_k5_minus_f():
    G = complete_graph(5).without_edges([(0, 1)])
    assert find_preserving_forbidden_minor(G.with_edges([(0, 1)]), (0, 1)) is not None
    m = find_retaining_induced_forbidden_minor(G, (0, 1))
    assert m is not None and m.is_induced() and m.is_retained((0, 1))


def test_forbidden_minor_predicates():
    G = complete_graph(5).without_edges([(0, 1)])
    assert has_preserving_forbidden_minor(G.with_edges([(0, 1)]), (0, 1))
    assert has_retaining_induced_forbidden_minor(G, (0, 1))

    C = cycle_graph(6)
    assert not has_preserving_forbidden_minor(C.with_edges([(0, 3)]), (0, 3))
    assert not has_retaining_induced_forbidden_minor(C, (0, 3))


def test_automorphism_orbits():
    cat = catalog()
    assert pattern_automorphism_orbits(cat.k5) == (frozenset(range(5)),)
    orbits = pattern_automorphism_orbits(cat.winged_k5)
    assert frozenset({0, 1}) in orbits


def test_contract_edge_and_quotient():
    H, mapping = contract_edge(path_graph(3), (0, 1))
    assert H.n == 2 and H.edge_list() == [(0, 1)]
    assert mapping == (0, 0, 1)
    Q = quotient_graph(cycle_graph(6), [frozenset({0, 1}), frozenset({2, 3}), frozenset({4, 5})])
    assert Q.is_complete() and Q.n == 3


def test_vertex_exchange_moves_the_rest_of_the_branch_set():
    # branch set {0,1,2} of a path 0-1-2-3 mapped onto K2
    G = path_graph(4)
    m = MinorMap(G, complete_graph(2), (0, 0, 0, 1))
    out = apply_exchange(m, "vertex", 0, 1, x=2, keep=frozenset({0, 1}))
    assert out.branch == (0, 0, 1, 1)
    assert validate_minor_map(out)
    with pytest.raises(PreconditionError):
        apply_exchange(m, "vertex", 0, 1, x=0, keep=frozenset({1, 2}))


def test_component_exchange():
    G = path_graph(4)
    m = MinorMap(G, complete_graph(2), (0, 0, 0, 1))
    out = apply_exchange(m, "component", 0, 1, keep=frozenset({0}), moved=frozenset({1, 2}))
    assert out.branch == (0, 1, 1, 1)
    with pytest.raises(PreconditionError):
        apply_exchange(m, "component", 0, 1, keep=frozenset({0, 2}), moved=frozenset({1}))


def test_induced_minor_pairs_retain_f():
    G = complete_graph(5).without_edges([(0, 1)])
    pairs = list(induced_minor_pairs(G, (0, 1)))
    assert pairs
    for M, fq in pairs:
        assert not M.has_edge(fq.a, fq.b)
        assert M.n < G.n


def test_engine_matches_oracle_on_five_vertex_hosts():
    cat = catalog()
    for G in connected_graphs(5):
        for pattern in (cat.k3, cat.k4):
            assert (find_rooted_minor(G, pattern) is not None) == brute_force_minor_oracle(G, pattern)
            for f in G.nonedges()[:2]:
                c = MinorConstraints(preserve=(f,))
                got = find_rooted_minor(G, pattern, c) is not None
                assert got == brute_force_minor_oracle(G, pattern, c), (G.edge_list(), f)


@pytest.mark.slow
def test_engine_matches_oracle_on_six_vertex_hosts():
    cat = catalog()
    for G in connected_graphs(6):
        pairs = [None, *G.nonedges()[:1], *[VertexPair(*e) for e in G.edge_list()[:1]]]
        for pattern in (cat.k3, cat.k4, cat.k5, cat.k222):
            for f in pairs:
                c = MinorConstraints(preserve=(f,)) if f is not None else None
                got = find_rooted_minor(G, pattern, c) is not None
                assert got == brute_force_minor_oracle(G, pattern, c), (G.edge_list(), pattern.n, f)

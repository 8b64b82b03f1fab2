from __future__ import annotations

import random

import pytest

from sip3.core.errors import HostTooLarge, InvariantViolation, PreconditionError
from sip3.models.graph import Graph, build_graph, complete_graph, cycle_graph, path_graph
from sip3.services.fixtures import connected_graphs
from sip3.services.flattenability import (
    check_star_theorem,
    forbidden_minor_conjecture_check,
    is_3_tree,
    is_d_flattenable,
    is_flattenable_via_sip,
    is_partial_3_tree,
    treewidth,
)
from sip3.services.patterns import catalog


def random_3_tree(rng: random.Random, n: int) -> Graph:
    edges = {(a, b) for a in range(4) for b in range(4) if a < b}
    triangles = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    for v in range(4, n):
        tri = rng.choice(triangles)
        edges |= {(u, v) for u in tri}
        a, b, c = tri
        triangles += [(a, b, v), (a, c, v), (b, c, v)]
    return build_graph(n, sorted(edges))


def test_forbidden_minors_by_dimension():
    assert not is_d_flattenable(complete_graph(3), 1)
    assert is_d_flattenable(path_graph(5), 1)
    assert not is_d_flattenable(complete_graph(4), 2)
    assert is_d_flattenable(cycle_graph(6), 2)
    assert not is_d_flattenable(complete_graph(5), 3)
    assert not is_d_flattenable(catalog().k222, 3)
    assert is_d_flattenable(complete_graph(4), 3)


def test_v8_is_3_flattenable_but_not_a_partial_3_tree():
    v8 = catalog().v8
    assert is_d_flattenable(v8, 3)
    assert not is_partial_3_tree(v8)
    assert not is_partial_3_tree(catalog().c5xc2)


def test_dimension_is_checked():
    with pytest.raises(PreconditionError):
        is_d_flattenable(path_graph(2), 4)


def test_3_trees():
    rng = random.Random(3)
    for n in range(4, 13):
        T = random_3_tree(rng, n)
        assert is_3_tree(T)
        assert is_partial_3_tree(T)
    assert not is_3_tree(cycle_graph(5))
    assert not is_3_tree(complete_graph(3))


def test_treewidth_values():
    assert treewidth(path_graph(5)) == 1
    assert treewidth(cycle_graph(5)) == 2
    assert treewidth(complete_graph(5)) == 4
    assert treewidth(catalog().k222) == 4
    assert treewidth(catalog().v8) == 4
    with pytest.raises(HostTooLarge):
        treewidth(path_graph(17))


def test_partial_3_tree_matches_treewidth_on_small_graphs():
    for G in connected_graphs(6):
        assert is_partial_3_tree(G) == (treewidth(G) <= 3), G.edge_list()


@pytest.mark.slow
def test_partial_3_tree_matches_treewidth_on_seven_vertex_graphs():
    for G in connected_graphs(7, min_n=7):
        assert is_partial_3_tree(G) == (treewidth(G) <= 3), G.edge_list()


def test_flattenability_two_routes_agree():
    for G in connected_graphs(5, min_n=3):
        for d in (1, 2, 3):
            assert is_flattenable_via_sip(G, d) == is_d_flattenable(G, d), (G.edge_list(), d)


def test_star_theorem_on_a_3_tree():
    rng = random.Random(8)
    T = random_3_tree(rng, 8)
    for w in T.vertices():
        leaves = [u for u in T.vertices() if u != w and not T.has_edge(u, w)][:2]
        if len(leaves) < 2:
            continue
        report = check_star_theorem(T, w, leaves, strict=True)
        assert not report.violated
        assert report.three_connected and report.partial_3_tree


def test_star_theorem_rejects_existing_edges():
    with pytest.raises(PreconditionError):
        check_star_theorem(complete_graph(4), 0, [1])


def test_star_theorem_strict_mode_raises_on_a_violation(monkeypatch):
    import sip3.services.flattenability as flat

    calls = iter([True, True, True, False])
    monkeypatch.setattr(flat, "is_partial_3_tree", lambda G, **kw: next(calls))
    G = cycle_graph(6).with_edges([(0, 3), (1, 4), (2, 5)])
    with pytest.raises(InvariantViolation):
        flat.check_star_theorem(G, 0, [2, 4], strict=True)


def test_forbidden_minor_check_on_k5_and_k222():
    for G in (complete_graph(5), catalog().k222):
        report = forbidden_minor_conjecture_check(G, 3)
        assert report.is_forbidden_minor
        assert report.every_edge_fails_sip
        assert report.every_minor_edge_has_sip


def test_forbidden_minor_check_on_a_flattenable_graph():
    report = forbidden_minor_conjecture_check(complete_graph(4), 3)
    assert report.flattenable
    assert not report.is_forbidden_minor

from __future__ import annotations

import random

import networkx as nx
import pytest

from sip3.core.errors import GraphError, PreconditionError
from sip3.models.graph import Graph, build_graph, complete_graph, cycle_graph, path_graph
from sip3.services.decomposition import (
    atom_graph,
    atoms_containing_pair,
    atoms_of,
    brute_force_atoms,
    cms_components,
    decompose_atoms,
    is_atom,
)
from sip3.services.fixtures import connected_graphs


def _clique_chain() -> Graph:
    # K4 {0,1,2,3} - K4 {2,3,4,5} - K4 {4,5,6,7}, glued on 23 and 45
    edges: set[tuple[int, int]] = set()
    for block in ((0, 1, 2, 3), (2, 3, 4, 5), (4, 5, 6, 7)):
        edges |= {(a, b) for a in block for b in block if a < b}
    return build_graph(8, sorted(edges))


def _random_chordal(rng: random.Random, n: int) -> Graph:
    """Perfect elimination order read backwards: each vertex joins a clique of earlier ones."""
    cliques = [[0]]
    edges: set[tuple[int, int]] = set()
    for v in range(1, n):
        base = rng.choice(cliques)
        k = rng.randint(1, len(base))
        attach = rng.sample(base, k)
        edges |= {(u, v) for u in attach}
        cliques.append(attach + [v])
    return build_graph(n, sorted(edges))


def test_complete_graph_is_one_atom():
    dec = decompose_atoms(complete_graph(4))
    assert dec.atoms == ((0, 1, 2, 3),)
    assert dec.cms_list == ()


def test_two_k4_sharing_a_triangle():
    dec = decompose_atoms(complete_graph(5).without_edges([(0, 4)]))
    assert dec.atoms == ((0, 1, 2, 3), (1, 2, 3, 4))
    assert dec.cms_list == ((1, 2, 3),)


def test_path_atoms_are_edges():
    dec = decompose_atoms(path_graph(4))
    assert dec.atoms == ((0, 1), (1, 2), (2, 3))
    assert dec.cms_list == ((1,), (2,))


def test_cycle_is_an_atom():
    assert is_atom(cycle_graph(5))
    assert not is_atom(path_graph(3))


def test_disconnected_input_is_rejected():
    with pytest.raises(GraphError):
        decompose_atoms(Graph(3, frozenset({(0, 1)})))


def test_atoms_of_handles_components():
    G = Graph(4, frozenset({(0, 1), (2, 3)}))
    assert atoms_of(G) == ((0, 1), (2, 3))
    assert atoms_of(Graph(2, frozenset())) == ((0,), (1,))


def test_clique_chain_atom_graph_is_a_path():
    dec = decompose_atoms(_clique_chain())
    assert len(dec.atoms) == 3
    assert dec.cms_list == ((2, 3), (4, 5))
    tree = atom_graph(dec)
    assert tree.number_of_nodes() == 5
    assert nx.is_tree(tree)
    assert sorted(d for _, d in tree.degree()) == [1, 1, 2, 2, 2]


def test_cms_components_preconditions():
    G = complete_graph(5).without_edges([(0, 4)])
    pieces = cms_components(G, [1, 2, 3])
    assert [p.labels for p in pieces] == [(0, 1, 2, 3), (1, 2, 3, 4)]
    with pytest.raises(PreconditionError):
        cms_components(cycle_graph(4), [0, 2])  # not a clique
    with pytest.raises(PreconditionError):
        cms_components(G, [1, 2])  # clique, but not a separator


def test_atoms_containing_pair():
    G = complete_graph(5).without_edges([(0, 4)])
    (atom,) = atoms_containing_pair(G, (0, 1))
    assert atom.labels == (0, 1, 2, 3)
    assert atoms_containing_pair(G, (0, 4)) == []


def test_chordal_atoms_are_maximal_cliques():
    rng = random.Random(5)
    for _ in range(100):
        G = _random_chordal(rng, rng.randint(2, 10))
        cliques = sorted(tuple(sorted(c)) for c in nx.find_cliques(G.to_networkx()))
        assert list(decompose_atoms(G).atoms) == cliques


def test_decomposition_matches_brute_force_on_small_graphs():
    for G in connected_graphs(6):
        assert decompose_atoms(G).atoms == brute_force_atoms(G), G.edge_list()


def test_decomposition_is_relabelling_invariant():
    rng = random.Random(11)
    for G in list(connected_graphs(6, min_n=5))[:60]:
        perm = list(G.vertices())
        rng.shuffle(perm)
        H = build_graph(G.n, [(perm[u], perm[v]) for u, v in G.edges])
        expected = sorted(tuple(sorted(perm[v] for v in a)) for a in decompose_atoms(G).atoms)
        assert list(decompose_atoms(H).atoms) == expected


def test_two_triangles_on_an_edge():
    G = build_graph(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    assert not is_atom(G)
    dec = decompose_atoms(G)
    assert dec.atoms == ((0, 1, 2), (1, 2, 3))
    assert dec.cms_list == ((1, 2),)
    assert decompose_atoms(path_graph(3)).atoms == brute_force_atoms(path_graph(3)) == ((0, 1), (1, 2))


def _random_connected(rng: random.Random, n: int) -> Graph:
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.3:
                edges.add((a, b))
    return build_graph(n, sorted(edges))


def test_atom_graph_is_a_tree_with_atom_leaves():
    rng = random.Random(23)
    checked = 0
    for _ in range(150):
        G = _random_connected(rng, rng.randint(3, 8))
        dec = decompose_atoms(G)
        if G.n <= 6:
            assert dec.atoms == brute_force_atoms(G), G.edge_list()
        for u, v in G.edges:
            holders = [a for a in dec.atoms if u in a and v in a]
            shared = any(u in s and v in s for s in dec.cms_list)
            assert len(holders) == 1 or (len(holders) > 1 and shared), (G.edge_list(), (u, v))
        seps = [set(s) for s in dec.cms_list]
        if any(s < t for s in seps for t in seps):
            continue
        tree = atom_graph(dec)
        assert nx.is_tree(tree), G.edge_list()
        if tree.number_of_nodes() > 1:
            assert all(node[0] == "atom" for node, d in tree.degree() if d == 1)
        checked += 1
    assert checked >= 50

"""Property tests over random small graphs and random point sets."""

import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sip3.models.graph import Graph, VertexPair, build_graph
from sip3.models.linkage import IntervalSet, Provenance, TriangleLengths
from sip3.services.decomposition import brute_force_atoms, decompose_atoms
from sip3.services.linkage_numerics import (
    apex_pair_interval,
    cayley_menger_determinant,
    glue_intervals,
    gram_realizability,
)
from sip3.services.sip import decide_sip


@st.composite
def pairs(draw, min_n: int = 4, max_n: int = 7) -> tuple[Graph, VertexPair]:
    """A graph with a nonedge f such that G ∪ f is connected."""
    n = draw(st.integers(min_n, max_n))
    all_pairs = list(itertools.combinations(range(n), 2))
    f = draw(st.sampled_from(all_pairs))
    edges = draw(st.sets(st.sampled_from([p for p in all_pairs if p != f])))
    G = build_graph(n, sorted(edges))
    assume(G.with_edges([f]).is_connected())
    return G, VertexPair(*f)


def _relabel(G: Graph, perm: list[int]) -> Graph:
    return build_graph(G.n, [(perm[u], perm[v]) for u, v in G.edges])


@pytest.mark.property_based
@given(pairs())
@settings(max_examples=60, deadline=None)
def test_sip_is_monotone_in_the_dimension(pair):
    G, f = pair
    answers = [decide_sip(G, f, d).answer for d in (1, 2, 3)]
    assert answers == sorted(answers)


@pytest.mark.property_based
@given(pairs(), st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_sip_ignores_vertex_names(pair, rnd):
    G, f = pair
    perm = list(range(G.n))
    rnd.shuffle(perm)
    H = _relabel(G, perm)
    g = VertexPair(perm[f.a], perm[f.b])
    assert decide_sip(G, f, 3).answer == decide_sip(H, g, 3).answer


@pytest.mark.property_based
@given(pairs(min_n=3, max_n=6))
@settings(max_examples=60, deadline=None)
def test_atoms_match_brute_force(pair):
    G, f = pair
    H = G.with_edges([f])
    assert decompose_atoms(H).atoms == brute_force_atoms(H)


@pytest.mark.property_based
@given(st.lists(st.floats(0.2, 5.0), min_size=3, max_size=3))
@settings(max_examples=100)
def test_triangles_from_plain_sides(sides):
    a, b, c = sorted(sides)
    assume(c < a + b - 0.05)
    D = np.array([[0, a * a, b * b], [a * a, 0, c * c], [b * b, c * c, 0]])
    assert gram_realizability(D, 2)
    assert cayley_menger_determinant(D) < 0


@pytest.mark.property_based
@given(st.integers(0, 2**32 - 1))
@settings(max_examples=100)
def test_apex_interval_contains_a_realized_value(seed):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(4, 3))

    def d2(i: int, j: int) -> float:
        return float(np.sum((P[i] - P[j]) ** 2))

    tri = TriangleLengths(d2(1, 2), d2(1, 3), d2(2, 3))
    (lo, hi), = apex_pair_interval(tri, d2(0, 2), d2(0, 3), 3).intervals
    scale = max(1.0, hi)
    assert lo - 1e-7 * scale <= d2(0, 1) <= hi + 1e-7 * scale


@st.composite
def interval_sets(draw) -> IntervalSet:
    points = draw(st.lists(st.floats(0.0, 100.0), min_size=1, max_size=8))
    widths = draw(st.lists(st.floats(0.0, 5.0), min_size=len(points), max_size=len(points)))
    return IntervalSet.merged([(p, p + w) for p, w in zip(points, widths)], Provenance.exact())


@pytest.mark.property_based
@given(interval_sets(), interval_sets())
@settings(max_examples=100)
def test_glue_is_an_intersection(a, b):
    ab = glue_intervals([a, b])
    assert ab.intervals == glue_intervals([b, a]).intervals
    for lo, hi in ab.intervals:
        mid = (lo + hi) / 2
        assert a.contains(mid) and b.contains(mid)

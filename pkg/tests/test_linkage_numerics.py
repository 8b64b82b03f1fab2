from __future__ import annotations

import math

import numpy as np
import pytest

from sip3.core.errors import LinkageError, LinkageInfeasible, PreconditionError
from sip3.models.graph import VertexPair, build_graph, complete_graph, path_graph
from sip3.models.linkage import IntervalSet, Linkage, Provenance, SamplingVerdict, TriangleLengths
from sip3.services import linkage_numerics
from sip3.services.linkage_numerics import (
    apex_pair_interval,
    cayley_menger_determinant,
    ccs_intervals,
    covering_map_report,
    glue_intervals,
    gram_realizability,
    realize,
    sample_ccs,
)


def _path_linkage() -> Linkage:
    return Linkage(path_graph(3), {(0, 1): 1.0, (1, 2): 4.0})


def test_linkage_validation():
    with pytest.raises(LinkageError):
        Linkage(path_graph(2), {(0, 1): -1.0})
    with pytest.raises(LinkageError):
        Linkage(path_graph(3), {(0, 1): 1.0})
    with pytest.raises(LinkageError):
        Linkage(path_graph(3), {(0, 1): 1.0, (1, 2): 1.0, (0, 2): 1.0})
    L = Linkage(path_graph(2), {(1, 0): 2.0})
    assert L.length((0, 1)) == 2.0


def test_interval_set_validation_and_text():
    with pytest.raises(LinkageError):
        IntervalSet(((0.0, 2.0), (1.0, 3.0)))
    with pytest.raises(LinkageError):
        IntervalSet(((2.0, 1.0),))
    s = IntervalSet.merged([(1, 1), (9, 9), (1.0000001, 1.0000002)], Provenance.exact(), gap=1e-3)
    assert str(s) == "{[1,1],[9,9]}"
    assert SamplingVerdict.of(s) is SamplingVerdict.REFUTED
    assert str(Provenance.sampled(500, 1e-3)) == "sampled(samples=500, gap=0.001)"


def test_realize_unit_tetrahedron():
    L = Linkage(complete_graph(4), {e: 1.0 for e in complete_graph(4).edges})
    P = realize(L, 3, seed=1, restarts=50)
    assert P is not None
    assert P.max_residual(L) <= 1e-8
    assert realize(L, 2, seed=1, restarts=20) is None


def test_infeasible_triangle():
    G = complete_graph(3)
    L = Linkage(G, {(0, 1): 1.0, (1, 2): 1.0, (0, 2): 9.0})
    assert realize(L, 3, seed=2, restarts=20) is None
    # the same triangle with a pendant 3 on 2; its nonedge 03 has no samples at all
    H = build_graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])
    bad = Linkage(H, {(0, 1): 1.0, (1, 2): 1.0, (0, 2): 9.0, (2, 3): 1.0})
    with pytest.raises(LinkageInfeasible):
        sample_ccs(bad, [(0, 3)], 3, samples=10, seed=1)
    with pytest.raises(LinkageInfeasible):
        ccs_intervals(bad, (0, 3), 3, samples=10, seed=1)


def test_sample_ccs_values_lie_on_the_right_range():
    values = sample_ccs(_path_linkage(), [(0, 2)], 2, samples=200, seed=3)
    assert values
    assert all(1.0 - 1e-6 <= v <= 9.0 + 1e-6 for (v,) in values)


def test_sample_ccs_rejects_edges():
    with pytest.raises(PreconditionError):
        sample_ccs(_path_linkage(), [(0, 1)], 2, samples=5, seed=1)


def test_collinear_path_has_two_values():
    result = ccs_intervals(_path_linkage(), (0, 2), 1, samples=2000, seed=7)
    assert str(result) == "{[1,1],[9,9]}"
    assert str(result.provenance).startswith("sampled(")


def test_planar_path_is_one_interval():
    result = ccs_intervals(_path_linkage(), (0, 2), 2, samples=500, seed=7)
    assert result.is_single_interval
    (lo, hi), = result.intervals
    assert lo == pytest.approx(1.0, abs=1e-3)
    assert hi == pytest.approx(9.0, abs=1e-3)


def test_ccs_contains_every_sample():
    G = complete_graph(4).without_edges([(0, 1)])
    L = Linkage(G, {e: 1.0 for e in G.edges})
    values = sample_ccs(L, [(0, 1)], 3, samples=300, seed=4)
    result = ccs_intervals(L, (0, 1), 3, samples=300, seed=4)
    assert all(result.contains(v, tol=1e-9) for (v,) in values)
    assert result.intervals[0][0] == pytest.approx(0.0, abs=1e-3)
    assert result.intervals[-1][1] == pytest.approx(3.0, abs=1e-3)


def test_ccs_is_deterministic():
    a = ccs_intervals(_path_linkage(), (0, 2), 2, samples=200, seed=11)
    b = ccs_intervals(_path_linkage(), (0, 2), 2, samples=200, seed=11)
    assert a == b


def test_apex_interval_of_the_regular_tetrahedron():
    tri = TriangleLengths(1.0, 1.0, 1.0)
    (lo, hi), = apex_pair_interval(tri, 1.0, 1.0, 3).intervals
    assert lo == pytest.approx(0.0, abs=1e-12)
    assert hi == pytest.approx(3.0)
    flat = apex_pair_interval(tri, 1.0, 1.0, 2)
    assert len(flat.intervals) == 2
    with pytest.raises(LinkageError):
        apex_pair_interval(tri, 1.0, 16.0, 3)


def test_gram_and_cayley_menger():
    unit = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=float)
    assert gram_realizability(unit, 2)
    assert not gram_realizability(unit, 1)
    bad = np.array([[0, 1, 9], [1, 0, 1], [9, 1, 0]], dtype=float)
    assert not gram_realizability(bad, 3)
    # bordered determinant is -16 area^2 for a triangle, 288 volume^2 for a tetrahedron
    assert cayley_menger_determinant(unit) == pytest.approx(-3.0)
    tet = np.ones((4, 4)) - np.eye(4)
    assert cayley_menger_determinant(tet) == pytest.approx(4.0)
    with pytest.raises(LinkageError):
        gram_realizability(np.array([[0, 1], [2, 0]], dtype=float), 1)


def test_glue_intervals_intersects():
    a = IntervalSet(((0.0, 2.0), (4.0, 6.0)), Provenance.exact())
    b = IntervalSet(((1.0, 5.0),), Provenance.exact())
    assert glue_intervals([a, b]).intervals == ((1.0, 2.0), (4.0, 5.0))
    with pytest.raises(PreconditionError):
        glue_intervals([])


def test_covering_report_for_a_planar_path():
    report = covering_map_report(_path_linkage(), (0, 2), 2, samples=100, seed=5, starts=3)
    assert len(report.ranges) == 3
    assert report.ok
    assert all(c >= 0.95 for c in report.coverage())


def test_triangle_lengths_must_be_positive():
    with pytest.raises(LinkageError):
        TriangleLengths(0.0, 1.0, 1.0)
    assert TriangleLengths(4.0, 9.0, 16.0).plain() == (2.0, 3.0, 4.0)
    assert math.isclose(TriangleLengths(1, 1, 1).distance_matrix()[0, 1], 1.0)


def test_restart_setting_bounds_the_cold_starts(monkeypatch):
    monkeypatch.setenv("SIP3_PROBE_RESTARTS", "3")
    walk = linkage_numerics._Continuation(_path_linkage(), VertexPair(0, 2), 1, seed=5)
    tried: list[float] = []

    def never(t: float, x0: np.ndarray) -> None:
        tried.append(t)
        return None

    monkeypatch.setattr(walk, "at", never)
    assert walk.cold(4.0) is None
    assert tried == [4.0, 4.0, 4.0]

from __future__ import annotations

import math

import numpy as np
import pytest

from sip3.core.errors import CertificateError, PreconditionError
from sip3.models.certificate import Certificate
from sip3.models.graph import VertexPair, build_graph, complete_graph
from sip3.models.linkage import Linkage, TriangleLengths
from sip3.services import certificates
from sip3.services.certificates import (
    base_certificate,
    build_certificate,
    check_certificate,
    decorate_degree3,
    transfer_through_k4,
    verify_certificate,
)
from sip3.services.linkage_numerics import apex_pair_interval, gram_realizability
from sip3.services.patterns import catalog


def _witnesses_hold(c: Certificate) -> None:
    assert len(c.witnesses) == 2
    for w, (lo, hi) in zip(c.witnesses, c.values):
        assert w.max_residual(c.linkage) <= 1e-8
        assert lo - 1e-6 <= w.distance2(c.f.a, c.f.b) <= hi + 1e-6


def test_k5_unit_map_has_a_zero_cluster():
    c = base_certificate("k5-unit")
    assert c.values == ((0.0, 0.0), (8 / 3, 8 / 3))
    assert not c.positive
    _witnesses_hold(c)

    check = check_certificate(c, samples=600, seed=3)
    assert check.ok
    assert not check.proper
    assert [round(x, 3) for x in check.clusters.centers()] == [0.0, round(8 / 3, 3)]


def test_k5_proper_map_closed_form():
    c = base_certificate("k5-proper")
    low = (math.sqrt(11 / 3) - math.sqrt(2 / 3)) ** 2
    high = (math.sqrt(11 / 3) + math.sqrt(2 / 3)) ** 2
    assert c.values[0][0] == pytest.approx(low)
    assert c.values[1][0] == pytest.approx(high)
    assert c.positive and c.singletons
    _witnesses_hold(c)

    check = check_certificate(c, samples=600, seed=3)
    assert check.proper, check.reasons
    assert verify_certificate(c, samples=600, seed=3)


def test_unknown_base_kind():
    with pytest.raises(PreconditionError):
        base_certificate("k33")  # type: ignore[arg-type]


def test_certificate_rejects_close_values_and_edges():
    G = complete_graph(5).without_edges([(0, 1)])
    L = Linkage(G, {e: 1.0 for e in G.edges})
    with pytest.raises(CertificateError):
        Certificate(L, VertexPair(0, 1), ((1.0, 1.0), (1.0005, 1.0005)), "external")
    with pytest.raises(CertificateError):
        Certificate(L, VertexPair(0, 2), ((1.0, 1.0), (2.0, 2.0)), "external")


def test_a_single_interval_is_rejected():
    # a path flexes through every value between its two extremes
    L = Linkage(build_graph(3, [(0, 1), (1, 2)]), {(0, 1): 1.0, (1, 2): 4.0})
    c = Certificate(L, VertexPair(0, 2), ((1.0, 1.0), (9.0, 9.0)), "external")
    check = check_certificate(c, samples=300, seed=1)
    assert not check.ok
    assert any("single interval" in r for r in check.reasons)
    assert not verify_certificate(c, samples=300, seed=1)


def test_transfer_through_k4_pins_two_values():
    ell1 = TriangleLengths(1.0, 1.0, 1.0)
    ell2 = TriangleLengths(1.0, 1.0, 2.25)
    L1, L2 = transfer_through_k4(ell1, ell2)
    assert L1.length((0, 2)) == pytest.approx(1.5625)
    assert L1.length((0, 3)) == pytest.approx(0.0625)
    assert L1.len2[(0, 2)] == L2.len2[(0, 2)]

    v1 = apex_pair_interval(ell1, 1.5625, 0.0625, 3)
    v2 = apex_pair_interval(ell2, 1.5625, 0.0625, 3)
    assert v1.widths()[0] == pytest.approx(0.0, abs=1e-9)
    assert v1.centers()[0] == pytest.approx(1.3125)
    assert v2.centers()[0] == pytest.approx(0.6875)


def test_transfer_preconditions():
    with pytest.raises(CertificateError):
        transfer_through_k4(TriangleLengths(1, 1, 1), TriangleLengths(1, 1, 1))
    with pytest.raises(CertificateError):
        transfer_through_k4(TriangleLengths(1, 1, 1), TriangleLengths(2, 1, 1.5))


def test_degree3_decoration_shares_the_new_lengths():
    ell1 = TriangleLengths(1.0, 1.0, 1.0)
    ell2 = TriangleLengths(1.0, 1.0, 2.25)
    L1, L2 = decorate_degree3(ell1, ell2)
    for j in range(3):
        assert L1.length((j, 3)) == L2.length((j, 3))
        assert L1.length((j, 3)) > 0
    for L in (L1, L2):
        D = np.zeros((4, 4))
        for (u, v), val in L.len2.items():
            D[u, v] = D[v, u] = val
        assert gram_realizability(D, 2)


def test_decoration_does_not_depend_on_the_k222_sweep_seed(monkeypatch):
    ell1 = TriangleLengths(1.0, 1.0, 1.0)
    ell2 = TriangleLengths(1.0, 1.0, 2.25)
    before = [L.len2 for L in decorate_degree3(ell1, ell2)]
    monkeypatch.setattr(certificates, "K222_SEED", certificates.K222_SEED + 1)
    after = [L.len2 for L in decorate_degree3(ell1, ell2)]
    assert before == after
    assert certificates.DECORATION_SEED != certificates.K222_SEED


def test_decoration_needs_planar_triangles():
    with pytest.raises(CertificateError):
        decorate_degree3(TriangleLengths(1, 1, 9), TriangleLengths(1, 1, 1))


def test_build_certificate_on_k5_minus_f():
    G = complete_graph(5).without_edges([(2, 4)])
    c = build_certificate(G, (2, 4))
    assert c is not None and c.kind == "k5-proper"
    assert c.f == VertexPair(2, 4)
    assert c.linkage.graph == G
    _witnesses_hold(c)


def test_build_certificate_preconditions_and_sip_pairs():
    assert build_certificate(complete_graph(4).without_edges([(0, 1)]), (0, 1)) is None
    with pytest.raises(PreconditionError):
        build_certificate(complete_graph(4), (0, 1))
    with pytest.raises(PreconditionError):
        build_certificate(complete_graph(4), (0, 7))


@pytest.mark.slow
def test_k222_base_map():
    c = base_certificate("k222")
    assert c.positive
    _witnesses_hold(c)
    assert verify_certificate(c, samples=2000, seed=5)


@pytest.mark.slow
def test_build_certificate_on_k222_minus_f():
    G = catalog().k222.without_edges([(0, 2)])
    c = build_certificate(G, (0, 2))
    assert c is not None and c.kind == "k222"
    _witnesses_hold(c)

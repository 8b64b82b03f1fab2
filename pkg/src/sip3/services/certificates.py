"""Proper non-3-SIP length maps: base maps for K5 and K2,2,2, transfer through
K4, degree-3 decorations, and numerical verification."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np
from networkx.algorithms import isomorphism

from sip3.core.errors import CertificateError, LinkageError, PreconditionError
from sip3.models.certificate import MIN_VALUE_GAP, Certificate, CertificateCheck
from sip3.models.graph import Edge, Graph, PairLike, VertexPair, as_pair, complete_graph
from sip3.models.linkage import IntervalSet, Linkage, Provenance, Realization, TriangleLengths
from sip3.services.graph_core import induced_subgraph
from sip3.services.linkage_numerics import apex_pair_interval, ccs_intervals, gram_realizability
from sip3.services.patterns import k222
from sip3.services.sip import decide_sip

logger = logging.getLogger(__name__)

BaseKind = Literal["k5-unit", "k5-proper", "k222"]

K222_SEED = 20
K222_CANDIDATES = 4000
K222_GRID = 20000
# K2,2,2 with f = (0, 2): path a - b' - a' - b and the two apexes
K222_PATH = (0, 3, 1, 2)
# rotations tried when the two triangles leave the decoration apex underdetermined
DECORATION_SEED = 31
K222_APEXES = (4, 5)
WITNESS_TOL = 1e-8


def _k5_minus_f() -> Graph:
    return complete_graph(5).without_edges([(0, 1)])


def _unit_triangle() -> np.ndarray:
    R = 1 / math.sqrt(3)
    return np.array([[R, 0.0, 0.0], [-R / 2, 0.5, 0.0], [-R / 2, -0.5, 0.0]])


def _k5_unit() -> Certificate:
    G = _k5_minus_f()
    L = Linkage(G, {e: 1.0 for e in G.edges})
    h = math.sqrt(2 / 3)
    tri = _unit_triangle()
    same = np.vstack([[0.0, 0.0, h], [0.0, 0.0, h], tri])
    opposite = np.vstack([[0.0, 0.0, h], [0.0, 0.0, -h], tri])
    return Certificate(
        L,
        VertexPair(0, 1),
        ((0.0, 0.0), (8 / 3, 8 / 3)),
        "k5-unit",
        (Realization(3, same), Realization(3, opposite)),
        ("claimed value 0 is not positive",),
    )


def _k5_proper() -> Certificate:
    # unit K4 on {1, 2, 3, 4}; vertex 0 at plain distance 2 from 2, 3, 4
    G = _k5_minus_f()
    lengths = {e: (4.0 if 0 in e else 1.0) for e in G.edges}
    L = Linkage(G, lengths)
    h1 = math.sqrt(2 / 3)
    h0 = math.sqrt(11 / 3)
    tri = _unit_triangle()
    near = np.vstack([[0.0, 0.0, h0], [0.0, 0.0, h1], tri])
    far = np.vstack([[0.0, 0.0, h0], [0.0, 0.0, -h1], tri])
    low = (h0 - h1) ** 2
    high = (h0 + h1) ** 2
    return Certificate(
        L,
        VertexPair(0, 1),
        ((low, low), (high, high)),
        "k5-proper",
        (Realization(3, near), Realization(3, far)),
    )


# -- K2,2,2 base map --------------------------------------------------------


@dataclass(frozen=True)
class _Sweep:
    D: np.ndarray
    z: np.ndarray        # (4, grid) heights along the apex axis, path order
    r: np.ndarray        # (4, grid) circle radii
    delta: np.ndarray    # (3, grid) angle steps along the path
    feasible: np.ndarray
    values: dict[tuple[int, int], np.ndarray]


def _k222_sweep(len2: dict[Edge, float], grid: int = K222_GRID) -> _Sweep | None:
    """Realizations with apexes c, c' at distance D on an axis: each path vertex
    rides a circle about the axis and f is a function of D and three angle signs."""

    def ell(u: int, v: int) -> float:
        return len2[(min(u, v), max(u, v))]

    c, cc = K222_APEXES
    rho2 = np.array([ell(p, c) for p in K222_PATH])
    sig2 = np.array([ell(p, cc) for p in K222_PATH])
    d_lo = float(np.max(np.abs(np.sqrt(rho2) - np.sqrt(sig2))))
    d_hi = float(np.min(np.sqrt(rho2) + np.sqrt(sig2)))
    if d_hi <= d_lo:
        return None
    D = np.linspace(d_lo, d_hi, grid + 2)[1:-1]
    D = D[D > 0]
    if D.size == 0:
        return None
    z = (rho2[:, None] - sig2[:, None] + D[None, :] ** 2) / (2 * D[None, :])
    r2 = rho2[:, None] - z ** 2
    feasible = np.all(r2 > 1e-12, axis=0)
    r = np.sqrt(np.clip(r2, 1e-300, None))
    deltas = []
    for i in range(3):
        p, q = K222_PATH[i], K222_PATH[i + 1]
        cosd = (r[i] ** 2 + r[i + 1] ** 2 + (z[i] - z[i + 1]) ** 2 - ell(p, q)) / (2 * r[i] * r[i + 1])
        feasible &= np.abs(cosd) <= 1.0
        deltas.append(np.arccos(np.clip(cosd, -1.0, 1.0)))
    delta = np.array(deltas)
    values = {}
    for s2 in (1, -1):
        for s3 in (1, -1):
            theta = delta[0] + s2 * delta[1] + s3 * delta[2]
            values[(s2, s3)] = (z[0] - z[3]) ** 2 + r[0] ** 2 + r[3] ** 2 - 2 * r[0] * r[3] * np.cos(theta)
    return _Sweep(D, z, r, delta, feasible, values)


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    edges = np.diff(np.concatenate(([0], mask.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    return [(int(a), int(b)) for a, b in zip(starts, stops)]


def _sweep_ranges(sweep: _Sweep) -> list[tuple[float, float]]:
    ranges = []
    for a, b in _runs(sweep.feasible):
        for vals in sweep.values.values():
            seg = vals[a:b]
            ranges.append((float(seg.min()), float(seg.max())))
    return ranges


def _sweep_witness(sweep: _Sweep, target: float) -> Realization:
    best: tuple[float, int, tuple[int, int]] | None = None
    for signs, vals in sweep.values.items():
        masked = np.where(sweep.feasible, np.abs(vals - target), np.inf)
        i = int(np.argmin(masked))
        if best is None or masked[i] < best[0]:
            best = (float(masked[i]), i, signs)
    assert best is not None
    _, i, (s2, s3) = best
    thetas = [0.0]
    for k, s in enumerate((1, s2, s3)):
        thetas.append(thetas[-1] + s * float(sweep.delta[k, i]))
    P = np.zeros((6, 3))
    P[K222_APEXES[1]] = [float(sweep.D[i]), 0.0, 0.0]
    for k, p in enumerate(K222_PATH):
        zk, rk = float(sweep.z[k, i]), float(sweep.r[k, i])
        P[p] = [zk, rk * math.cos(thetas[k]), rk * math.sin(thetas[k])]
    return Realization(3, P)


def _k222_candidates(rng: np.random.Generator):
    octa = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float)
    for i in range(K222_CANDIDATES):
        if i % 2:
            yield octa + 0.35 * rng.standard_normal((6, 3))
        else:
            yield rng.uniform(-1.0, 1.0, size=(6, 3))


@lru_cache(maxsize=1)
def _k222() -> Certificate:
    G = k222().without_edges([(0, 2)])
    rng = np.random.default_rng(K222_SEED)
    for attempt, pts in enumerate(_k222_candidates(rng)):
        len2 = {(u, v): float(np.sum((pts[u] - pts[v]) ** 2)) for u, v in G.edge_list()}
        scale = max(len2.values())
        if min(len2.values()) < 1e-2 * scale:
            continue
        sweep = _k222_sweep(len2)
        if sweep is None or not sweep.feasible.any():
            continue
        merged = IntervalSet.merged(_sweep_ranges(sweep), Provenance.exact(), gap=1e-9 * scale)
        if len(merged.intervals) != 2:
            continue
        (lo1, hi1), (lo2, hi2) = merged.intervals
        if lo1 <= MIN_VALUE_GAP or lo2 - hi1 <= 0.05 * scale:
            continue
        witnesses = tuple(_sweep_witness(sweep, (lo + hi) / 2) for lo, hi in merged.intervals)
        logger.info("K2,2,2 base map found after %d candidates: %s", attempt + 1, merged)
        return Certificate(
            Linkage(G, len2),
            VertexPair(0, 2),
            merged.intervals,  # type: ignore[arg-type]
            "k222",
            witnesses,
            ("clusters are intervals from a sweep over the apex distance",),
        )
    raise CertificateError("no two-cluster K2,2,2 map found")


def base_certificate(kind: BaseKind) -> Certificate:
    if kind == "k5-unit":
        return _k5_unit()
    if kind == "k5-proper":
        return _k5_proper()
    if kind == "k222":
        return _k222()
    raise PreconditionError(f"unknown base certificate {kind!r}")


# -- transfer and decoration ----------------------------------------------


def _check_triangle(tri: TriangleLengths) -> None:
    if not gram_realizability(tri.distance_matrix(), 3):
        raise CertificateError(f"triangle {tri} is not realizable")


def _transfer_attachments(ell1: TriangleLengths, ell2: TriangleLengths) -> tuple[float, float]:
    """Squared lengths (v1v3, v1v4) putting v1 on the line v3v4 for both maps."""
    if not (math.isclose(ell1.pq, ell2.pq) and math.isclose(ell1.pr, ell2.pr)):
        raise CertificateError("transfer maps must agree off v3v4")
    if math.isclose(ell1.qr, ell2.qr, rel_tol=1e-12, abs_tol=1e-15):
        raise CertificateError("transfer needs two distinct lengths on v3v4")
    _check_triangle(ell1)
    _check_triangle(ell2)
    small, large = sorted((math.sqrt(ell1.qr), math.sqrt(ell2.qr)))
    x, y = (large + small) / 2, (large - small) / 2
    if math.isclose(x * x, ell1.pq):
        x, y = y, x
    return x * x, y * y


def _k4_minus_f(tri: TriangleLengths, a2: float, b2: float) -> Linkage:
    # 0 = v1, 1 = v2, 2 = v3, 3 = v4; f = v1v2
    G = complete_graph(4).without_edges([(0, 1)])
    return Linkage(G, {(0, 2): a2, (0, 3): b2, (1, 2): tri.pq, (1, 3): tri.pr, (2, 3): tri.qr})


def transfer_through_k4(ell1: TriangleLengths, ell2: TriangleLengths) -> tuple[Linkage, Linkage]:
    """Attach v1 to v3 and v4 with plain lengths x, y where x + y and |x - y| are the
    two plain lengths of v3v4; each output then pins v1 and f = v1v2 to one value."""
    a2, b2 = _transfer_attachments(ell1, ell2)
    v1 = apex_pair_interval(ell1, a2, b2, 3)
    v2 = apex_pair_interval(ell2, a2, b2, 3)
    if abs(v1.centers()[0] - v2.centers()[0]) <= 1e-12:
        raise CertificateError("transferred values coincide")
    return _k4_minus_f(ell1, a2, b2), _k4_minus_f(ell2, a2, b2)


def _canonical(tri: TriangleLengths) -> np.ndarray:
    """p1 at the origin, p2 on the +x axis, p3 in the upper half plane."""
    a = math.sqrt(tri.pq)
    x3 = (tri.pr - tri.qr + tri.pq) / (2 * a)
    y3 = math.sqrt(max(0.0, tri.pr - x3 * x3))
    return np.array([[0.0, 0.0], [a, 0.0], [x3, y3]])


def _rotate(P: np.ndarray, theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return P @ np.array([[c, s], [-s, c]])


def _nearest_on_line(normal: np.ndarray, offset: float, point: np.ndarray) -> np.ndarray:
    return point - ((normal @ point - offset) / (normal @ normal)) * normal


def _decoration_apex(ell1: TriangleLengths, ell2: TriangleLengths) -> tuple[np.ndarray, np.ndarray, tuple[float, float, float]]:
    """A point equidistant from corresponding vertices of the two triangles.

    Returns the point in the canonical frame of each triangle and the squared
    attachment lengths.
    """
    p, q = _canonical(ell1), _canonical(ell2)
    if np.allclose(p, q, atol=1e-12):
        raise CertificateError("decoration needs two different triangles")
    rng = np.random.default_rng(DECORATION_SEED)
    theta = 0.0
    for _ in range(1000):
        pr = _rotate(p, theta)
        n1, o1 = q[1] - pr[1], (q[1] @ q[1] - pr[1] @ pr[1]) / 2
        n2, o2 = q[2] - pr[2], (q[2] @ q[2] - pr[2] @ pr[2]) / 2
        centroid = (pr.sum(axis=0) + q.sum(axis=0)) / 6
        if np.allclose(n1, 0, atol=1e-12):
            x = _nearest_on_line(n2, o2, centroid)
        elif np.allclose(n2, 0, atol=1e-12):
            x = _nearest_on_line(n1, o1, centroid)
        else:
            det = n1[0] * n2[1] - n1[1] * n2[0]
            if abs(det) <= 1e-6:
                theta = float(rng.uniform(0.0, 2 * math.pi))
                continue
            x = np.linalg.solve(np.array([n1, n2]), np.array([o1, o2]))
        lengths = tuple(float(np.sum((x - pr[j]) ** 2)) for j in range(3))
        if min(lengths) > 1e-6:
            return _rotate(x[None, :], -theta)[0], x, lengths  # type: ignore[return-value]
        theta = float(rng.uniform(0.0, 2 * math.pi))
    raise CertificateError("no rotation gives a usable decoration point")


def decorate_degree3(ell1: TriangleLengths, ell2: TriangleLengths) -> tuple[Linkage, Linkage]:
    """K4 maps (vertex 3 = the new vertex) extending both triangle maps in the plane."""
    for tri in (ell1, ell2):
        if not gram_realizability(tri.distance_matrix(), 2):
            raise CertificateError(f"triangle {tri} has no 2-realization")
    _, _, (l0, l1, l2) = _decoration_apex(ell1, ell2)
    out = []
    for tri in (ell1, ell2):
        out.append(
            Linkage(
                complete_graph(4),
                {(0, 1): tri.pq, (0, 2): tri.pr, (1, 2): tri.qr, (0, 3): l0, (1, 3): l1, (2, 3): l2},
            )
        )
    return out[0], out[1]


# -- recursive builder ------------------------------------------------------


def _relabel(cert: Certificate, n: int, target: list[int], kind: str | None = None) -> Certificate:
    """Move a certificate onto ids target[i] of an n-vertex graph."""
    edges = [(target[u], target[v]) for u, v in cert.linkage.graph.edges]
    G = Graph(n, frozenset((min(u, v), max(u, v)) for u, v in edges))
    lengths = {(min(target[u], target[v]), max(target[u], target[v])): val for (u, v), val in cert.linkage.len2.items()}
    witnesses = []
    for w in cert.witnesses:
        P = np.zeros((n, w.points.shape[1]))
        for i, t in enumerate(target):
            P[t] = w.points[i]
        witnesses.append(Realization(w.d, P))
    return Certificate(
        Linkage(G, lengths),
        VertexPair(target[cert.f.a], target[cert.f.b]),
        cert.values,
        kind or cert.kind,
        tuple(witnesses),
        cert.notes,
    )


def _lift(cert: Certificate, sub: Graph, n: int) -> tuple[dict[Edge, float], list[np.ndarray]]:
    lengths = {}
    for (u, v), val in cert.linkage.len2.items():
        a, b = sub.label(u), sub.label(v)
        lengths[(min(a, b), max(a, b))] = val
    points = []
    for w in cert.witnesses:
        P = np.zeros((n, w.points.shape[1]))
        for i in sub.vertices():
            P[sub.label(i)] = w.points[i]
        points.append(P)
    return lengths, points


def _from_k5(G: Graph, pair: VertexPair) -> Certificate:
    rest = [v for v in G.vertices() if v not in (pair.a, pair.b)]
    return _relabel(_k5_proper(), G.n, [pair.a, pair.b, *rest])


def _from_k222(G: Graph, pair: VertexPair) -> Certificate | None:
    H = G.with_edges([pair]).to_networkx()
    base = k222().to_networkx()
    for iso in isomorphism.GraphMatcher(base, H).isomorphisms_iter():
        if {iso[0], iso[2]} == {pair.a, pair.b}:
            return _relabel(_k222(), G.n, [iso[i] for i in range(6)])
    return None


def _try_transfer(G: Graph, pair: VertexPair) -> Certificate | None:
    for u in (pair.a, pair.b):
        v = pair.other(u)
        if G.degree(u) != 2:
            continue
        x, w = sorted(G.adj[u])
        if G.has_edge(x, w) or not (G.has_edge(v, x) and G.has_edge(v, w)):
            continue
        sub = induced_subgraph(G, [y for y in G.vertices() if y != u])
        sub_cert = build_certificate(sub, (sub.local(x), sub.local(w)))
        if sub_cert is None or not sub_cert.singletons:
            continue
        lengths, points = _lift(sub_cert, sub, G.n)
        vx, vw = lengths[(min(v, x), max(v, x))], lengths[(min(v, w), max(v, w))]
        tris = [TriangleLengths(vx, vw, value) for value, _ in sub_cert.values]
        try:
            a2, b2 = _transfer_attachments(tris[0], tris[1])
            values = [apex_pair_interval(t, a2, b2, 3) for t in tris]
        except (CertificateError, LinkageError) as exc:
            logger.debug("transfer at %d rejected: %s", u, exc)
            continue
        c1, c2 = (vals.centers()[0] for vals in values)
        if abs(c1 - c2) <= MIN_VALUE_GAP:
            continue
        lengths[(min(u, x), max(u, x))] = a2
        lengths[(min(u, w), max(u, w))] = b2
        witnesses = []
        for P in points:
            s_vec = P[w] - P[x]
            s = float(np.linalg.norm(s_vec))
            t = (a2 - b2 + s * s) / (2 * s)
            P[u] = P[x] + t * s_vec / s
            witnesses.append(Realization(P.shape[1], P))
        if c1 > c2:
            c1, c2 = c2, c1
            witnesses.reverse()
        logger.info("transfer step at vertex %d over nonedge %d,%d", u, x, w)
        return Certificate(
            Linkage(G, lengths),
            pair,
            ((c1, c1), (c2, c2)),
            f"transfer({sub_cert.kind})",
            tuple(witnesses),
            sub_cert.notes,
        )
    return None


def _frame(P: np.ndarray, ids: list[int]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    origin = P[ids[0]]
    e1 = P[ids[1]] - origin
    e1 = e1 / np.linalg.norm(e1)
    rest = P[ids[2]] - origin
    e2 = rest - (rest @ e1) * e1
    norm = np.linalg.norm(e2)
    if norm < 1e-12:
        helper = np.zeros_like(e1)
        helper[int(np.argmin(np.abs(e1)))] = 1.0
        e2 = helper - (helper @ e1) * e1
        norm = np.linalg.norm(e2)
    return origin, e1, e2 / norm


def _try_decoration(G: Graph, pair: VertexPair) -> Certificate | None:
    for z in G.vertices():
        if z in (pair.a, pair.b) or G.degree(z) != 3:
            continue
        sub = induced_subgraph(G, [y for y in G.vertices() if y != z])
        sub_cert = build_certificate(sub, (sub.local(pair.a), sub.local(pair.b)))
        if sub_cert is None or len(sub_cert.witnesses) != 2:
            continue
        lengths, points = _lift(sub_cert, sub, G.n)
        nbrs = sorted(G.adj[z])
        try:
            tris = [
                TriangleLengths(
                    float(np.sum((P[nbrs[0]] - P[nbrs[1]]) ** 2)),
                    float(np.sum((P[nbrs[0]] - P[nbrs[2]]) ** 2)),
                    float(np.sum((P[nbrs[1]] - P[nbrs[2]]) ** 2)),
                )
                for P in points
            ]
        except LinkageError:
            continue
        canon = [_canonical(t) for t in tris]
        if np.allclose(canon[0], canon[1], atol=1e-9):
            apex = canon[0].mean(axis=0)
            local = [apex, apex]
            attach = tuple(float(np.sum((apex - canon[0][j]) ** 2)) for j in range(3))
        else:
            try:
                a1, a2, attach = _decoration_apex(tris[0], tris[1])
            except CertificateError as exc:
                logger.debug("decoration at %d rejected: %s", z, exc)
                continue
            local = [a1, a2]
        witnesses = []
        for P, (ax, ay) in zip(points, local):
            origin, e1, e2 = _frame(P, nbrs)
            P[z] = origin + ax * e1 + ay * e2
            witnesses.append(Realization(P.shape[1], P))
        for j, y in enumerate(nbrs):
            lengths[(min(z, y), max(z, y))] = attach[j]
        logger.info("decoration step at vertex %d on %s", z, nbrs)
        return Certificate(
            Linkage(G, lengths),
            pair,
            sub_cert.values,
            f"decorate({sub_cert.kind})",
            tuple(witnesses),
            sub_cert.notes,
        )
    return None


def build_certificate(G: Graph, f: PairLike) -> Certificate | None:
    """A proper non-3-SIP map for recognized shapes; None outside them."""
    pair = as_pair(f)
    if pair.b >= G.n:
        raise PreconditionError(f"pair {pair} out of range")
    if G.has_edge(pair.a, pair.b):
        raise PreconditionError(f"{pair} is already an edge")
    H = G.with_edges([pair])
    if not H.is_connected() or decide_sip(G, pair, 3).answer:
        return None
    if G.n == 5 and H.is_complete():
        return _from_k5(G, pair)
    if G.n == 6 and H.m == 12 and all(H.degree(v) == 4 for v in H.vertices()):
        found = _from_k222(G, pair)
        if found is not None:
            return found
    return _try_transfer(G, pair) or _try_decoration(G, pair)


def check_certificate(
    c: Certificate,
    *,
    samples: int = 1000,
    seed: int | None = None,
    gap: float | None = None,
) -> CertificateCheck:
    reasons: list[str] = []
    if not c.linkage.is_positive():
        reasons.append("edge lengths must be positive")
    clusters = ccs_intervals(c.linkage, c.f, 3, samples, seed, gap)
    if len(clusters.intervals) < 2:
        reasons.append(f"sampled CCS is a single interval {clusters}")
    matched = False
    if len(clusters.intervals) == 2:
        matched = True
        for (lo, hi), center in zip(c.values, clusters.centers()):
            claimed = (lo + hi) / 2
            if abs(center - claimed) > MIN_VALUE_GAP + 0.01 * (hi - lo):
                matched = False
                reasons.append(f"sampled cluster at {center:.6g} does not match claimed {claimed:.6g}")
    elif len(clusters.intervals) > 2:
        reasons.append(f"sampled CCS has {len(clusters.intervals)} clusters")
    for w, (lo, hi) in zip(c.witnesses, c.values):
        resid = w.max_residual(c.linkage)
        value = w.distance2(c.f.a, c.f.b)
        if resid > WITNESS_TOL or not (lo - 1e-6 <= value <= hi + 1e-6):
            reasons.append(f"witness off by {resid:.2e} with f at {value:.6g}")
    positive = c.positive and all(lo > 0 for lo, _ in clusters.intervals)
    if not positive:
        reasons.append("claimed value 0 is not positive" if not c.positive else "a sampled cluster touches 0")
    ok = c.linkage.is_positive() and len(clusters.intervals) == 2 and matched and not any(
        r.startswith("witness") for r in reasons
    )
    return CertificateCheck(ok, positive, clusters, matched, tuple(reasons))


def verify_certificate(c: Certificate, *, samples: int = 1000, seed: int | None = None) -> bool:
    check = check_certificate(c, samples=samples, seed=seed)
    if not check.ok:
        logger.info("certificate %s rejected: %s", c.kind, "; ".join(check.reasons))
    return check.ok

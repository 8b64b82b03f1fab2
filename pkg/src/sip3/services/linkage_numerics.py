"""Geometric oracle: realizations, Cayley configuration space samples and
intervals, closed-form apex intervals and distance-matrix tests."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, TypeVar

import networkx as nx
import numpy as np
from scipy.optimize import least_squares

from sip3.core.config import get_settings
from sip3.core.errors import LinkageError, LinkageInfeasible, PreconditionError
from sip3.models.graph import PairLike, VertexPair, as_pair
from sip3.models.linkage import IntervalSet, Linkage, Provenance, ProvenanceKind, Realization, TriangleLengths

logger = logging.getLogger(__name__)

T = TypeVar("T")

MAX_NFEV = 500
BISECT_STEPS = 12
# marching must land well inside the acceptance tolerance, so that points
# just outside a tangency are not mistaken for feasible ones
STRICT_FACTOR = 1e-4


class _Problem:
    """Squared-length stress on a fixed edge list, with the isometry gauge removed:
    vertex i < d has coordinates j >= i fixed at 0."""

    def __init__(self, n: int, d: int, edges: Sequence[tuple[int, int]], targets: Sequence[float]) -> None:
        self.n, self.d = n, d
        self.u = np.array([e[0] for e in edges], dtype=int)
        self.v = np.array([e[1] for e in edges], dtype=int)
        self.targets = np.array(targets, dtype=float)
        free = np.ones((n, d), dtype=bool)
        for i in range(min(n, d)):
            free[i, i:] = False
        self.free = free
        cols = -np.ones((n, d), dtype=int)
        cols[free] = np.arange(int(free.sum()))
        self.cols = cols
        self.size = int(free.sum())

    def points(self, x: np.ndarray) -> np.ndarray:
        P = np.zeros((self.n, self.d))
        P[self.free] = x
        return P

    def residuals(self, x: np.ndarray) -> np.ndarray:
        P = self.points(x)
        diff = P[self.u] - P[self.v]
        return np.einsum("ij,ij->i", diff, diff) - self.targets

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        P = self.points(x)
        diff = 2.0 * (P[self.u] - P[self.v])
        J = np.zeros((len(self.targets), self.size + 1))
        rows = np.arange(len(self.targets))
        for j in range(self.d):
            # fixed coordinates go to the spare last column, dropped below
            cu = np.where(self.cols[self.u, j] >= 0, self.cols[self.u, j], self.size)
            cv = np.where(self.cols[self.v, j] >= 0, self.cols[self.v, j], self.size)
            np.add.at(J, (rows, cu), diff[:, j])
            np.add.at(J, (rows, cv), -diff[:, j])
        return J[:, : self.size]

    def random_start(self, rng: np.random.Generator) -> np.ndarray:
        top = float(self.targets.max()) if len(self.targets) else 1.0
        scale = math.sqrt(top) if top > 0 else 1.0
        return rng.uniform(-scale, scale, size=self.size)

    def solve(self, x0: np.ndarray) -> tuple[np.ndarray, float]:
        if self.size == 0 or len(self.targets) == 0:
            r = self.residuals(x0)
            return x0, float(np.max(np.abs(r))) if len(r) else 0.0
        res = least_squares(
            self.residuals,
            x0,
            jac=self.jacobian,
            method="trf",
            xtol=1e-15,
            ftol=1e-15,
            gtol=None,
            max_nfev=MAX_NFEV,
        )
        return res.x, float(np.max(np.abs(res.fun)))


def _generators(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def _run(jobs: Sequence[Callable[[], T]], workers: int) -> list[T]:
    # results always come back in job order
    if workers <= 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: job(), jobs))


def _problem_for(L: Linkage, d: int, extra: Sequence[tuple[VertexPair, float]] = ()) -> _Problem:
    edges = [e for e in L.len2] + [p.as_edge() for p, _ in extra]
    targets = [L.len2[e] for e in L.len2] + [t for _, t in extra]
    return _Problem(L.graph.n, d, edges, targets)


def _check_dim(d: int) -> int:
    if int(d) < 1:
        raise PreconditionError(f"dimension must be at least 1, got {d}")
    return int(d)


def realize(
    L: Linkage,
    d: int,
    seed: int | None = None,
    restarts: int | None = None,
    *,
    workers: int | None = None,
) -> Realization | None:
    """Randomized restarts of least squares on the squared-length stress.

    None only means nothing was found within `restarts`.
    """
    d = _check_dim(d)
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    restarts = settings.restarts if restarts is None else restarts
    workers = settings.workers if workers is None else workers
    tol = settings.residual_tol
    prob = _problem_for(L, d)

    batch = max(1, workers)
    gens = _generators(seed, restarts)
    for start in range(0, restarts, batch):
        chunk = gens[start : start + batch]
        results = _run([lambda g=g: prob.solve(prob.random_start(g)) for g in chunk], workers)
        for offset, (x, resid) in enumerate(results):
            if resid <= tol:
                logger.debug("realized n=%d in R^%d at restart %d (residual %.2e)", L.graph.n, d, start + offset, resid)
                return Realization(d, prob.points(x))
    logger.debug("no realization of n=%d in R^%d after %d restarts", L.graph.n, d, restarts)
    return None


def _check_nonedges(L: Linkage, F: Iterable[PairLike]) -> list[VertexPair]:
    pairs = [as_pair(f) for f in F]
    for p in pairs:
        if p.b >= L.graph.n:
            raise PreconditionError(f"pair {p} out of range")
        if L.graph.has_edge(p.a, p.b):
            raise PreconditionError(f"{p} is an edge of the linkage")
    return pairs


def _accepted(L: Linkage, d: int, samples: int, seed: int, workers: int) -> list[np.ndarray]:
    prob = _problem_for(L, d)
    tol = get_settings().residual_tol
    jobs = [lambda g=g: prob.solve(prob.random_start(g)) for g in _generators(seed, samples)]
    found = [prob.points(x) for x, resid in _run(jobs, workers) if resid <= tol]
    logger.debug("accepted %d of %d restarts (n=%d, d=%d)", len(found), samples, L.graph.n, d)
    if not found:
        raise LinkageInfeasible("linkage apparently infeasible")
    return found


def _value(P: np.ndarray, pair: VertexPair) -> float:
    diff = P[pair.a] - P[pair.b]
    return float(diff @ diff)


def sample_ccs(
    L: Linkage,
    F: Iterable[PairLike],
    d: int,
    samples: int | None = None,
    seed: int | None = None,
    *,
    workers: int | None = None,
) -> list[tuple[float, ...]]:
    """Squared-length vectors of F over every accepted restart."""
    d = _check_dim(d)
    pairs = _check_nonedges(L, F)
    settings = get_settings()
    found = _accepted(
        L,
        d,
        settings.restarts if samples is None else samples,
        settings.seed if seed is None else seed,
        settings.workers if workers is None else workers,
    )
    return [tuple(_value(P, p) for p in pairs) for P in found]


def _cluster(values: Sequence[float], gap: float) -> list[list[float]]:
    segs: list[list[float]] = []
    for x in sorted(values):
        if segs and x - segs[-1][1] <= gap:
            segs[-1][1] = x
        else:
            segs.append([x, x])
    return segs


def _length_cap(L: Linkage, pair: VertexPair) -> float:
    g = nx.Graph()
    g.add_nodes_from(L.graph.vertices())
    for (u, v), val in L.len2.items():
        g.add_edge(u, v, weight=math.sqrt(val))
    try:
        dist = nx.shortest_path_length(g, pair.a, pair.b, weight="weight")
    except nx.NetworkXNoPath:
        raise LinkageError(f"{pair.a} and {pair.b} are not connected in the linkage") from None
    return float(dist) ** 2


class _Continuation:
    """Warm-started continuation in the squared length t of a pinned pair."""

    def __init__(self, L: Linkage, pair: VertexPair, d: int, seed: int) -> None:
        self.prob = _problem_for(L, d, [(pair, 0.0)])
        settings = get_settings()
        self.strict = settings.residual_tol * STRICT_FACTOR
        self.probes = settings.probe_restarts
        self.rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
        self.warm: dict[float, np.ndarray] = {}

    def _x_of(self, P: np.ndarray) -> np.ndarray:
        return P[self.prob.free]

    def at(self, t: float, x0: np.ndarray) -> np.ndarray | None:
        self.prob.targets[-1] = t
        x, resid = self.prob.solve(x0)
        return x if resid <= self.strict else None

    def cold(self, t: float) -> np.ndarray | None:
        for _ in range(self.probes):
            x = self.at(t, self.prob.random_start(self.rng))
            if x is not None:
                return x
        return None

    def march(self, t0: float, P0: np.ndarray, target: float, step: float) -> tuple[float, np.ndarray]:
        """Walk from the feasible t0 towards target; returns the last feasible value."""
        x = self._x_of(P0)
        t = t0
        sign = 1.0 if target > t0 else -1.0
        while (target - t) * sign > 0:
            nxt = t + sign * min(step, abs(target - t))
            y = self.at(nxt, x)
            if y is None:
                y = self.cold(nxt)
            if y is None:
                # refine where the walk stops
                lo, hi = t, nxt
                for _ in range(BISECT_STEPS):
                    mid = (lo + hi) / 2
                    z = self.at(mid, x)
                    if z is None:
                        hi = mid
                    else:
                        lo, x = mid, z
                return lo, self.prob.points(x)
            t, x = nxt, y
        return t, self.prob.points(x)


def ccs_intervals(
    L: Linkage,
    f: PairLike,
    d: int,
    samples: int | None = None,
    seed: int | None = None,
    gap: float | None = None,
    *,
    workers: int | None = None,
) -> IntervalSet:
    """Sampled CCS of one nonedge as disjoint intervals.

    Clusters of sampled values are split where consecutive samples are more than
    `gap` apart; each such gap is then probed by continuation from both sides and
    survives only when neither walk crosses it. The outer ends are extended the
    same way towards 0 and towards the path-length cap.
    """
    d = _check_dim(d)
    (pair,) = _check_nonedges(L, [f])
    settings = get_settings()
    samples = settings.restarts if samples is None else samples
    seed = settings.seed if seed is None else seed
    gap = settings.cluster_gap if gap is None else float(gap)
    if gap <= 0:
        raise PreconditionError("cluster gap must be positive")
    cap = _length_cap(L, pair)
    found = _accepted(L, d, samples, seed, settings.workers if workers is None else workers)
    by_value = sorted(((_value(P, pair), P) for P in found), key=lambda item: item[0])
    values = [v for v, _ in by_value]
    segs = _cluster(values, gap)
    point_at = {v: P for v, P in by_value}

    walk = _Continuation(L, pair, d, seed)
    step = 0.9 * gap
    ends_lo = [point_at[s[0]] for s in segs]
    ends_hi = [point_at[s[1]] for s in segs]

    for i in range(len(segs) - 1):
        hi_t, hi_P = walk.march(segs[i][1], ends_hi[i], segs[i + 1][0], step)
        segs[i][1], ends_hi[i] = hi_t, hi_P
        if segs[i + 1][0] - hi_t > gap:
            lo_t, lo_P = walk.march(segs[i + 1][0], ends_lo[i + 1], hi_t, step)
            segs[i + 1][0], ends_lo[i + 1] = lo_t, lo_P
    segs[0][0], _ = walk.march(segs[0][0], ends_lo[0], 0.0, step)
    segs[-1][1], _ = walk.march(segs[-1][1], ends_hi[-1], cap, step)

    result = IntervalSet.merged(
        ((lo, hi) for lo, hi in segs), Provenance.sampled(len(values), gap), gap=gap
    )
    logger.info("CCS of %s in R^%d: %s from %d samples", pair, d, result, len(values))
    return result


def apex_pair_interval(tri: TriangleLengths, a2: float, b2: float, d: int) -> IntervalSet:
    """Range of |v1 v2|^2 over placements of v1 with |v1 v3|^2 = a2, |v1 v4|^2 = b2.

    `tri` holds the triangle v2 v3 v4 as (pq, pr, qr) = (|v2v3|^2, |v2v4|^2, |v3v4|^2).
    v1 sweeps a circle about the v3v4 axis in R^3 and its two mirror points in R^2.
    """
    if d not in (2, 3):
        raise PreconditionError(f"apex interval needs d in (2, 3), got {d}")
    eps = 1e-12 * max(1.0, tri.pq, tri.pr, tri.qr, a2, b2)
    s = math.sqrt(tri.qr)
    x2 = (tri.pq - tri.pr + tri.qr) / (2 * s)
    y2sq = tri.pq - x2 * x2
    if y2sq < -eps:
        raise LinkageError("triangle v2 v3 v4 is not realizable")
    y2 = math.sqrt(max(0.0, y2sq))
    x1 = (a2 - b2 + tri.qr) / (2 * s)
    rho_sq = a2 - x1 * x1
    if rho_sq < -eps:
        raise LinkageError("no position for v1 meets both attachment lengths")
    rho = math.sqrt(max(0.0, rho_sq))
    base = (x1 - x2) ** 2
    near, far = base + (rho - y2) ** 2, base + (rho + y2) ** 2
    if d == 3:
        return IntervalSet(((near, far),), Provenance.exact())
    return IntervalSet.merged([(near, near), (far, far)], Provenance.exact())


def _as_matrix(D: Sequence[Sequence[float]] | np.ndarray) -> np.ndarray:
    M = np.asarray(D, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise LinkageError("distance matrix must be square")
    if not np.all(np.isfinite(M)):
        raise LinkageError("distance matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if not np.allclose(M, M.T, atol=1e-12 * scale):
        raise LinkageError("distance matrix must be symmetric")
    if np.any(np.abs(np.diag(M)) > 1e-12 * scale):
        raise LinkageError("distance matrix must have a zero diagonal")
    return M


def gram_realizability(D: Sequence[Sequence[float]] | np.ndarray, d: int) -> bool:
    """Squared-distance matrix embeds in R^d iff the centered Gram matrix is PSD of rank <= d."""
    M = _as_matrix(D)
    n = M.shape[0]
    if n <= 1:
        return True
    J = np.eye(n) - np.ones((n, n)) / n
    gram = -0.5 * J @ M @ J
    eig = np.linalg.eigvalsh((gram + gram.T) / 2)
    tol = 1e-9 * max(1.0, float(np.max(np.abs(M))))
    return bool(eig.min() >= -tol and int(np.sum(eig > tol)) <= d)


def cayley_menger_determinant(D: Sequence[Sequence[float]] | np.ndarray) -> float:
    M = _as_matrix(D)
    n = M.shape[0]
    B = np.ones((n + 1, n + 1))
    B[0, 0] = 0.0
    B[1:, 1:] = M
    return float(np.linalg.det(B))


def glue_intervals(parts: Sequence[IntervalSet]) -> IntervalSet:
    """Intersection of CCS projections of the pieces of a clique-sum."""
    if not parts:
        raise PreconditionError("nothing to glue")
    current = list(parts[0].intervals)
    for part in parts[1:]:
        nxt: list[tuple[float, float]] = []
        for lo1, hi1 in current:
            for lo2, hi2 in part.intervals:
                lo, hi = max(lo1, lo2), min(hi1, hi2)
                if lo <= hi:
                    nxt.append((lo, hi))
        current = nxt
    if all(p.provenance.kind is ProvenanceKind.EXACT for p in parts):
        prov = Provenance.exact()
    else:
        sampled = [p.provenance for p in parts if p.provenance.kind is ProvenanceKind.SAMPLED]
        prov = Provenance.sampled(min(p.samples for p in sampled), max(p.gap for p in sampled))
    return IntervalSet.merged(current, prov)


@dataclass(frozen=True)
class CoveringReport:
    full: tuple[float, float]
    ranges: tuple[tuple[float, float], ...]
    threshold: float = 0.95

    def coverage(self) -> list[float]:
        width = self.full[1] - self.full[0]
        if width <= 0:
            return [1.0 for _ in self.ranges]
        return [(hi - lo) / width for lo, hi in self.ranges]

    @property
    def ok(self) -> bool:
        return all(c >= self.threshold for c in self.coverage())


def covering_map_report(
    L: Linkage,
    f: PairLike,
    d: int,
    samples: int | None = None,
    seed: int | None = None,
    *,
    starts: int = 8,
    threshold: float = 0.95,
) -> CoveringReport:
    """Continuation from a few accepted realizations; every start's reachable
    f-range should cover the sampled CCS. Shortfalls are logged, not raised."""
    d = _check_dim(d)
    (pair,) = _check_nonedges(L, [f])
    settings = get_settings()
    samples = settings.restarts if samples is None else samples
    seed = settings.seed if seed is None else seed
    found = _accepted(L, d, samples, seed, settings.workers)
    values = [_value(P, pair) for P in found]
    lo_all, hi_all = min(values), max(values)
    step = max((hi_all - lo_all) / 50.0, settings.cluster_gap)
    cap = _length_cap(L, pair)
    walk = _Continuation(L, pair, d, seed)
    ranges = []
    for P in found[:starts]:
        t = _value(P, pair)
        lo, _ = walk.march(t, P, 0.0, step)
        hi, _ = walk.march(t, P, cap, step)
        ranges.append((lo, hi))
    report = CoveringReport((lo_all, hi_all), tuple(ranges), threshold)
    if not report.ok:
        logger.warning("covering spot check for %s: coverage %s below %.2f", pair, report.coverage(), threshold)
    return report

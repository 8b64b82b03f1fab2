from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from sip3.core.errors import LinkageError
from sip3.models.graph import Edge, Graph, PairLike, as_pair


@dataclass(frozen=True)
class Linkage:
    """A graph with a squared edge-length for every edge."""

    graph: Graph
    len2: Mapping[Edge, float]

    def __post_init__(self) -> None:
        lengths: dict[Edge, float] = {}
        for key, value in self.len2.items():
            e = as_pair(key).as_edge()
            val = float(value)
            if not math.isfinite(val) or val < 0:
                raise LinkageError(f"edge {e[0]},{e[1]} has invalid squared length {value!r}")
            if not self.graph.has_edge(*e):
                raise LinkageError(f"length given for {e[0]},{e[1]}, which is not an edge")
            lengths[e] = val
        missing = [e for e in self.graph.edge_list() if e not in lengths]
        if missing:
            raise LinkageError(f"edge {missing[0][0]},{missing[0][1]} has no length")
        object.__setattr__(self, "len2", dict(sorted(lengths.items())))

    def length(self, e: PairLike) -> float:
        return self.len2[as_pair(e).as_edge()]

    def is_positive(self) -> bool:
        return all(v > 0 for v in self.len2.values())

    def with_edge(self, e: PairLike, value: float) -> "Linkage":
        pair = as_pair(e)
        return Linkage(self.graph.with_edges([pair]), {**self.len2, pair.as_edge(): value})

    def restricted(self, sub: Graph) -> "Linkage":
        """Lengths on a subgraph whose labels are ids of this linkage's graph."""
        return Linkage(sub, {(u, v): self.length((sub.label(u), sub.label(v))) for u, v in sub.edges})


@dataclass(frozen=True)
class Realization:
    d: int
    points: np.ndarray = field(repr=False)

    def distance2(self, u: int, v: int) -> float:
        diff = self.points[u] - self.points[v]
        return float(diff @ diff)

    def max_residual(self, linkage: Linkage) -> float:
        if not linkage.len2:
            return 0.0
        return max(abs(self.distance2(u, v) - val) for (u, v), val in linkage.len2.items())


class ProvenanceKind(str, Enum):
    EXACT = "exact"
    SAMPLED = "sampled"


@dataclass(frozen=True)
class Provenance:
    kind: ProvenanceKind
    samples: int = 0
    gap: float = 0.0

    @classmethod
    def exact(cls) -> "Provenance":
        return cls(ProvenanceKind.EXACT)

    @classmethod
    def sampled(cls, samples: int, gap: float) -> "Provenance":
        return cls(ProvenanceKind.SAMPLED, int(samples), float(gap))

    def __str__(self) -> str:
        if self.kind is ProvenanceKind.EXACT:
            return "exact"
        return f"sampled(samples={self.samples}, gap={self.gap:g})"


def _fmt(x: float) -> str:
    return f"{x:.6g}"


@dataclass(frozen=True)
class IntervalSet:
    intervals: tuple[tuple[float, float], ...]
    provenance: Provenance = field(default_factory=Provenance.exact)

    def __post_init__(self) -> None:
        cleaned = sorted((float(lo), float(hi)) for lo, hi in self.intervals)
        prev_hi = -math.inf
        for lo, hi in cleaned:
            if lo > hi:
                raise LinkageError(f"interval [{lo}, {hi}] has lo > hi")
            if lo < 0:
                raise LinkageError(f"interval [{lo}, {hi}] has a negative end")
            if lo <= prev_hi:
                raise LinkageError("intervals must be disjoint")
            prev_hi = hi
        object.__setattr__(self, "intervals", tuple(cleaned))

    @classmethod
    def merged(cls, intervals: Iterable[tuple[float, float]], provenance: Provenance, *, gap: float = 0.0) -> "IntervalSet":
        """Union of possibly overlapping intervals; pieces closer than `gap` are joined."""
        out: list[list[float]] = []
        for lo, hi in sorted((max(0.0, float(a)), max(0.0, float(b))) for a, b in intervals):
            if out and lo - out[-1][1] <= gap:
                out[-1][1] = max(out[-1][1], hi)
            else:
                out.append([lo, hi])
        return cls(tuple((a, b) for a, b in out), provenance)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_single_interval(self) -> bool:
        return len(self.intervals) == 1

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return any(lo - tol <= x <= hi + tol for lo, hi in self.intervals)

    def centers(self) -> list[float]:
        return [(lo + hi) / 2 for lo, hi in self.intervals]

    def widths(self) -> list[float]:
        return [hi - lo for lo, hi in self.intervals]

    def __str__(self) -> str:
        return "{" + ",".join(f"[{_fmt(lo)},{_fmt(hi)}]" for lo, hi in self.intervals) + "}"


class SamplingVerdict(str, Enum):
    """Sampling can exhibit a gap but never prove there is none."""

    REFUTED = "refuted"
    NOT_REFUTED = "not refuted"

    @classmethod
    def of(cls, intervals: IntervalSet) -> "SamplingVerdict":
        return cls.REFUTED if len(intervals.intervals) > 1 else cls.NOT_REFUTED


@dataclass(frozen=True)
class TriangleLengths:
    """Squared side lengths of a triangle p, q, r."""

    pq: float
    pr: float
    qr: float

    def __post_init__(self) -> None:
        for name in ("pq", "pr", "qr"):
            val = float(getattr(self, name))
            if not math.isfinite(val) or val <= 0:
                raise LinkageError(f"triangle side {name} must be positive, got {val!r}")
            object.__setattr__(self, name, val)

    def plain(self) -> tuple[float, float, float]:
        return (math.sqrt(self.pq), math.sqrt(self.pr), math.sqrt(self.qr))

    def distance_matrix(self) -> np.ndarray:
        return np.array(
            [[0.0, self.pq, self.pr], [self.pq, 0.0, self.qr], [self.pr, self.qr, 0.0]]
        )

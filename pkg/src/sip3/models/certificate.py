from __future__ import annotations

from dataclasses import dataclass, field

from sip3.core.errors import CertificateError
from sip3.models.graph import VertexPair
from sip3.models.linkage import IntervalSet, Linkage, Realization

MIN_VALUE_GAP = 1e-3


@dataclass(frozen=True)
class Certificate:
    """Edge lengths under which the CCS of f splits into two clusters.

    `values` are the two claimed clusters as (lo, hi), singletons when lo == hi;
    `witnesses` realize G ∪ f at one value of each cluster, in the same order.
    """

    linkage: Linkage
    f: VertexPair
    values: tuple[tuple[float, float], tuple[float, float]]
    kind: str
    witnesses: tuple[Realization, ...] = field(default=(), compare=False, repr=False)
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.linkage.graph.has_edge(self.f.a, self.f.b):
            raise CertificateError(f"{self.f} must be a nonedge of the linkage")
        if not self.linkage.is_positive():
            raise CertificateError("certificate lengths must be positive")
        if len(self.values) != 2:
            raise CertificateError("a certificate claims exactly two values")
        values = tuple(sorted((float(lo), float(hi)) for lo, hi in self.values))
        (lo1, hi1), (lo2, hi2) = values
        if lo1 > hi1 or lo2 > hi2:
            raise CertificateError("claimed cluster has lo > hi")
        if lo2 - hi1 <= MIN_VALUE_GAP:
            raise CertificateError(f"claimed values are not separated by more than {MIN_VALUE_GAP}")
        object.__setattr__(self, "values", values)

    @property
    def positive(self) -> bool:
        return all(lo > 0 for lo, _ in self.values)

    @property
    def singletons(self) -> bool:
        return all(hi - lo <= 1e-9 for lo, hi in self.values)

    def centers(self) -> tuple[float, float]:
        (lo1, hi1), (lo2, hi2) = self.values
        return ((lo1 + hi1) / 2, (lo2 + hi2) / 2)


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    positive: bool
    clusters: IntervalSet
    matched: bool
    reasons: tuple[str, ...] = ()

    @property
    def proper(self) -> bool:
        """Both clusters positive as well: the strict reading of a proper map."""
        return self.ok and self.positive

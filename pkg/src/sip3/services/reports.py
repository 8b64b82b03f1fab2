"""Result objects → response models shared by the CLI `--json` mode and the HTTP routers."""

from __future__ import annotations

from sip3.models.certificate import CertificateCheck
from sip3.models.linkage import IntervalSet, SamplingVerdict
from sip3.models.minor import MinorMap
from sip3.models.schemas import AtomsOut, CertificateCheckOut, IntervalsOut, MinorOut, SipOut
from sip3.services.decomposition import AtomDecomposition
from sip3.services.sip import SipVerdict


def minor_out(m: MinorMap) -> MinorOut:
    return MinorOut(pattern_n=m.pattern.n, branch_sets=m.as_labeled_sets())


def sip_out(v: SipVerdict) -> SipOut:
    return SipOut(
        answer=v.answer,
        d=v.d,
        nonedge=(v.f.a, v.f.b),
        atom=list(v.atom) if v.atom is not None else None,
        witness=minor_out(v.witness) if v.witness is not None else None,
    )


def _node_name(node: tuple[str, int]) -> str:
    kind, i = node
    return f"{kind}{i}"


def atoms_out(dec: AtomDecomposition) -> AtomsOut:
    edges = sorted(tuple(sorted((_node_name(a), _node_name(b)))) for a, b in dec.atom_tree.edges)
    return AtomsOut(
        atoms=[list(a) for a in dec.atoms],
        cms=[list(s) for s in dec.cms_list],
        atom_graph_edges=edges,
    )


def intervals_out(s: IntervalSet) -> IntervalsOut:
    return IntervalsOut(
        intervals=list(s.intervals),
        provenance=str(s.provenance),
        verdict=SamplingVerdict.of(s).value,
        text=str(s),
    )


def check_out(c: CertificateCheck) -> CertificateCheckOut:
    return CertificateCheckOut(
        ok=c.ok,
        positive=c.positive,
        matched=c.matched,
        clusters=str(c.clusters),
        reasons=list(c.reasons),
    )


def format_minor(m: MinorMap) -> list[str]:
    return [f"  {p}: {' '.join(str(x) for x in xs)}" for p, xs in m.as_labeled_sets().items()]

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

from sip3.core.config import get_settings
from sip3.core.errors import Sip3Error, UsageError
from sip3.models.graph import Graph, VertexPair
from sip3.models.minor import MinorConstraints
from sip3.services import reports
from sip3.services.certificates import build_certificate, check_certificate
from sip3.services.decomposition import decompose_atoms
from sip3.services.fixtures import check_corpus, corpus
from sip3.services.flattenability import is_d_flattenable, is_partial_3_tree
from sip3.services.graph_io import dumps, emit_certificate, emit_graph, read_certificate, read_graph, read_linkage, write_text
from sip3.services.linkage_numerics import ccs_intervals
from sip3.services.minors import find_rooted_minor
from sip3.services.patterns import catalog
from sip3.services.sip import classify_edge, decide_sip, find_winged_minor, is_minimal_pair

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 1000


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    report: str


@dataclass(frozen=True)
class _Outcome:
    exit_code: int
    lines: list[str]
    payload: Any


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _pin(text: str) -> tuple[int, int]:
    host, sep, pattern = text.partition(":")
    if not sep:
        raise ValueError(f"pin must look like HOST:PATTERN, got {text!r}")
    return int(host), int(pattern)


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def _pattern_name(pattern: Graph) -> str:
    if pattern.n == 6 and not pattern.is_complete():
        return "K2,2,2"
    return f"K{pattern.n}"


# -- subcommands ------------------------------------------------------------


def _cmd_atoms(args: argparse.Namespace) -> _Outcome:
    dec = decompose_atoms(read_graph(args.graph))
    out = reports.atoms_out(dec)
    lines = [f"atoms: {len(dec.atoms)}"]
    lines += [f"  atom{i}: {' '.join(map(str, a))}" for i, a in enumerate(dec.atoms)]
    lines.append(f"cms: {len(dec.cms_list)}")
    lines += [f"  cms{j}: {' '.join(map(str, s))}" for j, s in enumerate(dec.cms_list)]
    lines.append("atom graph: " + " ".join(f"{a}-{b}" for a, b in out.atom_graph_edges))
    return _Outcome(0, lines, out.model_dump())


def _cmd_minor(args: argparse.Namespace) -> _Outcome:
    G = read_graph(args.graph)
    constraints = MinorConstraints(
        pins=tuple(args.pin),
        preserve=tuple(args.preserve),
        retain=tuple(args.retain),
        induced=args.induced,
    )
    found = find_rooted_minor(G, catalog().by_name(args.pattern), constraints, budget=args.budget)
    if found is None:
        return _Outcome(1, ["no"], {"found": False})
    return _Outcome(0, ["yes", *reports.format_minor(found)], {"found": True, "minor": reports.minor_out(found).model_dump()})


def _cmd_flatten(args: argparse.Namespace) -> _Outcome:
    ok = is_d_flattenable(read_graph(args.graph), args.dim, budget=args.budget)
    return _Outcome(0 if ok else 1, [_yes_no(ok)], {"d": args.dim, "flattenable": ok})


def _cmd_p3t(args: argparse.Namespace) -> _Outcome:
    ok = is_partial_3_tree(read_graph(args.graph), budget=args.budget)
    return _Outcome(0 if ok else 1, [_yes_no(ok)], {"partial_3_tree": ok})


def _cmd_sip(args: argparse.Namespace) -> _Outcome:
    verdict = decide_sip(read_graph(args.graph), args.nonedge, args.dim)
    lines = [_yes_no(verdict.answer)]
    if verdict.witness is not None:
        atom = " ".join(map(str, verdict.atom or ()))
        lines.append(f"witness {_pattern_name(verdict.witness.pattern)} in atom {atom}")
        lines += reports.format_minor(verdict.witness)
    return _Outcome(0 if verdict.answer else 1, lines, reports.sip_out(verdict).model_dump())


def _cmd_edge_type(args: argparse.Namespace) -> _Outcome:
    kind = classify_edge(read_graph(args.graph), args.nonedge, args.edge, max_vertices=args.max_vertices)
    return _Outcome(0, [f"type {int(kind)} ({kind.name.lower()})"], {"type": int(kind), "name": kind.name.lower()})


def _cmd_minimal(args: argparse.Namespace) -> _Outcome:
    ok = is_minimal_pair(read_graph(args.graph), args.nonedge, max_vertices=args.max_vertices)
    return _Outcome(0 if ok else 1, [_yes_no(ok)], {"minimal": ok})


def _cmd_winged(args: argparse.Namespace) -> _Outcome:
    found = find_winged_minor(read_graph(args.graph), args.edge)
    if found is None:
        return _Outcome(1, ["no"], {"found": False})
    lines = ["yes", *reports.format_minor(found)]
    return _Outcome(0, lines, {"found": True, "minor": reports.minor_out(found).model_dump()})


def _cmd_ccs(args: argparse.Namespace) -> _Outcome:
    L = read_linkage(args.linkage)
    result = ccs_intervals(L, args.nonedge, args.dim, args.samples, args.seed, args.gap)
    out = reports.intervals_out(result)
    return _Outcome(0, [str(result), f"provenance: {result.provenance}"], out.model_dump())


def _cmd_certify(args: argparse.Namespace) -> _Outcome:
    cert = build_certificate(read_graph(args.graph), args.nonedge)
    if cert is None:
        return _Outcome(1, ["no certificate"], {"found": False})
    text = emit_certificate(cert)
    if args.out:
        write_text(args.out, text)
        lines = [f"{cert.kind}: values {cert.values[0]} {cert.values[1]}", f"wrote {args.out}"]
    else:
        lines = [text.rstrip("\n")]
    lines += [f"note: {n}" for n in cert.notes]
    return _Outcome(0, lines, {"found": True, "kind": cert.kind, "values": list(cert.values), "notes": list(cert.notes)})


def _cmd_verify_cert(args: argparse.Namespace) -> _Outcome:
    cert = read_certificate(args.certificate)
    check = check_certificate(cert, samples=args.samples, seed=args.seed, gap=args.gap)
    lines = [
        "ok" if check.ok else "rejected",
        f"proper: {_yes_no(check.proper)}",
        f"clusters: {check.clusters}",
    ]
    lines += [f"reason: {r}" for r in check.reasons]
    return _Outcome(0 if check.ok else 1, lines, reports.check_out(check).model_dump())


def _cmd_fixtures(args: argparse.Namespace) -> _Outcome:
    entries = corpus()
    if args.export:
        target = Path(args.export)
        for entry in entries:
            comment = entry.name if entry.nonedge is None else f"{entry.name} nonedge {entry.nonedge}"
            write_text(target / f"{entry.name}.g", emit_graph(entry.graph, comment=comment))
        return _Outcome(0, [f"wrote {len(entries)} graphs to {target}"], {"written": [e.name for e in entries]})
    rows = check_corpus(entries)
    lines = [
        f"{'PASS' if r.passed else 'FAIL'} {r.fixture} {r.prop} expected={r.expected} actual={r.actual} [{r.source.value}]"
        for r in rows
    ]
    failed = sum(not r.passed for r in rows)
    lines.append(f"{len(rows) - failed}/{len(rows)} checks passed")
    payload = [
        {"fixture": r.fixture, "prop": r.prop, "expected": r.expected, "actual": r.actual, "source": r.source.value, "passed": r.passed}
        for r in rows
    ]
    return _Outcome(1 if failed else 0, lines, payload)


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug (stderr)")

    parser = _Parser(prog="sip3", description="Decide the d-single-interval property of graph-nonedge pairs (d <= 3).")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable[[argparse.Namespace], _Outcome], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    def graph_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument("graph", help="graph text file")

    def nonedge_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument("--nonedge", type=VertexPair.parse, required=True, metavar="A,B")

    def budget_arg(p: argparse.ArgumentParser) -> None:
        p.add_argument("--budget", type=int, default=None, help="minor-search node budget (default: SIP3_BUDGET)")

    def sampling_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
        p.add_argument("--seed", type=int, default=settings.seed)
        p.add_argument("--gap", type=float, default=settings.cluster_gap)

    p = add("atoms", _cmd_atoms, "atoms, clique minimal separators and the atom graph")
    graph_arg(p)

    p = add("minor", _cmd_minor, "rooted minor search")
    graph_arg(p)
    p.add_argument("--pattern", default="k5", help="k3, k4, k5, k222, v8, c5xc2, winged_k5, winged_k222")
    p.add_argument("--preserve", type=VertexPair.parse, action="append", default=[], metavar="A,B")
    p.add_argument("--retain", type=VertexPair.parse, action="append", default=[], metavar="A,B")
    p.add_argument("--pin", type=_pin, action="append", default=[], metavar="HOST:PATTERN")
    p.add_argument("--induced", action="store_true")
    budget_arg(p)

    p = add("flatten", _cmd_flatten, "d-flattenability via forbidden minors")
    graph_arg(p)
    p.add_argument("--dim", type=int, default=3)
    budget_arg(p)

    p = add("p3t", _cmd_p3t, "partial 3-tree recognition")
    graph_arg(p)
    budget_arg(p)

    p = add("sip", _cmd_sip, "decide the d-SIP of (G, f)")
    graph_arg(p)
    nonedge_arg(p)
    p.add_argument("--dim", type=int, default=3)

    p = add("edge-type", _cmd_edge_type, "edge type (1-4) of e for the pair (G, f)")
    graph_arg(p)
    nonedge_arg(p)
    p.add_argument("--edge", type=VertexPair.parse, required=True, metavar="A,B")
    p.add_argument("--max-vertices", type=int, default=None)

    p = add("minimal", _cmd_minimal, "is (G, f) a minimal non-3-SIP pair")
    graph_arg(p)
    nonedge_arg(p)
    p.add_argument("--max-vertices", type=int, default=None)

    p = add("winged", _cmd_winged, "winged K5 / K2,2,2 minor with the wings on an edge")
    graph_arg(p)
    p.add_argument("--edge", type=VertexPair.parse, required=True, metavar="A,B")

    p = add("ccs", _cmd_ccs, "sampled Cayley configuration space of one nonedge")
    p.add_argument("linkage", help="linkage JSON file")
    nonedge_arg(p)
    p.add_argument("--dim", type=int, default=3)
    sampling_args(p)

    p = add("certify", _cmd_certify, "build a two-cluster length map for a non-3-SIP pair")
    graph_arg(p)
    nonedge_arg(p)
    p.add_argument("--out", default=None, help="write the certificate JSON here")

    p = add("verify-cert", _cmd_verify_cert, "check a certificate by sampling")
    p.add_argument("certificate", help="certificate JSON file")
    sampling_args(p)

    p = add("fixtures", _cmd_fixtures, "check the labelled corpus, or export it")
    p.add_argument("--export", default=None, metavar="DIR")
    return parser


def _configure_logging(verbose: int) -> None:
    level: int | str = get_settings().log_level.upper()
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


def run_command(argv: list[str]) -> CommandResult:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help
        return CommandResult(int(exc.code or 0), "")
    except Sip3Error as exc:
        return CommandResult(2, f"error: {exc}")
    _configure_logging(args.verbose)
    try:
        outcome = args.handler(args)
    except Sip3Error as exc:
        logger.debug("command %s failed", args.command, exc_info=True)
        return CommandResult(2, f"error: {exc}")
    except Exception as exc:
        logger.exception("command %s crashed", args.command)
        return CommandResult(2, f"error: {exc}")
    report = dumps(outcome.payload) if args.json else "\n".join(outcome.lines)
    return CommandResult(outcome.exit_code, report)


def main(argv: list[str] | None = None) -> int:
    result = run_command(sys.argv[1:] if argv is None else argv)
    if result.report:
        stream = sys.stderr if result.report.startswith("error:") else sys.stdout
        print(result.report, file=stream)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())

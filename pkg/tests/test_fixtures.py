import pytest

from sip3.core.errors import InvariantViolation
from sip3.models.graph import path_graph
from sip3.services import fixtures
from sip3.services.fixtures import FixtureEntry, Source, check_corpus, corpus, discover_minimal_pairs, fixture
from sip3.services.graph_io import read_graph

# fixture file stem -> corpus entry
FILES = {
    "k5_minus_f": "k5_minus_f",
    "k222_minus_f": "k222_minus_f",
    "v8": "v8",
    "c5xc2": "c5xc2",
    "winged_k5": "winged_k5",
    "winged_k222": "winged_k222",
    "doubled_k5": "doubled_k5",
    "path": "path_k3",
}


def test_every_corpus_check_passes():
    rows = check_corpus()
    failed = [(r.fixture, r.prop, r.expected, r.actual) for r in rows if not r.passed]
    assert not failed
    assert {r.source for r in rows} == {Source.PUBLISHED, Source.TRIVIAL, Source.DERIVED}


def test_reconstructed_entries_survive_their_oracles():
    names = {e.name for e in corpus()}
    assert {"winged_k5", "winged_k222", "doubled_k5", "k222_transfer"} <= names


def test_a_failing_oracle_breaks_the_corpus(monkeypatch):
    broken = FixtureEntry("broken", path_graph(3), oracle=lambda: False)
    monkeypatch.setattr(fixtures, "_all_entries", lambda: [broken])
    corpus.cache_clear()
    try:
        with pytest.raises(InvariantViolation, match="broken"):
            corpus()
    finally:
        monkeypatch.undo()
        corpus.cache_clear()
    assert fixture("k5_minus_f").name == "k5_minus_f"


def test_unknown_fixture():
    with pytest.raises(KeyError):
        fixture("petersen")


@pytest.mark.parametrize("stem, name", sorted(FILES.items()))
def test_fixture_files_match_the_corpus(fixtures_dir, stem, name):
    entry = fixture(name)
    path = fixtures_dir / f"{stem}.g"
    assert read_graph(path) == entry.graph
    header = path.read_text(encoding="utf-8").splitlines()[0]
    expected = name if entry.nonedge is None else f"{name} nonedge {entry.nonedge}"
    assert header == f"# {expected}"


def test_minimal_pairs_on_five_vertices_are_k5_minus_an_edge():
    found = list(discover_minimal_pairs(max_n=5))
    assert found
    for G, f in found:
        assert G.n == 5 and G.m == 9


@pytest.mark.slow
def test_minimal_pairs_on_six_vertices_include_k222_minus_an_edge():
    six = [(G, f) for G, f in discover_minimal_pairs(max_n=6) if G.n == 6]
    assert any(G.m == 11 and all(G.with_edges([f]).degree(v) == 4 for v in G.vertices()) for G, f in six)

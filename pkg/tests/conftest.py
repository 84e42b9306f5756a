"""Shared fixtures.

Every test runs with the network guard active: any attempt to open a socket
fails the test.  All knowledge-base access goes through the offline fixture
cache under tests/fixtures/kb_cache.
"""

from __future__ import annotations

import json
import socket
from pathlib import Path

import pytest

from contron.corpus import load_corpus
from contron.dke import extract_domain_knowledge
from contron.kb import KbClient
from contron.lexicon import Lexicon
from contron.oe import enrich_ontology
from contron.ontology import Ontology, apply_mutation, load as load_ontology

FIXTURES = Path(__file__).parent / "fixtures"

# Threshold pinned for every fixture-based decision test in this suite.
FIXTURE_THRESHOLD = 0.05


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One line per acceptance criterion at the end of the run."""
    rows = []
    labels = {
        "passed": "PASS",
        "failed": "FAIL",
        "error": "ERROR",
        "skipped": "SKIPPED",
        "xfailed": "FAIL (documented upstream rounding inconsistency)",
        "xpassed": "XPASS (unexpected)",
    }
    for status, label in labels.items():
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" in nodeid and getattr(report, "when", "call") in ("call", "setup"):
                rows.append((nodeid.split("::", 1)[1], label))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, label in sorted(rows):
            terminalreporter.write_line(f"{name}: {label}")


@pytest.fixture(autouse=True)
def no_network(monkeypatch):
    """Fail loudly if anything tries to reach the network."""

    def guard(*_args, **_kwargs):
        raise AssertionError("network access attempted during tests")

    monkeypatch.setattr(socket.socket, "connect", guard)


@pytest.fixture(scope="session")
def mini_lexicon() -> Lexicon:
    return Lexicon.bundled_mini()


@pytest.fixture(scope="session")
def corpus_docs():
    return load_corpus(FIXTURES / "corpus" / "manifest.tsv")


@pytest.fixture(scope="session")
def domain_concepts(mini_lexicon, corpus_docs):
    return extract_domain_knowledge(corpus_docs, mini_lexicon)


@pytest.fixture
def kb_offline(tmp_path) -> KbClient:
    return KbClient(cache_dir=FIXTURES / "kb_cache", offline=True)


@pytest.fixture
def core_ontology() -> Ontology:
    return load_ontology(FIXTURES / "ontology" / "core.json")


@pytest.fixture(scope="session")
def truth() -> dict[str, str]:
    return json.loads((FIXTURES / "truth.json").read_text("utf-8"))


def confirm_correct_reviews(ontology, outcomes, truth) -> Ontology:
    """Simulate the expert pass: select the correct entity on every review
    item whose candidate list contains it."""
    for outcome in outcomes:
        if outcome.decision != "review":
            continue
        wanted = truth.get(outcome.class_id)
        match = next(
            (c for c in outcome.candidates if c.entity.entity_id == wanted), None
        )
        if match is not None:
            ontology = apply_mutation(
                ontology,
                {
                    "action": "apply_enrichment",
                    "class_id": outcome.class_id,
                    "entity": match.entity.to_dict(),
                    "mode": "expert",
                },
            )
    return ontology


@pytest.fixture(scope="session")
def enriched_core(mini_lexicon, domain_concepts, truth):
    """Core fixture ontology after one sweep plus expert confirmations."""
    kb = KbClient(cache_dir=FIXTURES / "kb_cache", offline=True)
    ontology = load_ontology(FIXTURES / "ontology" / "core.json")
    report = enrich_ontology(
        ontology,
        domain_concepts,
        kb,
        threshold=FIXTURE_THRESHOLD,
        lexicon=mini_lexicon,
    )
    return confirm_correct_reviews(report.ontology, report.outcomes, truth)

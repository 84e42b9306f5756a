"""Ontology enrichment: match knowledge-base entities to ontology classes.

Candidate entities for a class come from a name search against the knowledge
base.  Each candidate's text (label, description, aliases, category labels)
and the corpus-derived domain concepts are embedded in one small vector
space; cosine similarity against the domain document decides:

* exactly one candidate at or above the confidence threshold: enrich
  automatically;
* otherwise, with candidates present: queue the class for expert review;
* no candidates at all: record a no-match and fall back to lexicon synonyms.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field

from .corpus import raw_tokens, default_stopwords
from .dke import DomainConcept
from .errors import KbError, UnknownClassError
from .kb import KbClient, KbEntity
from .lexicon import Lexicon
from .ontology import (
    Ontology,
    OntologyClass,
    apply_mutation,
)

SWEEP_STATUSES_SKIPPED = ("expert_confirmed",)


@dataclass
class DomainDocument:
    """Bag of lemmas representing the corpus: every concept's topic, its
    gloss words, and its synset's member words."""

    terms: Counter = field(default_factory=Counter)

    @classmethod
    def from_concepts(cls, concepts: list[DomainConcept], lexicon: Lexicon | None = None) -> "DomainDocument":
        terms: Counter = Counter()
        for concept in concepts:
            terms[concept.topic.lemma] += 1
            terms.update(_word_parts(concept.topic.lemma))
            terms.update(_text_lemmas(concept.gloss))
            synset = lexicon.get(concept.synset) if lexicon is not None else None
            if synset is not None:
                for member in synset.lemmas:
                    terms[member] += 1
                    terms.update(_word_parts(member))
        return cls(terms=terms)


def _word_parts(lemma: str) -> list[str]:
    return lemma.split("_") if "_" in lemma else []


def _text_lemmas(text: str) -> list[str]:
    stopwords = default_stopwords()
    return [
        tok
        for tok in raw_tokens(text)
        if len(tok) >= 2 and tok not in stopwords and not tok.isdigit()
    ]


@dataclass(frozen=True)
class CandidateMatch:
    class_id: str
    entity: KbEntity
    similarity: float

    def to_record(self) -> dict:
        return {
            "entity_id": self.entity.entity_id,
            "label": self.entity.label,
            "description": self.entity.description,
            "similarity": self.similarity,
        }


@dataclass
class EnrichmentOutcome:
    class_id: str
    decision: str  # auto | review | no_match
    candidates: list[CandidateMatch] = field(default_factory=list)
    entity: KbEntity | None = None
    fallback_terms: list[str] = field(default_factory=list)

    def to_record(self) -> dict:
        record: dict = {
            "class_id": self.class_id,
            "decision": self.decision,
            "candidates": [c.to_record() for c in self.candidates],
        }
        if self.entity is not None:
            record["entity_id"] = self.entity.entity_id
        if self.fallback_terms:
            record["fallback_terms"] = self.fallback_terms
        return record


@dataclass
class EnrichmentReport:
    ontology: Ontology
    outcomes: list[EnrichmentOutcome]
    mutations: list[dict]
    errors: dict[str, str] = field(default_factory=dict)

    def histogram(self) -> dict[str, int]:
        counts = {"auto": 0, "review": 0, "no_match": 0}
        for outcome in self.outcomes:
            counts[outcome.decision] += 1
        return counts


def ledger_bytes(outcomes: list[EnrichmentOutcome], threshold: float) -> bytes:
    """Canonical, timestamp-free serialization of a sweep's outcomes."""
    payload = {
        "threshold": threshold,
        "outcomes": [o.to_record() for o in sorted(outcomes, key=lambda o: o.class_id)],
    }
    return (json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode()


# -- vector space -----------------------------------------------------------


def build_vsm(
    candidate_texts: list[str],
    domain_doc: DomainDocument,
    weighting: str = "tfidf",
) -> tuple[list[dict[str, float]], dict[str, float]]:
    """Embed candidate texts and the domain document in one term space.

    With ``tfidf`` weighting each term weighs count * (1 + ln(N/df)) over
    the mini-corpus of candidates plus the domain document; the additive one
    keeps terms shared by every document from vanishing.  ``count`` uses raw
    counts.
    """
    if weighting not in ("tfidf", "count"):
        raise ValueError(f"weighting must be tfidf or count, got {weighting!r}")
    bags = [Counter(_text_lemmas(text)) for text in candidate_texts]
    bags.append(Counter(domain_doc.terms))
    n_docs = len(bags)
    df: Counter = Counter()
    for bag in bags:
        df.update(set(bag))
    vectors: list[dict[str, float]] = []
    for bag in bags:
        if weighting == "count":
            vectors.append({t: float(c) for t, c in bag.items()})
        else:
            vectors.append(
                {t: c * (1.0 + math.log(n_docs / df[t])) for t, c in bag.items()}
            )
    return vectors[:-1], vectors[-1]


def cosine(u: dict[str, float], v: dict[str, float]) -> float:
    """Cosine similarity; by convention 0 when either vector is zero."""
    if not u or not v:
        return 0.0
    if len(v) < len(u):
        u, v = v, u
    dot = sum(w * v[t] for t, w in u.items() if t in v)
    norm_u = math.sqrt(sum(w * w for w in u.values()))
    norm_v = math.sqrt(sum(w * w for w in v.values()))
    if norm_u == 0.0 or norm_v == 0.0:
        return 0.0
    return dot / (norm_u * norm_v)


def rank_candidates(
    cls: OntologyClass,
    entities: list[KbEntity],
    domain_doc: DomainDocument,
    weighting: str = "tfidf",
) -> list[CandidateMatch]:
    vectors, domain_vector = build_vsm([e.text() for e in entities], domain_doc, weighting)
    matches = [
        CandidateMatch(class_id=cls.class_id, entity=entity, similarity=cosine(vec, domain_vector))
        for entity, vec in zip(entities, vectors)
    ]
    matches.sort(key=lambda m: (-m.similarity, m.entity.entity_id))
    return matches


# -- decision rule ------------------------------------------------------------


def match_class(
    cls: OntologyClass,
    concepts: DomainDocument | list[DomainConcept],
    kb: KbClient,
    threshold: float = 0.3,
    limit: int = 10,
    lexicon: Lexicon | None = None,
    weighting: str = "tfidf",
) -> EnrichmentOutcome:
    """Decide auto / review / no-match for one class.

    Entities an expert has disjointed from the class are filtered out before
    scoring and can never be proposed again.
    """
    if not cls.name:
        raise UnknownClassError(f"class {cls.class_id!r} has an empty name")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be within [0, 1]")
    concepts_doc = (
        concepts
        if isinstance(concepts, DomainDocument)
        else DomainDocument.from_concepts(concepts, lexicon)
    )
    found = kb.search_entities(cls.name, limit=limit)
    entities = [e for e in found if e.entity_id not in cls.disjoint_entities]
    if not entities:
        fallback = (
            lexicon.synonyms_and_related(_lexicon_key(cls.name)) if lexicon else []
        )
        return EnrichmentOutcome(
            class_id=cls.class_id, decision="no_match", fallback_terms=fallback
        )
    candidates = rank_candidates(cls, entities, concepts_doc, weighting)
    confident = [c for c in candidates if c.similarity >= threshold]
    if len(confident) == 1:
        return EnrichmentOutcome(
            class_id=cls.class_id,
            decision="auto",
            candidates=candidates,
            entity=confident[0].entity,
        )
    return EnrichmentOutcome(class_id=cls.class_id, decision="review", candidates=candidates)


def _lexicon_key(name: str) -> str:
    return "_".join(name.lower().split())


def enrich_ontology(
    ontology: Ontology,
    concepts: list[DomainConcept],
    kb: KbClient,
    threshold: float = 0.3,
    lexicon: Lexicon | None = None,
    limit: int = 10,
    weighting: str = "tfidf",
) -> EnrichmentReport:
    """Sweep every intrinsic class, applying confident matches.

    Classes an expert already confirmed are left alone; automatic matches
    are re-scored on every sweep.  Per-class knowledge-base failures are
    collected without aborting the sweep; the sweep itself fails only when
    every class errored.
    """
    domain_doc = DomainDocument.from_concepts(concepts, lexicon)
    outcomes: list[EnrichmentOutcome] = []
    mutations: list[dict] = []
    errors: dict[str, str] = {}
    updated = ontology
    swept = 0
    for cls in ontology.intrinsic_classes():
        if cls.review_status in SWEEP_STATUSES_SKIPPED:
            continue
        swept += 1
        try:
            outcome = match_class(
                cls, domain_doc, kb, threshold=threshold, limit=limit,
                lexicon=lexicon, weighting=weighting,
            )
        except KbError as exc:
            errors[cls.class_id] = str(exc)
            continue
        outcomes.append(outcome)
        if outcome.decision == "auto":
            mutation = {
                "action": "apply_enrichment",
                "class_id": cls.class_id,
                "entity": outcome.entity.to_dict(),
                "mode": "auto",
            }
            updated = apply_mutation(updated, mutation)
            mutations.append(mutation)
        elif outcome.decision == "no_match":
            mutation = {
                "action": "no_match",
                "class_id": cls.class_id,
                "fallback_terms": outcome.fallback_terms,
            }
            updated = apply_mutation(updated, mutation)
            mutations.append(mutation)
    if swept and len(errors) == swept:
        raise KbError(f"every class failed; first error: {next(iter(errors.values()))}")
    return EnrichmentReport(
        ontology=updated, outcomes=outcomes, mutations=mutations, errors=errors
    )

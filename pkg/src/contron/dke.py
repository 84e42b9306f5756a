"""Domain knowledge extraction: TF-IDF topic selection and word-sense
disambiguation over a similarity graph.

Topics are the corpus terms with the highest TF-IDF scores that the lexicon
knows.  Each topic's candidate senses become graph vertices; edges connect
senses of *different* topics, weighted by taxonomy similarity, and the sense
with the largest accumulated edge weight wins for its topic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .corpus import BagOfWords, CorpusStats, Document, Term, corpus_stats, tokenize
from .errors import EmptyCorpusError
from .lexicon import Lexicon, Synset, SynsetId


@dataclass(frozen=True)
class TopicCandidate:
    term: Term
    score: float


@dataclass(frozen=True)
class DomainConcept:
    topic: Term
    synset: str  # canonical synset key
    gloss: str
    accumulated_weight: float


@dataclass
class DisambiguationGraph:
    """Complete multipartite weighted graph over candidate senses.

    ``vertices`` maps each topic lemma to its candidate synsets;
    ``edges`` holds ``(vertex_a, vertex_b, weight)`` with vertices keyed as
    ``(topic_lemma, synset_id)``.  Zero-weight edges are omitted and no edge
    connects two senses of the same topic.
    """

    vertices: dict[str, list[Synset]] = field(default_factory=dict)
    edges: list[tuple[tuple[str, str], tuple[str, str], float]] = field(default_factory=list)

    def adjacency(self) -> dict[tuple[str, str], float]:
        acc: dict[tuple[str, str], float] = {
            (topic, s.id): 0.0 for topic, senses in self.vertices.items() for s in senses
        }
        for a, b, w in self.edges:
            acc[a] += w
            acc[b] += w
        return acc


def compute_tfidf(stats: CorpusStats, bags: list[BagOfWords]) -> list[TopicCandidate]:
    """Score every corpus term by its mean tf*idf over containing documents.

    tf is the term's count divided by the bag's total term count; idf is the
    natural log of (document count / document frequency).  Averaging over
    only the documents that contain the term keeps long documents from
    dominating the ranking.
    """
    if not bags:
        raise EmptyCorpusError("compute_tfidf needs at least one bag")
    n_docs = stats.n_documents
    totals = {bag.doc_id: bag.total() for bag in bags}
    tf_sums: dict[Term, float] = {}
    for bag in bags:
        total = totals[bag.doc_id]
        if total == 0:
            continue
        for term, count in bag.counts.items():
            tf_sums[term] = tf_sums.get(term, 0.0) + count / total
    candidates = []
    for term, df in stats.document_frequency.items():
        idf = math.log(n_docs / df)
        mean_tf = tf_sums.get(term, 0.0) / df
        candidates.append(TopicCandidate(term=term, score=mean_tf * idf))
    candidates.sort(key=lambda c: (-c.score, c.term.lemma))
    return candidates


def select_topics(
    candidates: list[TopicCandidate],
    lexicon: Lexicon,
    k: int = 1000,
    min_score: float = 0.0,
) -> list[TopicCandidate]:
    """Top-k candidates above ``min_score`` that map to at least one synset."""
    if k < 1:
        raise ValueError("k must be >= 1")
    picked = []
    for cand in sorted(candidates, key=lambda c: (-c.score, c.term.lemma)):
        if cand.score <= min_score:
            continue
        if not lexicon.synsets_of(cand.term.lemma):
            continue
        picked.append(cand)
        if len(picked) == k:
            break
    return picked


def candidate_senses(lexicon: Lexicon, lemma: str, cap: int) -> list[Synset]:
    """First ``cap`` senses of a topic, nouns preferred.

    Verb and adjective senses tend to mislead the disambiguation, so they
    are consulted only when the word has no noun sense at all.
    """
    senses = lexicon.synsets_of(lemma, pos="n")
    if not senses:
        senses = lexicon.synsets_of(lemma)
    return senses[:cap]


def build_graph(
    topics: list[TopicCandidate],
    lexicon: Lexicon,
    senses_per_topic: int = 5,
    similarity: Callable[[Synset, Synset], float] | None = None,
) -> DisambiguationGraph:
    """Connect every sense of every topic to every sense of the others.

    ``similarity`` defaults to the lexicon's Wu-Palmer measure; tests may
    inject a fixed table.  Weight-0 pairs ("irrelevant") produce no edge.
    """
    if similarity is None:
        similarity = lexicon.wup_similarity
    graph = DisambiguationGraph()
    order: list[str] = []
    for topic in topics:
        lemma = topic.term.lemma
        if lemma in graph.vertices:
            continue
        senses = candidate_senses(lexicon, lemma, senses_per_topic)
        if senses:
            graph.vertices[lemma] = senses
            order.append(lemma)
    for i, topic_a in enumerate(order):
        for topic_b in order[i + 1 :]:
            for sense_a in graph.vertices[topic_a]:
                for sense_b in graph.vertices[topic_b]:
                    weight = similarity(sense_a, sense_b)
                    if weight > 0.0:
                        graph.edges.append(
                            ((topic_a, sense_a.id), (topic_b, sense_b.id), weight)
                        )
    return graph


def disambiguate(graph: DisambiguationGraph) -> list[DomainConcept]:
    """Pick, per topic, the sense with the largest accumulated edge weight.

    Ties fall back to the lowest sense number (the most frequent sense),
    then to the lexicographically smallest synset key.
    """
    acc = graph.adjacency()
    concepts = []
    for topic, senses in graph.vertices.items():
        best = min(
            senses,
            key=lambda s: (-acc[(topic, s.id)], SynsetId.parse(s.id).sense, s.id),
        )
        concepts.append(
            DomainConcept(
                topic=Term(surface=topic.replace("_", " "), lemma=topic, arity=topic.count("_") + 1),
                synset=best.id,
                gloss=best.gloss,
                accumulated_weight=acc[(topic, best.id)],
            )
        )
    concepts.sort(key=lambda c: c.topic.lemma)
    return concepts


def extract_domain_knowledge(
    documents: list[Document],
    lexicon: Lexicon,
    max_arity: int = 3,
    top_k: int = 1000,
    min_score: float = 0.0,
    senses_per_topic: int = 5,
) -> list[DomainConcept]:
    """Full pipeline: tokenize, score, select topics, disambiguate."""
    if not documents:
        raise EmptyCorpusError("no documents to analyze")
    bags = [tokenize(doc, max_arity=max_arity, lexicon=lexicon.has_lemma) for doc in documents]
    stats = corpus_stats(bags)
    candidates = compute_tfidf(stats, bags)
    topics = select_topics(candidates, lexicon, k=top_k, min_score=min_score)
    graph = build_graph(topics, lexicon, senses_per_topic=senses_per_topic)
    return disambiguate(graph)

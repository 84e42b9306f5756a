"""Command line interface.

Subcommands mirror the pipeline stages: ``dke`` extracts the domain
concepts, ``enrich`` matches knowledge-base entities to ontology classes,
``extract`` pulls property-value pairs out of a data sheet, ``eval`` scores
pairs against gold labels, ``serve`` runs the review service, and
``import-rdf`` converts a minimal RDF/XML ontology into the native format.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import dke as dke_mod
from . import evaluation, ie, oe, ontology as ontology_mod
from .config import DEFAULT_KB_ENDPOINT
from .corpus import ingest, load_corpus
from .errors import ContronError, UndefinedMetricError
from .kb import KbClient
from .lexicon import Lexicon


@click.group()
def main() -> None:
    """Ontology enrichment and data-sheet information extraction."""


def _load_lexicon(lexicon_dir: str | None) -> Lexicon:
    return Lexicon.load(lexicon_dir) if lexicon_dir else Lexicon.bundled_mini()


def concepts_to_json(concepts: list[dke_mod.DomainConcept]) -> str:
    payload = {
        "concepts": [
            {
                "topic": c.topic.lemma,
                "synset": c.synset,
                "gloss": c.gloss,
                "accumulated_weight": c.accumulated_weight,
            }
            for c in concepts
        ]
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def concepts_from_json(text: str) -> list[dke_mod.DomainConcept]:
    from .corpus import Term

    payload = json.loads(text)
    return [
        dke_mod.DomainConcept(
            topic=Term(
                surface=c["topic"].replace("_", " "),
                lemma=c["topic"],
                arity=c["topic"].count("_") + 1,
            ),
            synset=c["synset"],
            gloss=c.get("gloss", ""),
            accumulated_weight=float(c.get("accumulated_weight", 0.0)),
        )
        for c in payload["concepts"]
    ]


@main.command("dke")
@click.option("--corpus", "manifest", required=True, type=click.Path(exists=True))
@click.option("--lexicon", "lexicon_dir", type=click.Path(exists=True), default=None,
              help="Lexical database directory; defaults to the bundled mini database.")
@click.option("--top-k", default=1000, show_default=True)
@click.option("--min-score", default=0.0, show_default=True)
@click.option("--max-arity", default=3, show_default=True)
@click.option("--senses", "senses_per_topic", default=5, show_default=True)
@click.option("--pdf-converter", default=None,
              help="Command template with an {input} placeholder for PDF documents.")
@click.option("--out", type=click.Path(), default="-")
def dke_command(manifest, lexicon_dir, top_k, min_score, max_arity, senses_per_topic,
                pdf_converter, out):
    """Extract disambiguated domain concepts from a corpus manifest."""
    lexicon = _load_lexicon(lexicon_dir)
    documents = load_corpus(manifest, pdf_converter=pdf_converter)
    concepts = dke_mod.extract_domain_knowledge(
        documents,
        lexicon,
        max_arity=max_arity,
        top_k=top_k,
        min_score=min_score,
        senses_per_topic=senses_per_topic,
    )
    text = concepts_to_json(concepts)
    if out == "-":
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, "utf-8")
        click.echo(f"wrote {len(concepts)} concepts to {out}")


@main.command("enrich")
@click.option("--ontology", "ontology_path", required=True, type=click.Path(exists=True))
@click.option("--concepts", "concepts_path", required=True, type=click.Path(exists=True))
@click.option("--threshold", default=0.3, show_default=True)
@click.option("--endpoint", default=DEFAULT_KB_ENDPOINT, show_default=True)
@click.option("--cache-dir", default=".contron-cache", show_default=True)
@click.option("--offline", is_flag=True, default=False)
@click.option("--lexicon", "lexicon_dir", type=click.Path(exists=True), default=None)
@click.option("--limit", default=10, show_default=True)
@click.option("--out", type=click.Path(), default=None, help="Enriched ontology output; defaults to in-place.")
@click.option("--ledger-out", type=click.Path(), default=None)
def enrich_command(ontology_path, concepts_path, threshold, endpoint, cache_dir,
                   offline, lexicon_dir, limit, out, ledger_out):
    """Enrich an ontology from the knowledge base, guided by domain concepts."""
    onto = ontology_mod.load(ontology_path)
    concepts = concepts_from_json(Path(concepts_path).read_text("utf-8"))
    kb = KbClient(endpoint=endpoint, cache_dir=cache_dir, offline=offline)
    lexicon = _load_lexicon(lexicon_dir)
    report = oe.enrich_ontology(
        onto, concepts, kb, threshold=threshold, lexicon=lexicon, limit=limit
    )
    ontology_mod.save(report.ontology, out or ontology_path)
    if ledger_out:
        Path(ledger_out).write_bytes(oe.ledger_bytes(report.outcomes, threshold))
    histogram = report.histogram()
    click.echo(
        "enriched: {auto} auto, {review} for review, {no_match} without match".format(**histogram)
    )
    for class_id, error in report.errors.items():
        click.echo(f"error for {class_id}: {error}", err=True)


@main.command("extract")
@click.option("--ontology", "ontology_path", required=True, type=click.Path(exists=True))
@click.option("--doc", "doc_path", required=True, type=click.Path(exists=True))
@click.option("--baseline-text-search", is_flag=True, default=False,
              help="Search class names only, ignoring enrichment-derived keywords.")
@click.option("--window", default=10, show_default=True)
@click.option("--pdf-converter", default=None,
              help="Command template with an {input} placeholder for PDF documents.")
@click.option("--annotations-out", type=click.Path(), default=None)
@click.option("--pairs-out", type=click.Path(), default=None)
def extract_command(ontology_path, doc_path, baseline_text_search, window,
                    pdf_converter, annotations_out, pairs_out):
    """Extract property-value pairs from one data sheet."""
    onto = ontology_mod.load(ontology_path)
    doc = ingest(doc_path, pdf_converter=pdf_converter)
    pairs, annotations = ie.extract_information(
        onto, doc, window=window, baseline_text_search=baseline_text_search
    )
    if annotations_out:
        ie.write_annotations(annotations_out, doc.doc_id, annotations)
    tsv = ie.pairs_to_tsv(pairs)
    if pairs_out:
        Path(pairs_out).write_text(tsv, "utf-8")
    else:
        click.echo(tsv, nl=False)


@main.command("eval")
@click.option("--gold", "gold_path", required=True, type=click.Path(exists=True))
@click.option("--pairs", "pairs_path", required=True, type=click.Path(exists=True))
@click.option("--beta", default=1.0, show_default=True)
def eval_command(gold_path, pairs_path, beta):
    """Score an extracted-pairs table against gold labels."""
    gold = evaluation.load_gold(gold_path)
    extracted = _pairs_from_tsv(pairs_path)
    counts = evaluation.score_pairs(extracted, gold)
    click.echo(f"tp={counts.tp} fp={counts.fp} fn={counts.fn}")
    try:
        metrics = evaluation.compute_metrics(counts, beta=beta)
    except UndefinedMetricError as exc:
        raise click.ClickException(str(exc))
    click.echo(
        f"precision={metrics.precision:.3f} recall={metrics.recall:.3f} "
        f"f_measure={metrics.f_measure:.3f} (beta={beta:g})"
    )


def _pairs_from_tsv(path) -> list[ie.ExtractedPair]:
    from .ie import ExtractedPair, KeywordHit, Span

    pairs = []
    lines = Path(path).read_text("utf-8").splitlines()
    for line in lines[1:]:
        if not line.strip():
            continue
        class_id, keyword, value, _unit, doc_id, start, end, method = line.split("\t")
        pairs.append(
            ExtractedPair(
                hit=KeywordHit(
                    doc_id=doc_id,
                    class_id=class_id,
                    keyword=keyword,
                    span=Span(int(start), int(end)),
                ),
                value_text=value,
                method=method,
            )
        )
    return pairs


@main.command("serve")
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", required=True, type=click.Path(exists=True))
@click.option("--ui-dir", type=click.Path(exists=True), default=None)
def serve_command(port, host, data_dir, ui_dir):
    """Run the review service."""
    import uvicorn

    from .service import create_app

    app = create_app(data_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


@main.command("import-rdf")
@click.option("--in", "rdf_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--ontology-id", default=None)
def import_rdf_command(rdf_path, out_path, ontology_id):
    """Convert a minimal RDF/XML ontology into the native format."""
    from .rdf_import import import_rdf_xml

    onto = import_rdf_xml(rdf_path, ontology_id=ontology_id)
    ontology_mod.save(onto, out_path)
    click.echo(f"imported {len(onto.classes)} classes to {out_path}")


def run() -> None:  # console entry point with uniform error reporting
    try:
        main(standalone_mode=True)
    except ContronError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    run()

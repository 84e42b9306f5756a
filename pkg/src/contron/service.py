"""HTTP facade for the review workflow and pipeline runs.

Serves the review queue, accepts expert decisions, exposes the ontology
snapshot and its version history, serves annotated documents, and triggers
enrichment / extraction iterations.  State is file-backed under one data
directory; decision application and pipeline runs are serialized through a
single writer lock while reads stay lock-free on committed snapshots.
"""

from __future__ import annotations

import json
import threading
from datetime import datetime, timezone
from pathlib import Path

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import dke, ie, oe
from .config import Config
from .corpus import load_corpus
from .errors import ContronError
from .kb import KbClient
from .lexicon import Lexicon
from .ontology import OntologyStore, dumps as ontology_dumps


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class DecisionBody(BaseModel):
    action: str = Field(pattern="^(select|disjoint|no_match|skip)$")
    entity_id: str | None = None
    entity_ids: list[str] | None = None
    actor: str = "expert"


class DataStore:
    """Files under one directory: ontology snapshot + change log, review
    queue, append-only decision log, run ledgers, annotations."""

    def __init__(self, data_dir: str | Path, config: Config | None = None):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self.config = config or Config.load(self.data_dir / "config.json")
        self.ontology_path = self.data_dir / "ontology.json"
        if not self.ontology_path.exists():
            raise ContronError(f"no ontology snapshot at {self.ontology_path}")
        self.store = OntologyStore(self.ontology_path)
        self.queue_path = self.data_dir / "queue.json"
        self.decision_log = self.data_dir / "decisions.jsonl"
        self.runs_dir = self.data_dir / "runs"
        self.annotations_dir = self.data_dir / "annotations"
        self.write_lock = threading.Lock()
        self.run_lock = threading.Lock()
        self.runs: dict[str, dict] = self._load_runs()

    # -- queue ------------------------------------------------------------

    def load_queue(self) -> list[dict]:
        if not self.queue_path.exists():
            return []
        with open(self.queue_path, encoding="utf-8") as fh:
            return json.load(fh)["items"]

    def save_queue(self, items: list[dict]) -> None:
        body = json.dumps({"items": items}, indent=2, sort_keys=True, ensure_ascii=False)
        self.queue_path.write_text(body + "\n", "utf-8")

    def unresolved(self) -> list[dict]:
        items = [i for i in self.load_queue() if not i["resolved"]]
        items.sort(key=lambda i: (-_best_similarity(i), i["class_id"]))
        return items

    def find_item(self, item_id: str) -> dict | None:
        for item in self.load_queue():
            if item["item_id"] == item_id:
                return item
        return None

    def rebuild_queue(self, run_id: str, outcomes: list[oe.EnrichmentOutcome]) -> None:
        """Replace unresolved items with the outcomes of a fresh sweep."""
        kept = [i for i in self.load_queue() if i["resolved"]]
        for outcome in outcomes:
            if outcome.decision == "auto":
                continue
            kept.append(
                {
                    "item_id": f"{run_id}:{outcome.class_id}",
                    "class_id": outcome.class_id,
                    "class_name": self.store.current.get_class(outcome.class_id).name,
                    "decision": outcome.decision,
                    "candidates": [
                        {**c.entity.to_dict(), "similarity": c.similarity}
                        for c in outcome.candidates
                    ],
                    "fallback_terms": outcome.fallback_terms,
                    "created_at": _now(),
                    "resolved": False,
                    "resolution": None,
                }
            )
        self.save_queue(kept)

    # -- decisions ---------------------------------------------------------

    def append_decision(self, record: dict) -> None:
        with open(self.decision_log, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")

    # -- runs ---------------------------------------------------------------

    def _load_runs(self) -> dict[str, dict]:
        index = self.runs_dir / "index.json"
        if index.exists():
            with open(index, encoding="utf-8") as fh:
                return json.load(fh)
        return {}

    def save_runs(self) -> None:
        self.runs_dir.mkdir(parents=True, exist_ok=True)
        body = json.dumps(self.runs, indent=2, sort_keys=True, ensure_ascii=False)
        (self.runs_dir / "index.json").write_text(body + "\n", "utf-8")

    def next_run_id(self, kind: str) -> str:
        n = 1 + sum(1 for r in self.runs.values() if r["kind"] == kind)
        return f"{kind}-{n:04d}"

    # -- pipeline ingredients ------------------------------------------------

    def lexicon(self) -> Lexicon:
        if self.config.lexicon_dir:
            path = Path(self.config.lexicon_dir)
            if not path.is_absolute():
                path = self.data_dir / path
            return Lexicon.load(path)
        return Lexicon.bundled_mini()

    def kb_client(self) -> KbClient:
        cache = Path(self.config.cache_dir)
        if not cache.is_absolute():
            cache = self.data_dir / cache
        return KbClient(
            endpoint=self.config.kb_endpoint,
            cache_dir=cache,
            offline=self.config.offline,
            rate_limit_per_sec=self.config.rate_limit_per_sec,
        )

    def documents(self):
        if not self.config.manifest:
            raise ContronError("no corpus manifest configured")
        manifest = Path(self.config.manifest)
        if not manifest.is_absolute():
            manifest = self.data_dir / manifest
        return load_corpus(manifest, pdf_converter=self.config.pdf_converter)


def _best_similarity(item: dict) -> float:
    return max((c.get("similarity", 0.0) for c in item["candidates"]), default=0.0)


def create_app(
    data_dir: str | Path,
    config: Config | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    store = DataStore(data_dir, config)
    app = FastAPI(title="contron review service", version="0.1.0")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def authorized(request: Request) -> None:
        token = store.config.auth_token
        if token and request.headers.get("x-auth-token") != token:
            raise HTTPException(status_code=401, detail="missing or wrong token")

    guard = Depends(authorized)

    @app.exception_handler(ContronError)
    async def _contron_error(_request, exc: ContronError):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    # -- queue -----------------------------------------------------------

    @app.get("/api/queue", dependencies=[guard])
    def get_queue() -> dict:
        return {"items": store.unresolved()}

    @app.post("/api/queue/{item_id}/decision", dependencies=[guard])
    def post_decision(item_id: str, body: DecisionBody) -> dict:
        with store.write_lock:
            item = store.find_item(item_id)
            if item is None:
                raise HTTPException(status_code=404, detail=f"unknown item {item_id}")
            requested = _decision_payload(body)
            if item["resolved"]:
                if item["resolution"] and item["resolution"]["request"] == requested:
                    return {"item": item, "replayed": True}
                raise HTTPException(status_code=409, detail="item already resolved")
            candidate_ids = {c["entity_id"] for c in item["candidates"]}
            mutation = _mutation_for(body, item, candidate_ids)
            version_before = store.store.current.version
            if mutation is not None:
                store.store.commit([mutation], actor=body.actor)
            resolution = {
                "request": requested,
                "actor": body.actor,
                "timestamp": _now(),
                "version_after": store.store.current.version,
            }
            items = store.load_queue()
            for stored in items:
                if stored["item_id"] == item_id:
                    stored["resolved"] = True
                    stored["resolution"] = resolution
                    item = stored
            store.save_queue(items)
            store.append_decision({"item_id": item_id, **resolution})
            return {
                "item": item,
                "replayed": False,
                "version_before": version_before,
                "version_after": store.store.current.version,
            }

    # -- ontology ----------------------------------------------------------

    @app.get("/api/ontology", dependencies=[guard])
    def get_ontology() -> dict:
        return json.loads(ontology_dumps(store.store.current))

    @app.get("/api/ontology/history", dependencies=[guard])
    def get_history() -> dict:
        entries = [
            {
                "version": e["version"],
                "actor": e.get("actor", ""),
                "timestamp": e.get("timestamp", ""),
                "action": e["mutation"]["action"],
                "class_id": e["mutation"].get("class_id"),
            }
            for e in store.store.history()
        ]
        return {"version": store.store.current.version, "entries": entries}

    # -- documents -----------------------------------------------------------

    @app.get("/api/documents/{doc_id}", dependencies=[guard])
    def get_document(doc_id: str) -> dict:
        for doc in store.documents():
            if doc.doc_id == doc_id:
                return {"doc_id": doc.doc_id, "category": doc.category, "text": doc.text}
        raise HTTPException(status_code=404, detail=f"unknown document {doc_id}")

    @app.get("/api/documents/{doc_id}/annotations", dependencies=[guard])
    def get_annotations(doc_id: str) -> dict:
        path = store.annotations_dir / f"{doc_id}.json"
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"no annotations for {doc_id}")
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)

    # -- pipeline -------------------------------------------------------------

    @app.post("/api/pipeline/enrich", dependencies=[guard])
    def run_enrich() -> dict:
        return _run(store, "enrich")

    @app.post("/api/pipeline/extract", dependencies=[guard])
    def run_extract() -> dict:
        return _run(store, "extract")

    @app.get("/api/pipeline/runs/{run_id}", dependencies=[guard])
    def run_status(run_id: str) -> dict:
        run = store.runs.get(run_id)
        if run is None:
            raise HTTPException(status_code=404, detail=f"unknown run {run_id}")
        return run

    @app.get("/api/pipeline/runs", dependencies=[guard])
    def run_list() -> dict:
        return {"runs": sorted(store.runs.values(), key=lambda r: r["run_id"])}

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def _decision_payload(body: DecisionBody) -> dict:
    return {
        "action": body.action,
        "entity_id": body.entity_id,
        "entity_ids": sorted(body.entity_ids) if body.entity_ids else None,
    }


def _mutation_for(body: DecisionBody, item: dict, candidate_ids: set[str]) -> dict | None:
    if body.action == "select":
        if not body.entity_id:
            raise HTTPException(status_code=400, detail="select needs entity_id")
        if body.entity_id not in candidate_ids:
            raise HTTPException(
                status_code=400, detail=f"{body.entity_id} is not among the candidates"
            )
        entity = next(
            c for c in item["candidates"] if c["entity_id"] == body.entity_id
        )
        entity = {k: v for k, v in entity.items() if k != "similarity"}
        return {
            "action": "apply_enrichment",
            "class_id": item["class_id"],
            "entity": entity,
            "mode": "expert",
        }
    if body.action == "disjoint":
        ids = body.entity_ids or ([body.entity_id] if body.entity_id else [])
        if not ids:
            raise HTTPException(status_code=400, detail="disjoint needs entity_ids")
        unknown = [i for i in ids if i not in candidate_ids]
        if unknown:
            raise HTTPException(
                status_code=400, detail=f"not among the candidates: {unknown}"
            )
        return {"action": "disjoint", "class_id": item["class_id"], "entity_ids": ids}
    if body.action == "no_match":
        return {
            "action": "no_match",
            "class_id": item["class_id"],
            "fallback_terms": item.get("fallback_terms", []),
        }
    return None  # skip


def _run(store: DataStore, kind: str) -> dict:
    if not store.run_lock.acquire(blocking=False):
        raise HTTPException(status_code=409, detail="a pipeline run is in flight")
    try:
        run_id = store.next_run_id(kind)
        run = {
            "run_id": run_id,
            "kind": kind,
            "state": "running",
            "started_at": _now(),
            "finished_at": None,
            "summary": {},
        }
        store.runs[run_id] = run
        store.save_runs()
        try:
            summary = _run_enrich(store, run_id) if kind == "enrich" else _run_extract(store, run_id)
            run.update(state="done", finished_at=_now(), summary=summary)
        except Exception as exc:
            run.update(state="error", finished_at=_now(), summary={"error": str(exc)})
            store.save_runs()
            raise HTTPException(status_code=500, detail=f"{kind} run failed: {exc}")
        store.save_runs()
        return run
    finally:
        store.run_lock.release()


def _run_enrich(store: DataStore, run_id: str) -> dict:
    lexicon = store.lexicon()
    documents = store.documents()
    concepts = dke.extract_domain_knowledge(
        documents,
        lexicon,
        max_arity=store.config.max_arity,
        top_k=store.config.top_k,
        min_score=store.config.min_score,
        senses_per_topic=store.config.senses_per_topic,
    )
    report = oe.enrich_ontology(
        store.store.current,
        concepts,
        store.kb_client(),
        threshold=store.config.threshold,
        lexicon=lexicon,
        limit=store.config.search_limit,
    )
    with store.write_lock:
        store.store.commit(report.mutations, actor=run_id)
        store.rebuild_queue(run_id, report.outcomes)
    store.runs_dir.mkdir(parents=True, exist_ok=True)
    ledger = oe.ledger_bytes(report.outcomes, store.config.threshold)
    (store.runs_dir / f"{run_id}.ledger.json").write_bytes(ledger)
    histogram = report.histogram()
    return {
        "concepts": len(concepts),
        "outcomes": histogram,
        "errors": report.errors,
        "ontology_version": store.store.current.version,
    }


def _run_extract(store: DataStore, run_id: str) -> dict:
    documents = store.documents()
    store.annotations_dir.mkdir(parents=True, exist_ok=True)
    store.runs_dir.mkdir(parents=True, exist_ok=True)
    ontology = store.store.current
    all_pairs = []
    for doc in documents:
        pairs, annotations = ie.extract_information(
            ontology,
            doc,
            window=store.config.window_after,
            window_before=store.config.window_before,
        )
        ie.write_annotations(store.annotations_dir / f"{doc.doc_id}.json", doc.doc_id, annotations)
        all_pairs.extend(pairs)
    tsv = ie.pairs_to_tsv(all_pairs)
    (store.runs_dir / f"{run_id}.pairs.tsv").write_text(tsv, "utf-8")
    return {"documents": len(documents), "pairs": len(all_pairs)}

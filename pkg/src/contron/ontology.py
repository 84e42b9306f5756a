"""Ontology model, canonical interchange format, and versioned store.

Classes carry their expert-authored names plus everything enrichment adds:
labels, alternative labels, synonyms, categories, the matched knowledge-base
entity, and the set of entities an expert has ruled out ("disjointed").
Every mutation bumps the version by exactly one and is replayable from an
append-only change log, so any historical version can be reconstructed.

Mutations are pure: they return a new ontology and leave the input alone.
"""

from __future__ import annotations

import copy
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import (
    DisjointViolationError,
    OntologyFormatError,
    UnknownClassError,
)
from .kb import KbEntity

REVIEW_STATUSES = (
    "unreviewed",
    "auto_enriched",
    "expert_confirmed",
    "needs_review",
    "no_match",
)


@dataclass
class OntologyClass:
    class_id: str
    name: str
    labels: list[str] = field(default_factory=list)
    alt_labels: list[str] = field(default_factory=list)
    synonyms: list[str] = field(default_factory=list)
    categories: list[str] = field(default_factory=list)
    description: str | None = None
    matched_entity: str | None = None
    disjoint_entities: list[str] = field(default_factory=list)
    review_status: str = "unreviewed"
    parent: str | None = None
    intrinsic: bool = True
    # per-entity record of what enrichment added, so a later disjoint can
    # take exactly those additions back out
    provenance: dict[str, dict] = field(default_factory=dict)


@dataclass
class Ontology:
    ontology_id: str
    version: int = 0
    classes: list[OntologyClass] = field(default_factory=list)
    imports: list[str] = field(default_factory=list)

    def get_class(self, class_id: str) -> OntologyClass:
        for cls in self.classes:
            if cls.class_id == class_id:
                return cls
        raise UnknownClassError(class_id)

    def intrinsic_classes(self) -> list[OntologyClass]:
        return [c for c in self.classes if c.intrinsic]


def validate(ontology: Ontology) -> None:
    """Raise OntologyFormatError on any schema or consistency violation."""
    seen: set[str] = set()
    for cls in ontology.classes:
        at = f"class {cls.class_id!r}"
        if not cls.class_id:
            raise OntologyFormatError("empty class_id", at)
        if cls.class_id in seen:
            raise OntologyFormatError("duplicate class_id", at)
        seen.add(cls.class_id)
        if not cls.name:
            raise OntologyFormatError("empty name", at)
        if cls.review_status not in REVIEW_STATUSES:
            raise OntologyFormatError(f"bad review_status {cls.review_status!r}", at)
        if cls.matched_entity and cls.matched_entity in cls.disjoint_entities:
            raise OntologyFormatError("matched_entity is disjointed", at)
        if cls.review_status in ("auto_enriched", "expert_confirmed") and not cls.matched_entity:
            raise OntologyFormatError(
                f"status {cls.review_status} requires a matched entity", at
            )
    for cls in ontology.classes:
        if cls.parent is None or cls.parent in seen:
            continue
        if any(cls.parent.startswith(f"{imp}:") for imp in ontology.imports):
            continue
        raise OntologyFormatError(
            f"parent {cls.parent!r} resolves to neither a class nor an import",
            f"class {cls.class_id!r}",
        )


# -- interchange ----------------------------------------------------------


def dumps(ontology: Ontology) -> str:
    payload = {
        "ontology_id": ontology.ontology_id,
        "version": ontology.version,
        "imports": ontology.imports,
        "classes": [asdict(c) for c in ontology.classes],
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def loads(text: str, source: str = "<string>") -> Ontology:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OntologyFormatError(f"not valid JSON: {exc}", source) from exc
    try:
        classes = []
        for i, raw in enumerate(payload.get("classes", [])):
            known = {f: raw[f] for f in OntologyClass.__dataclass_fields__ if f in raw}
            extra = set(raw) - set(known)
            if extra:
                raise OntologyFormatError(
                    f"unknown fields {sorted(extra)}", f"{source}: classes[{i}]"
                )
            classes.append(OntologyClass(**known))
        ontology = Ontology(
            ontology_id=payload["ontology_id"],
            version=int(payload.get("version", 0)),
            classes=classes,
            imports=list(payload.get("imports", [])),
        )
    except (KeyError, TypeError) as exc:
        raise OntologyFormatError(f"bad record: {exc}", source) from exc
    validate(ontology)
    return ontology


def save(ontology: Ontology, path: str | Path) -> None:
    Path(path).write_text(dumps(ontology), "utf-8")


def load(path: str | Path) -> Ontology:
    return loads(Path(path).read_text("utf-8"), source=str(path))


# -- pure mutations ---------------------------------------------------------


def _merge(target: list[str], items: list[str]) -> list[str]:
    added = []
    for item in items:
        if item and item not in target:
            target.append(item)
            added.append(item)
    return added


def apply_enrichment(
    ontology: Ontology, class_id: str, entity: KbEntity, mode: str = "auto"
) -> Ontology:
    """Attach a knowledge-base entity to a class and merge its texts.

    ``mode`` is ``auto`` (machine-confident) or ``expert`` (human-selected).
    Re-applying the same entity is idempotent apart from the version bump;
    switching entities first takes back what the previous one added.
    """
    if mode not in ("auto", "expert"):
        raise ValueError(f"mode must be auto or expert, got {mode!r}")
    updated = copy.deepcopy(ontology)
    cls = updated.get_class(class_id)
    if entity.entity_id in cls.disjoint_entities:
        raise DisjointViolationError(
            f"{entity.entity_id} was disjointed from {class_id}"
        )
    if cls.matched_entity and cls.matched_entity != entity.entity_id:
        _retract_entity(cls, cls.matched_entity)
    added_labels = _merge(cls.labels, [entity.label])
    added_alt = _merge(cls.alt_labels, entity.aliases)
    added_cats = _merge(cls.categories, entity.category_labels)
    prov = cls.provenance.setdefault(entity.entity_id, {
        "labels": [], "alt_labels": [], "categories": [], "description": None,
    })
    prov["labels"] = sorted(set(prov["labels"]) | set(added_labels))
    prov["alt_labels"] = sorted(set(prov["alt_labels"]) | set(added_alt))
    prov["categories"] = sorted(set(prov["categories"]) | set(added_cats))
    if entity.description and not cls.description:
        cls.description = entity.description
        prov["description"] = entity.description
    cls.matched_entity = entity.entity_id
    cls.review_status = "expert_confirmed" if mode == "expert" else "auto_enriched"
    updated.version += 1
    validate(updated)
    return updated


def _retract_entity(cls: OntologyClass, entity_id: str) -> None:
    prov = cls.provenance.pop(entity_id, None)
    if prov is None:
        return
    others = cls.provenance.values()
    for field_name in ("labels", "alt_labels", "categories"):
        still_wanted = {v for p in others for v in p.get(field_name, [])}
        keep = [
            v
            for v in getattr(cls, field_name)
            if v not in set(prov.get(field_name, [])) or v in still_wanted
        ]
        setattr(cls, field_name, keep)
    if prov.get("description") and cls.description == prov["description"]:
        cls.description = None


def disjoint_entities(
    ontology: Ontology, class_id: str, entity_ids: list[str]
) -> Ontology:
    """Rule entities out for a class; clears the match if it is among them."""
    updated = copy.deepcopy(ontology)
    cls = updated.get_class(class_id)
    for entity_id in entity_ids:
        if entity_id not in cls.disjoint_entities:
            cls.disjoint_entities.append(entity_id)
        if cls.matched_entity == entity_id:
            _retract_entity(cls, entity_id)
            cls.matched_entity = None
            cls.review_status = "needs_review"
    updated.version += 1
    validate(updated)
    return updated


def disjoint_entity(ontology: Ontology, class_id: str, entity_id: str) -> Ontology:
    return disjoint_entities(ontology, class_id, [entity_id])


def record_no_match(
    ontology: Ontology, class_id: str, fallback_terms: list[str]
) -> Ontology:
    """Mark a class as having no knowledge-base match; keep the fallback
    synonyms gathered from the lexicon as extra search keywords."""
    updated = copy.deepcopy(ontology)
    cls = updated.get_class(class_id)
    _merge(cls.synonyms, [t.replace("_", " ") for t in fallback_terms])
    if cls.review_status not in ("expert_confirmed",):
        cls.review_status = "no_match"
    updated.version += 1
    validate(updated)
    return updated


def keywords_of(cls: OntologyClass) -> list[str]:
    """Search keywords in priority order: name, labels, alternative labels,
    synonyms, categories; case-normalized and deduplicated."""
    out: list[str] = []
    seen: set[str] = set()
    for value in [cls.name, *cls.labels, *cls.alt_labels, *cls.synonyms, *cls.categories]:
        keyword = " ".join(value.lower().split())
        if keyword and keyword not in seen:
            seen.add(keyword)
            out.append(keyword)
    return out


# -- mutation records and the store -----------------------------------------


def apply_mutation(ontology: Ontology, mutation: dict) -> Ontology:
    """Dispatch one change-log record against an ontology."""
    action = mutation["action"]
    if action == "apply_enrichment":
        return apply_enrichment(
            ontology,
            mutation["class_id"],
            KbEntity.from_dict(mutation["entity"]),
            mode=mutation.get("mode", "auto"),
        )
    if action == "disjoint":
        return disjoint_entities(ontology, mutation["class_id"], mutation["entity_ids"])
    if action == "no_match":
        return record_no_match(
            ontology, mutation["class_id"], mutation.get("fallback_terms", [])
        )
    raise ValueError(f"unknown mutation action {action!r}")


class OntologyStore:
    """Single-writer persistence: snapshot + append-only change log.

    The first commit freezes a base snapshot; replaying the log against it
    reproduces any committed version.
    """

    def __init__(self, snapshot_path: str | Path):
        self.snapshot_path = Path(snapshot_path)
        stem = self.snapshot_path.with_suffix("")
        self.base_path = Path(f"{stem}.base.json")
        self.log_path = Path(f"{stem}.changelog.jsonl")
        self.current = load(self.snapshot_path)
        if not self.base_path.exists():
            save(self.current, self.base_path)

    @classmethod
    def initialize(cls, ontology: Ontology, snapshot_path: str | Path) -> "OntologyStore":
        save(ontology, snapshot_path)
        return cls(snapshot_path)

    def commit(self, mutations: list[dict], actor: str = "system") -> Ontology:
        """Apply mutations in order, persisting snapshot and log entries."""
        updated = self.current
        entries = []
        for mutation in mutations:
            updated = apply_mutation(updated, mutation)
            entries.append(
                {
                    "version": updated.version,
                    "actor": actor,
                    "timestamp": datetime.now(timezone.utc).isoformat(),
                    "mutation": mutation,
                }
            )
        save(updated, self.snapshot_path)
        with open(self.log_path, "a", encoding="utf-8") as fh:
            for entry in entries:
                fh.write(json.dumps(entry, sort_keys=True, ensure_ascii=False) + "\n")
        self.current = updated
        return updated

    def history(self) -> list[dict]:
        if not self.log_path.exists():
            return []
        with open(self.log_path, encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]

    def at_version(self, version: int) -> Ontology:
        base = load(self.base_path)
        if version < base.version:
            raise ValueError(f"version {version} predates the base snapshot")
        ontology = base
        for entry in self.history():
            if entry["version"] > version:
                break
            ontology = apply_mutation(ontology, entry["mutation"])
        if ontology.version != version:
            raise ValueError(f"version {version} not found in the change log")
        return ontology

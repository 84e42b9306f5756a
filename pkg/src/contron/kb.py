"""Client for a Wikidata-style knowledge base.

Talks to the public entity-search and entity-data HTTP endpoints, reads only
English labels, descriptions, aliases, and instance-of/subclass-of claims,
and caches every fully hydrated query on disk.  In offline mode the cache is
the only source: a miss raises instead of touching the network, which keeps
test runs hermetic and results pinned against a moving knowledge base.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from .config import DEFAULT_KB_ENDPOINT
from .errors import (
    CacheMissError,
    MalformedResponseError,
    NetworkError,
    RateLimitedError,
)

INSTANCE_OF = "P31"
SUBCLASS_OF = "P279"


@dataclass
class KbEntity:
    entity_id: str
    label: str = ""
    description: str = ""
    aliases: list[str] = field(default_factory=list)
    category_ids: list[str] = field(default_factory=list)
    category_labels: list[str] = field(default_factory=list)

    def text(self) -> str:
        """All searchable text of the entity, used for vector matching."""
        parts = [self.label, self.description, *self.aliases, *self.category_labels]
        return " ".join(p for p in parts if p)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "KbEntity":
        return cls(
            entity_id=raw["entity_id"],
            label=raw.get("label", ""),
            description=raw.get("description", ""),
            aliases=list(raw.get("aliases", [])),
            category_ids=list(raw.get("category_ids", [])),
            category_labels=list(raw.get("category_labels", [])),
        )


Transport = Callable[[str, dict], dict]


def _requests_transport(url: str, params: dict) -> dict:
    import requests

    try:
        response = requests.get(
            url,
            params=params,
            timeout=30,
            headers={"User-Agent": "contron/0.1 (ontology enrichment toolkit)"},
        )
    except requests.RequestException as exc:
        raise NetworkError(str(exc)) from exc
    if response.status_code == 429:
        raise RateLimitedError(f"{url} answered 429")
    if response.status_code >= 400:
        raise NetworkError(f"{url} answered {response.status_code}")
    try:
        return response.json()
    except ValueError as exc:
        raise MalformedResponseError(f"non-JSON body from {url}") from exc


class _Pacer:
    """Serializes outbound requests to at most ``rate`` per second."""

    def __init__(self, rate: float):
        self.interval = 1.0 / rate if rate > 0 else 0.0
        self._lock = threading.Lock()
        self._next_at = 0.0

    def wait(self) -> None:
        if self.interval == 0.0:
            return
        with self._lock:
            now = time.monotonic()
            delay = self._next_at - now
            self._next_at = max(now, self._next_at) + self.interval
        if delay > 0:
            time.sleep(delay)


def search_cache_key(endpoint: str, name: str, limit: int) -> str:
    return json.dumps(
        {"op": "search", "endpoint": endpoint, "name": name, "limit": limit},
        sort_keys=True,
    )


def entity_cache_key(endpoint: str, entity_id: str) -> str:
    return json.dumps(
        {"op": "entity", "endpoint": endpoint, "id": entity_id}, sort_keys=True
    )


def _cache_file(cache_dir: Path, key: str) -> Path:
    digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
    return cache_dir / f"{digest}.json"


def _write_cache_doc(cache_dir: Path, key: str, payload: dict) -> None:
    cache_dir.mkdir(parents=True, exist_ok=True)
    target = _cache_file(cache_dir, key)
    body = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(body)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def seed_search_cache(
    cache_dir: str | Path,
    name: str,
    entities: list[KbEntity],
    limit: int = 10,
    endpoint: str = DEFAULT_KB_ENDPOINT,
    retrieved_at: str = "2026-01-01T00:00:00+00:00",
) -> None:
    """Write a search-result cache document, e.g. for offline fixtures."""
    key = search_cache_key(endpoint, name, limit)
    _write_cache_doc(
        Path(cache_dir),
        key,
        {
            "query": json.loads(key),
            "retrieved_at": retrieved_at,
            "entities": [e.to_dict() for e in entities],
        },
    )


class KbClient:
    """Thread-safe, rate-limited, caching knowledge-base client."""

    def __init__(
        self,
        endpoint: str = DEFAULT_KB_ENDPOINT,
        cache_dir: str | Path = ".contron-cache",
        offline: bool = False,
        rate_limit_per_sec: float = 5.0,
        transport: Transport | None = None,
        max_retries: int = 3,
        backoff: float = 0.5,
    ):
        self.endpoint = endpoint
        self.cache_dir = Path(cache_dir)
        self.offline = offline
        self._transport = transport or _requests_transport
        self._pacer = _Pacer(rate_limit_per_sec)
        self.max_retries = max_retries
        self.backoff = backoff

    # -- cache -----------------------------------------------------------

    def _read_cache(self, key: str) -> dict | None:
        path = _cache_file(self.cache_dir, key)
        if not path.exists():
            return None
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)

    def _store_cache(self, key: str, entities: list[KbEntity]) -> None:
        _write_cache_doc(
            self.cache_dir,
            key,
            {
                "query": json.loads(key),
                "retrieved_at": datetime.now(timezone.utc).isoformat(),
                "entities": [e.to_dict() for e in entities],
            },
        )

    # -- request plumbing --------------------------------------------------

    def _request(self, params: dict) -> dict:
        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            self._pacer.wait()
            try:
                return self._transport(self.endpoint, params)
            except RateLimitedError:
                raise
            except NetworkError as exc:
                last_error = exc
                if attempt + 1 < self.max_retries:
                    time.sleep(self.backoff * (2**attempt))
        raise NetworkError(f"gave up after {self.max_retries} attempts: {last_error}")

    # -- protocol ----------------------------------------------------------

    def search_entities(self, name: str, limit: int = 10) -> list[KbEntity]:
        """Entities whose label or alias matches ``name`` (service-side
        matching), hydrated with description, aliases, and categories."""
        if not name:
            raise ValueError("search name must be nonempty")
        if limit < 1:
            raise ValueError("limit must be >= 1")
        key = search_cache_key(self.endpoint, name, limit)
        cached = self._read_cache(key)
        if cached is not None:
            return [KbEntity.from_dict(e) for e in cached.get("entities", [])]
        if self.offline:
            raise CacheMissError(f"offline and not cached: search {name!r} (limit {limit})")
        raw = self._request(
            {
                "action": "wbsearchentities",
                "search": name,
                "language": "en",
                "uselang": "en",
                "type": "item",
                "format": "json",
                "limit": limit,
            }
        )
        try:
            ids = [hit["id"] for hit in raw["search"]]
        except (KeyError, TypeError) as exc:
            raise MalformedResponseError(f"unexpected search payload: {exc}") from exc
        entities = self._hydrate(ids) if ids else []
        self._store_cache(key, entities)
        return entities

    def get_entity(self, entity_id: str) -> KbEntity | None:
        key = entity_cache_key(self.endpoint, entity_id)
        cached = self._read_cache(key)
        if cached is not None:
            hits = cached.get("entities", [])
            return KbEntity.from_dict(hits[0]) if hits else None
        if self.offline:
            raise CacheMissError(f"offline and not cached: entity {entity_id}")
        entities = self._hydrate([entity_id])
        _write_cache_doc(
            self.cache_dir,
            key,
            {
                "query": json.loads(key),
                "retrieved_at": datetime.now(timezone.utc).isoformat(),
                "entities": [e.to_dict() for e in entities],
            },
        )
        return entities[0] if entities else None

    def _hydrate(self, ids: list[str]) -> list[KbEntity]:
        docs = self._get_entity_docs(ids, props="labels|descriptions|aliases|claims")
        entities: list[KbEntity] = []
        category_ids: list[str] = []
        for entity_id in ids:
            doc = docs.get(entity_id)
            if doc is None:
                continue
            cats = _claim_targets(doc, INSTANCE_OF) + _claim_targets(doc, SUBCLASS_OF)
            entities.append(
                KbEntity(
                    entity_id=entity_id,
                    label=_lang_value(doc.get("labels")),
                    description=_lang_value(doc.get("descriptions")),
                    aliases=_alias_values(doc.get("aliases")),
                    category_ids=cats,
                )
            )
            category_ids.extend(cats)
        labels = self._labels_for(sorted(set(category_ids)))
        for entity in entities:
            entity.category_labels = [
                labels[c] for c in entity.category_ids if labels.get(c)
            ]
        return entities

    def _labels_for(self, ids: list[str]) -> dict[str, str]:
        out: dict[str, str] = {}
        for i in range(0, len(ids), 50):
            docs = self._get_entity_docs(ids[i : i + 50], props="labels")
            for entity_id, doc in docs.items():
                out[entity_id] = _lang_value(doc.get("labels"))
        return out

    def _get_entity_docs(self, ids: list[str], props: str) -> dict[str, dict]:
        if not ids:
            return {}
        raw = self._request(
            {
                "action": "wbgetentities",
                "ids": "|".join(ids),
                "props": props,
                "languages": "en",
                "format": "json",
            }
        )
        entities = raw.get("entities")
        if not isinstance(entities, dict):
            raise MalformedResponseError("entity-data payload without 'entities'")
        return entities


def _lang_value(block: dict | None, lang: str = "en") -> str:
    if not block:
        return ""
    value = block.get(lang)
    return value.get("value", "") if isinstance(value, dict) else ""


def _alias_values(block: dict | None, lang: str = "en") -> list[str]:
    if not block:
        return []
    seen: set[str] = set()
    out: list[str] = []
    for item in block.get(lang, []):
        value = item.get("value") if isinstance(item, dict) else None
        if value and value not in seen:
            seen.add(value)
            out.append(value)
    return out


def _claim_targets(doc: dict, prop: str) -> list[str]:
    out: list[str] = []
    for claim in doc.get("claims", {}).get(prop, []):
        snak = claim.get("mainsnak", {})
        value = snak.get("datavalue", {}).get("value")
        if isinstance(value, dict) and "id" in value:
            out.append(value["id"])
    return out

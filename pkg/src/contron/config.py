"""Runtime configuration with file, environment, and CLI overrides.

Precedence, lowest to highest: built-in defaults, config file, environment
variables (``CONTRON_*``), explicit keyword overrides from the CLI.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

DEFAULT_KB_ENDPOINT = "https://www.wikidata.org/w/api.php"

_ENV_KEYS = {
    "kb_endpoint": "CONTRON_ENDPOINT",
    "cache_dir": "CONTRON_CACHE_DIR",
    "offline": "CONTRON_OFFLINE",
    "lexicon_dir": "CONTRON_LEXICON_DIR",
    "auth_token": "CONTRON_AUTH_TOKEN",
}


@dataclass
class Config:
    kb_endpoint: str = DEFAULT_KB_ENDPOINT
    cache_dir: str = ".contron-cache"
    offline: bool = False
    lexicon_dir: str | None = None
    pdf_converter: str | None = None  # command template with an {input} placeholder
    max_arity: int = 3
    top_k: int = 1000
    min_score: float = 0.0
    senses_per_topic: int = 5
    threshold: float = 0.3
    search_limit: int = 10
    rate_limit_per_sec: float = 5.0
    window_after: int = 10
    window_before: int = 5
    auth_token: str | None = None
    manifest: str | None = None
    ui_dir: str | None = None
    extras: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path: str | Path | None = None, **overrides) -> "Config":
        values: dict = {}
        if path is not None and Path(path).exists():
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
            known = {f.name for f in fields(cls)}
            values.update({k: v for k, v in raw.items() if k in known})
            values.setdefault("extras", {}).update(
                {k: v for k, v in raw.items() if k not in known}
            )
        for attr, env in _ENV_KEYS.items():
            if env in os.environ:
                raw_val = os.environ[env]
                if attr == "offline":
                    values[attr] = raw_val.strip().lower() in {"1", "true", "yes", "on"}
                else:
                    values[attr] = raw_val
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

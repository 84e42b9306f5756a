"""Lexical database access: synset lookup, hypernyms, Wu-Palmer similarity.

Reads the standard plain-text distribution format (``index.<pos>`` and
``data.<pos>`` files).  A small hand-authored database in the same format is
bundled for hermetic tests; a full database can be pointed to via
configuration.

Conventions:

* synset keys are ``lemma.pos.nn`` where ``lemma`` is the synset's first
  member word, ``pos`` its type letter, and ``nn`` the sense number of that
  word (position in the word's index entry, 1-based);
* a taxonomy root has depth 1 and every other synset's depth is 1 plus the
  minimum of its hypernyms' depths;
* pairs with no common subsumer (e.g. an adjective and a noun) have
  similarity 0, meaning "irrelevant".
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import MissingDatabaseError

POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
# Satellite adjectives ('s') live in the adj files and index under 'a'.
_INDEX_POS = {"n": "n", "v": "v", "a": "a", "s": "a", "r": "r"}
_HYPERNYM_SYMBOLS = {"@", "@i"}
_ADJ_MARKER_RE = re.compile(r"\((a|p|ip)\)$")

VALID_POS = ("n", "v", "a", "r", "s")


@dataclass(frozen=True)
class SynsetId:
    """Parsed form of a canonical ``lemma.pos.nn`` key."""

    lemma: str
    pos: str
    sense: int

    @classmethod
    def parse(cls, key: str) -> "SynsetId":
        lemma, pos, sense = key.rsplit(".", 2)
        if pos not in VALID_POS:
            raise ValueError(f"bad part of speech in synset key: {key!r}")
        number = int(sense)
        if number < 1:
            raise ValueError(f"sense number must be >= 1: {key!r}")
        return cls(lemma=lemma, pos=pos, sense=number)

    def __str__(self) -> str:
        return f"{self.lemma}.{self.pos}.{self.sense:02d}"


@dataclass
class Synset:
    id: str
    pos: str  # one of n, v, a, r, s
    offset: int
    gloss: str
    lemmas: list[str]
    hypernym_ids: list[str] = field(default_factory=list)

    def __hash__(self) -> int:
        return hash(self.id)

    def __eq__(self, other) -> bool:
        return isinstance(other, Synset) and self.id == other.id


def _strip_marker(word: str) -> str:
    return _ADJ_MARKER_RE.sub("", word)


def _parse_data_line(line: str, ss_file_pos: str):
    """Parse one data-file record into its raw fields."""
    head, _, gloss = line.partition("|")
    gloss = gloss.strip()
    tokens = head.split()
    offset = int(tokens[0])
    ss_type = tokens[2]
    w_cnt = int(tokens[3], 16)
    words = []
    idx = 4
    for _ in range(w_cnt):
        words.append(_strip_marker(tokens[idx]).lower())
        idx += 2  # skip lex_id
    p_cnt = int(tokens[idx])
    idx += 1
    pointers = []
    for _ in range(p_cnt):
        symbol, ptr_offset, ptr_pos, _src = tokens[idx : idx + 4]
        pointers.append((symbol, int(ptr_offset), ptr_pos))
        idx += 4
    return offset, ss_type, words, pointers, gloss


class Lexicon:
    """Immutable after load; lookups and similarity calls are pure."""

    def __init__(self) -> None:
        self._by_id: dict[str, Synset] = {}
        self._by_offset: dict[tuple[str, int], Synset] = {}  # (file pos, offset)
        self._index: dict[tuple[str, str], list[int]] = {}  # (lemma, file pos) -> offsets
        self._depth: dict[str, int] = {}

    # -- loading ---------------------------------------------------------

    @classmethod
    def load(cls, db_path: str | Path) -> "Lexicon":
        db_path = Path(db_path)
        lex = cls()
        found = False
        for file_pos, name in POS_FILES.items():
            index_file = db_path / f"index.{name}"
            data_file = db_path / f"data.{name}"
            if not (index_file.exists() and data_file.exists()):
                continue
            found = True
            lex._load_index(index_file, file_pos)
            lex._load_data(data_file, file_pos)
        if not found:
            raise MissingDatabaseError(
                f"no index/data files found under {db_path}"
            )
        lex._assign_ids()
        return lex

    def _load_index(self, path: Path, file_pos: str) -> None:
        for line in path.read_text("utf-8").splitlines():
            if not line or line.startswith(" "):
                continue
            tokens = line.split()
            lemma = tokens[0].lower()
            synset_cnt = int(tokens[2])
            p_cnt = int(tokens[3])
            offsets = [int(t) for t in tokens[6 + p_cnt : 6 + p_cnt + synset_cnt]]
            self._index[(lemma, file_pos)] = offsets

    def _load_data(self, path: Path, file_pos: str) -> None:
        for line in path.read_text("utf-8").splitlines():
            if not line or line.startswith(" "):
                continue
            offset, ss_type, words, pointers, gloss = _parse_data_line(line, file_pos)
            synset = Synset(
                id="",  # assigned once all index entries are known
                pos=ss_type,
                offset=offset,
                gloss=gloss,
                lemmas=words,
            )
            synset._raw_pointers = [  # type: ignore[attr-defined]
                (sym, off, pos) for sym, off, pos in pointers if sym in _HYPERNYM_SYMBOLS
            ]
            self._by_offset[(file_pos, offset)] = synset

    def _assign_ids(self) -> None:
        for (file_pos, _offset), synset in self._by_offset.items():
            head = synset.lemmas[0]
            senses = self._index.get((head, file_pos), [])
            try:
                sense_no = senses.index(synset.offset) + 1
            except ValueError:
                sense_no = 1
            synset.id = f"{head}.{synset.pos}.{sense_no:02d}"
            self._by_id[synset.id] = synset
        for (file_pos, _offset), synset in self._by_offset.items():
            hypernyms = []
            for _sym, off, ptr_pos in synset._raw_pointers:  # type: ignore[attr-defined]
                target = self._by_offset.get((_INDEX_POS.get(ptr_pos, ptr_pos), off))
                if target is not None:
                    hypernyms.append(target.id)
            synset.hypernym_ids = hypernyms
            del synset._raw_pointers  # type: ignore[attr-defined]

    @classmethod
    def bundled_mini(cls) -> "Lexicon":
        """Load the small database shipped with the package."""
        return cls.load(mini_lexicon_path())

    # -- lookup ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._by_id)

    def all_synsets(self) -> list[Synset]:
        return sorted(self._by_id.values(), key=lambda s: s.id)

    def synset(self, key: str) -> Synset:
        return self._by_id[key]

    def get(self, key: str) -> Synset | None:
        return self._by_id.get(key)

    def synsets_of(self, lemma: str, pos: str | None = None) -> list[Synset]:
        """Synsets containing ``lemma``, in database sense order.

        ``pos='a'`` includes satellite adjectives; ``pos=None`` concatenates
        noun, verb, adjective, adverb entries in that order.
        """
        lemma = lemma.lower()
        file_positions = [_INDEX_POS[pos]] if pos else ["n", "v", "a", "r"]
        out: list[Synset] = []
        for file_pos in file_positions:
            for offset in self._index.get((lemma, file_pos), []):
                synset = self._by_offset.get((file_pos, offset))
                if synset is not None:
                    out.append(synset)
        if pos in ("a", "s"):
            out = [s for s in out if pos == "a" or s.pos == pos]
        return out

    def has_lemma(self, lemma: str) -> bool:
        lemma = lemma.lower()
        return any((lemma, fp) in self._index for fp in ("n", "v", "a", "r"))

    def hypernyms(self, synset: Synset) -> list[Synset]:
        return [self._by_id[i] for i in synset.hypernym_ids if i in self._by_id]

    # -- taxonomy --------------------------------------------------------

    def depth(self, synset: Synset) -> int:
        """Minimum root-path length; a root (no hypernyms) has depth 1."""

        def visit(s: Synset, trail: frozenset[str]) -> int:
            if s.id in self._depth:
                return self._depth[s.id]
            if s.id in trail:  # defensive: malformed cyclic data
                return 1
            parents = self.hypernyms(s)
            d = 1 if not parents else 1 + min(
                visit(p, trail | {s.id}) for p in parents
            )
            self._depth[s.id] = d
            return d

        return visit(synset, frozenset())

    def ancestors(self, synset: Synset) -> set[str]:
        """The synset itself plus its transitive hypernym closure (ids)."""
        out: set[str] = set()
        frontier = [synset]
        while frontier:
            current = frontier.pop()
            if current.id in out:
                continue
            out.add(current.id)
            frontier.extend(self.hypernyms(current))
        return out

    def least_common_subsumer(self, a: Synset, b: Synset) -> Synset | None:
        """Deepest common ancestor; ties broken by smallest synset key."""
        common = self.ancestors(a) & self.ancestors(b)
        if not common:
            return None
        best_depth = max(self._depth_by_id(i) for i in common)
        winner = min(i for i in common if self._depth_by_id(i) == best_depth)
        return self._by_id[winner]

    def _depth_by_id(self, key: str) -> int:
        return self.depth(self._by_id[key])

    def wup_similarity(self, a: Synset, b: Synset) -> float:
        """2*depth(lcs) / (depth(a) + depth(b)); 0 for disconnected pairs."""
        lcs = self.least_common_subsumer(a, b)
        if lcs is None:
            return 0.0
        return 2.0 * self.depth(lcs) / (self.depth(a) + self.depth(b))

    # -- related terms ---------------------------------------------------

    def synonyms_and_related(self, lemma: str) -> list[str]:
        """Member lemmas of the word's synsets plus their direct hypernyms'
        lemmas, deduplicated, excluding the query word itself."""
        lemma = lemma.lower()
        out: list[str] = []
        seen = {lemma}
        for synset in self.synsets_of(lemma):
            for other in synset.lemmas:
                if other not in seen:
                    seen.add(other)
                    out.append(other)
            for parent in self.hypernyms(synset):
                for other in parent.lemmas:
                    if other not in seen:
                        seen.add(other)
                        out.append(other)
        return out


def mini_lexicon_path() -> Path:
    return Path(str(resources.files("contron").joinpath("data/mini_wordnet")))

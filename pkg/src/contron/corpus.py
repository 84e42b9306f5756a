"""Data-sheet ingestion, tokenization, and corpus-level term statistics.

Documents arrive as plain UTF-8 text (PDF conversion is delegated to an
external command configured by the caller).  Tokenization produces a
bag-of-words with lowercased unigrams plus multiword terms that a lexicon
recognizes; stop words and purely numeric tokens are dropped from the
unigrams but never block a recognized multiword term.
"""

from __future__ import annotations

import re
import shlex
import subprocess
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable

from .errors import EmptyCorpusError, EmptyDocumentError, IngestError

SEPARATOR = "_"  # joins the words of a multiword term

# stripped from token edges only; internal hyphens/underscores survive
_EDGE_PUNCT = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~«»„“”‘’—–°±"
_NUMERIC_RE = re.compile(r"^[\d.,+%±-]+$")


@dataclass(frozen=True)
class Term:
    """A lowercase token; multiword terms join their words with ``_``."""

    surface: str
    lemma: str
    arity: int = 1

    @classmethod
    def unigram(cls, token: str) -> "Term":
        return cls(surface=token, lemma=token, arity=1)

    @classmethod
    def multiword(cls, words: Iterable[str]) -> "Term":
        words = list(words)
        return cls(surface=" ".join(words), lemma=SEPARATOR.join(words), arity=len(words))


@dataclass(frozen=True)
class Document:
    doc_id: str
    source_path: str
    text: str
    category: str | None = None


@dataclass
class BagOfWords:
    doc_id: str
    counts: dict[Term, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.counts.values())

    def lemmas(self) -> set[str]:
        return {t.lemma for t in self.counts}


@dataclass
class CorpusStats:
    """Per-term document frequency and total frequency over a corpus."""

    n_documents: int
    document_frequency: dict[Term, int]
    total_frequency: dict[Term, int]

    def terms(self) -> list[Term]:
        return sorted(self.document_frequency, key=lambda t: t.lemma)


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load the stop-word list; defaults to the bundled English file."""
    if path is None:
        text = resources.files("contron").joinpath("data/stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


_DEFAULT_STOPWORDS: frozenset[str] | None = None


def default_stopwords() -> frozenset[str]:
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        _DEFAULT_STOPWORDS = load_stopwords()
    return _DEFAULT_STOPWORDS


def ingest(
    path: str | Path,
    category: str | None = None,
    doc_id: str | None = None,
    pdf_converter: str | None = None,
) -> Document:
    """Read one data sheet into a Document with normalized line endings.

    ``pdf_converter`` is a command template with an ``{input}`` placeholder;
    it is invoked for ``.pdf`` files and its stdout taken as the text.
    """
    path = Path(path)
    if not path.exists():
        raise IngestError(f"no such file: {path}")
    if path.suffix.lower() == ".pdf":
        if not pdf_converter:
            raise IngestError(
                f"{path} is a PDF and no converter command is configured"
            )
        cmd = [part.format(input=str(path)) for part in shlex.split(pdf_converter)]
        try:
            proc = subprocess.run(cmd, capture_output=True, check=True)
        except (OSError, subprocess.CalledProcessError) as exc:
            raise IngestError(f"converter failed for {path}: {exc}") from exc
        text = proc.stdout.decode("utf-8", errors="replace")
    else:
        try:
            text = path.read_text("utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise IngestError(f"cannot read {path}: {exc}") from exc
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    if not text.strip():
        raise EmptyDocumentError(f"{path} has no text content")
    return Document(
        doc_id=doc_id or path.stem,
        source_path=str(path),
        text=text,
        category=category,
    )


def raw_tokens(text: str) -> list[str]:
    """Lowercased word tokens in document order, stop words included.

    Splitting is purely whitespace-based with edge punctuation stripped, so
    a document can never yield more tokens than it has whitespace fields.
    """
    out = []
    for piece in text.split():
        token = piece.strip(_EDGE_PUNCT).lower()
        if token:
            out.append(token)
    return out


def _keep_unigram(token: str, stopwords: frozenset[str]) -> bool:
    if len(token) < 2:
        return False
    if token in stopwords:
        return False
    if _NUMERIC_RE.match(token):
        return False
    return True


def tokenize(
    doc: Document,
    max_arity: int = 3,
    lexicon: Callable[[str], bool] | None = None,
    stopwords: frozenset[str] | None = None,
) -> BagOfWords:
    """Tokenize a document into a bag of unigrams and recognized n-grams.

    ``lexicon`` is a membership test for multiword entries (e.g.
    ``Lexicon.has_lemma``); n-grams of 2..max_arity words are kept only when
    the test accepts the separator-joined form.  Counts include every
    occurrence, overlapping windows included.
    """
    if max_arity < 1:
        raise ValueError("max_arity must be >= 1")
    if stopwords is None:
        stopwords = default_stopwords()
    stream = raw_tokens(doc.text)
    counts: Counter[Term] = Counter()
    for token in stream:
        if _keep_unigram(token, stopwords):
            counts[Term.unigram(token)] += 1
    if lexicon is not None and max_arity >= 2:
        for n in range(2, max_arity + 1):
            for i in range(len(stream) - n + 1):
                words = stream[i : i + n]
                if lexicon(SEPARATOR.join(words)):
                    counts[Term.multiword(words)] += 1
    return BagOfWords(doc_id=doc.doc_id, counts=dict(counts))


def corpus_stats(bags: list[BagOfWords]) -> CorpusStats:
    """Document frequency and total frequency per term, over all bags."""
    if not bags:
        raise EmptyCorpusError("corpus_stats needs at least one bag")
    df: Counter[Term] = Counter()
    total: Counter[Term] = Counter()
    for bag in bags:
        for term, count in bag.counts.items():
            df[term] += 1
            total[term] += count
    return CorpusStats(
        n_documents=len(bags),
        document_frequency=dict(df),
        total_frequency=dict(total),
    )


@dataclass(frozen=True)
class ManifestEntry:
    doc_id: str
    path: str
    category: str | None = None


def load_manifest(path: str | Path) -> list[ManifestEntry]:
    """Read a corpus manifest: tab-separated ``doc_id  path  [category]``.

    Blank lines and ``#`` comments are skipped.  Relative document paths are
    resolved against the manifest's directory.
    """
    path = Path(path)
    base = path.parent
    entries: list[ManifestEntry] = []
    seen: set[str] = set()
    for lineno, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise IngestError(f"{path}:{lineno}: expected 'doc_id<TAB>path[<TAB>category]'")
        doc_id, rel = parts[0].strip(), parts[1].strip()
        if doc_id in seen:
            raise IngestError(f"{path}:{lineno}: duplicate doc_id {doc_id!r}")
        seen.add(doc_id)
        category = parts[2].strip() if len(parts) > 2 and parts[2].strip() else None
        doc_path = str((base / rel) if not Path(rel).is_absolute() else Path(rel))
        entries.append(ManifestEntry(doc_id=doc_id, path=doc_path, category=category))
    return entries


def load_corpus(
    manifest_path: str | Path, pdf_converter: str | None = None
) -> list[Document]:
    entries = load_manifest(manifest_path)
    if not entries:
        raise EmptyCorpusError(f"manifest {manifest_path} lists no documents")
    return [
        ingest(e.path, category=e.category, doc_id=e.doc_id, pdf_converter=pdf_converter)
        for e in entries
    ]

"""Information extraction: ontology keywords to property-value pairs.

Keywords for every ontology class are searched case-insensitively at word
boundaries.  The value for a hit is taken from a numeric token (with an
optional unit) near the keyword on the same line; when the neighborhood has
no number, coarse pattern rules take over: a list pattern (two consecutive
capitalized lines) or a sentence pattern (text up to ". " before a capital or
a period ending the line).  Pattern captures containing a numeral are kept as
values; anything else stays pending for expert review.

Every extracted pair yields a highlight annotation whose reason names the
ontology property, e.g. "The highlighted text (Life span: 5 Years) is
corresponding to the Lifetime property".
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .corpus import Document
from .ontology import Ontology, keywords_of

NUMBER_RE = re.compile(
    r"[+-]?\d{1,3}(?:,\d{3})+(?:\.\d+)?|[+-]?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?"
)
_PIECE_RE = re.compile(r"\S+")
_LEADING_PUNCT = "([{<~±≤≥≈"
_TRAILING_PUNCT = ")]}>,.;:"
_RANGE_WORDS = {"to", "-", "--", "...", "..", "±", "+/-"}


@dataclass(frozen=True)
class Span:
    start: int
    end: int  # half-open

    def union(self, other: "Span") -> "Span":
        return Span(min(self.start, other.start), max(self.end, other.end))


@dataclass(frozen=True)
class KeywordHit:
    doc_id: str
    class_id: str
    keyword: str
    span: Span


@dataclass(frozen=True)
class NumericValue:
    magnitude: float
    unit: str | None = None


@dataclass
class ExtractedPair:
    hit: KeywordHit
    value_text: str
    method: str  # numeric_window | sentence_pattern | list_pattern | manual_pending
    numeric: NumericValue | None = None
    value_span: Span | None = None
    note: str | None = None


@dataclass(frozen=True)
class Annotation:
    doc_id: str
    span: Span
    reason: str
    class_id: str
    method: str


# -- unit lexicon -------------------------------------------------------------


def load_units(path: str | Path | None = None) -> dict[str, tuple[str, str]]:
    """Unit surface form -> (canonical name, dimension)."""
    if path is None:
        text = resources.files("contron").joinpath("data/units.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    table: dict[str, tuple[str, str]] = {}
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) >= 3:
            table[parts[0].strip().lower()] = (parts[1].strip(), parts[2].strip())
    return table


_DEFAULT_UNITS: dict[str, tuple[str, str]] | None = None


def default_units() -> dict[str, tuple[str, str]]:
    global _DEFAULT_UNITS
    if _DEFAULT_UNITS is None:
        _DEFAULT_UNITS = load_units()
    return _DEFAULT_UNITS


# -- keyword search -----------------------------------------------------------


def _keyword_pattern(keyword: str) -> re.Pattern:
    words = [re.escape(w) for w in keyword.split()]
    body = r"[^\S\n]+".join(words)  # flexible spaces, but never across lines
    return re.compile(rf"(?<!\w){body}(?!\w)", re.IGNORECASE)


def find_hits(doc: Document, keywords_by_class: dict[str, list[str]]) -> list[KeywordHit]:
    """Whole-word, case-insensitive hits; overlapping hits for the same
    class keep only the longest keyword."""
    hits: list[KeywordHit] = []
    for class_id, keywords in keywords_by_class.items():
        raw: list[tuple[int, int, str]] = []
        for keyword in keywords:
            if not keyword.strip():
                continue
            for m in _keyword_pattern(keyword).finditer(doc.text):
                raw.append((m.start(), m.end(), keyword))
        raw.sort(key=lambda t: (-(t[1] - t[0]), t[0], t[2]))
        kept: list[tuple[int, int, str]] = []
        for start, end, keyword in raw:
            if any(start < k_end and end > k_start for k_start, k_end, _ in kept):
                continue
            kept.append((start, end, keyword))
        hits.extend(
            KeywordHit(doc_id=doc.doc_id, class_id=class_id, keyword=keyword, span=Span(start, end))
            for start, end, keyword in kept
        )
    hits.sort(key=lambda h: (h.span.start, h.span.end, h.class_id))
    return hits


# -- numeric window -----------------------------------------------------------


def _line_bounds(text: str, pos: int) -> tuple[int, int]:
    start = text.rfind("\n", 0, pos) + 1
    end = text.find("\n", pos)
    return start, len(text) if end == -1 else end


def _number_in_piece(piece: str) -> tuple[float, int, int] | None:
    """Parse a number that *starts* the piece (after open punctuation).

    Returns (magnitude, start, end) relative to the piece, or None.  Pieces
    like "RS-422" do not count: a mid-word digit is an identifier, not a
    value.
    """
    stripped = piece.lstrip(_LEADING_PUNCT)
    offset = len(piece) - len(stripped)
    m = NUMBER_RE.match(stripped)
    if not m:
        return None
    magnitude = float(m.group(0).replace(",", ""))
    return magnitude, offset + m.start(), offset + m.end()


def _unit_at(piece: str, units: dict[str, tuple[str, str]]) -> str | None:
    """The unit written in ``piece``, original casing, if recognized."""
    candidate = piece.strip(_TRAILING_PUNCT + _LEADING_PUNCT.replace("±", ""))
    if candidate and candidate.lower() in units:
        return candidate
    return None


def extract_value(
    doc: Document,
    hit: KeywordHit,
    window: int = 10,
    window_before: int = 5,
    units: dict[str, tuple[str, str]] | None = None,
) -> ExtractedPair | None:
    """Take the nearest number (plus optional unit) on the keyword's line.

    Scans up to ``window`` tokens after the keyword, then ``window_before``
    tokens before it.  Returns None when the line offers no numeric token;
    the caller then falls back to the pattern rules.
    """
    if units is None:
        units = default_units()
    line_start, line_end = _line_bounds(doc.text, hit.span.start)
    after = list(_PIECE_RE.finditer(doc.text, hit.span.end, line_end))[:window]
    before = list(_PIECE_RE.finditer(doc.text, line_start, hit.span.start))
    before = list(reversed(before[-window_before:] if window_before else []))

    for ordered, limit in ((after, line_end), (before, hit.span.start)):
        for idx, piece_match in enumerate(ordered):
            parsed = _number_in_piece(piece_match.group(0))
            if parsed is None:
                continue
            magnitude, n_start, n_end = parsed
            value_start = piece_match.start() + n_start
            value_end = piece_match.start() + n_end
            tail = piece_match.group(0)[n_end:]
            unit = _unit_at(tail, units)
            if unit is not None:  # attached unit, e.g. "40°c"
                value_end = piece_match.start() + n_end + tail.index(unit) + len(unit)
            else:
                # the unit, if separate, is the next piece in document order
                neighbor = None
                if ordered is after and idx + 1 < len(ordered):
                    neighbor = ordered[idx + 1]
                elif ordered is before and idx >= 1:
                    neighbor = ordered[idx - 1]
                if neighbor is not None:
                    unit = _unit_at(neighbor.group(0), units)
                    if unit is not None:
                        value_end = neighbor.start() + neighbor.group(0).index(unit) + len(unit)
            value_end = _extend_range(doc.text, value_end, limit, units)
            value_span = Span(value_start, value_end)
            return ExtractedPair(
                hit=hit,
                value_text=doc.text[value_span.start : value_span.end],
                method="numeric_window",
                numeric=NumericValue(magnitude=magnitude, unit=unit),
                value_span=value_span,
            )
    return None


def _extend_range(
    text: str, value_end: int, limit: int, units: dict[str, tuple[str, str]]
) -> int:
    """Extend over range continuations like "-20 °C to 60 °C"."""
    pieces = list(_PIECE_RE.finditer(text, value_end, limit))[:3]
    if not pieces:
        return value_end
    if pieces[0].group(0).lower() in _RANGE_WORDS and len(pieces) > 1:
        parsed = _number_in_piece(pieces[1].group(0))
        if parsed is None:
            return value_end
        end = pieces[1].start() + parsed[2]
        tail = pieces[1].group(0)[parsed[2] :]
        unit = _unit_at(tail, units)
        if unit is not None:
            return pieces[1].start() + parsed[2] + tail.index(unit) + len(unit)
        if len(pieces) > 2:
            unit = _unit_at(pieces[2].group(0), units)
            if unit is not None:
                return pieces[2].start() + pieces[2].group(0).index(unit) + len(unit)
        return end
    return value_end


# -- pattern fallback ---------------------------------------------------------


def coarse_tag(text: str) -> list[tuple[str, str]]:
    """Tag whitespace tokens as numeral / unit / capitalized / other.

    A token carrying any digit run counts as a numeral here (pattern
    captures promote on "contains a numeral"); the numeric window uses the
    stricter leading-number parse instead.  The stage is kept separate so a
    richer tagger can replace it.
    """
    units = default_units()
    tagged = []
    for piece in _PIECE_RE.findall(text):
        if NUMBER_RE.search(piece) is not None:
            tag = "numeral"
        elif _unit_at(piece, units) is not None:
            tag = "unit"
        elif piece[:1].isupper():
            tag = "capitalized"
        else:
            tag = "other"
        tagged.append((piece, tag))
    return tagged


_SENTENCE_BOUNDARY = re.compile(r"\.(?=[^\S\n]+[A-Z])|\.(?=[^\S\n]*(\n|$))")


def pattern_fallback(doc: Document, hit: KeywordHit) -> ExtractedPair:
    """List/sentence pattern extraction when no number is near the keyword.

    A capture containing a numeral is promoted to a value; otherwise the
    pair stays pending for manual review, keeping whatever text the pattern
    found.
    """
    text = doc.text
    line_start, line_end = _line_bounds(text, hit.span.start)
    line = text[line_start:line_end]

    next_start = line_end + 1
    next_line = ""
    if next_start < len(text):
        _, next_end = _line_bounds(text, next_start)
        next_line = text[next_start:next_end]
    if line[:1].isupper() and next_line[:1].isupper():
        return _finish_pattern(doc, hit, Span(line_start, line_end), "list_pattern")

    boundary = _SENTENCE_BOUNDARY.search(text, hit.span.end)
    if boundary is not None:
        return _finish_pattern(
            doc, hit, Span(hit.span.start, boundary.start() + 1), "sentence_pattern"
        )

    return ExtractedPair(
        hit=hit,
        value_text="",
        method="manual_pending",
        note="no sentence or list boundary near the keyword",
    )


def _finish_pattern(doc: Document, hit: KeywordHit, span: Span, pattern: str) -> ExtractedPair:
    captured = doc.text[span.start : span.end]
    has_numeral = any(tag == "numeral" for _piece, tag in coarse_tag(captured))
    if has_numeral:
        return ExtractedPair(
            hit=hit, value_text=captured, method=pattern, value_span=span
        )
    return ExtractedPair(
        hit=hit,
        value_text=captured,
        method="manual_pending",
        value_span=span,
        note=f"{pattern} capture has no numeral; needs review",
    )


# -- whole-document extraction --------------------------------------------------


REASON_TEMPLATE = "The highlighted text ({fragment}) is corresponding to the {name} property"


def extract_information(
    ontology: Ontology,
    doc: Document,
    window: int = 10,
    window_before: int = 5,
    baseline_text_search: bool = False,
    units: dict[str, tuple[str, str]] | None = None,
) -> tuple[list[ExtractedPair], list[Annotation]]:
    """Extract property-value pairs and highlight annotations for one sheet.

    With ``baseline_text_search`` only class names are searched, ignoring
    everything enrichment added; this is the comparison baseline.
    """
    if units is None:
        units = default_units()
    names = {cls.class_id: cls.name for cls in ontology.classes}
    keywords_by_class = {
        cls.class_id: ([" ".join(cls.name.lower().split())] if baseline_text_search else keywords_of(cls))
        for cls in ontology.classes
    }
    pairs: list[ExtractedPair] = []
    annotations: list[Annotation] = []
    for hit in find_hits(doc, keywords_by_class):
        pair = extract_value(doc, hit, window=window, window_before=window_before, units=units)
        if pair is None:
            pair = pattern_fallback(doc, hit)
        pairs.append(pair)
        span = pair.hit.span if pair.value_span is None else pair.hit.span.union(pair.value_span)
        fragment = doc.text[span.start : span.end]
        annotations.append(
            Annotation(
                doc_id=doc.doc_id,
                span=span,
                reason=REASON_TEMPLATE.format(fragment=fragment, name=names[hit.class_id]),
                class_id=hit.class_id,
                method=pair.method,
            )
        )
    return pairs, annotations


# -- serialization ----------------------------------------------------------


def annotations_to_json(doc_id: str, annotations: list[Annotation]) -> str:
    """Stable-order JSON for golden-file comparisons."""
    records = [
        {
            "span": [a.span.start, a.span.end],
            "class_id": a.class_id,
            "method": a.method,
            "reason": a.reason,
        }
        for a in sorted(annotations, key=lambda a: (a.span.start, a.span.end, a.class_id))
    ]
    return json.dumps(
        {"doc_id": doc_id, "annotations": records},
        indent=2,
        sort_keys=True,
        ensure_ascii=False,
    ) + "\n"


def write_annotations(path: str | Path, doc_id: str, annotations: list[Annotation]) -> None:
    """Write atomically: concurrent readers never see a half-written file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(annotations_to_json(doc_id, annotations))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def pairs_to_tsv(pairs: list[ExtractedPair], units: dict[str, tuple[str, str]] | None = None) -> str:
    """Tabular export: class, keyword, value, unit, doc_id, span."""
    if units is None:
        units = default_units()
    lines = ["class_id\tkeyword\tvalue\tunit\tdoc_id\tspan_start\tspan_end\tmethod"]
    for pair in sorted(pairs, key=lambda p: (p.hit.doc_id, p.hit.span.start, p.hit.class_id)):
        unit = ""
        if pair.numeric and pair.numeric.unit:
            unit = units.get(pair.numeric.unit.lower(), (pair.numeric.unit, ""))[0]
        value = " ".join(pair.value_text.split())
        lines.append(
            "\t".join(
                [
                    pair.hit.class_id,
                    pair.hit.keyword,
                    value,
                    unit,
                    pair.hit.doc_id,
                    str(pair.hit.span.start),
                    str(pair.hit.span.end),
                    pair.method,
                ]
            )
        )
    return "\n".join(lines) + "\n"

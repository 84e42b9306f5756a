import pytest

from contron.corpus import Document
from contron.ie import (
    KeywordHit,
    Span,
    annotations_to_json,
    coarse_tag,
    extract_information,
    extract_value,
    find_hits,
    pairs_to_tsv,
    pattern_fallback,
)
from conftest import FIXTURES


def doc(text: str, doc_id: str = "d1") -> Document:
    return Document(doc_id=doc_id, source_path="-", text=text)


def hit_for(document: Document, keyword: str, class_id: str = "c:x") -> KeywordHit:
    hits = find_hits(document, {class_id: [keyword]})
    assert hits, f"keyword {keyword!r} not found"
    return hits[0]


class TestFindHits:
    def test_alt_label_example(self):
        d = doc("Life span: 5 Years")
        hits = find_hits(d, {"core:lifetime": ["lifetime", "life span"]})
        assert len(hits) == 1
        assert hits[0].keyword == "life span"
        assert d.text[hits[0].span.start : hits[0].span.end] == "Life span"

    def test_absent_keyword(self):
        assert find_hits(doc("nothing here"), {"c": ["lifetime"]}) == []

    def test_word_boundaries(self):
        hits = find_hits(doc("a massive mass of massive things"), {"c": ["mass"]})
        assert len(hits) == 1
        assert hits[0].span == Span(10, 14)

    def test_overlap_keeps_longest_keyword(self):
        d = doc("Power Consumption: 2.5 W")
        hits = find_hits(d, {"c": ["power", "power consumption"]})
        assert [h.keyword for h in hits] == ["power consumption"]

    def test_hits_sorted_by_position(self):
        d = doc("mass then power then mass")
        hits = find_hits(d, {"a": ["power"], "b": ["mass"]})
        assert [h.span.start for h in hits] == sorted(h.span.start for h in hits)

    def test_adding_keywords_never_loses_hits(self):
        d = doc("Mass: 1 g\nPower: 2 W\nLife span: 3 Years")
        base = find_hits(d, {"c": ["mass"]})
        more = find_hits(d, {"c": ["mass", "life span", "power"]})
        assert len(more) >= len(base)
        base_spans = {(h.span.start, h.span.end) for h in base}
        more_spans = {(h.span.start, h.span.end) for h in more}
        assert base_spans <= more_spans


class TestNumericWindow:
    def test_frequency_example(self):
        d = doc("frequency 4 Hz")
        pair = extract_value(d, hit_for(d, "frequency"))
        assert pair.method == "numeric_window"
        assert pair.numeric.magnitude == 4.0
        assert pair.numeric.unit == "Hz"
        assert pair.value_text == "4 Hz"

    def test_temperature_attached_unit(self):
        d = doc("temperature 40°c")
        pair = extract_value(d, hit_for(d, "temperature"))
        assert pair.numeric.magnitude == 40.0
        assert pair.numeric.unit == "°c"
        assert pair.value_text == "40°c"

    def test_no_numeral_falls_through(self):
        d = doc("power supply options")
        assert extract_value(d, hit_for(d, "power")) is None

    def test_identifier_with_digits_not_a_value(self):
        d = doc("Interface: RS-422")
        assert extract_value(d, hit_for(d, "interface")) is None

    def test_number_before_keyword(self):
        d = doc("5 Years lifetime")
        pair = extract_value(d, hit_for(d, "lifetime"))
        assert pair.numeric.magnitude == 5.0
        assert pair.numeric.unit == "Years"

    def test_range_extension(self):
        d = doc("Operating Temperature: -20 °C to 60 °C")
        pair = extract_value(d, hit_for(d, "operating temperature"))
        assert pair.value_text == "-20 °C to 60 °C"
        assert pair.numeric.magnitude == -20.0

    def test_window_does_not_cross_lines(self):
        d = doc("Interface: RS-422\nUpdate Rate: 4 Hz")
        assert extract_value(d, hit_for(d, "interface")) is None

    def test_window_token_budget(self):
        d = doc("mass one two three 4 g")
        pair = extract_value(d, hit_for(d, "mass"), window=2)
        assert pair is None
        pair = extract_value(d, hit_for(d, "mass"), window=6)
        assert pair.numeric.magnitude == 4.0

    def test_scientific_and_separators(self):
        d = doc("sensitivity 1.5e-3 V")
        pair = extract_value(d, hit_for(d, "sensitivity"))
        assert pair.numeric.magnitude == pytest.approx(1.5e-3)
        d = doc("mass 1,250 g")
        pair = extract_value(d, hit_for(d, "mass"))
        assert pair.numeric.magnitude == 1250.0


class TestPatternFallback:
    def test_sentence_pattern_without_numeral_pends(self):
        d = doc("Lifetime is five years in LEO. The unit works.")
        pair = pattern_fallback(d, hit_for(d, "lifetime"))
        assert pair.method == "manual_pending"
        assert pair.value_text == "Lifetime is five years in LEO."

    def test_list_pattern_promotes_numeral(self):
        d = doc("Life span: 5 Years\nMass: 250 g")
        pair = pattern_fallback(d, hit_for(d, "life span"))
        assert pair.method == "list_pattern"
        assert pair.value_text == "Life span: 5 Years"

    def test_keyword_at_end_of_document(self):
        d = doc("see lifetime")
        pair = pattern_fallback(d, hit_for(d, "lifetime"))
        assert pair.method == "manual_pending"
        assert pair.value_text == ""
        assert pair.note

    def test_sentence_pattern_period_before_capital(self):
        d = doc("the lifetime exceeds the mission. Later sections follow")
        pair = pattern_fallback(d, hit_for(d, "lifetime"))
        assert pair.value_text == "lifetime exceeds the mission."

    def test_coarse_tagging_stage(self):
        tags = dict(coarse_tag("Mass 250 g then words"))
        assert tags["250"] == "numeral"
        assert tags["g"] == "unit"
        assert tags["Mass"] == "capitalized"
        assert tags["then"] == "other"


class TestExtractInformation:
    def st200(self):
        text = (FIXTURES / "corpus" / "st200.txt").read_text("utf-8")
        return Document(doc_id="st200", source_path="-", text=text)

    def test_fixture_gold_pairs(self, enriched_core):
        pairs, annotations = extract_information(enriched_core, self.st200())
        values = {
            p.hit.class_id: p.value_text
            for p in pairs
            if p.method != "manual_pending"
        }
        assert values["core:mass"] == "250 g"
        assert values["core:power"] == "2.5 W"
        assert values["core:supply_voltage"] == "5 V"
        assert values["core:update_rate"] == "4 Hz"
        assert values["core:lifetime"] == "5 Years"
        assert values["core:operating_temperature"] == "-20 °C to 60 °C"
        assert values["core:field_of_view"] == "20 deg"
        assert values["core:data_rate"] == "115 kbps"
        assert values["core:radiation_tolerance"] == "11 krad"
        assert values["core:accuracy"] == "7 arcsec"
        assert values["core:interface"] == "Interface: RS-422"
        assert len(annotations) == len(pairs)

    def test_enrichment_monotonicity(self, core_ontology, enriched_core):
        d = self.st200()
        initial_pairs, _ = extract_information(core_ontology, d)
        enriched_pairs, _ = extract_information(enriched_core, d)
        assert len(enriched_pairs) >= len(initial_pairs)
        # the alt-label-only mention ("Life span") makes it strictly more
        assert len(enriched_pairs) > len(initial_pairs)

    def test_baseline_flag_restricts_to_names(self, enriched_core):
        d = self.st200()
        baseline_pairs, _ = extract_information(
            enriched_core, d, baseline_text_search=True
        )
        assert "core:lifetime" not in {p.hit.class_id for p in baseline_pairs}

    def test_empty_document(self, enriched_core):
        pairs, annotations = extract_information(
            enriched_core, Document(doc_id="e", source_path="-", text="")
        )
        assert pairs == [] and annotations == []

    def test_annotation_reason_template(self, enriched_core):
        text = (FIXTURES / "corpus" / "st100.txt").read_text("utf-8")
        d = Document(doc_id="st100", source_path="-", text=text)
        _, annotations = extract_information(enriched_core, d)
        reasons = {a.reason for a in annotations}
        assert (
            "The highlighted text (Life span: 5 Years) is corresponding to the "
            "Lifetime property" in reasons
        )

    def test_annotations_byte_identical_across_runs(self, enriched_core):
        d = self.st200()
        first = annotations_to_json(
            d.doc_id, extract_information(enriched_core, d)[1]
        )
        second = annotations_to_json(
            d.doc_id, extract_information(enriched_core, d)[1]
        )
        assert first.encode() == second.encode()

    def test_spans_reconstructible_and_valid(self, enriched_core):
        d = self.st200()
        pairs, annotations = extract_information(enriched_core, d)
        for pair, annotation in zip(pairs, annotations):
            expected = (
                pair.hit.span
                if pair.value_span is None
                else pair.hit.span.union(pair.value_span)
            )
            assert annotation.span == expected
            assert 0 <= annotation.span.start < annotation.span.end <= len(d.text)

    def test_numeric_pairs_have_parseable_magnitudes(self, enriched_core, corpus_docs):
        from contron.ie import NUMBER_RE

        for document in corpus_docs:
            pairs, _ = extract_information(enriched_core, document)
            for pair in pairs:
                if pair.numeric is not None:
                    assert pair.method == "numeric_window"
                    m = NUMBER_RE.search(pair.value_text.replace(",", ""))
                    assert m is not None
                    assert float(m.group(0)) == pair.numeric.magnitude

    def test_per_class_spans_never_overlap(self, enriched_core, corpus_docs):
        for document in corpus_docs:
            pairs, _ = extract_information(enriched_core, document)
            by_class: dict[str, list] = {}
            for pair in pairs:
                by_class.setdefault(pair.hit.class_id, []).append(pair.hit.span)
            for spans in by_class.values():
                spans.sort(key=lambda s: s.start)
                for a, b in zip(spans, spans[1:]):
                    assert a.end <= b.start


class TestSerialization:
    def test_pairs_tsv_shape(self, enriched_core):
        text = (FIXTURES / "corpus" / "st100.txt").read_text("utf-8")
        d = Document(doc_id="st100", source_path="-", text=text)
        pairs, _ = extract_information(enriched_core, d)
        tsv = pairs_to_tsv(pairs)
        header, *rows = tsv.strip().split("\n")
        assert header.split("\t") == [
            "class_id", "keyword", "value", "unit", "doc_id",
            "span_start", "span_end", "method",
        ]
        lifetime_row = next(r for r in rows if r.startswith("core:lifetime"))
        fields = lifetime_row.split("\t")
        assert fields[2] == "5 Years"
        assert fields[3] == "year"

import pytest
from hypothesis import given, strategies as st

from contron.errors import GoldFileError, UndefinedMetricError
from contron.evaluation import (
    EvalCounts,
    compute_metrics,
    f_measure,
    load_gold,
    metrics_from_rates,
    normalize_value,
    score_pairs,
)
from contron.ie import ExtractedPair, KeywordHit, Span

from conftest import FIXTURES


def pair(doc_id, class_id, value, method="numeric_window", start=0):
    return ExtractedPair(
        hit=KeywordHit(doc_id=doc_id, class_id=class_id, keyword="k", span=Span(start, start + 1)),
        value_text=value,
        method=method,
    )


class TestFMeasure:
    def test_published_triple_core_small_corpus(self):
        assert f_measure(0.31, 0.38) == pytest.approx(0.34, abs=0.005)

    def test_published_triple_text_search(self):
        assert f_measure(0.21, 0.96) == pytest.approx(0.34, abs=0.005)

    def test_fixed_point(self):
        for p in (0.1, 0.5, 0.93):
            assert f_measure(p, p) == pytest.approx(p)

    def test_beta_must_be_positive(self):
        with pytest.raises(ValueError):
            f_measure(0.5, 0.5, beta=0)

    def test_undefined_when_both_zero(self):
        with pytest.raises(UndefinedMetricError):
            f_measure(0.0, 0.0)

    @given(
        p=st.floats(min_value=0.001, max_value=1.0),
        r=st.floats(min_value=0.001, max_value=1.0),
    )
    def test_harmonic_identity_and_bounds(self, p, r):
        f = f_measure(p, r, beta=1.0)
        assert f == pytest.approx(2 * p * r / (p + r))
        assert 0.0 <= f <= 1.0
        assert f == pytest.approx(f_measure(r, p, beta=1.0))  # symmetric at beta=1

    @given(
        p=st.floats(min_value=0.01, max_value=1.0),
        r=st.floats(min_value=0.01, max_value=1.0),
        beta=st.floats(min_value=0.1, max_value=5.0),
    )
    def test_general_beta_formula(self, p, r, beta):
        expected = (beta * beta + 1) * p * r / (p + beta * beta * r)
        assert f_measure(p, r, beta=beta) == pytest.approx(expected)


class TestComputeMetrics:
    def test_counts_to_metrics(self):
        metrics = compute_metrics(EvalCounts(tp=8, fp=5, fn=13))
        assert metrics.precision == pytest.approx(8 / 13)
        assert metrics.recall == pytest.approx(8 / 21)

    def test_no_extractions_precision_undefined(self):
        with pytest.raises(UndefinedMetricError):
            compute_metrics(EvalCounts(tp=0, fp=0, fn=3))

    def test_empty_gold_recall_undefined(self):
        with pytest.raises(UndefinedMetricError):
            compute_metrics(EvalCounts(tp=0, fp=2, fn=0))

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            EvalCounts(tp=-1, fp=0, fn=0)


class TestNormalization:
    def test_rules(self):
        assert normalize_value("  5  Years. ") == "5 years"
        assert normalize_value("RS-422;") == "rs-422"
        assert normalize_value("-20 °C  to 60 °C") == "-20 °c to 60 °c"


class TestScorePairs:
    def gold(self):
        return load_gold(FIXTURES / "corpus" / "gold.tsv")

    def test_exact_match_perfect_scores(self):
        gold = self.gold()
        extracted = [
            pair(g.doc_id, g.class_id, g.value, start=i) for i, g in enumerate(gold)
        ]
        counts = score_pairs(extracted, gold)
        assert (counts.tp, counts.fp, counts.fn) == (len(gold), 0, 0)
        metrics = compute_metrics(counts)
        assert metrics.precision == metrics.recall == metrics.f_measure == 1.0

    def test_empty_extraction(self):
        counts = score_pairs([], self.gold())
        assert counts.tp == 0 and counts.fp == 0
        assert counts.fn == len(self.gold())
        with pytest.raises(UndefinedMetricError):
            compute_metrics(counts)

    def test_manual_pending_not_scored(self):
        counts = score_pairs(
            [pair("st100", "core:mass", "", method="manual_pending")], self.gold()
        )
        assert counts.tp == 0 and counts.fp == 0

    def test_fixture_counts_match_set_difference_oracle(self, enriched_core, corpus_docs):
        from contron.ie import extract_information

        gold = self.gold()
        extracted = []
        for document in corpus_docs:
            extracted.extend(extract_information(enriched_core, document)[0])
        counts = score_pairs(extracted, gold)

        # brute-force oracle: bag difference over normalized triples
        got = [
            (p.hit.doc_id, p.hit.class_id, normalize_value(p.value_text))
            for p in extracted
            if p.method != "manual_pending"
        ]
        want = [(g.doc_id, g.class_id, normalize_value(g.value)) for g in gold]
        want_left = list(want)
        tp = 0
        for triple in got:
            if triple in want_left:
                want_left.remove(triple)
                tp += 1
        assert counts.tp == tp
        assert counts.fp == len(got) - tp
        assert counts.fn == len(want_left)

    def test_permutation_invariance(self, enriched_core, corpus_docs):
        from contron.ie import extract_information

        gold = self.gold()
        extracted = []
        for document in corpus_docs:
            extracted.extend(extract_information(enriched_core, document)[0])
        forward = score_pairs(extracted, gold)
        backward = score_pairs(list(reversed(extracted)), gold)
        assert forward == backward

    def test_each_gold_entry_matched_once(self):
        gold = [g for g in self.gold() if (g.doc_id, g.class_id) == ("st100", "core:mass")]
        duplicates = [
            pair("st100", "core:mass", "248 g", start=0),
            pair("st100", "core:mass", "248 g", start=10),
        ]
        counts = score_pairs(duplicates, gold)
        assert (counts.tp, counts.fp, counts.fn) == (1, 1, 0)

    def test_malformed_gold_rejected(self, tmp_path):
        bad = tmp_path / "gold.tsv"
        bad.write_text("only_two\tfields\n", "utf-8")
        with pytest.raises(GoldFileError):
            load_gold(bad)


def test_metrics_from_rates_dataclass():
    metrics = metrics_from_rates(0.6, 0.94)
    assert metrics.beta == 1.0
    assert metrics.f_measure == pytest.approx(0.73, abs=0.005)

"""WiC parsing, pair loading, evaluation metrics, bins, and report files."""

import csv
import dataclasses
import json
import math

import numpy as np
import pytest

from normdiscount import (DegenerateInputError, DiscountParams, FitLine,
                          FrequencyTable, Label, ParseError, StopWordList,
                          ValidationError, bin_analysis, evaluate,
                          gradient_reduction, join_pairs, load_pair_records,
                          ols_fit, parse_wic, scatter_fit_summary, score_points,
                          write_report_files)
from normdiscount.evalharness import DISCOUNTED, PLAIN

from conftest import pairs_with_cosines

ZERO_SLOPE = DiscountParams(theta=0.5, m_s=0.0, b_s=0.0, m_n=0.0, b_n=0.0)

WIC_LINE = ("drive\tV\t1-1\tto drive sheep out of a field\t"
            "to drive the cows into the barn\n")


class TestParseWic:
    def test_reference_line(self, tmp_path):
        data = tmp_path / "data.txt"
        data.write_text(WIC_LINE, encoding="utf-8")
        gold = tmp_path / "gold.txt"
        gold.write_text("T\n", encoding="utf-8")
        instances = parse_wic(data, gold)
        assert len(instances) == 1
        inst = instances[0]
        assert inst.word == "drive"
        assert inst.pos == "V"
        assert inst.index1 == 1 and inst.index2 == 1
        assert inst.gold is Label.SAME

    def test_no_gold_file(self, tmp_path):
        data = tmp_path / "data.txt"
        data.write_text(WIC_LINE, encoding="utf-8")
        assert parse_wic(data).pop().gold is None

    def test_four_fields_names_line(self, tmp_path):
        data = tmp_path / "data.txt"
        data.write_text(WIC_LINE + "bad\tV\t0-0\tonly one context\n", encoding="utf-8")
        with pytest.raises(ParseError) as err:
            parse_wic(data)
        assert err.value.line == 2

    def test_bad_index_pair(self, tmp_path):
        data = tmp_path / "data.txt"
        data.write_text("w\tN\tx-y\ta b\tc d\n", encoding="utf-8")
        with pytest.raises(ParseError):
            parse_wic(data)

    def test_index_out_of_range(self, tmp_path):
        data = tmp_path / "data.txt"
        data.write_text("w\tN\t0-5\tw here\tw over there\n", encoding="utf-8")
        with pytest.raises(ParseError) as err:
            parse_wic(data)
        assert "5" in str(err.value)

    def test_gold_length_mismatch(self, tmp_path):
        data = tmp_path / "data.txt"
        data.write_text(WIC_LINE * 2, encoding="utf-8")
        gold = tmp_path / "gold.txt"
        gold.write_text("T\n", encoding="utf-8")
        with pytest.raises(ParseError):
            parse_wic(data, gold)

    def test_bad_gold_label(self, tmp_path):
        data = tmp_path / "data.txt"
        data.write_text(WIC_LINE, encoding="utf-8")
        gold = tmp_path / "gold.txt"
        gold.write_text("Y\n", encoding="utf-8")
        with pytest.raises(ParseError):
            parse_wic(data, gold)


class TestLoadPairRecords:
    def write(self, tmp_path, lines):
        path = tmp_path / "pairs.jsonl"
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        return path

    def test_round_trip(self, tmp_path):
        path = self.write(tmp_path, [
            json.dumps({"word": "cat", "pos": "N", "gold": "T",
                        "vector1": [1.0, 0.0], "vector2": [0.0, 1.0]}),
            json.dumps({"word": "dog", "pos": "N", "gold": None,
                        "vector1": [1.0, 0.0], "vector2": [1.0, 0.0]}),
        ])
        records = load_pair_records(path)
        assert records[0].gold is Label.SAME
        assert records[1].gold is None

    def test_missing_field_names_line(self, tmp_path):
        path = self.write(tmp_path, [
            json.dumps({"word": "cat", "pos": "N", "gold": "T", "vector1": [1.0]}),
        ])
        with pytest.raises(ParseError) as err:
            load_pair_records(path)
        assert err.value.line == 1
        assert "vector2" in str(err.value)

    def test_bad_gold_value(self, tmp_path):
        path = self.write(tmp_path, [
            json.dumps({"word": "cat", "pos": "N", "gold": "yes",
                        "vector1": [1.0], "vector2": [1.0]}),
        ])
        with pytest.raises(ParseError):
            load_pair_records(path)

    def test_invalid_json(self, tmp_path):
        path = self.write(tmp_path, ["{oops"])
        with pytest.raises(ParseError):
            load_pair_records(path)

    def test_vector_must_be_array(self, tmp_path):
        path = self.write(tmp_path, [
            json.dumps({"word": "cat", "pos": "N", "gold": "T",
                        "vector1": "no", "vector2": [1.0]}),
        ])
        with pytest.raises(ParseError):
            load_pair_records(path)


class TestJoinPairs:
    def test_joins_frequency_and_stop_class(self, tmp_path):
        path = tmp_path / "pairs.jsonl"
        path.write_text(json.dumps({"word": "the", "pos": "D", "gold": "T",
                                    "vector1": [1.0, 0.0], "vector2": [1.0, 0.0]}) + "\n" +
                        json.dumps({"word": "ghost", "pos": "N", "gold": "F",
                                    "vector1": [1.0, 0.0], "vector2": [0.0, 1.0]}) + "\n",
                        encoding="utf-8")
        table = FrequencyTable.from_counts({"the": 7})
        stops = StopWordList(frozenset({"the"}))
        pairs = join_pairs(load_pair_records(path), table, stops)
        assert pairs[0].stop and pairs[0].log_freq == pytest.approx(math.log(7))
        assert not pairs[1].stop and pairs[1].log_freq == 0.0


class TestEvaluateMetrics:
    def test_all_correct(self):
        pairs = pairs_with_cosines([0.9, 0.1, 0.9, 0.1],
                                   [Label.SAME, Label.DIFFERENT] * 2)
        report = evaluate(pairs, ZERO_SLOPE, mode=DISCOUNTED)
        assert report.accuracy == report.precision == report.recall == report.f1 == 1.0
        assert report.confusion == {"tp": 2, "fp": 0, "fn": 0, "tn": 2}

    def test_predict_all_same_on_balanced_set(self):
        # every score is above theta, so everything is predicted SAME
        pairs = pairs_with_cosines([0.9, 0.9, 0.9, 0.9],
                                   [Label.SAME, Label.DIFFERENT] * 2)
        report = evaluate(pairs, ZERO_SLOPE, mode=DISCOUNTED)
        assert report.recall == 1.0
        assert report.precision == 0.5
        assert report.accuracy == 0.5

    def test_hand_tallied_confusion_matrix(self):
        # theta 0.5: scores 0.6,0.7 SAME-gold correct; 0.3 SAME-gold wrong;
        # 0.2 DIFF-gold correct; 0.55,0.5 DIFF-gold wrong (tie goes SAME)
        golds = [Label.SAME, Label.SAME, Label.SAME,
                 Label.DIFFERENT, Label.DIFFERENT, Label.DIFFERENT]
        pairs = pairs_with_cosines([0.6, 0.7, 0.3, 0.2, 0.55, 0.5], golds)
        report = evaluate(pairs, ZERO_SLOPE, mode=DISCOUNTED)
        assert report.confusion == {"tp": 2, "fp": 2, "fn": 1, "tn": 1}
        assert report.accuracy == pytest.approx(3 / 6)
        assert report.precision == pytest.approx(2 / 4)
        assert report.recall == pytest.approx(2 / 3)
        expected_f1 = 2 * (0.5 * 2 / 3) / (0.5 + 2 / 3)
        assert report.f1 == pytest.approx(expected_f1)

    def test_degenerate_precision_flag(self):
        pairs = pairs_with_cosines([0.1, 0.2], [Label.SAME, Label.DIFFERENT])
        report = evaluate(pairs, ZERO_SLOPE, mode=DISCOUNTED)
        assert report.precision_degenerate
        assert report.precision == 0.0
        assert not report.recall_degenerate

    def test_degenerate_recall_flag(self):
        pairs = pairs_with_cosines([0.9, 0.1], [Label.DIFFERENT, Label.DIFFERENT])
        report = evaluate(pairs, ZERO_SLOPE, mode=DISCOUNTED)
        assert report.recall_degenerate
        assert report.recall == 0.0

    def test_f1_harmonic_mean_consistency(self, planted400):
        params = DiscountParams(theta=0.5, m_s=0.03, b_s=4.0, m_n=0.05, b_n=5.0)
        report = evaluate(planted400, params, mode=DISCOUNTED)
        if report.precision + report.recall > 0:
            expected = (2 * report.precision * report.recall /
                        (report.precision + report.recall))
            assert report.f1 == pytest.approx(expected, abs=1e-12)

    def test_confusion_matrix_consistency(self, planted400):
        params = DiscountParams(theta=0.48, m_s=0.02, b_s=3.0, m_n=0.07, b_n=6.0)
        report = evaluate(planted400, params, mode=DISCOUNTED)
        c = report.confusion
        assert c["tp"] + c["fp"] + c["fn"] + c["tn"] == report.n == 400
        assert report.accuracy == pytest.approx((c["tp"] + c["tn"]) / 400)
        if not report.precision_degenerate:
            assert report.precision == pytest.approx(c["tp"] / (c["tp"] + c["fp"]))
        if not report.recall_degenerate:
            assert report.recall == pytest.approx(c["tp"] / (c["tp"] + c["fn"]))

    def test_metrics_permutation_invariant(self, planted400):
        params = DiscountParams(theta=0.5, m_s=0.05, b_s=5.0, m_n=0.05, b_n=5.0)
        rng = np.random.default_rng(0)
        shuffled = list(planted400)
        rng.shuffle(shuffled)
        a = evaluate(planted400, params, mode=DISCOUNTED)
        b = evaluate(shuffled, params, mode=DISCOUNTED)
        for attr in ("accuracy", "precision", "recall", "f1"):
            assert getattr(a, attr) == getattr(b, attr)
        assert a.confusion == b.confusion

    def test_plain_mode_equals_zero_slope_discounted(self, planted400):
        params = DiscountParams(theta=0.52, m_s=0.2, b_s=3.0, m_n=0.3, b_n=6.0)
        zeroed = DiscountParams(theta=0.52, m_s=0.0, b_s=3.0, m_n=0.0, b_n=6.0)
        plain_report = evaluate(planted400, params, mode=PLAIN)
        zeroed_report = evaluate(planted400, zeroed, mode=DISCOUNTED)
        a = plain_report.to_dict()
        b = zeroed_report.to_dict()
        # the mode echo necessarily differs; every result field must match
        assert a.pop("mode") == PLAIN
        assert b.pop("mode") == DISCOUNTED
        assert a == b

    def test_empty_pairs_error(self):
        with pytest.raises(ValidationError):
            evaluate([], ZERO_SLOPE)

    def test_missing_gold_error(self):
        pair = dataclasses.replace(
            pairs_with_cosines([0.5], [Label.SAME])[0], gold=None)
        with pytest.raises(ValidationError):
            evaluate([pair], ZERO_SLOPE)

    def test_invalid_mode_error(self, planted400):
        with pytest.raises(ValidationError):
            evaluate(planted400, ZERO_SLOPE, mode="hybrid")

    def test_bin_count_clamped_to_dataset(self):
        pairs = pairs_with_cosines([0.9, 0.1, 0.8],
                                   [Label.SAME, Label.DIFFERENT, Label.SAME])
        report = evaluate(pairs, ZERO_SLOPE, num_bins=10)
        assert len(report.per_bin) == 3


class TestBins:
    def test_all_same_everywhere(self):
        pairs = pairs_with_cosines([0.9] * 20, [Label.SAME] * 20,
                                   log_freqs=list(range(20)))
        predictions = [Label.SAME] * 20
        rows = bin_analysis(pairs, predictions, num_bins=10)
        assert len(rows) == 10
        assert all(r.human_same_rate == 1.0 and r.predicted_same_rate == 1.0
                   for r in rows)

    def test_predictions_equal_gold_rates_match(self):
        golds = [Label.SAME if i % 3 else Label.DIFFERENT for i in range(24)]
        pairs = pairs_with_cosines([0.5] * 24, golds, log_freqs=list(range(24)))
        rows = bin_analysis(pairs, list(golds), num_bins=8)
        assert all(r.human_same_rate == r.predicted_same_rate for r in rows)

    def test_top_bin_flip_isolated(self):
        golds = [Label.SAME] * 20
        pairs = pairs_with_cosines([0.9] * 20, golds, log_freqs=list(range(20)))
        predictions = [Label.SAME] * 18 + [Label.DIFFERENT] * 2
        rows = bin_analysis(pairs, predictions, num_bins=10)
        assert rows[9].predicted_same_rate < rows[9].human_same_rate
        for row in rows[:9]:
            assert row.predicted_same_rate == row.human_same_rate == 1.0

    def test_bin_sizes_differ_by_at_most_one_and_sum(self, planted400):
        params = DiscountParams(theta=0.5, m_s=0.05, b_s=5.0, m_n=0.05, b_n=5.0)
        report = evaluate(planted400, params, num_bins=10)
        counts = [row.count for row in report.per_bin]
        assert sum(counts) == 400
        assert max(counts) - min(counts) <= 1

    def test_fewer_pairs_than_bins_error(self):
        pairs = pairs_with_cosines([0.9, 0.1], [Label.SAME, Label.DIFFERENT])
        with pytest.raises(ValidationError):
            bin_analysis(pairs, [Label.SAME, Label.DIFFERENT], num_bins=3)

    def test_length_mismatch_error(self):
        pairs = pairs_with_cosines([0.9], [Label.SAME])
        with pytest.raises(ValidationError):
            bin_analysis(pairs, [], num_bins=1)


class TestGradientReduction:
    def line(self, slope):
        return FitLine(slope=slope, intercept=0.0, pearson_r=-0.5 if slope < 0 else 0.5,
                       n=10)

    def test_halving(self):
        assert gradient_reduction(self.line(-0.02), self.line(-0.01)) == \
            pytest.approx(50.0, abs=1e-9)

    def test_equal_slopes(self):
        assert gradient_reduction(self.line(-0.02), self.line(-0.02)) == \
            pytest.approx(0.0, abs=1e-12)

    def test_zero_plain_slope_error(self):
        flat = FitLine(slope=0.0, intercept=1.0, pearson_r=0.0, n=10)
        with pytest.raises(DegenerateInputError):
            gradient_reduction(flat, self.line(-0.01))

    def test_from_synthetic_fits(self):
        xs = [0.0, 1.0, 2.0, 3.0]
        plain = ols_fit([(x, 1.0 - 0.02 * x) for x in xs])
        disc = ols_fit([(x, 1.0 - 0.01 * x) for x in xs])
        assert gradient_reduction(plain, disc) == pytest.approx(50.0, abs=1e-9)


class TestScatter:
    def test_fits_split_by_label(self, planted400):
        params = DiscountParams(theta=0.5, m_s=0.05, b_s=5.0, m_n=0.05, b_n=5.0)
        points = score_points(planted400, params)
        fits, reductions = scatter_fit_summary(points)
        for variant in ("plain", "discounted"):
            for key in ("same", "different"):
                assert fits[variant][key] is not None
        # plain scores rise with alpha*^2, i.e. fall with log frequency;
        # discounted scores are flat by construction
        assert fits["plain"]["same"].slope < 0
        assert abs(fits["discounted"]["same"].slope) < \
            abs(fits["plain"]["same"].slope)
        assert reductions["same"] is not None

    def test_single_label_group_absent_fit(self):
        pairs = pairs_with_cosines([0.9, 0.8, 0.7], [Label.SAME] * 3,
                                   log_freqs=[0.0, 1.0, 2.0])
        points = score_points(pairs, ZERO_SLOPE)
        fits, reductions = scatter_fit_summary(points)
        assert fits["plain"]["same"] is not None
        assert fits["plain"]["different"] is None
        assert reductions["different"] is None

    def test_no_logfreq_variance_absent_fit(self):
        pairs = pairs_with_cosines([0.9, 0.8], [Label.SAME] * 2,
                                   log_freqs=[1.0, 1.0])
        fits, _ = scatter_fit_summary(score_points(pairs, ZERO_SLOPE))
        assert fits["plain"]["same"] is None


class TestReportFiles:
    def test_writes_all_files_with_exact_headers(self, tmp_path, planted400):
        params = DiscountParams(theta=0.5, m_s=0.05, b_s=5.0, m_n=0.05, b_n=5.0)
        report = evaluate(planted400, params)
        paths = write_report_files(report, tmp_path / "out")
        assert paths["report"].exists()

        with paths["bins"].open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["bin", "human_rate", "pred_rate", "mean_logfreq"]
        assert len(rows) == 1 + len(report.per_bin)
        for row in rows[1:]:
            assert 0.0 <= float(row[1]) <= 1.0

        with paths["scatter"].open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["word", "logfreq", "label", "score_plain",
                           "score_discounted"]
        assert len(rows) == 1 + 400

        payload = json.loads(paths["report"].read_text())
        assert payload["mode"] == DISCOUNTED
        assert payload["n"] == 400
        assert set(payload["confusion"]) == {"tp", "fp", "fn", "tn"}

    def test_json_round_trips_floats(self, tmp_path):
        pairs = pairs_with_cosines([0.9, 0.1], [Label.SAME, Label.DIFFERENT])
        report = evaluate(pairs, ZERO_SLOPE)
        paths = write_report_files(report, tmp_path)
        payload = json.loads(paths["report"].read_text())
        assert payload["accuracy"] == report.accuracy

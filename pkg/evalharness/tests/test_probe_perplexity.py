import io
import math

import pytest

from evalharness.perplexity import (
    EmptyCategory,
    EvalReport,
    instance_perplexity,
    probe_perplexity,
    relative_report,
    write_report,
)
from evalharness.records import ProbeRow, read_probe_file
from evalharness.scoring import UniformScorer

from _fixture import (
    CHANGED_EXPONENTS,
    CHANGED_SEQUENCES,
    UNCHANGED_EXPONENTS,
    UNCHANGED_SEQUENCES,
    bigram_scorer,
    probe_file_bytes,
    probe_rows,
)


def row(category, serialized):
    parts = (serialized.split() + ["", "", ""])[:3]
    return ProbeRow(category, parts[0], parts[1], parts[2], "a1", serialized)


class TestProbePerplexity:
    def test_uniform_scorer_identity(self):
        rows = [row("Unchanged", "a b c"), row("Changed", "d e")]
        report = probe_perplexity(rows, UniformScorer(100))
        assert abs(report.unchanged_perplexity - 100.0) < 1e-9
        assert abs(report.changed_perplexity - 100.0) < 1e-9
        assert abs(report.mean_perplexity - 100.0) < 1e-9

    def test_single_instance_category_equals_instance(self):
        rows = [row("Unchanged", "A A A"), row("Changed", "A C A")]
        scorer = bigram_scorer()
        report = probe_perplexity(rows, scorer)
        assert report.unchanged_perplexity == pytest.approx(
            instance_perplexity("A A A", scorer), abs=1e-12
        )
        assert report.unchanged_count == 1 and report.changed_count == 1

    def test_instance_perplexities_match_closed_form(self):
        scorer = bigram_scorer()
        for sequence, k in zip(
            UNCHANGED_SEQUENCES + CHANGED_SEQUENCES,
            UNCHANGED_EXPONENTS + CHANGED_EXPONENTS,
        ):
            assert instance_perplexity(sequence, scorer) == pytest.approx(
                2.0 ** (k / 3.0), rel=1e-12
            )

    def test_duplicating_instances_keeps_category_values(self):
        rows = probe_rows()
        scorer = bigram_scorer()
        once = probe_perplexity(rows, scorer)
        twice = probe_perplexity(rows + rows, scorer)
        assert twice.unchanged_perplexity == pytest.approx(
            once.unchanged_perplexity, rel=1e-12
        )
        assert twice.changed_perplexity == pytest.approx(
            once.changed_perplexity, rel=1e-12
        )
        assert twice.unchanged_count == 2 * once.unchanged_count

    def test_reads_probe_file_format(self):
        report = probe_perplexity(io.BytesIO(probe_file_bytes()), UniformScorer(9))
        assert report.unchanged_count == 10 and report.changed_count == 10
        assert abs(report.unchanged_perplexity - 9.0) < 1e-9

    def test_empty_category_raises(self):
        with pytest.raises(EmptyCategory):
            probe_perplexity([row("Unchanged", "a b")], UniformScorer(4))

    def test_unknown_category_rejected(self):
        with pytest.raises(ValueError):
            probe_perplexity([row("Mystery", "a b")], UniformScorer(4))


class TestRelativeReport:
    def test_identity_ratio(self):
        report = EvalReport(386.16, 364.82, 100, 50)
        ratios = relative_report(report, report)
        assert ratios.unchanged_ratio == 1.0
        assert ratios.changed_ratio == 1.0
        assert ratios.mean_ratio == 1.0

    def test_scalar_form(self):
        assert relative_report(300.0, 400.0) == 0.75

    def test_elementwise_random_pairs(self):
        import random

        rng = random.Random(2)
        for _ in range(50):
            current = EvalReport(rng.uniform(1, 500), rng.uniform(1, 500), 10, 10)
            baseline = EvalReport(rng.uniform(1, 500), rng.uniform(1, 500), 10, 10)
            ratios = relative_report(current, baseline)
            assert ratios.unchanged_ratio == pytest.approx(
                current.unchanged_perplexity / baseline.unchanged_perplexity
            )
            assert ratios.changed_ratio == pytest.approx(
                current.changed_perplexity / baseline.changed_perplexity
            )
            assert ratios.mean_ratio == pytest.approx(
                current.mean_perplexity / baseline.mean_perplexity
            )

    def test_zero_baseline_rejected(self):
        with pytest.raises(ValueError):
            relative_report(1.0, 0.0)


class TestReportIo:
    def test_rows_mirror_categories_and_average(self):
        report = EvalReport(10.0, 20.0, 3, 4)
        rows = report.rows()
        assert rows[0][0] == "Unchanged" and rows[1][0] == "Changed"
        assert rows[2] == ("Avg", "15.000000", "7")

    def test_write_and_parse(self, tmp_path):
        report = EvalReport(10.0, 20.0, 3, 4)
        out = tmp_path / "report.tsv"
        write_report(report, out)
        lines = out.read_text().splitlines()
        assert lines[0] == "Unchanged\t10.000000\t3"
        assert lines[2].startswith("Avg\t15.000000")


class TestProbeFileReader:
    def test_round_trip_of_fixture(self):
        rows = read_probe_file(io.BytesIO(probe_file_bytes()))
        assert rows == probe_rows()

    def test_log_mean_matches_math(self):
        # exp(mean nll) on a two-token text under uniform V=e gives e.
        scorer = UniformScorer(1)
        assert instance_perplexity("a b", scorer) == pytest.approx(1.0)
        assert instance_perplexity("a", UniformScorer(17)) == pytest.approx(17.0)
        assert math.exp(
            (math.log(4) + math.log(4)) / 2
        ) == pytest.approx(instance_perplexity("x y", UniformScorer(4)))

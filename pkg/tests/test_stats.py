import collections
import random

import pytest

from snapdiff.errors import RenderError
from snapdiff.probeqc import CategoryCounts, FilterReport
from snapdiff.stats import (
    CorpusStats,
    DistributionKind,
    corpus_stats,
    distribution,
    distribution_text,
    funnel_rows,
    probe_funnel,
)

from _oracles import count_tokens


class Entry:
    def __init__(self, text):
        self.text = text


class Labeled:
    def __init__(self, subject, relation, obj):
        self.subject_label = subject
        self.relation_label = relation
        self.object_label = obj


class TestCorpusStats:
    def test_empty(self):
        stats = corpus_stats([])
        assert (stats.article_count, stats.token_count) == (0, 0)

    def test_single_entry(self):
        stats = corpus_stats([Entry("a b c")])
        assert (stats.article_count, stats.token_count) == (1, 3)

    def test_against_counting_oracle(self):
        rng = random.Random(8)
        texts = [
            "\n".join(
                " ".join(f"w{rng.randrange(50)}" for _ in range(rng.randint(0, 12)))
                for _ in range(rng.randint(1, 5))
            )
            for _ in range(1000)
        ]
        stats = corpus_stats([Entry(t) for t in texts])
        assert stats.article_count == 1000
        assert stats.token_count == count_tokens(texts)

    def test_additive_over_concat(self):
        first = [Entry("a b"), Entry("c")]
        second = [Entry("d e f")]
        combined = corpus_stats(first + second)
        assert corpus_stats(first) + corpus_stats(second) == combined


class TestDistribution:
    def test_single_instance(self):
        report = distribution([Labeled("s", "r", "o")], DistributionKind.RELATION)
        assert report.entries == (("r", 1, 1.0),)

    def test_uniform_ties_lexicographic(self):
        instances = [
            Labeled(f"s", f"rel{i:02d}", "o") for i in range(10) for _ in range(10)
        ]
        report = distribution(instances, DistributionKind.RELATION, top_k=5)
        assert [e[0] for e in report.entries] == [f"rel{i:02d}" for i in range(5)]
        assert all(abs(e[2] - 0.1) < 1e-12 for e in report.entries)

    def test_zipf_counts_match_counter_oracle(self):
        rng = random.Random(4)
        labels = [f"L{min(int(rng.paretovariate(1.2)), 40)}" for _ in range(5000)]
        instances = [Labeled("s", "r", label) for label in labels]
        report = distribution(instances, DistributionKind.OBJECT_ENTITY, top_k=1000)
        oracle = collections.Counter(labels)
        assert {label: count for label, count, _ in report.entries} == dict(oracle)
        assert sum(count for _, count, _ in report.entries) == 5000
        counts = [count for _, count, _ in report.entries]
        assert counts == sorted(counts, reverse=True)

    def test_subject_kind_uses_subject_label(self):
        report = distribution(
            [Labeled("a", "r", "o"), Labeled("a", "r2", "o2")],
            DistributionKind.SUBJECT_ENTITY,
        )
        assert report.entries == (("a", 2, 1.0),)

    def test_render(self):
        report = distribution([Labeled("s", "r", "o")], DistributionKind.RELATION)
        text = distribution_text(report)
        assert "relation" in text and "r" in text


class TestFunnel:
    def make_report(self):
        return FilterReport(
            initial=CategoryCounts(5, 4),
            sampled=CategoryCounts(5, 4),
            after_alignment=CategoryCounts(4, 3),
            after_rule1=CategoryCounts(4, 2),
            after_rule2=CategoryCounts(3, 2),
            after_rule3=CategoryCounts(2, 2),
        )

    def test_all_zero(self):
        report = FilterReport(*(CategoryCounts(0, 0) for _ in range(6)))
        table = probe_funnel(report)
        for line in table.splitlines()[1:]:
            assert line.split()[1:] == ["0", "0", "0"]

    def test_stage_order_and_counts(self):
        table = probe_funnel(self.make_report())
        lines = table.splitlines()
        assert lines[0].split() == ["stage", "unchanged", "changed", "total"]
        stages = [line.split()[0] for line in lines[1:]]
        assert stages == [
            "initial",
            "sampled",
            "aligned",
            "rule1_substring",
            "rule2_object_length",
            "rule3_frequency",
        ]
        assert lines[1].split()[1:] == ["5", "4", "9"]
        assert lines[-1].split()[1:] == ["2", "2", "4"]

    def test_funnel_rows_machine_readable(self):
        rows = funnel_rows(self.make_report())
        assert rows[0] == ("initial", "5", "4")
        assert rows[-1] == ("rule3_frequency", "2", "2")

    def test_monotonicity_violation_raises(self):
        bad = FilterReport(
            initial=CategoryCounts(5, 4),
            sampled=CategoryCounts(5, 4),
            after_alignment=CategoryCounts(4, 3),
            after_rule1=CategoryCounts(5, 2),
            after_rule2=CategoryCounts(3, 2),
            after_rule3=CategoryCounts(2, 2),
        )
        with pytest.raises(RenderError):
            probe_funnel(bad)

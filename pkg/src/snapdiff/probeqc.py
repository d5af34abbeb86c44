"""Quality control for categorized facts: subsampling, article alignment,
heuristic filtering, and probe serialization.

Stage order is fixed: categorize -> sample Unchanged -> align -> substring
rule -> object-length rule -> frequency caps. Every stage only drops
instances; the funnel report records per-category counts after each one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .categorize import CategorizedFact, Category
from .errors import InvalidRate, RenderError
from .ingest import EntityMapping, FactTriple
from .textseg import normalize

OBJECT_WORD_LIMIT = 5

DEFAULT_SUBJECT_CAP = 0.01
DEFAULT_OBJECT_CAP = 0.05
DEFAULT_RELATION_CAP = 0.05
DEFAULT_SAMPLE_RATE = 0.001


class AlignedKind(str, Enum):
    DIFFSET_TEXT = "DiffsetText"
    FULL_ARTICLE_TEXT = "FullArticleText"


@dataclass(frozen=True)
class ProbeInstance:
    """A categorized fact that survived alignment, ready for evaluation."""

    triple: FactTriple
    category: Category
    aligned_article_id: str
    aligned_kind: AlignedKind

    @property
    def subject_label(self) -> str:
        return self.triple.subject_label

    @property
    def relation_label(self) -> str:
        return self.triple.relation_label

    @property
    def object_label(self) -> str:
        return self.triple.object_label

    @property
    def serialized(self) -> str:
        return f"{self.subject_label} {self.relation_label} {self.object_label}"

    def to_row(self) -> tuple[str, ...]:
        return (
            self.category.value,
            self.subject_label,
            self.relation_label,
            self.object_label,
            self.aligned_article_id,
            self.serialized,
        )


@dataclass(frozen=True)
class CategoryCounts:
    unchanged: int = 0
    changed: int = 0

    @property
    def total(self) -> int:
        return self.unchanged + self.changed


def count_categories(instances: Iterable) -> CategoryCounts:
    unchanged = changed = 0
    for inst in instances:
        if inst.category is Category.UNCHANGED:
            unchanged += 1
        else:
            changed += 1
    return CategoryCounts(unchanged, changed)


@dataclass(frozen=True)
class FilterReport:
    """Per-category instance counts after each pipeline stage."""

    initial: CategoryCounts
    sampled: CategoryCounts
    after_alignment: CategoryCounts
    after_rule1: CategoryCounts
    after_rule2: CategoryCounts
    after_rule3: CategoryCounts

    @property
    def input_count(self) -> int:
        return self.sampled.total

    def stages(self) -> list[tuple[str, CategoryCounts]]:
        return [
            ("initial", self.initial),
            ("sampled", self.sampled),
            ("aligned", self.after_alignment),
            ("rule1_substring", self.after_rule1),
            ("rule2_object_length", self.after_rule2),
            ("rule3_frequency", self.after_rule3),
        ]

    def validate(self) -> None:
        stages = self.stages()
        for (prev_name, prev), (name, current) in zip(stages, stages[1:]):
            if current.unchanged > prev.unchanged or current.changed > prev.changed:
                raise RenderError(
                    f"funnel counts increase from {prev_name} to {name}"
                )


def sample_unchanged(
    instances: Iterable[CategorizedFact],
    rate: float,
    seed: int,
) -> Iterator[CategorizedFact]:
    """Keep each Unchanged instance independently with probability
    ``rate``; Changed instances pass through untouched."""
    if not 0.0 < rate <= 1.0:
        raise InvalidRate(f"sample rate must be in (0, 1], got {rate}")
    rng = random.Random(seed)
    for inst in instances:
        if inst.category is Category.UNCHANGED and rng.random() >= rate:
            continue
        yield inst


def _contains(haystack: str, needle: str, case_sensitive: bool) -> bool:
    if case_sensitive:
        return needle in haystack
    return needle.lower() in haystack.lower()


def align(
    facts: Iterable[CategorizedFact],
    mapping: EntityMapping,
    diffset_texts: dict[str, str],
    recent_texts: dict[str, str],
    case_sensitive: bool = True,
) -> Iterator[ProbeInstance]:
    """Ground facts in article text.

    A Changed fact survives when its subject maps to a diffset article
    whose diff text contains the object label; an Unchanged fact when the
    subject maps to any recent article whose full text contains it. Both
    sides of the containment check are normalized. Non-survivors are
    dropped silently (the caller tallies them).
    """
    for fact in facts:
        article_id = mapping.article_for_entity(fact.triple.subject_id)
        if article_id is None:
            continue
        if fact.category is Category.CHANGED:
            text = diffset_texts.get(article_id)
            kind = AlignedKind.DIFFSET_TEXT
        else:
            text = recent_texts.get(article_id)
            kind = AlignedKind.FULL_ARTICLE_TEXT
        if text is None:
            continue
        if not _contains(text, normalize(fact.triple.object_label), case_sensitive):
            continue
        yield ProbeInstance(
            triple=fact.triple,
            category=fact.category,
            aligned_article_id=article_id,
            aligned_kind=kind,
        )


def filter_substring(
    instances: Iterable[ProbeInstance],
    case_sensitive: bool = True,
) -> Iterator[ProbeInstance]:
    """Drop instances where subject and object labels contain each other."""
    for inst in instances:
        subject = normalize(inst.subject_label)
        obj = normalize(inst.object_label)
        if _contains(obj, subject, case_sensitive) or _contains(subject, obj, case_sensitive):
            continue
        yield inst


def filter_object_length(
    instances: Iterable[ProbeInstance],
    word_limit: int = OBJECT_WORD_LIMIT,
) -> Iterator[ProbeInstance]:
    """Drop instances whose object label runs past ``word_limit`` words."""
    for inst in instances:
        if len(inst.object_label.split()) > word_limit:
            continue
        yield inst


def frequency_cap(fraction: float, total: int) -> int:
    return max(1, int(fraction * total))


def filter_frequency(
    instances: list[ProbeInstance],
    subject_cap_frac: float = DEFAULT_SUBJECT_CAP,
    object_cap_frac: float = DEFAULT_OBJECT_CAP,
    relation_cap_frac: float = DEFAULT_RELATION_CAP,
) -> list[ProbeInstance]:
    """Limit how often any one subject, object or relation label appears.

    Caps are ``max(1, floor(frac * N))`` of the stage input size N; one
    greedy pass keeps an instance only while all three of its label
    counters are strictly below their caps.
    """
    total = len(instances)
    subject_cap = frequency_cap(subject_cap_frac, total)
    object_cap = frequency_cap(object_cap_frac, total)
    relation_cap = frequency_cap(relation_cap_frac, total)
    subjects: dict[str, int] = {}
    objects: dict[str, int] = {}
    relations: dict[str, int] = {}
    kept = []
    for inst in instances:
        s = subjects.get(inst.subject_label, 0)
        o = objects.get(inst.object_label, 0)
        r = relations.get(inst.relation_label, 0)
        if s >= subject_cap or o >= object_cap or r >= relation_cap:
            continue
        subjects[inst.subject_label] = s + 1
        objects[inst.object_label] = o + 1
        relations[inst.relation_label] = r + 1
        kept.append(inst)
    return kept


def build_probes(
    categorized: list[CategorizedFact],
    mapping: EntityMapping,
    diffset_texts: dict[str, str],
    recent_texts: dict[str, str],
    sample_rate: float = DEFAULT_SAMPLE_RATE,
    seed: int = 0,
    subject_cap_frac: float = DEFAULT_SUBJECT_CAP,
    object_cap_frac: float = DEFAULT_OBJECT_CAP,
    relation_cap_frac: float = DEFAULT_RELATION_CAP,
    case_sensitive: bool = True,
) -> tuple[list[ProbeInstance], FilterReport]:
    """Run the full QC chain over categorized facts.

    ``categorized`` must already be in canonical order (as ``categorize``
    returns it); every stage preserves that order.
    """
    initial = count_categories(categorized)
    sampled = list(sample_unchanged(categorized, sample_rate, seed))
    sampled_counts = count_categories(sampled)
    aligned = list(align(sampled, mapping, diffset_texts, recent_texts, case_sensitive))
    aligned_counts = count_categories(aligned)
    rule1 = list(filter_substring(aligned, case_sensitive))
    rule1_counts = count_categories(rule1)
    rule2 = list(filter_object_length(rule1))
    rule2_counts = count_categories(rule2)
    rule3 = filter_frequency(
        rule2, subject_cap_frac, object_cap_frac, relation_cap_frac
    )
    report = FilterReport(
        initial=initial,
        sampled=sampled_counts,
        after_alignment=aligned_counts,
        after_rule1=rule1_counts,
        after_rule2=rule2_counts,
        after_rule3=count_categories(rule3),
    )
    return rule3, report

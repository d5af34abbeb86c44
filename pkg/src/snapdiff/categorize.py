"""Partition recent-snapshot facts into Unchanged and Changed.

Every recent fact is classified against the previous snapshot's facts for
the same subject: a missing subject, a missing relation, or a missing
object makes it Changed; an exact (subject, relation, object) survivor is
Unchanged. Objects compare by id when both sides carry one, by exact label
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .ingest import FactTriple


class Category(str, Enum):
    UNCHANGED = "Unchanged"
    CHANGED = "Changed"


class Reason(str, Enum):
    NEW_SUBJECT = "NewSubject"
    NEW_RELATION = "NewRelation"
    NEW_OBJECT = "NewObject"
    SAME = "Same"


@dataclass(frozen=True)
class CategorizedFact:
    triple: FactTriple
    reason: Reason

    @property
    def category(self) -> Category:
        return Category.UNCHANGED if self.reason is Reason.SAME else Category.CHANGED

    def to_row(self) -> tuple[str, ...]:
        t = self.triple
        return (
            self.category.value,
            t.subject_id,
            t.subject_label,
            t.relation_id,
            t.relation_label,
            t.object_id,
            t.object_label,
            self.reason.value,
        )


def objects_match(prev: FactTriple, recent: FactTriple) -> bool:
    if prev.object_id and recent.object_id:
        return prev.object_id == recent.object_id
    return prev.object_label == recent.object_label


def classify(prev_facts: list[FactTriple] | None, recent: FactTriple) -> Reason:
    """Classify one recent fact against the previous facts of its subject."""
    if not prev_facts:
        return Reason.NEW_SUBJECT
    same_relation = [f for f in prev_facts if f.relation_id == recent.relation_id]
    if not same_relation:
        return Reason.NEW_RELATION
    if any(objects_match(f, recent) for f in same_relation):
        return Reason.SAME
    return Reason.NEW_OBJECT


def categorize(
    prev: Iterable[FactTriple],
    recent: Iterable[FactTriple],
) -> list[CategorizedFact]:
    """Categorize every recent fact, ordered by
    (subject_id, relation_id, object_label).

    Inputs are expected to be deduplicated per snapshot (see
    ``ingest.dedupe_triples``); each recent fact gets exactly one category.
    """
    by_subject: dict[str, list[FactTriple]] = {}
    for triple in prev:
        by_subject.setdefault(triple.subject_id, []).append(triple)

    results = [
        CategorizedFact(triple, classify(by_subject.get(triple.subject_id), triple))
        for triple in recent
    ]
    results.sort(key=lambda cf: cf.triple.sort_key())
    return results

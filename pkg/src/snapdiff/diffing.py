"""Per-article text diffing and snapshot-level diffset construction.

For every recent article that also exists in the previous snapshot, the
diff keeps the sentences of each paragraph that its best-matching previous
paragraph lacks; paragraphs with no match at all are kept whole. Articles
new to the recent snapshot are kept in full. Articles that disappeared
produce nothing (deletions are out of scope).
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import DuplicateArticle
from .ingest import ArticleSnapshot, SnapshotPair
from .textseg import SegmentedArticle, segment_text


class DiffKind(str, Enum):
    NEW_ARTICLE = "NewArticle"
    UPDATED = "Updated"


@dataclass(frozen=True)
class DiffsetEntry:
    """New or updated text extracted for one article."""

    article_id: str
    title: str
    kind: DiffKind
    text: str
    source_pair: SnapshotPair | None = None

    def to_row(self) -> tuple[str, ...]:
        return (self.article_id, self.title, self.kind.value, self.text)


def get_diff(prev: SegmentedArticle, recent: SegmentedArticle) -> str:
    """Sentence-level difference of two segmented articles.

    Each recent paragraph is compared against the previous paragraph it
    shares the most sentences with (ties to the lowest previous index):
    no shared sentences keeps the paragraph whole, a partial match keeps
    only the sentences absent from that paragraph, full containment keeps
    nothing. Paragraph contributions are joined by blank lines, sentences
    by single spaces.
    """
    prev_sets = [frozenset(p.sentences) for p in prev.paragraphs]
    contributions = []
    for paragraph in recent.paragraphs:
        recent_set = frozenset(paragraph.sentences)
        best_shared = 0
        best_set: frozenset[str] | None = None
        for candidate in prev_sets:
            shared = len(recent_set & candidate)
            if shared > best_shared:
                best_shared = shared
                best_set = candidate
        if best_set is None:
            contributions.append(" ".join(paragraph.sentences))
        else:
            missing = [s for s in paragraph.sentences if s not in best_set]
            if missing:
                contributions.append(" ".join(missing))
    return "\n\n".join(contributions)


def diff_article_pair(
    prev_text: str | None,
    recent: ArticleSnapshot,
    pair: SnapshotPair | None = None,
) -> DiffsetEntry | None:
    """Diff one recent article against its previous text, if any.

    Returns None when the update produced no new sentences.
    """
    recent_seg = segment_text(recent.article_id, recent.text)
    if prev_text is None:
        return DiffsetEntry(
            article_id=recent.article_id,
            title=recent.title,
            kind=DiffKind.NEW_ARTICLE,
            text=recent_seg.canonical_text(),
            source_pair=pair,
        )
    prev_seg = segment_text(recent.article_id, prev_text)
    diff = get_diff(prev_seg, recent_seg)
    if not diff:
        return None
    return DiffsetEntry(
        article_id=recent.article_id,
        title=recent.title,
        kind=DiffKind.UPDATED,
        text=diff,
        source_pair=pair,
    )


def _diff_task(item: tuple[str | None, str, str, str]) -> tuple[str, str, str, str] | None:
    prev_text, article_id, title, text = item
    entry = diff_article_pair(prev_text, ArticleSnapshot(article_id, title, text))
    if entry is None:
        return None
    return (entry.article_id, entry.title, entry.kind.value, entry.text)


def build_diffset(
    prev: Iterable[ArticleSnapshot],
    recent: Iterable[ArticleSnapshot],
    pair: SnapshotPair | None = None,
    workers: int = 1,
) -> list[DiffsetEntry]:
    """Diff two article snapshots into a diffset ordered by article id.

    The previous snapshot is indexed up front and read-only afterwards, so
    recent articles can be diffed in parallel; output order and content do
    not depend on the worker count.
    """
    prev_index: dict[str, str] = {}
    for article in prev:
        if article.article_id in prev_index:
            raise DuplicateArticle(article.article_id, article.snapshot_tag)
        prev_index[article.article_id] = article.text

    entries: list[DiffsetEntry] = []
    if workers <= 1:
        for article, prev_text in _iter_work(prev_index, recent):
            entry = diff_article_pair(prev_text, article, pair)
            if entry is not None:
                entries.append(entry)
    else:
        items = (
            (prev_text, a.article_id, a.title, a.text)
            for a, prev_text in _iter_work(prev_index, recent)
        )
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(processes=workers) as pool:
            for result in pool.imap_unordered(_diff_task, items, chunksize=64):
                if result is None:
                    continue
                article_id, title, kind, text = result
                entries.append(
                    DiffsetEntry(article_id, title, DiffKind(kind), text, source_pair=pair)
                )
    entries.sort(key=lambda e: e.article_id)
    return entries


def _iter_work(
    prev_index: dict[str, str],
    recent: Iterable[ArticleSnapshot],
) -> Iterator[tuple[ArticleSnapshot, str | None]]:
    seen: set[str] = set()
    for article in recent:
        if article.article_id in seen:
            raise DuplicateArticle(article.article_id, article.snapshot_tag)
        seen.add(article.article_id)
        yield article, prev_index.get(article.article_id)

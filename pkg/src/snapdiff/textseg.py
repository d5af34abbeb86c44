"""Deterministic text normalization and paragraph/sentence segmentation.

Sentences are the unit the diff engine compares, so segmentation has to be
exact, total, and platform-independent. The sentence splitter is
deliberately rule-based; pass a different callable to ``segment_text`` if a
smarter one is needed.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Callable, Iterator

SentenceSplitter = Callable[[str], list[str]]

_LINE_BREAKS = re.compile(r"\r\n?")
_INLINE_SPACE = re.compile(r"[ \t]+")
_PARAGRAPH_BREAK = re.compile(r"\n{2,}")

# Terminator followed by whitespace; the captured character decides whether
# the position is a boundary (uppercase or opening quote/bracket).
_CANDIDATE = re.compile(r"[.!?](?=\s+(\S))")
_OPENERS = frozenset("\"'([“‘")

# Words whose trailing period does not end a sentence. The single-letter
# alternative covers personal initials and dotted acronyms; a period is a
# legal predecessor so "U.S." and the tails of "e.g."/"i.e." are caught.
_ABBREVIATION_TAIL = re.compile(
    r"(?:^|[\s.\(\[\"'“‘])(?:[A-Za-z]|Mr|Dr|St|No|vs|etc|e\.g|i\.e)\.$"
)
_GUARD_WINDOW = 8


@dataclass(frozen=True)
class Paragraph:
    """One paragraph as an ordered list of sentences."""

    sentences: tuple[str, ...]
    index: int

    def text(self) -> str:
        return " ".join(self.sentences)


@dataclass(frozen=True)
class SegmentedArticle:
    """An article broken into paragraphs and sentences.

    ``canonical_text()`` round-trips: it equals the normalized input when
    paragraphs in the input occupy single lines (line breaks inside a
    paragraph are reflowed to spaces during segmentation).
    """

    article_id: str
    paragraphs: tuple[Paragraph, ...]

    def canonical_text(self) -> str:
        return "\n\n".join(p.text() for p in self.paragraphs)


def normalize(text: str) -> str:
    """Canonical Unicode (NFC), LF line endings, collapsed inline
    whitespace, and per-line trimming. Total and idempotent."""
    text = unicodedata.normalize("NFC", text)
    text = _LINE_BREAKS.sub("\n", text)
    lines = [_INLINE_SPACE.sub(" ", line).strip() for line in text.split("\n")]
    return "\n".join(lines)


def split_paragraphs(text: str) -> list[str]:
    """Split normalized text on runs of blank lines, dropping empties."""
    return [p for p in _PARAGRAPH_BREAK.split(text.strip()) if p]


def split_sentences(paragraph: str) -> list[str]:
    """Rule-based sentence split of one normalized paragraph.

    Boundaries sit after '.', '!' or '?' when followed by whitespace and an
    uppercase or opening character; the abbreviation guard suppresses the
    boundary for periods.
    """
    sentences = []
    start = 0
    for match in _CANDIDATE.finditer(paragraph):
        follower = match.group(1)
        if not (follower.isupper() or follower in _OPENERS):
            continue
        end = match.end()
        if paragraph[end - 1] == "." and _ABBREVIATION_TAIL.search(
            paragraph, max(0, end - _GUARD_WINDOW), end
        ):
            continue
        sentence = paragraph[start:end].strip()
        if sentence:
            sentences.append(sentence)
        start = end
    tail = paragraph[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def segment_text(
    article_id: str,
    text: str,
    sentence_splitter: SentenceSplitter = split_sentences,
) -> SegmentedArticle:
    """Normalize and segment raw article text.

    Line breaks inside a paragraph are soft: they reflow to single spaces
    before sentence splitting, so the sentence unit never spans a break.
    """
    normalized = normalize(text)
    paragraphs = []
    for raw in split_paragraphs(normalized):
        reflowed = raw.replace("\n", " ")
        sentences = tuple(s for s in sentence_splitter(reflowed) if s.strip())
        if sentences:
            paragraphs.append(Paragraph(sentences=sentences, index=len(paragraphs)))
    return SegmentedArticle(article_id=article_id, paragraphs=tuple(paragraphs))


def canonical_text(text: str, sentence_splitter: SentenceSplitter = split_sentences) -> str:
    """The text as the segmenter sees it: normalized, reflowed, one space
    between sentences, one blank line between paragraphs."""
    return segment_text("", text, sentence_splitter).canonical_text()


def iter_sentences(article: SegmentedArticle) -> Iterator[str]:
    for paragraph in article.paragraphs:
        yield from paragraph.sentences

"""Perplexity restricted to proper-noun tokens.

The scorer and the part-of-speech tagger usually tokenize differently, so
scorer tokens are classified by character-span overlap: a scorer token is
a proper noun iff any overlapping tagger span carries a proper-noun tag.
Scorer tokens overlapping no tagger span at all are excluded and counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .scoring import TokenScorer, whitespace_spans

PROPER_NOUN_TAGS = frozenset({"PROPN", "NNP", "NNPS"})


class NoProperNouns(Exception):
    """The proper-noun mask over the sampled texts is empty."""


@dataclass(frozen=True)
class TaggedSpan:
    start: int
    end: int
    tag: str


Tagger = Callable[[str], list[TaggedSpan]]


@dataclass(frozen=True)
class ProperNounResult:
    perplexity: float
    proper_token_count: int
    unaligned_token_count: int
    total_token_count: int


def capitalized_word_tagger(text: str) -> list[TaggedSpan]:
    """Crude default: any capitalized alphabetic token is tagged PROPN.

    Good enough for smoke tests; plug in a real POS tagger for analysis.
    """
    spans = []
    for token, start, end in whitespace_spans(text):
        word = token.strip("\"'().,;:!?[]")
        tag = "PROPN" if word[:1].isupper() and word.isalpha() else "X"
        spans.append(TaggedSpan(start, end, tag))
    return spans


def _overlaps(a_start: int, a_end: int, b_start: int, b_end: int) -> bool:
    return a_start < b_end and b_start < a_end


def proper_noun_perplexity(
    texts: Iterable[str],
    scorer: TokenScorer,
    tagger: Tagger,
    proper_tags: frozenset[str] = PROPER_NOUN_TAGS,
) -> ProperNounResult:
    """exp(mean NLL) over scorer tokens whose overlapping tag is a proper
    noun, across all given texts."""
    nll_sum = 0.0
    proper = 0
    unaligned = 0
    total = 0
    for text in texts:
        scoring = scorer.score(text)
        tagged = tagger(text)
        for token_index, (start, end) in enumerate(scoring.offsets):
            total += 1
            overlapping = [
                span for span in tagged if _overlaps(start, end, span.start, span.end)
            ]
            if not overlapping:
                unaligned += 1
                continue
            if any(span.tag in proper_tags for span in overlapping):
                nll_sum += scoring.nlls[token_index]
                proper += 1
    if proper == 0:
        raise NoProperNouns("no scorer tokens aligned to a proper-noun tag")
    return ProperNounResult(
        perplexity=math.exp(nll_sum / proper),
        proper_token_count=proper,
        unaligned_token_count=unaligned,
        total_token_count=total,
    )

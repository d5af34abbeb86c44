"""Token scoring interface plus reference scorers for tests and baselines.

A scorer turns text into tokens with character spans and per-token negative
log-likelihoods under some autoregressive model. Real model adapters (e.g.
a transformer with its own subword tokenizer) implement the same protocol.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Protocol

_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class TokenScoring:
    """Per-token scores for one text. Spans are half-open char offsets."""

    tokens: tuple[str, ...]
    nlls: tuple[float, ...]
    offsets: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not (len(self.tokens) == len(self.nlls) == len(self.offsets)):
            raise ValueError("tokens, nlls and offsets must align")
        for nll in self.nlls:
            if not math.isfinite(nll) or nll < 0:
                raise ValueError(f"NLLs must be finite and non-negative, got {nll}")


class TokenScorer(Protocol):
    def score(self, text: str) -> TokenScoring: ...


def whitespace_spans(text: str) -> list[tuple[str, int, int]]:
    return [(m.group(0), m.start(), m.end()) for m in _TOKEN.finditer(text)]


class UniformScorer:
    """Every token costs log(vocabulary_size); perplexity is exactly the
    vocabulary size on any nonempty input."""

    def __init__(self, vocabulary_size: int):
        if vocabulary_size < 1:
            raise ValueError("vocabulary_size must be >= 1")
        self.vocabulary_size = vocabulary_size
        self._nll = math.log(vocabulary_size)

    def score(self, text: str) -> TokenScoring:
        spans = whitespace_spans(text)
        return TokenScoring(
            tokens=tuple(t for t, _, _ in spans),
            nlls=tuple(self._nll for _ in spans),
            offsets=tuple((s, e) for _, s, e in spans),
        )


class BigramScorer:
    """A fully specified bigram model over whitespace tokens.

    ``initial`` gives first-token probabilities, ``transitions`` maps a
    previous token to its next-token distribution. Every token that can
    occur must be covered; gaps raise KeyError rather than being smoothed.
    """

    def __init__(
        self,
        initial: dict[str, float],
        transitions: dict[str, dict[str, float]],
    ):
        self.initial = initial
        self.transitions = transitions

    def score(self, text: str) -> TokenScoring:
        spans = whitespace_spans(text)
        nlls = []
        previous = None
        for token, _, _ in spans:
            if previous is None:
                p = self.initial[token]
            else:
                p = self.transitions[previous][token]
            nlls.append(-math.log(p))
            previous = token
        return TokenScoring(
            tokens=tuple(t for t, _, _ in spans),
            nlls=tuple(nlls),
            offsets=tuple((s, e) for _, s, e in spans),
        )

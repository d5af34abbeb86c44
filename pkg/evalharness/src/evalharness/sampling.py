"""Fixed-length token-window sampling from a corpus.

Evaluation texts are windows of a fixed number of tokens drawn uniformly
(with replacement) over all window positions in the corpus, under a seeded
generator. Defaults match the evaluation protocol this harness serves:
10,000 windows of 512 tokens; pass smaller numbers for desk-scale runs.
"""

from __future__ import annotations

import random
from bisect import bisect_right
from pathlib import Path
from typing import IO, Callable, Iterable, Union

from .records import escape_field, iter_rows

DEFAULT_WINDOW_COUNT = 10_000
DEFAULT_WINDOW_LENGTH = 512

Tokenize = Callable[[str], list[str]]


def sample_windows(
    texts: Iterable[str],
    count: int = DEFAULT_WINDOW_COUNT,
    length: int = DEFAULT_WINDOW_LENGTH,
    seed: int = 0,
    tokenize: Tokenize = str.split,
) -> list[str]:
    """Draw ``count`` windows of ``length`` tokens each, uniformly over all
    window positions; texts shorter than ``length`` are skipped."""
    token_lists = [tokens for tokens in (tokenize(t) for t in texts) if len(tokens) >= length]
    if not token_lists:
        raise ValueError(f"no text has {length}+ tokens")
    cumulative = []
    total = 0
    for tokens in token_lists:
        total += len(tokens) - length + 1
        cumulative.append(total)
    rng = random.Random(seed)
    windows = []
    for _ in range(count):
        position = rng.randrange(total)
        text_index = bisect_right(cumulative, position)
        offset = position - (cumulative[text_index - 1] if text_index else 0)
        tokens = token_lists[text_index]
        windows.append(" ".join(tokens[offset : offset + length]))
    return windows


def write_windows(windows: Iterable[str], sink: Union[str, Path, IO[bytes]]) -> int:
    if isinstance(sink, (str, Path)):
        with open(sink, "wb") as fh:
            return write_windows(windows, fh)
    count = 0
    for window in windows:
        sink.write((escape_field(window) + "\n").encode("utf-8"))
        count += 1
    return count


def read_windows(source: Union[str, Path, IO[bytes]]) -> list[str]:
    return [fields[0] for fields in iter_rows(source, 1)]

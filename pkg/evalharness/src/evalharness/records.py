"""Readers for the pipeline's tab-separated output formats.

The wire format escapes ``\\`` as ``\\\\``, TAB as ``\\t`` and LF as
``\\n``; fields are tab-separated, one record per line, UTF-8.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterator, Union

Source = Union[str, Path, IO[bytes]]

_UNESCAPE = re.compile(r"\\([\\tn])")
_UNESCAPE_MAP = {"\\": "\\", "t": "\t", "n": "\n"}


def unescape_field(value: str) -> str:
    return _UNESCAPE.sub(lambda m: _UNESCAPE_MAP[m.group(1)], value)


def escape_field(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


@dataclass(frozen=True)
class ProbeRow:
    """One line of a probe file."""

    category: str
    subject_label: str
    relation_label: str
    object_label: str
    aligned_article_id: str
    serialized: str


def iter_rows(source: Source, arity: int) -> Iterator[list[str]]:
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            yield from iter_rows(fh, arity)
        return
    for lineno, raw in enumerate(source, 1):
        line = raw[:-1] if raw.endswith(b"\n") else raw
        if not line:
            continue
        columns = line.decode("utf-8").split("\t")
        if len(columns) != arity:
            raise ValueError(f"line {lineno}: expected {arity} columns, got {len(columns)}")
        yield [unescape_field(c) for c in columns]


def read_probe_file(source: Source) -> list[ProbeRow]:
    return [ProbeRow(*fields) for fields in iter_rows(source, 6)]


def read_article_texts(source: Source) -> Iterator[str]:
    """Texts from an article-records file (id, title, text)."""
    for _, _, text in iter_rows(source, 3):
        yield text

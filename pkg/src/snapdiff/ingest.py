"""Snapshot input parsing and bit-exact record output.

Three inputs feed the pipeline: an article corpus (wiki-style XML export or
the line-based article-records format), a fact corpus (6-column TSV or JSON
records), and an article/entity mapping table. All line-based formats share
one escaping rule so fields can carry tabs and newlines: ``\\`` -> ``\\\\``,
TAB -> ``\\t``, LF -> ``\\n``.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from datetime import datetime
from pathlib import Path
from typing import IO, Iterable, Iterator, Union

from .errors import ArityError, DuplicateEntity, EncodingError, MalformedInput

Source = Union[str, Path, IO[bytes]]

ARTICLE_FORMATS = ("article-records", "xml-dump")
TRIPLE_FORMATS = ("tsv", "json-records")

_TRIPLE_JSON_FIELDS = (
    "subject_id",
    "subject_label",
    "relation_id",
    "relation_label",
    "object_id",
    "object_label",
)


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArticleSnapshot:
    """One article (id, title, text) at one snapshot timestamp."""

    article_id: str
    title: str
    text: str
    snapshot_tag: str = ""

    def to_row(self) -> tuple[str, ...]:
        return (self.article_id, self.title, self.text)


@dataclass(frozen=True)
class FactTriple:
    """A (subject, relation, object) fact with ids and readable labels.

    Literal-valued objects (dates, quantities) carry an empty ``object_id``
    and are matched by label downstream.
    """

    subject_id: str
    subject_label: str
    relation_id: str
    relation_label: str
    object_id: str
    object_label: str
    snapshot_tag: str = ""

    def to_row(self) -> tuple[str, ...]:
        return (
            self.subject_id,
            self.subject_label,
            self.relation_id,
            self.relation_label,
            self.object_id,
            self.object_label,
        )

    def sort_key(self) -> tuple[str, str, str]:
        return (self.subject_id, self.relation_id, self.object_label)

    def dedup_key(self) -> tuple[str, str, str]:
        return (self.subject_id, self.relation_id, self.object_label)


@dataclass(frozen=True)
class MappingEntry:
    article_id: str
    title: str
    entity_id: str

    def to_row(self) -> tuple[str, ...]:
        return (self.article_id, self.title, self.entity_id)


@dataclass
class EntityMapping:
    """Bidirectional article/entity id table. Entity id lookup is
    functional: one entity resolves to at most one article."""

    entries: list[MappingEntry] = field(default_factory=list)
    _by_entity: dict[str, MappingEntry] = field(default_factory=dict, repr=False)

    def add(self, entry: MappingEntry) -> None:
        existing = self._by_entity.get(entry.entity_id)
        if existing is not None:
            if existing.article_id != entry.article_id:
                raise DuplicateEntity(entry.entity_id)
            return
        self._by_entity[entry.entity_id] = entry
        self.entries.append(entry)

    def article_for_entity(self, entity_id: str) -> str | None:
        entry = self._by_entity.get(entity_id)
        return entry.article_id if entry is not None else None

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class SnapshotPair:
    """Two consecutive snapshot tags, e.g. 2021-09 and 2021-10."""

    prev_tag: str
    recent_tag: str

    def __post_init__(self) -> None:
        prev = _parse_tag(self.prev_tag)
        recent = _parse_tag(self.recent_tag)
        if prev >= recent:
            raise ValueError(
                f"snapshot pair must be ordered: {self.prev_tag!r} !< {self.recent_tag!r}"
            )

    @property
    def label(self) -> str:
        return f"{self.prev_tag}..{self.recent_tag}"


def _parse_tag(tag: str) -> datetime:
    try:
        return datetime.strptime(tag, "%Y-%m")
    except ValueError as exc:
        raise ValueError(f"snapshot tag {tag!r} is not YYYY-MM") from exc


# ---------------------------------------------------------------------------
# Field escaping
# ---------------------------------------------------------------------------

_UNESCAPE = re.compile(r"\\([\\tn])")
_UNESCAPE_MAP = {"\\": "\\", "t": "\t", "n": "\n"}
_LABEL_WHITESPACE = re.compile(r"[\t\n\r]")


def escape_field(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def unescape_field(value: str) -> str:
    return _UNESCAPE.sub(lambda m: _UNESCAPE_MAP[m.group(1)], value)


def _clean_label(value: str) -> str:
    """Labels must not carry tabs or newlines; squash any to a space."""
    return _LABEL_WHITESPACE.sub(" ", value)


# ---------------------------------------------------------------------------
# Readers
# ---------------------------------------------------------------------------

def _open_source(source: Source) -> tuple[IO[bytes], bool]:
    if isinstance(source, (str, Path)):
        return open(source, "rb"), True
    return source, False


def _iter_rows(source: Source, arity: int) -> Iterator[tuple[int, list[str]]]:
    """Yield (line_number, unescaped_fields) from a tab-separated file."""
    stream, owned = _open_source(source)
    try:
        for lineno, raw in enumerate(stream, 1):
            line = raw[:-1] if raw.endswith(b"\n") else raw
            if not line:
                continue
            try:
                decoded = line.decode("utf-8")
            except UnicodeDecodeError as exc:
                raise EncodingError(f"invalid UTF-8 on line {lineno}: {exc}") from exc
            columns = decoded.split("\t")
            if len(columns) != arity:
                raise ArityError(arity, len(columns), lineno)
            yield lineno, [unescape_field(c) for c in columns]
    finally:
        if owned:
            stream.close()


def read_articles(
    source: Source,
    format: str = "article-records",
    snapshot_tag: str = "",
    strip_markup: bool = False,
) -> Iterator[ArticleSnapshot]:
    """Stream articles from a snapshot in source order.

    XML dumps are filtered to main-namespace, non-redirect pages; only the
    title, id and latest revision text of each page are read.
    """
    if format == "article-records":
        articles = _read_article_records(source, snapshot_tag)
    elif format == "xml-dump":
        articles = _read_xml_dump(source, snapshot_tag)
    else:
        raise ValueError(f"unknown article format {format!r}")
    if strip_markup:
        articles = (replace(a, text=strip_wiki_markup(a.text)) for a in articles)
    return articles


def _read_article_records(source: Source, snapshot_tag: str) -> Iterator[ArticleSnapshot]:
    for lineno, (article_id, title, text) in _iter_rows(source, 3):
        if not article_id:
            raise MalformedInput("empty article_id", position=f"line {lineno}")
        yield ArticleSnapshot(article_id, title, text, snapshot_tag)


def _tag_name(qualified: str) -> str:
    return qualified.rsplit("}", 1)[-1]


def _read_xml_dump(source: Source, snapshot_tag: str) -> Iterator[ArticleSnapshot]:
    stream, owned = _open_source(source)
    try:
        parser = ET.iterparse(stream, events=("start", "end"))
        try:
            _, root = next(parser)
        except StopIteration:
            return
        title = article_id = None
        revision_text = ""
        namespace = "0"
        is_redirect = False
        depth_in_revision = False
        for event, elem in parser:
            tag = _tag_name(elem.tag)
            if event == "start":
                if tag == "page":
                    title = article_id = None
                    revision_text = ""
                    namespace = "0"
                    is_redirect = False
                elif tag == "revision":
                    depth_in_revision = True
                continue
            if tag == "title":
                title = elem.text or ""
            elif tag == "ns":
                namespace = (elem.text or "0").strip()
            elif tag == "redirect":
                is_redirect = True
            elif tag == "id" and not depth_in_revision:
                article_id = (elem.text or "").strip()
            elif tag == "text":
                # Later revisions overwrite earlier ones: latest wins.
                revision_text = elem.text or ""
            elif tag == "revision":
                depth_in_revision = False
            elif tag == "page":
                if article_id is None or title is None:
                    raise MalformedInput("page without id or title")
                if namespace == "0" and not is_redirect and not _is_redirect_text(revision_text):
                    yield ArticleSnapshot(article_id, title, revision_text, snapshot_tag)
                root.clear()
    except ET.ParseError as exc:
        raise MalformedInput(f"XML parse error: {exc}", position=exc.position) from exc
    finally:
        if owned:
            stream.close()


def _is_redirect_text(text: str) -> bool:
    return text.lstrip()[:9].upper() == "#REDIRECT"


def read_triples(
    source: Source,
    format: str = "tsv",
    snapshot_tag: str = "",
) -> Iterator[FactTriple]:
    """Stream fact triples in source order."""
    if format == "tsv":
        return _read_triples_tsv(source, snapshot_tag)
    if format == "json-records":
        return _read_triples_json(source, snapshot_tag)
    raise ValueError(f"unknown triple format {format!r}")


def _make_triple(fields: list[str], snapshot_tag: str, lineno: int) -> FactTriple:
    s_id, s_label, r_id, r_label, o_id, o_label = fields
    if not s_id or not r_id or not o_label:
        raise MalformedInput(
            "subject_id, relation_id and object_label must be non-empty",
            position=f"line {lineno}",
        )
    return FactTriple(
        subject_id=s_id,
        subject_label=_clean_label(s_label),
        relation_id=r_id,
        relation_label=_clean_label(r_label),
        object_id=o_id,
        object_label=_clean_label(o_label),
        snapshot_tag=snapshot_tag,
    )


def _read_triples_tsv(source: Source, snapshot_tag: str) -> Iterator[FactTriple]:
    for lineno, fields in _iter_rows(source, 6):
        yield _make_triple(fields, snapshot_tag, lineno)


def _read_triples_json(source: Source, snapshot_tag: str) -> Iterator[FactTriple]:
    stream, owned = _open_source(source)
    try:
        for lineno, raw in enumerate(stream, 1):
            line = raw.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
            except (UnicodeDecodeError, json.JSONDecodeError) as exc:
                raise MalformedInput(f"bad JSON record: {exc}", position=f"line {lineno}") from exc
            if not isinstance(record, dict):
                raise MalformedInput("JSON record is not an object", position=f"line {lineno}")
            try:
                fields = [str(record.get(name, "") or "") for name in _TRIPLE_JSON_FIELDS]
            except TypeError as exc:
                raise MalformedInput(str(exc), position=f"line {lineno}") from exc
            yield _make_triple(fields, snapshot_tag, lineno)
    finally:
        if owned:
            stream.close()


def read_mapping(source: Source) -> EntityMapping:
    """Load the article/entity mapping table."""
    mapping = EntityMapping()
    for lineno, (article_id, title, entity_id) in _iter_rows(source, 3):
        if not article_id or not entity_id:
            raise MalformedInput("empty article_id or entity_id", position=f"line {lineno}")
        mapping.add(MappingEntry(article_id, title, entity_id))
    return mapping


def dedupe_triples(triples: Iterable[FactTriple]) -> Iterator[FactTriple]:
    """Drop exact (subject_id, relation_id, object_label) duplicates,
    keeping first occurrences in order."""
    seen: set[tuple[str, str, str]] = set()
    for triple in triples:
        key = triple.dedup_key()
        if key in seen:
            continue
        seen.add(key)
        yield triple


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------

def write_records(records: Iterable, sink: Union[str, Path, IO[bytes]]) -> int:
    """Write records (anything with ``to_row()``) one per line, tab-separated
    with escaped fields, UTF-8. Returns the record count."""
    if isinstance(sink, (str, Path)):
        with open(sink, "wb") as fh:
            return write_records(records, fh)
    count = 0
    for record in records:
        row = record.to_row() if hasattr(record, "to_row") else tuple(record)
        line = "\t".join(escape_field(str(f)) for f in row) + "\n"
        sink.write(line.encode("utf-8"))
        count += 1
    return count


def read_rows(source: Source, arity: int) -> Iterator[list[str]]:
    """Generic reader for any of the pipeline's tab-separated outputs."""
    for _, fields in _iter_rows(source, arity):
        yield fields


# ---------------------------------------------------------------------------
# Optional wiki-markup stripping
# ---------------------------------------------------------------------------

_TEMPLATE = re.compile(r"\{\{[^{}]*\}\}", re.DOTALL)
_LINK_WITH_ANCHOR = re.compile(r"\[\[[^\[\]|]*\|([^\[\]]*)\]\]")
_LINK_PLAIN = re.compile(r"\[\[([^\[\]]*)\]\]")
_HEADING = re.compile(r"^=+\s*(.*?)\s*=+\s*$", re.MULTILINE)


def strip_wiki_markup(text: str) -> str:
    """Best-effort removal of template braces, link brackets (keeping the
    anchor text) and heading markers. Pre-processing only; the diff engine
    never sees raw markup when this pass is enabled."""
    previous = None
    while previous != text:
        previous = text
        text = _TEMPLATE.sub("", text)
    text = _LINK_WITH_ANCHOR.sub(r"\1", text)
    text = _LINK_PLAIN.sub(r"\1", text)
    text = _HEADING.sub(r"\1", text)
    return text

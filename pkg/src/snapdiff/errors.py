"""Exception types raised across the pipeline."""


class SnapdiffError(Exception):
    """Base class for all pipeline errors."""


class MalformedInput(SnapdiffError):
    """Input violates its declared structure. `position` is a line number
    for record formats and a parser-reported location for XML."""

    def __init__(self, message: str, position: object = None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class ArityError(MalformedInput):
    """A delimited row has the wrong number of columns."""

    def __init__(self, expected: int, got: int, line: int):
        self.expected = expected
        self.got = got
        super().__init__(f"expected {expected} columns, got {got}", position=f"line {line}")


class EncodingError(SnapdiffError):
    """Input bytes are not valid UTF-8."""


class DuplicateEntity(SnapdiffError):
    """One entity id maps to more than one article id."""

    def __init__(self, entity_id: str):
        self.entity_id = entity_id
        super().__init__(f"entity {entity_id!r} maps to conflicting article ids")


class DuplicateArticle(SnapdiffError):
    """An article id occurs twice within one snapshot."""

    def __init__(self, article_id: str, snapshot_tag: str):
        self.article_id = article_id
        self.snapshot_tag = snapshot_tag
        super().__init__(f"duplicate article id {article_id!r} in snapshot {snapshot_tag!r}")


class InvalidRate(SnapdiffError):
    """Sampling rate outside (0, 1]."""


class RenderError(SnapdiffError):
    """A report violates its invariants and cannot be rendered."""

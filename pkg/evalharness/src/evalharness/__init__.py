"""evalharness: perplexity evaluation over fact-probe files with pluggable
token scorers and taggers."""

from .perplexity import (
    EmptyCategory,
    EvalReport,
    RelativeReport,
    instance_perplexity,
    probe_perplexity,
    relative_report,
    write_report,
)
from .propernoun import (
    NoProperNouns,
    ProperNounResult,
    TaggedSpan,
    capitalized_word_tagger,
    proper_noun_perplexity,
)
from .records import ProbeRow, read_article_texts, read_probe_file
from .sampling import read_windows, sample_windows, write_windows
from .scoring import BigramScorer, TokenScorer, TokenScoring, UniformScorer

__version__ = "0.1.0"

__all__ = [
    "BigramScorer",
    "EmptyCategory",
    "EvalReport",
    "NoProperNouns",
    "ProbeRow",
    "ProperNounResult",
    "RelativeReport",
    "TaggedSpan",
    "TokenScorer",
    "TokenScoring",
    "UniformScorer",
    "capitalized_word_tagger",
    "instance_perplexity",
    "probe_perplexity",
    "proper_noun_perplexity",
    "read_article_texts",
    "read_probe_file",
    "read_windows",
    "relative_report",
    "sample_windows",
    "write_report",
    "write_windows",
]

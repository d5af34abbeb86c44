import random
import unicodedata

from hypothesis import given, settings
from hypothesis import strategies as st

from snapdiff.textseg import (
    canonical_text,
    normalize,
    segment_text,
    split_paragraphs,
    split_sentences,
)


def oracle_normalize(text: str) -> str:
    """Character-by-character application of the normalization rules."""
    text = unicodedata.normalize("NFC", text)
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\r":
            out.append("\n")
            if i + 1 < len(text) and text[i + 1] == "\n":
                i += 1
        else:
            out.append(ch)
        i += 1
    lines = "".join(out).split("\n")
    cleaned = []
    for line in lines:
        collapsed = []
        previous_space = False
        for ch in line:
            if ch in (" ", "\t"):
                if not previous_space:
                    collapsed.append(" ")
                previous_space = True
            else:
                collapsed.append(ch)
                previous_space = False
        cleaned.append("".join(collapsed).strip())
    return "\n".join(cleaned)


class TestNormalize:
    def test_whitespace_collapse(self):
        assert normalize("a  b") == "a b"

    def test_empty(self):
        assert normalize("") == ""

    def test_crlf_and_tabs(self):
        assert normalize("a\tb\r\nc  d\re") == "a b\nc d\ne"

    def test_line_trim(self):
        assert normalize("  hello \n world  ") == "hello\nworld"

    def test_random_lines_match_oracle(self):
        rng = random.Random(13)
        pieces = []
        for _ in range(100):
            pieces.append(
                "".join(
                    rng.choice("ab \tzéé")
                    for _ in range(rng.randint(0, 30))
                )
            )
            pieces.append(rng.choice(["\n", "\r\n", "\r"]))
        text = "".join(pieces)
        assert normalize(text) == oracle_normalize(text)

    @given(st.text())
    @settings(max_examples=200)
    def test_idempotent(self, text):
        once = normalize(text)
        assert normalize(once) == once

    @given(st.text())
    @settings(max_examples=200)
    def test_matches_oracle(self, text):
        assert normalize(text) == oracle_normalize(text)


class TestSplitParagraphs:
    def test_two_paragraphs(self):
        assert split_paragraphs("A.\n\nB.") == ["A.", "B."]

    def test_blank_run_collapse(self):
        assert split_paragraphs("A.\n\n\n\nB.") == ["A.", "B."]

    def test_empty(self):
        assert split_paragraphs("") == []

    def test_round_trip_recovers_originals(self):
        rng = random.Random(7)
        originals = [f"Paragraph {i} body text." for i in range(50)]
        glue = ["\n" * rng.randint(2, 5) for _ in range(49)]
        text = originals[0]
        for sep, para in zip(glue, originals[1:]):
            text += sep + para
        assert split_paragraphs(text) == originals


class TestSplitSentences:
    def test_two_sentences(self):
        assert split_sentences("He died in Rome. He was 94.") == [
            "He died in Rome.",
            "He was 94.",
        ]

    def test_abbreviation_guard(self):
        assert split_sentences("Dr. Smith arrived.") == ["Dr. Smith arrived."]

    def test_initials_guard(self):
        assert split_sentences("J. R. Tolkien wrote it.") == ["J. R. Tolkien wrote it."]

    def test_eg_guard(self):
        assert split_sentences("Use fruit, e.g. Apples are fine.") == [
            "Use fruit, e.g. Apples are fine."
        ]

    def test_exclamation_and_question(self):
        assert split_sentences("Stop! Why now? Go.") == ["Stop!", "Why now?", "Go."]

    def test_lowercase_continuation_not_split(self):
        assert split_sentences("It cost 3.50 total. next was fine.") == [
            "It cost 3.50 total. next was fine."
        ]

    def test_number_boundary_splits(self):
        assert split_sentences("He was 94. Then he left.") == [
            "He was 94.",
            "Then he left.",
        ]

    def test_opening_quote_boundary(self):
        assert split_sentences('He said no. "Fine words."') == [
            "He said no.",
            '"Fine words."',
        ]

    def test_generated_sentences_recovered_exactly(self):
        rng = random.Random(11)
        words = ["alpha", "beta", "gamma", "delta", "omega"]
        sentences = []
        for i in range(200):
            body = " ".join(rng.choice(words) for _ in range(rng.randint(2, 7)))
            sentences.append(f"Start{i} {body}" + rng.choice(".!?"))
        assert split_sentences(" ".join(sentences)) == sentences


class TestSegmentation:
    def test_lossless_on_single_line_paragraphs(self):
        text = "First one. Second one.\n\nAnother block here. And more."
        assert canonical_text(text) == normalize(text)

    def test_inner_newlines_reflow_to_spaces(self):
        text = "First sentence.\nStill same paragraph.\n\nNext paragraph."
        assert canonical_text(text) == (
            "First sentence. Still same paragraph.\n\nNext paragraph."
        )

    def test_segment_structure(self):
        seg = segment_text("x", "A one. A two.\n\nB one.")
        assert [p.index for p in seg.paragraphs] == [0, 1]
        assert seg.paragraphs[0].sentences == ("A one.", "A two.")
        assert seg.paragraphs[1].sentences == ("B one.",)

    def test_canonical_idempotent(self):
        rng = random.Random(3)
        words = ["red", "blue", "green"]
        paragraphs = []
        for i in range(20):
            sentences = [
                f"Word{i}x{j} {' '.join(rng.choices(words, k=3))}."
                for j in range(rng.randint(1, 4))
            ]
            paragraphs.append(" ".join(sentences))
        text = "\n\n".join(paragraphs)
        assert canonical_text(text) == text
        assert canonical_text(canonical_text(text)) == canonical_text(text)

    @given(st.text())
    @settings(max_examples=150)
    def test_canonical_total_and_idempotent(self, text):
        once = canonical_text(text)
        assert canonical_text(once) == once

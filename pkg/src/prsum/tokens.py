"""Word tokenization and sentence segmentation.

One tokenizer is shared by the cleaning pipeline, the ROUGE metrics, and the
extractive baseline so that token budgets and scores are measured with the
same stick everywhere.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field

KINDS = ("source", "target", "candidate", "reference")

_PUNCTUATION = set(string.punctuation)

# A sentence is either a run of non-terminator characters followed by one or
# more terminators (kept), or a trailing run without a terminator. Newlines
# always end a sentence and are dropped.
_SENTENCE_RE = re.compile(r"[^.!?\n]*[.!?]+|[^.!?\n]+")


@dataclass
class TokenSequence:
    """An ordered list of word/punctuation tokens with provenance."""

    tokens: list[str] = field(default_factory=list)
    kind: str = "source"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown token-sequence kind: {self.kind!r}")
        if any(not t for t in self.tokens):
            raise ValueError("token sequences must not contain empty tokens")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def is_empty(self) -> bool:
        return not self.tokens

    def text(self) -> str:
        """Tokens joined with single spaces."""
        return " ".join(self.tokens)


def _split_chunk(chunk: str) -> list[str]:
    """Peel leading/trailing punctuation off a whitespace chunk.

    Interior punctuation (hyphens, dots inside versions, apostrophes) stays
    attached, so "java-formatter" and "v2.0.1" survive as single tokens.
    """
    leading: list[str] = []
    while chunk and chunk[0] in _PUNCTUATION:
        leading.append(chunk[0])
        chunk = chunk[1:]
    trailing: list[str] = []
    while chunk and chunk[-1] in _PUNCTUATION:
        trailing.append(chunk[-1])
        chunk = chunk[:-1]
    parts = leading
    if chunk:
        parts.append(chunk)
    parts.extend(reversed(trailing))
    return parts


def tokenize_words(text: str, kind: str = "source") -> TokenSequence:
    """Split text into word and punctuation tokens.

    Splits on whitespace, then peels leading/trailing punctuation into
    separate single-character tokens. Deterministic; empty text gives an
    empty sequence.
    """
    tokens: list[str] = []
    for chunk in text.split():
        tokens.extend(_split_chunk(chunk))
    return TokenSequence(tokens, kind)


def split_sentences(text: str) -> list[str]:
    """Split text into sentences on ``.``, ``!``, ``?`` and newlines.

    Terminator characters stay attached to their sentence; newlines are
    boundary-only and dropped. No abbreviation handling: commit text is
    informal and the simple rule keeps behaviour predictable. Empty
    sentences are dropped.
    """
    sentences = []
    for match in _SENTENCE_RE.findall(text):
        stripped = match.strip()
        if stripped and any(ch not in _PUNCTUATION and not ch.isspace() for ch in stripped):
            sentences.append(stripped)
    return sentences

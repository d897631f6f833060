"""Text cleaning rules and source/target sequence construction.

The cleaning pass strips markup and review noise from commit messages, code
comments, and PR descriptions: HTML tags, URLs, issue references ("#456"),
signature lines ("reviewed-by: ..."), @-mentions, and markdown headline
markers. The literal ``<cm-sep>`` separator used to join comments in
delimited corpora is turned into a sentence boundary so each joined segment
stays a sentence of its own.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING

from prsum.tokens import TokenSequence, tokenize_words

if TYPE_CHECKING:
    from prsum.corpus import PullRequestRecord

SEPARATOR = "<cm-sep>"
SENTENCE_BOUNDARY = ". "
_TERMINATORS = (".", "!", "?")

_HTML_TAG_RE = re.compile(r"<[^<>]+>")
_HEADLINE_RE = re.compile(r"^\s*#{1,6}\s+")
_ISSUE_REF_RE = re.compile(r"#\d+")
_URL_PREFIXES = ("http://", "https://", "www.")
_SIGNATURE_PREFIXES = ("reviewed-by", "signed-off-by", "co-authored-by")


@dataclass
class CleaningConfig:
    """Which cleaning rules to apply; every rule is on by default."""

    strip_html: bool = True
    strip_urls: bool = True
    strip_issue_refs: bool = True
    strip_signatures: bool = True
    strip_mentions: bool = True
    strip_md_headlines: bool = True
    lowercase: bool = True


@dataclass
class SequenceBudget:
    """Token budgets for model input (source) and output (target)."""

    source_max_tokens: int = 512
    target_max_tokens: int = 50
    truncation_enabled: bool = True

    def __post_init__(self) -> None:
        if self.source_max_tokens <= 0 or self.target_max_tokens <= 0:
            raise ValueError("token budgets must be positive")


def _is_signature_line(line: str) -> bool:
    parts = line.split(None, 1)
    if not parts:
        return False
    first = parts[0].lower()
    return any(first.startswith(prefix) for prefix in _SIGNATURE_PREFIXES)


def _strip_tags(text: str) -> str:
    # Iterate to a fixpoint so remnants like "< >" left by nested tags
    # cannot survive one pass and disappear on the next.
    while True:
        stripped = _HTML_TAG_RE.sub(" ", text)
        if stripped == text:
            return text
        text = stripped


def _strip_headline_markers(line: str) -> str:
    while True:
        stripped = _HEADLINE_RE.sub("", line)
        if stripped == line:
            return line
        line = stripped


def _drop_noise_tokens(line: str, config: CleaningConfig) -> str:
    kept = []
    for chunk in line.split():
        lowered = chunk.lower()
        if config.strip_urls and lowered.startswith(_URL_PREFIXES):
            continue
        if config.strip_mentions and chunk.startswith("@"):
            continue
        kept.append(chunk)
    return " ".join(kept)


def _clean_line(line: str, config: CleaningConfig) -> str | None:
    """Clean one line; None means the whole line is dropped."""
    if config.strip_md_headlines:
        line = _strip_headline_markers(line)
    if config.strip_issue_refs:
        line = _ISSUE_REF_RE.sub(" ", line)
    line = _drop_noise_tokens(line, config)
    # Token removal can expose headline markers or a signature prefix at the
    # start of the line; re-check so a second cleaning pass finds nothing new.
    if config.strip_md_headlines:
        line = _strip_headline_markers(line)
    if config.strip_signatures and _is_signature_line(line):
        return None
    return line


def clean_text(raw: str, config: CleaningConfig | None = None) -> str:
    """Apply the configured cleaning rules to a piece of text.

    Cleaning is total: it never raises, and an empty result is legal.
    Output whitespace is collapsed to single spaces. Idempotent: the only
    characters ever introduced are spaces and the sentence boundary that
    replaces ``<cm-sep>``.
    """
    config = config or CleaningConfig()
    text = raw.replace(SEPARATOR, SENTENCE_BOUNDARY)
    if config.strip_html:
        text = _strip_tags(text)

    lines = []
    for line in text.split("\n"):
        cleaned = _clean_line(line, config)
        if cleaned is not None:
            lines.append(cleaned)
    text = " ".join(lines)

    if config.lowercase:
        text = text.lower()
    return " ".join(text.split())


def replace_separator(joined: str) -> list[str]:
    """Split a ``<cm-sep>``-joined string into trimmed non-empty segments."""
    segments = [segment.strip() for segment in joined.split(SEPARATOR)]
    return [segment for segment in segments if segment]


def join_with_boundary(segments: list[str]) -> str:
    """Join cleaned segments, inserting a sentence boundary between them.

    Segments that already end with a terminator are joined with a plain
    space so no double punctuation appears.
    """
    out = ""
    for segment in segments:
        if not out:
            out = segment
        elif out.endswith(_TERMINATORS):
            out = out + " " + segment
        else:
            out = out + SENTENCE_BOUNDARY + segment
    return out


def build_source_sequence(
    record: PullRequestRecord,
    config: CleaningConfig | None = None,
    budget: SequenceBudget | None = None,
) -> TokenSequence:
    """Build the model-input token sequence for one record.

    Commit messages in commit order, then code comments in order, each
    cleaned and joined with a sentence boundary, tokenized, and truncated
    to the source budget (head-preserving). A record whose cleaned source
    is empty comes back as an empty sequence; the caller decides to drop.
    """
    if not record.commit_messages:
        raise ValueError(f"record {record.id!r} has no commit messages")
    return assemble_source_sequence(record, config or CleaningConfig(), budget or SequenceBudget())


def assemble_source_sequence(
    record: PullRequestRecord, config: CleaningConfig, budget: SequenceBudget
) -> TokenSequence:
    """Like build_source_sequence but tolerates records without commits
    (used for statistics over unfiltered corpora)."""
    segments = [clean_text(m, config) for m in record.commit_messages]
    segments += [clean_text(c, config) for c in record.code_comments]
    segments = [s for s in segments if s]
    seq = tokenize_words(join_with_boundary(segments), kind="source")
    if budget.truncation_enabled and len(seq) > budget.source_max_tokens:
        seq = TokenSequence(seq.tokens[: budget.source_max_tokens], kind="source")
    return seq


def build_target_sequence(
    record: PullRequestRecord,
    config: CleaningConfig | None = None,
    budget: SequenceBudget | None = None,
) -> TokenSequence:
    """Build the reference-output token sequence from the PR description.

    Cleaned, tokenized, truncated to the target budget. Empty-after-cleaning
    descriptions come back as an empty sequence (flagged for filtering).
    """
    config = config or CleaningConfig()
    budget = budget or SequenceBudget()
    seq = tokenize_words(clean_text(record.description, config), kind="target")
    if budget.truncation_enabled and len(seq) > budget.target_max_tokens:
        seq = TokenSequence(seq.tokens[: budget.target_max_tokens], kind="target")
    return seq

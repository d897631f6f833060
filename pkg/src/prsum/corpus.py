"""Load, validate, persist, split, and summarize PR corpora.

Canonical on-disk format is JSON-lines (UTF-8, LF): one object per record
with keys ``id``, ``description``, ``commits`` (array of objects carrying a
``message``), and ``code_comments`` (array of strings). A CSV alternative
joins the list fields with the literal ``<cm-sep>`` separator.
"""

from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from prsum.errors import DataError

FORMATS = ("jsonl", "csv")
_CSV_HEADER = ["id", "description", "commits", "code_comments"]
DEFAULT_RATIOS = (0.8, 0.1, 0.1)


@dataclass
class PullRequestRecord:
    """One pull request: reference description plus its raw source texts."""

    id: str
    description: str
    commit_messages: list[str]
    code_comments: list[str] = field(default_factory=list)


@dataclass
class CorpusSplit:
    train: list[PullRequestRecord]
    validation: list[PullRequestRecord]
    test: list[PullRequestRecord]
    seed: int


@dataclass
class DatasetStats:
    """Corpus-level length statistics for source (article) and target (abstract)."""

    n_records: int
    avg_article_len: float
    avg_abstract_len: float
    article_len_histogram: dict[str, int]
    abstract_len_histogram: dict[str, int]
    bucket_width: int = 10

    def to_json_dict(self) -> dict:
        return {
            "n_records": self.n_records,
            "avg_article_len": round(self.avg_article_len, 2),
            "avg_abstract_len": round(self.avg_abstract_len, 2),
            "bucket_width": self.bucket_width,
            "article_len_histogram": self.article_len_histogram,
            "abstract_len_histogram": self.abstract_len_histogram,
        }


def _record_from_obj(obj: dict, lineno: int) -> PullRequestRecord:
    if not isinstance(obj, dict):
        raise DataError(f"line {lineno}: expected a JSON object, got {type(obj).__name__}")
    try:
        record_id = obj["id"]
        description = obj["description"]
        commits = obj["commits"]
        comments = obj.get("code_comments", [])
    except KeyError as exc:
        raise DataError(f"line {lineno}: missing key {exc.args[0]!r}") from None
    if not isinstance(record_id, str) or not record_id:
        raise DataError(f"line {lineno}: id must be a non-empty string")
    if not isinstance(description, str):
        raise DataError(f"line {lineno}: description must be a string")
    if not isinstance(commits, list):
        raise DataError(f"line {lineno}: commits must be an array")
    messages = []
    for commit in commits:
        if not isinstance(commit, dict) or not isinstance(commit.get("message"), str):
            raise DataError(f"line {lineno}: each commit must be an object with a 'message' string")
        messages.append(commit["message"])
    if not isinstance(comments, list) or any(not isinstance(c, str) for c in comments):
        raise DataError(f"line {lineno}: code_comments must be an array of strings")
    return PullRequestRecord(record_id, description, messages, list(comments))


def load_corpus(path: str | Path, format: str = "jsonl") -> list[PullRequestRecord]:
    """Load a corpus file, validating record shape and id uniqueness."""
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format: {format!r}")
    path = Path(path)
    records = _load_jsonl(path) if format == "jsonl" else _load_csv(path)
    seen: set[str] = set()
    for record in records:
        if record.id in seen:
            raise DataError(f"duplicate record id: {record.id!r}")
        seen.add(record.id)
    return records


def _load_jsonl(path: Path) -> list[PullRequestRecord]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"line {lineno}: malformed JSON ({exc.msg})") from None
            records.append(_record_from_obj(obj, lineno))
    return records


def _load_csv(path: Path) -> list[PullRequestRecord]:
    from prsum.cleaning import replace_separator

    records = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader, None)
            if header != _CSV_HEADER:
                raise DataError(
                    f"bad CSV header in {path}: expected {','.join(_CSV_HEADER)}"
                )
            for row in reader:
                lineno = reader.line_num
                if len(row) != len(_CSV_HEADER):
                    raise DataError(f"line {lineno}: expected {len(_CSV_HEADER)} fields, got {len(row)}")
                record_id, description, commits, comments = row
                if not record_id:
                    raise DataError(f"line {lineno}: id must be a non-empty string")
                records.append(
                    PullRequestRecord(
                        record_id,
                        description,
                        replace_separator(commits),
                        replace_separator(comments),
                    )
                )
        except csv.Error as exc:
            raise DataError(f"line {reader.line_num}: malformed CSV ({exc})") from None
    return records


def save_corpus(records: list[PullRequestRecord], path: str | Path, format: str = "jsonl") -> None:
    """Write a corpus file; load(save(x)) round-trips to x."""
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format: {format!r}")
    path = Path(path)
    if format == "jsonl":
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            for record in records:
                obj = {
                    "id": record.id,
                    "description": record.description,
                    "commits": [{"message": m} for m in record.commit_messages],
                    "code_comments": record.code_comments,
                }
                handle.write(json.dumps(obj, ensure_ascii=False) + "\n")
    else:
        from prsum.cleaning import SEPARATOR

        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(_CSV_HEADER)
            for record in records:
                writer.writerow(
                    [
                        record.id,
                        record.description,
                        SEPARATOR.join(record.commit_messages),
                        SEPARATOR.join(record.code_comments),
                    ]
                )


def split_sizes(n: int, ratios: tuple[float, float, float] = DEFAULT_RATIOS) -> tuple[int, int, int]:
    """Train/validation/test sizes: train takes the floor of its ratio, the
    remainder is split with validation taking the floor."""
    n_train = math.floor(ratios[0] * n)
    remainder = n - n_train
    n_validation = math.floor(remainder * ratios[1] / (ratios[1] + ratios[2]))
    n_test = remainder - n_validation
    return n_train, n_validation, n_test


def split_corpus(
    records: list[PullRequestRecord],
    ratios: tuple[float, float, float] = DEFAULT_RATIOS,
    seed: int = 0,
) -> CorpusSplit:
    """Shuffle with a seeded PRNG, then slice into train/validation/test."""
    if len(records) < 3:
        raise DataError(f"need at least 3 records to split, got {len(records)}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"split ratios must sum to 1, got {ratios}")
    if any(r <= 0 for r in ratios):
        raise ValueError(f"split ratios must be positive, got {ratios}")
    for record in records:
        if not record.commit_messages:
            raise DataError(f"record {record.id!r} has no commit messages; filter before splitting")

    shuffled = list(records)
    random.Random(seed).shuffle(shuffled)
    n_train, n_validation, _ = split_sizes(len(records), ratios)
    return CorpusSplit(
        train=shuffled[:n_train],
        validation=shuffled[n_train : n_train + n_validation],
        test=shuffled[n_train + n_validation :],
        seed=seed,
    )


def _bucket_label(count: int, width: int) -> str:
    lo = (count // width) * width
    return f"{lo}-{lo + width - 1}"


def compute_stats(
    records: list[PullRequestRecord],
    cleaning=None,
    bucket_width: int = 10,
) -> DatasetStats:
    """Average source/target token lengths plus length histograms.

    Lengths are measured on the built sequences before any truncation, with
    the shared word tokenizer.
    """
    from prsum.cleaning import (
        CleaningConfig,
        SequenceBudget,
        assemble_source_sequence,
        build_target_sequence,
    )

    if not records:
        raise DataError("cannot compute statistics for an empty corpus")
    cleaning = cleaning or CleaningConfig()
    no_truncation = SequenceBudget(truncation_enabled=False)

    article_lengths = []
    abstract_lengths = []
    for record in records:
        article_lengths.append(len(assemble_source_sequence(record, cleaning, no_truncation)))
        abstract_lengths.append(len(build_target_sequence(record, cleaning, no_truncation)))

    article_hist: dict[str, int] = {}
    abstract_hist: dict[str, int] = {}
    for length in article_lengths:
        label = _bucket_label(length, bucket_width)
        article_hist[label] = article_hist.get(label, 0) + 1
    for length in abstract_lengths:
        label = _bucket_label(length, bucket_width)
        abstract_hist[label] = abstract_hist.get(label, 0) + 1

    n = len(records)
    return DatasetStats(
        n_records=n,
        avg_article_len=sum(article_lengths) / n,
        avg_abstract_len=sum(abstract_lengths) / n,
        article_len_histogram=article_hist,
        abstract_len_histogram=abstract_hist,
        bucket_width=bucket_width,
    )

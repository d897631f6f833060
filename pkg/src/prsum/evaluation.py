"""Score prediction files and build approach-vs-approach comparison tables.

Predictions travel as CSV with the header ``id,generated,reference``
(RFC-4180 quoting). Scores are macro-averaged over records and kept as
fractions in [0, 1]; rendering scales by 100 with two decimals.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from prsum.cleaning import CleaningConfig, clean_text
from prsum.errors import DataError
from prsum.rouge import ROUGE2, ROUGE_L, RougeConfig, RougeScore, rouge_l, rouge_n
from prsum.tokens import tokenize_words

PREDICTIONS_HEADER = ["id", "generated", "reference"]
_COLUMNS = ("recall", "precision", "f1")
_VARIANT_TITLES = {"rouge1": "ROUGE-1", "rouge2": "ROUGE-2", "rougeL": "ROUGE-L"}


@dataclass
class PredictionRecord:
    id: str
    generated: str
    reference: str


@dataclass
class EvalReport:
    """Macro-averaged scores per ROUGE variant over one prediction file."""

    scores: dict[str, RougeScore]
    n_scored: int
    n_skipped: int = 0

    @property
    def variants(self) -> tuple[str, ...]:
        return tuple(self.scores)


@dataclass
class ComparisonTable:
    """Two approaches side by side plus the percent-gain row."""

    rows: dict[str, EvalReport]
    baseline_name: str
    challenger_name: str
    gain_row: dict[str, dict[str, float | None]] = field(default_factory=dict)


def load_predictions(path: str | Path) -> list[PredictionRecord]:
    """Parse a predictions CSV, checking header, quoting, and id uniqueness."""
    records = []
    seen: set[str] = set()
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader, None)
            if header is None:
                raise DataError(f"{path}: empty predictions file (missing header)")
            if header != PREDICTIONS_HEADER:
                raise DataError(
                    f"{path}: bad header {','.join(header)!r}; expected {','.join(PREDICTIONS_HEADER)}"
                )
            for row in reader:
                if len(row) != 3:
                    raise DataError(f"line {reader.line_num}: expected 3 fields, got {len(row)}")
                record_id, generated, reference = row
                if not record_id:
                    raise DataError(f"line {reader.line_num}: empty id")
                if record_id in seen:
                    raise DataError(f"duplicate prediction id: {record_id!r}")
                seen.add(record_id)
                records.append(PredictionRecord(record_id, generated, reference))
        except csv.Error as exc:
            raise DataError(f"line {reader.line_num}: malformed CSV ({exc})") from None
    return records


def save_predictions(records: list[PredictionRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(PREDICTIONS_HEADER)
        for record in records:
            writer.writerow([record.id, record.generated, record.reference])


def _is_scorable(reference_tokens: list[str], config: RougeConfig) -> bool:
    if not reference_tokens:
        return False
    if ROUGE2 in config.variants and len(reference_tokens) < 2:
        return False
    return True


def score_corpus(
    records: list[PredictionRecord],
    config: RougeConfig | None = None,
    cleaning: CleaningConfig | None = None,
) -> EvalReport:
    """Macro-average per-record ROUGE over a prediction file.

    Both sides are cleaned and tokenized with the shared pipeline before
    scoring. Records whose cleaned reference is empty (or too short for a
    requested n-gram order) are skipped and counted; an empty candidate
    scores zero on every variant but still counts as scored.
    """
    config = config or RougeConfig()
    cleaning = cleaning or CleaningConfig()

    sums = {variant: [0.0, 0.0, 0.0] for variant in config.variants}
    n_scored = 0
    n_skipped = 0
    for record in records:
        reference = tokenize_words(clean_text(record.reference, cleaning), kind="reference")
        if not _is_scorable(reference.tokens, config):
            n_skipped += 1
            continue
        candidate = tokenize_words(clean_text(record.generated, cleaning), kind="candidate")
        n_scored += 1
        for variant in config.variants:
            if candidate.is_empty:
                score = RougeScore(0.0, 0.0, 0.0)
            elif variant == ROUGE_L:
                score = rouge_l(candidate, reference, config)
            else:
                score = rouge_n(candidate, reference, 1 if variant == "rouge1" else 2, config)
            sums[variant][0] += score.recall
            sums[variant][1] += score.precision
            sums[variant][2] += score.f1

    if n_scored == 0:
        raise DataError("no scorable records (every reference is empty or too short)")
    scores = {
        variant: RougeScore(r / n_scored, p / n_scored, f / n_scored)
        for variant, (r, p, f) in sums.items()
    }
    return EvalReport(scores=scores, n_scored=n_scored, n_skipped=n_skipped)


def compare_approaches(
    baseline: EvalReport,
    challenger: EvalReport,
    baseline_name: str = "baseline",
    challenger_name: str = "challenger",
) -> ComparisonTable:
    """Percent gain of the challenger over the baseline, cell by cell.

    gain = (challenger - baseline) / baseline * 100; a cell whose baseline
    value is zero has an undefined gain (None).
    """
    if baseline.variants != challenger.variants:
        raise ValueError(
            f"variant mismatch: {baseline.variants} vs {challenger.variants}"
        )
    gain_row: dict[str, dict[str, float | None]] = {}
    for variant in baseline.variants:
        base = baseline.scores[variant]
        chal = challenger.scores[variant]
        cells: dict[str, float | None] = {}
        for column in _COLUMNS:
            base_value = getattr(base, column)
            chal_value = getattr(chal, column)
            cells[column] = None if base_value == 0 else (chal_value - base_value) / base_value * 100.0
        gain_row[variant] = cells
    return ComparisonTable(
        rows={baseline_name: baseline, challenger_name: challenger},
        baseline_name=baseline_name,
        challenger_name=challenger_name,
        gain_row=gain_row,
    )


def average_absolute_gains(baseline: EvalReport, challenger: EvalReport) -> tuple[float, float, float]:
    """Mean absolute improvement per column across variants, on the x100 scale."""
    if baseline.variants != challenger.variants:
        raise ValueError(
            f"variant mismatch: {baseline.variants} vs {challenger.variants}"
        )
    deltas = {column: 0.0 for column in _COLUMNS}
    for variant in baseline.variants:
        for column in _COLUMNS:
            deltas[column] += (
                getattr(challenger.scores[variant], column)
                - getattr(baseline.scores[variant], column)
            ) * 100.0
    n = len(baseline.variants)
    return (deltas["recall"] / n, deltas["precision"] / n, deltas["f1"] / n)


def report_to_json_dict(report: EvalReport) -> dict:
    return {
        "n_scored": report.n_scored,
        "n_skipped": report.n_skipped,
        "scores": {
            variant: {
                "recall": score.recall,
                "precision": score.precision,
                "f1": score.f1,
            }
            for variant, score in report.scores.items()
        },
    }


def report_from_json_dict(obj: dict) -> EvalReport:
    try:
        scores = {
            variant: RougeScore(cell["recall"], cell["precision"], cell["f1"])
            for variant, cell in obj["scores"].items()
        }
        return EvalReport(scores=scores, n_scored=obj["n_scored"], n_skipped=obj.get("n_skipped", 0))
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed report JSON: {exc}") from None


def load_report(path: str | Path) -> EvalReport:
    with open(path, encoding="utf-8") as handle:
        try:
            obj = json.load(handle)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: malformed JSON ({exc.msg})") from None
    return report_from_json_dict(obj)


def save_report(report: EvalReport, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(report_to_json_dict(report), handle, indent=2, sort_keys=True)
        handle.write("\n")


def _fmt(value: float) -> str:
    return f"{value * 100:.2f}"


def render_report_text(report: EvalReport, name: str = "approach") -> str:
    """Aligned text table, scores scaled x100 with two decimals."""
    lines = [f"{'metric':<10} {'recall':>8} {'precision':>10} {'f1':>8}"]
    for variant in report.variants:
        score = report.scores[variant]
        title = _VARIANT_TITLES.get(variant, variant)
        lines.append(
            f"{title:<10} {_fmt(score.recall):>8} {_fmt(score.precision):>10} {_fmt(score.f1):>8}"
        )
    lines.append(f"scored {report.n_scored} records, skipped {report.n_skipped} ({name})")
    return "\n".join(lines)


def render_comparison_text(table: ComparisonTable) -> str:
    """Side-by-side table with a percent-gain row and mean absolute gains."""
    variants = table.rows[table.baseline_name].variants
    header_cells = []
    for variant in variants:
        title = _VARIANT_TITLES.get(variant, variant)
        header_cells.append(f"{title + ' R':>10} {title + ' P':>10} {title + ' F1':>10}")
    lines = [f"{'approach':<14} " + " ".join(header_cells)]

    for name, report in table.rows.items():
        cells = []
        for variant in variants:
            score = report.scores[variant]
            cells.append(f"{_fmt(score.recall):>10} {_fmt(score.precision):>10} {_fmt(score.f1):>10}")
        lines.append(f"{name:<14} " + " ".join(cells))

    gain_cells = []
    for variant in variants:
        row = table.gain_row[variant]
        gain_cells.append(
            " ".join(
                f"{'n/a':>10}" if row[column] is None else f"{row[column]:>+9.2f}%"
                for column in _COLUMNS
            )
        )
    lines.append(f"{'gain':<14} " + " ".join(gain_cells))

    baseline = table.rows[table.baseline_name]
    challenger = table.rows[table.challenger_name]
    recall_gain, precision_gain, f1_gain = average_absolute_gains(baseline, challenger)
    lines.append(
        "average absolute gains: "
        f"recall {recall_gain:+.2f}, precision {precision_gain:+.2f}, f1 {f1_gain:+.2f}"
    )
    return "\n".join(lines)


def comparison_to_json_dict(table: ComparisonTable) -> dict:
    baseline = table.rows[table.baseline_name]
    challenger = table.rows[table.challenger_name]
    recall_gain, precision_gain, f1_gain = average_absolute_gains(baseline, challenger)
    return {
        "baseline": {"name": table.baseline_name, **report_to_json_dict(baseline)},
        "challenger": {"name": table.challenger_name, **report_to_json_dict(challenger)},
        "gain_percent": table.gain_row,
        "average_absolute_gains": {
            "recall": recall_gain,
            "precision": precision_gain,
            "f1": f1_gain,
        },
    }

"""Render report figures to files alongside the delimited outputs.

Every CLI report path accepts a ``--figures-dir``; when set, these helpers
write PNG bar charts next to the JSON/CSV output: length-distribution
histograms for corpus statistics, per-variant score bars for a single
report, and grouped bars for an approach comparison.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from prsum.corpus import DatasetStats
from prsum.evaluation import ComparisonTable, EvalReport

_DPI = 150
_VARIANT_TITLES = {"rouge1": "ROUGE-1", "rouge2": "ROUGE-2", "rougeL": "ROUGE-L"}


def _bar_chart(labels: list[str], counts: list[int], title: str, xlabel: str, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.bar(range(len(labels)), counts, color="#4878a8")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("records")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def _sorted_buckets(histogram: dict[str, int]) -> tuple[list[str], list[int]]:
    labels = sorted(histogram, key=lambda label: int(label.split("-")[0]))
    return labels, [histogram[label] for label in labels]


def save_length_histograms(stats: DatasetStats, out_dir: str | Path) -> list[Path]:
    """Two bar charts: source (article) and target (abstract) token lengths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for which, histogram, average in (
        ("article", stats.article_len_histogram, stats.avg_article_len),
        ("abstract", stats.abstract_len_histogram, stats.avg_abstract_len),
    ):
        labels, counts = _sorted_buckets(histogram)
        path = out_dir / f"{which}_length_hist.png"
        _bar_chart(
            labels,
            counts,
            f"{which.capitalize()} length distribution (mean {average:.2f} tokens)",
            "tokens",
            path,
        )
        written.append(path)
    return written


def save_report_chart(report: EvalReport, path: str | Path, name: str = "approach") -> Path:
    """Grouped recall/precision/F1 bars, one group per ROUGE variant."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    variants = list(report.variants)
    x = np.arange(len(variants))
    width = 0.25
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for offset, column in zip((-width, 0.0, width), ("recall", "precision", "f1")):
        values = [getattr(report.scores[v], column) * 100 for v in variants]
        ax.bar(x + offset, values, width, label=column)
    ax.set_xticks(x)
    ax.set_xticklabels([_VARIANT_TITLES.get(v, v) for v in variants])
    ax.set_ylabel("score x100")
    ax.set_title(f"ROUGE scores ({name})")
    ax.legend()
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def save_comparison_chart(table: ComparisonTable, path: str | Path) -> Path:
    """Baseline-vs-challenger F1 bars per variant, recall/precision alongside."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    variants = list(table.rows[table.baseline_name].variants)
    columns = ("recall", "precision", "f1")
    x = np.arange(len(variants) * len(columns), dtype=float)
    labels = [f"{_VARIANT_TITLES.get(v, v)}\n{c}" for v in variants for c in columns]
    width = 0.38

    fig, ax = plt.subplots(figsize=(9, 4.5))
    for offset, name in ((-width / 2, table.baseline_name), (width / 2, table.challenger_name)):
        report = table.rows[name]
        values = [getattr(report.scores[v], c) * 100 for v in variants for c in columns]
        ax.bar(x + offset, values, width, label=name)
    ax.set_xticks(x)
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("score x100")
    ax.set_title(f"{table.challenger_name} vs {table.baseline_name}")
    ax.legend()
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path

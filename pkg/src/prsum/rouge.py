"""Word-level ROUGE-1, ROUGE-2, and ROUGE-L implemented from scratch.

ROUGE-N counts clipped n-gram overlap against a single reference; ROUGE-L
uses the longest common subsequence. F scores use the beta-weighted
harmonic mean F = (1 + beta^2) * R * P / (R + beta^2 * P), with beta = 1
(balanced F1) by default.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from prsum.tokens import TokenSequence

ROUGE1 = "rouge1"
ROUGE2 = "rouge2"
ROUGE_L = "rougeL"
DEFAULT_VARIANTS = (ROUGE1, ROUGE2, ROUGE_L)


@dataclass
class RougeConfig:
    beta: float = 1.0
    variants: tuple[str, ...] = DEFAULT_VARIANTS

    def __post_init__(self) -> None:
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        for variant in self.variants:
            if variant not in DEFAULT_VARIANTS:
                raise ValueError(f"unknown ROUGE variant: {variant!r}")


@dataclass
class RougeScore:
    recall: float
    precision: float
    f1: float


def _tokens(seq: TokenSequence | Sequence[str]) -> list[str]:
    if isinstance(seq, TokenSequence):
        return seq.tokens
    return list(seq)


def ngrams(seq: TokenSequence | Sequence[str], n: int) -> Counter:
    """All contiguous n-token windows, with multiplicity."""
    if n < 1:
        raise ValueError(f"n-gram order must be >= 1, got {n}")
    tokens = _tokens(seq)
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def f_measure(recall: float, precision: float, beta: float = 1.0) -> float:
    denominator = recall + beta * beta * precision
    if denominator == 0:
        return 0.0
    return (1 + beta * beta) * recall * precision / denominator


def rouge_n(
    candidate: TokenSequence | Sequence[str],
    reference: TokenSequence | Sequence[str],
    n: int,
    config: RougeConfig | None = None,
) -> RougeScore:
    """Clipped n-gram overlap score of a candidate against one reference.

    Each candidate n-gram is matched at most as often as it occurs in the
    reference. Recall divides by the reference n-gram count, precision by
    the candidate's (0.0 when the candidate is shorter than n).
    """
    beta = (config or RougeConfig()).beta
    reference_grams = ngrams(reference, n)
    reference_total = sum(reference_grams.values())
    if reference_total == 0:
        raise ValueError(f"reference has fewer than {n} tokens; ROUGE-{n} is undefined")
    candidate_grams = ngrams(candidate, n)
    candidate_total = sum(candidate_grams.values())
    matched = sum((candidate_grams & reference_grams).values())
    recall = matched / reference_total
    precision = matched / candidate_total if candidate_total else 0.0
    return RougeScore(recall, precision, f_measure(recall, precision, beta))


def lcs_length(x: TokenSequence | Sequence[str], y: TokenSequence | Sequence[str]) -> int:
    """Length of the longest common subsequence of two token sequences."""
    xs, ys = _tokens(x), _tokens(y)
    if not xs or not ys:
        return 0
    previous = [0] * (len(ys) + 1)
    for xi in xs:
        current = [0]
        for j, yj in enumerate(ys, start=1):
            if xi == yj:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(
    candidate: TokenSequence | Sequence[str],
    reference: TokenSequence | Sequence[str],
    config: RougeConfig | None = None,
) -> RougeScore:
    """LCS-based score: R = LCS/|reference|, P = LCS/|candidate|."""
    beta = (config or RougeConfig()).beta
    candidate_tokens, reference_tokens = _tokens(candidate), _tokens(reference)
    if not candidate_tokens or not reference_tokens:
        raise ValueError("ROUGE-L needs non-empty candidate and reference")
    lcs = lcs_length(candidate_tokens, reference_tokens)
    recall = lcs / len(reference_tokens)
    precision = lcs / len(candidate_tokens)
    return RougeScore(recall, precision, f_measure(recall, precision, beta))


def score_pair(
    candidate: TokenSequence | Sequence[str],
    reference: TokenSequence | Sequence[str],
    config: RougeConfig | None = None,
) -> dict[str, RougeScore]:
    """Score one candidate/reference pair on every configured variant."""
    config = config or RougeConfig()
    scores: dict[str, RougeScore] = {}
    for variant in config.variants:
        if variant == ROUGE_L:
            scores[variant] = rouge_l(candidate, reference, config)
        else:
            order = 1 if variant == ROUGE1 else 2
            scores[variant] = rouge_n(candidate, reference, order, config)
    return scores

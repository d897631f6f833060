"""Extractive summarization baseline: LexRank.

Sentences become tf-idf vectors, cosine similarity builds a sentence graph,
and eigenvector centrality (the stationary distribution of the damped
transition matrix) ranks them. The most central sentences are emitted, in
document order, up to a word-token budget.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass

import numpy as np

from prsum.errors import DataError
from prsum.tokens import tokenize_words

_PUNCTUATION = set(string.punctuation)


@dataclass
class LexRankConfig:
    damping: float = 0.85
    convergence_epsilon: float = 1e-8
    max_iterations: int = 200
    similarity_threshold: float = 0.0
    summary_token_budget: int = 50

    def __post_init__(self) -> None:
        if not 0 < self.damping < 1:
            raise ValueError("damping must lie in (0, 1)")
        if self.convergence_epsilon <= 0:
            raise ValueError("convergence_epsilon must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if not 0 <= self.similarity_threshold < 1:
            raise ValueError("similarity_threshold must lie in [0, 1)")
        if self.summary_token_budget < 1:
            raise ValueError("summary_token_budget must be at least 1")


@dataclass
class SentenceGraph:
    sentences: list[str]
    vectors: list[dict[str, float]]
    similarity: np.ndarray
    transition: np.ndarray
    centrality: np.ndarray | None = None


@dataclass
class CentralityResult:
    scores: np.ndarray
    converged: bool
    iterations: int


def _terms(sentence: str) -> list[str]:
    # Punctuation-only tokens are excluded from vector terms so shared
    # sentence terminators do not fake lexical similarity.
    return [t for t in tokenize_words(sentence).tokens if any(ch not in _PUNCTUATION for ch in t)]


def tfidf_vectors(sentences: list[str]) -> list[dict[str, float]]:
    """Per-sentence term weights: tf(term) * (ln(N / df(term)) + 1).

    The +1 keeps single-sentence documents (N = 1, so ln(N/df) = 0) from
    collapsing to all-zero vectors.
    """
    if not sentences:
        raise DataError("tf-idf needs at least one sentence")
    term_lists = [_terms(sentence) for sentence in sentences]
    df: dict[str, int] = {}
    for terms in term_lists:
        for term in set(terms):
            df[term] = df.get(term, 0) + 1
    n = len(sentences)
    vectors = []
    for terms in term_lists:
        vector: dict[str, float] = {}
        for term in terms:
            vector[term] = vector.get(term, 0.0) + math.log(n / df[term]) + 1.0
        vectors.append(vector)
    return vectors


def _cosine(a: dict[str, float], b: dict[str, float]) -> float:
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(weight * b.get(term, 0.0) for term, weight in a.items())
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    return dot / (norm_a * norm_b)


def build_graph(sentences: list[str], config: LexRankConfig | None = None) -> SentenceGraph:
    """Cosine-similarity graph over tf-idf sentence vectors.

    Entries below the similarity threshold are zeroed (self-loops kept);
    rows are then normalized into a stochastic transition matrix, with
    all-zero rows replaced by the uniform distribution.
    """
    config = config or LexRankConfig()
    if not sentences:
        raise DataError("cannot build a sentence graph from zero sentences")
    vectors = tfidf_vectors(sentences)
    if all(not vector for vector in vectors):
        raise DataError("all sentences are empty after cleaning")

    n = len(sentences)
    similarity = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            value = 1.0 if i == j and vectors[i] else _cosine(vectors[i], vectors[j])
            if i != j and value < config.similarity_threshold:
                value = 0.0
            similarity[i, j] = value
            similarity[j, i] = value

    transition = np.zeros((n, n))
    for i in range(n):
        row_sum = similarity[i].sum()
        if row_sum > 0:
            transition[i] = similarity[i] / row_sum
        else:
            transition[i] = np.full(n, 1.0 / n)
    return SentenceGraph(list(sentences), vectors, similarity, transition)


def power_iteration(graph: SentenceGraph, config: LexRankConfig | None = None) -> CentralityResult:
    """Stationary distribution of the damped transition matrix.

    Iterates p <- (1-d)/N * 1 + d * M^T p from the uniform start until the
    max-abs change drops below the convergence epsilon or the iteration cap
    is hit (the best iterate is then returned with converged=False).
    """
    config = config or LexRankConfig()
    n = len(graph.sentences)
    d = config.damping
    teleport = (1.0 - d) / n
    p = np.full(n, 1.0 / n)
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        p_next = teleport + d * (graph.transition.T @ p)
        p_next = p_next / p_next.sum()
        delta = np.abs(p_next - p).max()
        p = p_next
        if delta < config.convergence_epsilon:
            converged = True
            break
    graph.centrality = p
    return CentralityResult(p, converged, iterations)


def rank_sentences(document: list[str], config: LexRankConfig | None = None) -> list[int]:
    """Sentence indices ranked by centrality, ties broken by position."""
    config = config or LexRankConfig()
    graph = build_graph(document, config)
    result = power_iteration(graph, config)
    return sorted(range(len(document)), key=lambda i: (-result.scores[i], i))


def summarize_lexrank(document: list[str], config: LexRankConfig | None = None) -> str:
    """Pick the most central sentences that fit the token budget.

    Walks the centrality ranking, keeping sentences while the running
    token total stays within budget, and emits the kept sentences in the
    original document order. At least one sentence is always selected; if
    the most central sentence alone exceeds the budget it is truncated.
    """
    config = config or LexRankConfig()
    if not document:
        raise DataError("cannot summarize an empty document")
    ranked = rank_sentences(document, config)

    budget = config.summary_token_budget
    selected: list[int] = []
    total = 0
    for index in ranked:
        count = len(tokenize_words(document[index]))
        if not selected and count > budget:
            return " ".join(tokenize_words(document[index]).tokens[:budget])
        if total + count > budget:
            break
        selected.append(index)
        total += count
    return " ".join(document[index] for index in sorted(selected))

"""Pull-request description generation and evaluation toolkit.

Provides corpus loading/splitting, text cleaning and sequence construction,
word-level ROUGE-1/2/L metrics, a LexRank extractive baseline, a client for
an HTTP generation backend, and corpus-level evaluation with comparison
tables. The ``prsum`` command wires everything into a pipeline.
"""

__version__ = "0.1.0"

from prsum.corpus import PullRequestRecord, CorpusSplit, DatasetStats
from prsum.cleaning import CleaningConfig, SequenceBudget
from prsum.tokens import TokenSequence
from prsum.rouge import RougeConfig, RougeScore
from prsum.lexrank import LexRankConfig
from prsum.evaluation import EvalReport, ComparisonTable, PredictionRecord

__all__ = [
    "PullRequestRecord",
    "CorpusSplit",
    "DatasetStats",
    "CleaningConfig",
    "SequenceBudget",
    "TokenSequence",
    "RougeConfig",
    "RougeScore",
    "LexRankConfig",
    "EvalReport",
    "ComparisonTable",
    "PredictionRecord",
]

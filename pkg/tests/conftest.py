import json
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"
TEST_FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def toy_corpus_path() -> Path:
    return FIXTURES / "toy_corpus.jsonl"


@pytest.fixture(scope="session")
def golden_cleaning_cases() -> list[dict]:
    cases = []
    with open(FIXTURES / "cleaning_golden.jsonl", encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                cases.append(json.loads(line))
    return cases


@pytest.fixture(scope="session")
def protocol_vectors() -> dict:
    with open(FIXTURES / "protocol_vectors.json", encoding="utf-8") as handle:
        return json.load(handle)


def expand_vector_source(request_obj: dict) -> str:
    """Vectors may encode long sources as {text, times} repeats."""
    if "source" in request_obj:
        return request_obj["source"]
    repeat = request_obj["source_repeat"]
    return repeat["text"] * repeat["times"]

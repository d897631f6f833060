import pytest
import requests

from conftest import expand_vector_source
from prsum.backend import (
    BatchResult,
    GenerationRequest,
    generate_batch,
    generate_one,
    health_check,
    resolve_endpoint,
)
from prsum.errors import (
    BackendError,
    PermanentBackendError,
    ProtocolError,
    RetryableBackendError,
)
from prsum.mock_backend import FaultPlan, MockBackend, echo_summary
from prsum.tokens import tokenize_words


@pytest.fixture
def mock_backend():
    with MockBackend() as backend:
        yield backend


def test_request_validation():
    with pytest.raises(ValueError):
        GenerationRequest(id="", source="x")
    with pytest.raises(ValueError):
        GenerationRequest(id="a", source="x", max_tokens=0)


def test_resolve_endpoint_env(monkeypatch):
    monkeypatch.setenv("PRSUM_BACKEND_URL", "http://example.test:9999/")
    assert resolve_endpoint() == "http://example.test:9999"
    monkeypatch.delenv("PRSUM_BACKEND_URL")
    with pytest.raises(BackendError):
        resolve_endpoint()


def test_health_check_ready(mock_backend):
    status = health_check(mock_backend.url)
    assert status.ready is True
    assert status.name == "mock-echo"


def test_health_check_wrong_port_is_connection_error():
    with pytest.raises(RetryableBackendError, match="127.0.0.1:1"):
        health_check("http://127.0.0.1:1", timeout=2)


def test_health_check_malformed_json_names_protocol():
    with MockBackend(faults=FaultPlan(malformed_health=True)) as backend:
        with pytest.raises(ProtocolError):
            health_check(backend.url)


def test_generate_echoes_source_prefix_tokens(mock_backend):
    source = "fix git ignore multiplicated settings. change path to formater config file."
    response = generate_one(GenerationRequest("a/b_1", source, max_tokens=5), mock_backend.url)
    assert response.id == "a/b_1"
    assert response.summary == " ".join(tokenize_words(source).tokens[:5])


def test_generate_correlates_ids(mock_backend):
    response = generate_one(GenerationRequest("a/b_1", "text"), mock_backend.url)
    assert response.id == "a/b_1"
    assert response.latency_ms >= 0


def test_timeout_is_retryable():
    with MockBackend(faults=FaultPlan(latency_s=0.5)) as backend:
        with pytest.raises(RetryableBackendError, match="timed out"):
            generate_one(GenerationRequest("a", "text"), backend.url, timeout=0.05)


def test_500_is_retryable_and_400_is_permanent():
    with MockBackend(faults=FaultPlan(generate_statuses=[500, 400])) as backend:
        with pytest.raises(RetryableBackendError):
            generate_one(GenerationRequest("a", "text"), backend.url)
        with pytest.raises(PermanentBackendError):
            generate_one(GenerationRequest("a", "text"), backend.url)


def test_missing_summary_field_is_protocol_error():
    with MockBackend(faults=FaultPlan(drop_summary_field=True)) as backend:
        with pytest.raises(ProtocolError, match="summary"):
            generate_one(GenerationRequest("a", "text"), backend.url)


def test_batch_returns_responses_in_request_order(mock_backend):
    requests_ = [GenerationRequest(f"id-{i}", f"text number {i}") for i in range(7)]
    result = generate_batch(requests_, mock_backend.url, parallelism=3)
    assert [r.id for r in result.responses] == [f"id-{i}" for i in range(7)]
    assert result.failures == {}


def test_batch_retries_transient_failures():
    # one injected 500; the retry must succeed
    with MockBackend(faults=FaultPlan(generate_statuses=[500])) as backend:
        result = generate_batch(
            [GenerationRequest("only", "some text")], backend.url, parallelism=1, retries=2
        )
    assert result.failures == {}
    assert result.responses[0].id == "only"


def test_batch_collects_permanent_failures():
    with MockBackend(faults=FaultPlan(generate_statuses=[400])) as backend:
        requests_ = [GenerationRequest(f"id-{i}", "text") for i in range(3)]
        result = generate_batch(requests_, backend.url, parallelism=1, retries=0)
    assert len(result.responses) == 2
    assert len(result.failures) == 1
    assert set(result.failures) == {"id-0"}


def test_batch_exhausted_retries_recorded_as_failures():
    with MockBackend(faults=FaultPlan(generate_statuses=[500, 500, 500])) as backend:
        result = generate_batch(
            [GenerationRequest("only", "text")], backend.url, parallelism=1, retries=2
        )
    assert result.responses == []
    assert "only" in result.failures


def test_empty_batch(mock_backend):
    assert generate_batch([], mock_backend.url) == BatchResult()


def test_batch_validates_parallelism(mock_backend):
    with pytest.raises(ValueError):
        generate_batch([], mock_backend.url, parallelism=0)


# -------------------------------------------------- protocol conformance


def test_mock_passes_recorded_protocol_vectors(protocol_vectors, mock_backend):
    health = protocol_vectors["health"]
    response = requests.get(mock_backend.url + health["path"], timeout=5)
    assert response.status_code == 200
    payload = response.json()
    for key in health["expect_keys"]:
        assert key in payload
    assert payload["ready"] == health["expect_ready"]

    for vector in protocol_vectors["generate"]:
        request_obj = dict(vector["request"])
        source = expand_vector_source(request_obj)
        body = {
            "id": request_obj["id"],
            "source": source,
            "max_tokens": request_obj["max_tokens"],
            "prefix": request_obj["prefix"],
        }
        response = requests.post(mock_backend.url + "/v1/generate", json=body, timeout=10)
        assert response.status_code == 200, vector["name"]
        payload = response.json()
        assert payload["id"] == request_obj["id"], vector["name"]
        assert isinstance(payload["summary"], str), vector["name"]


def test_echo_summary_truncates_to_max_tokens():
    source = "one two three four five six"
    assert echo_summary(source, 3) == "one two three"
    assert echo_summary(source, 50) == source

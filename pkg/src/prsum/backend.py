"""Client for an external abstractive-generation backend.

Wire protocol: ``POST <endpoint>/v1/generate`` with a JSON body
``{"id", "source", "max_tokens", "prefix"}`` answered by
``{"id", "summary"}``, and ``GET <endpoint>/v1/health`` answered by
``{"name", "ready"}``. The endpoint defaults to the ``PRSUM_BACKEND_URL``
environment variable.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import requests

from prsum.errors import (
    BackendError,
    PermanentBackendError,
    ProtocolError,
    RetryableBackendError,
)

ENDPOINT_ENV = "PRSUM_BACKEND_URL"
DEFAULT_PREFIX = "summarize: "


@dataclass
class GenerationRequest:
    id: str
    source: str
    max_tokens: int = 50
    prefix: str = DEFAULT_PREFIX

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("request id must be non-empty")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")

    def to_wire(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "max_tokens": self.max_tokens,
            "prefix": self.prefix,
        }


@dataclass
class GenerationResponse:
    id: str
    summary: str
    latency_ms: int = 0


@dataclass
class BackendStatus:
    name: str
    ready: bool


@dataclass
class BatchResult:
    """Responses in request order plus per-id failure messages."""

    responses: list[GenerationResponse] = field(default_factory=list)
    failures: dict[str, str] = field(default_factory=dict)


def resolve_endpoint(endpoint: str | None = None) -> str:
    endpoint = endpoint or os.environ.get(ENDPOINT_ENV)
    if not endpoint:
        raise BackendError(
            f"no backend endpoint configured (flag or {ENDPOINT_ENV} environment variable)"
        )
    return endpoint.rstrip("/")


def _json_field(payload: dict, name: str, context: str):
    if name not in payload:
        raise ProtocolError(f"{context}: response is missing field {name!r}")
    return payload[name]


def health_check(endpoint: str | None = None, timeout: float = 5.0) -> BackendStatus:
    """Ask the backend for its identity and readiness."""
    endpoint = resolve_endpoint(endpoint)
    try:
        response = requests.get(f"{endpoint}/v1/health", timeout=timeout)
    except requests.exceptions.RequestException as exc:
        raise RetryableBackendError(f"backend unreachable at {endpoint}: {exc}") from None
    if response.status_code != 200:
        raise BackendError(f"health check failed with HTTP {response.status_code} at {endpoint}")
    try:
        payload = response.json()
    except ValueError:
        raise ProtocolError("health check: response body is not valid JSON") from None
    name = _json_field(payload, "name", "health check")
    ready = _json_field(payload, "ready", "health check")
    if not isinstance(name, str) or not isinstance(ready, bool):
        raise ProtocolError("health check: 'name' must be a string and 'ready' a boolean")
    return BackendStatus(name=name, ready=ready)


def generate_one(
    req: GenerationRequest, endpoint: str | None = None, timeout: float = 30.0
) -> GenerationResponse:
    """Send one generation request; the summary comes back verbatim except
    for a trailing-whitespace trim."""
    endpoint = resolve_endpoint(endpoint)
    started = time.monotonic()
    try:
        response = requests.post(f"{endpoint}/v1/generate", json=req.to_wire(), timeout=timeout)
    except requests.exceptions.Timeout:
        raise RetryableBackendError(f"request {req.id!r} timed out after {timeout}s") from None
    except requests.exceptions.RequestException as exc:
        raise RetryableBackendError(f"backend unreachable at {endpoint}: {exc}") from None
    latency_ms = int((time.monotonic() - started) * 1000)

    if response.status_code >= 500:
        raise RetryableBackendError(f"request {req.id!r} failed with HTTP {response.status_code}")
    if response.status_code >= 400:
        raise PermanentBackendError(f"request {req.id!r} rejected with HTTP {response.status_code}")
    try:
        payload = response.json()
    except ValueError:
        raise ProtocolError(f"request {req.id!r}: response body is not valid JSON") from None
    response_id = _json_field(payload, "id", f"request {req.id!r}")
    summary = _json_field(payload, "summary", f"request {req.id!r}")
    if response_id != req.id:
        raise ProtocolError(f"response id {response_id!r} does not match request id {req.id!r}")
    if not isinstance(summary, str):
        raise ProtocolError(f"request {req.id!r}: 'summary' must be a string")
    return GenerationResponse(id=response_id, summary=summary.rstrip(), latency_ms=latency_ms)


def generate_batch(
    reqs: list[GenerationRequest],
    endpoint: str | None = None,
    parallelism: int = 4,
    retries: int = 2,
    timeout: float = 30.0,
) -> BatchResult:
    """Generate for many requests with bounded parallelism.

    Responses come back in request order regardless of completion order.
    Retryable errors are retried up to ``retries`` extra times; permanent
    and protocol failures are collected per id, never raised.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be at least 1")
    endpoint = resolve_endpoint(endpoint)
    if not reqs:
        return BatchResult()

    def worker(req: GenerationRequest):
        attempts = retries + 1
        for attempt in range(1, attempts + 1):
            try:
                return generate_one(req, endpoint, timeout)
            except RetryableBackendError as exc:
                if attempt == attempts:
                    return exc
            except BackendError as exc:
                return exc
        return None  # unreachable

    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        outcomes = list(pool.map(worker, reqs))

    result = BatchResult()
    for req, outcome in zip(reqs, outcomes):
        if isinstance(outcome, GenerationResponse):
            result.responses.append(outcome)
        else:
            result.failures[req.id] = str(outcome)
    return result

"""Fetch merged PRs, commit messages, and diff-derived code comments from a
GitHub-style REST API to build raw corpora.

All operations are testable offline by injecting a session object; the
bundled tests never touch the live API. Auth comes from the
``GITHUB_TOKEN`` environment variable unless passed explicitly.
"""

from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field

import requests

from prsum.cleaning import CleaningConfig, clean_text
from prsum.corpus import PullRequestRecord
from prsum.errors import (
    DataError,
    ForgeAuthError,
    ForgeError,
    ForgeNotFoundError,
    RateLimitError,
)

logger = logging.getLogger(__name__)

TOKEN_ENV = "GITHUB_TOKEN"
DEFAULT_BASE_URL = "https://api.github.com"
_PER_PAGE = 100


@dataclass
class RepoRef:
    owner: str
    name: str
    merged_pr_count: int = 0

    def __post_init__(self) -> None:
        if not self.owner or not self.name:
            raise ValueError("repository owner and name must be non-empty")

    @property
    def slug(self) -> str:
        return f"{self.owner}/{self.name}"


@dataclass
class RawPullRequest:
    repo: RepoRef
    number: int
    title: str
    body: str
    merged: bool
    commit_shas: list[str] = field(default_factory=list)


class ForgeClient:
    """Minimal GitHub REST client with rate-limit handling and retries."""

    def __init__(
        self,
        token: str | None = None,
        session: requests.Session | None = None,
        base_url: str = DEFAULT_BASE_URL,
        max_rate_limit_wait: float = 60.0,
        sleep=time.sleep,
    ):
        self.token = token or os.environ.get(TOKEN_ENV)
        self.session = session or requests.Session()
        self.base_url = base_url.rstrip("/")
        self.max_rate_limit_wait = max_rate_limit_wait
        self._sleep = sleep
        if not self.token:
            logger.warning("no auth token configured; unauthenticated rate limits are low")

    def _headers(self, accept: str = "application/vnd.github.v3+json") -> dict[str, str]:
        headers = {"Accept": accept}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        return headers

    def _get(self, path: str, accept: str | None = None, cursor: int = 0) -> requests.Response:
        url = f"{self.base_url}{path}"
        attempts = 3
        for attempt in range(1, attempts + 1):
            try:
                response = self.session.get(
                    url, headers=self._headers(accept) if accept else self._headers(), timeout=30
                )
                break
            except requests.exceptions.RequestException as exc:
                if attempt == attempts:
                    raise ForgeError(
                        f"network failure fetching {url} after {attempts} attempts "
                        f"(resume from page {cursor}): {exc}"
                    ) from None
                self._sleep(2 ** (attempt - 1))
        if response.status_code in (401, 403) and "rate limit" not in response.text.lower():
            raise ForgeAuthError(f"authentication rejected ({response.status_code}) for {url}")
        if response.status_code == 404:
            raise ForgeNotFoundError(f"not found: {url}")
        self._respect_rate_limit(response, cursor)
        if response.status_code >= 400:
            raise ForgeError(f"HTTP {response.status_code} for {url}")
        return response

    def _respect_rate_limit(self, response: requests.Response, cursor: int) -> None:
        remaining = response.headers.get("X-RateLimit-Remaining")
        if remaining is None or int(remaining) > 0:
            return
        reset = float(response.headers.get("X-RateLimit-Reset", "0"))
        wait = max(reset - time.time(), 0.0)
        if wait > self.max_rate_limit_wait:
            raise RateLimitError(
                f"rate limit exhausted; reset in {wait:.0f}s exceeds the {self.max_rate_limit_wait:.0f}s budget",
                resume_page=cursor,
            )
        logger.warning("rate limit exhausted; sleeping %.1fs until reset", wait)
        self._sleep(wait)

    def list_merged_prs(self, repo: RepoRef, page_limit: int = 10) -> list[RawPullRequest]:
        """All merged PRs of a repository, following pagination."""
        merged: list[RawPullRequest] = []
        for page in range(1, page_limit + 1):
            response = self._get(
                f"/repos/{repo.owner}/{repo.name}/pulls"
                f"?state=closed&per_page={_PER_PAGE}&page={page}",
                cursor=page,
            )
            batch = response.json()
            if not batch:
                break
            for item in batch:
                if not item.get("merged_at"):
                    continue
                merged.append(
                    RawPullRequest(
                        repo=repo,
                        number=item["number"],
                        title=item.get("title") or "",
                        body=item.get("body") or "",
                        merged=True,
                    )
                )
            if len(batch) < _PER_PAGE:
                break
        return merged

    def fetch_pr_commits(self, pr: RawPullRequest) -> list[str]:
        """Commit messages of a PR in commit order; empty messages dropped."""
        response = self._get(
            f"/repos/{pr.repo.owner}/{pr.repo.name}/pulls/{pr.number}/commits?per_page={_PER_PAGE}"
        )
        messages = []
        for item in response.json():
            sha = item.get("sha")
            if sha:
                pr.commit_shas.append(sha)
            message = (item.get("commit") or {}).get("message") or ""
            if message.strip():
                messages.append(message)
        return messages

    def fetch_pr_diff(self, pr: RawPullRequest) -> str:
        """Unified diff of a PR (GitHub diff media type)."""
        response = self._get(
            f"/repos/{pr.repo.owner}/{pr.repo.name}/pulls/{pr.number}",
            accept="application/vnd.github.v3.diff",
        )
        return response.text


def extract_code_comments(diff_text: str) -> list[str]:
    """Pull ``//`` and ``/* ... */`` comment text from a diff's added lines.

    Only lines added by the diff contribute. Block comments may span
    consecutive added lines; blocks left open when the added run ends are
    skipped (counted as a warning). Comment markers are stripped.
    """
    comments: list[str] = []
    block_parts: list[str] | None = None
    warnings = 0

    def close_dangling():
        nonlocal block_parts, warnings
        if block_parts is not None:
            warnings += 1
            block_parts = None

    for line in diff_text.splitlines():
        added = line.startswith("+") and not line.startswith("+++")
        if not added:
            close_dangling()
            continue
        content = line[1:]
        while content:
            if block_parts is not None:
                end = content.find("*/")
                if end == -1:
                    block_parts.append(content.strip())
                    content = ""
                else:
                    block_parts.append(content[:end].strip())
                    text = " ".join(part for part in block_parts if part)
                    if text:
                        comments.append(text)
                    block_parts = None
                    content = content[end + 2 :]
                continue
            line_pos = _line_comment_pos(content)
            block_pos = content.find("/*")
            if line_pos != -1 and (block_pos == -1 or line_pos < block_pos):
                text = content[line_pos + 2 :].strip()
                if text:
                    comments.append(text)
                content = ""
            elif block_pos != -1:
                block_parts = []
                content = content[block_pos + 2 :]
            else:
                content = ""
    close_dangling()
    if warnings:
        logger.warning("skipped %d unterminated block comment(s) in diff", warnings)
    return comments


def _line_comment_pos(content: str) -> int:
    """Position of a ``//`` comment start, ignoring ``://`` (URLs)."""
    start = 0
    while True:
        pos = content.find("//", start)
        if pos == -1:
            return -1
        if pos > 0 and content[pos - 1] == ":":
            start = pos + 2
            continue
        return pos


def assemble_record(
    pr: RawPullRequest,
    messages: list[str],
    comments: list[str],
    cleaning: CleaningConfig | None = None,
) -> PullRequestRecord:
    """Turn fetched pieces into a corpus record with id "owner/name_number".

    The PR body is cleaned into the reference description here; commit
    messages and comments stay raw for the preprocessing stage. PRs without
    commit messages are rejected.
    """
    if not messages:
        raise DataError(f"PR {pr.repo.slug}#{pr.number} rejected: no commit messages")
    return PullRequestRecord(
        id=f"{pr.repo.slug}_{pr.number}",
        description=clean_text(pr.body, cleaning or CleaningConfig()),
        commit_messages=list(messages),
        code_comments=list(comments),
    )

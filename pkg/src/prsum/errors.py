"""Exception hierarchy shared across the toolkit."""


class PrsumError(Exception):
    """Base class for all toolkit errors."""


class DataError(PrsumError):
    """An input file or record violates the expected format or invariants."""


class BackendError(PrsumError):
    """Base class for generation-backend failures."""


class RetryableBackendError(BackendError):
    """Transient backend failure (timeout, connection refused, HTTP 5xx)."""


class PermanentBackendError(BackendError):
    """Non-retryable backend failure (HTTP 4xx)."""


class ProtocolError(BackendError):
    """The backend answered, but the payload does not match the wire format."""


class ForgeError(PrsumError):
    """Base class for forge (GitHub-style) API failures."""


class ForgeAuthError(ForgeError):
    """Authentication or authorization was rejected (HTTP 401/403)."""


class ForgeNotFoundError(ForgeError):
    """The requested resource does not exist (HTTP 404)."""


class RateLimitError(ForgeError):
    """Rate-limit budget exhausted; carries a cursor to resume from."""

    def __init__(self, message: str, resume_page: int):
        super().__init__(message)
        self.resume_page = resume_page

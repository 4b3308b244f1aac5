"""Client for OpenAI-compatible completion endpoints.

Completion-only: the remote side owns sampling, so the local penalty /
nucleus pipeline never runs for this provider. The three hyperparameters are
forwarded verbatim under their wire names ``top_p``, ``frequency_penalty``
and ``presence_penalty``. Failures are surfaced immediately; there are no
retries (the operator just re-submits).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any
from urllib.parse import urlparse

import requests

from samplelab.providers.base import COMPLETION_MODE, ProviderError
from samplelab.sampling import SamplingParams

#: Environment variable holding the API key; read by the CLI, never persisted.
API_KEY_ENV_VAR = "SAMPLELAB_API_KEY"


class RemoteTimeoutError(ProviderError):
    """The completion request did not finish within the configured timeout."""


class RemoteHttpError(ProviderError):
    """The remote server answered with a non-2xx status."""

    def __init__(self, status: int, body: str, provider_id: str = ""):
        super().__init__(f"remote completion failed with HTTP {status}: {body[:200]}", provider_id)
        self.status = status
        self.body = body


class MalformedResponseError(ProviderError):
    """The remote response was not a well-formed completions payload."""


@dataclass(frozen=True)
class RemoteProviderConfig:
    base_url: str
    model_name: str
    api_key: str = ""
    timeout: float = 30.0

    def __post_init__(self):
        parsed = urlparse(self.base_url)
        if parsed.scheme not in ("http", "https") or not parsed.netloc:
            raise ValueError(f"base_url must be an http(s) URL, got {self.base_url!r}")
        if self.timeout <= 0:
            raise ValueError(f"timeout must be > 0, got {self.timeout}")

    @property
    def completions_url(self) -> str:
        return self.base_url.rstrip("/") + "/v1/completions"


@dataclass(frozen=True)
class RemoteCompletion:
    text: str
    raw_response: Any


class RemoteProvider:
    """Completion-only provider speaking the OpenAI completions wire shape."""

    mode = COMPLETION_MODE

    def __init__(self, config: RemoteProviderConfig, provider_id: str = "remote",
                 session: requests.Session | None = None):
        self.id = provider_id
        self.config = config
        self._session = session or requests.Session()

    def complete(self, prompt: str, params: SamplingParams, max_tokens: int) -> RemoteCompletion:
        """Issue one completion request and return the generated text verbatim."""
        payload = {
            "model": self.config.model_name,
            "prompt": prompt,
            "max_tokens": max_tokens,
            "top_p": params.top_p,
            "frequency_penalty": params.frequency_penalty,
            "presence_penalty": params.presence_penalty,
        }
        headers = {}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        try:
            response = self._session.post(
                self.config.completions_url,
                json=payload,
                headers=headers,
                timeout=self.config.timeout,
            )
        except requests.Timeout as exc:
            raise RemoteTimeoutError(
                f"completion request timed out after {self.config.timeout}s", self.id
            ) from exc
        except requests.RequestException as exc:
            raise ProviderError(f"completion request failed: {exc}", self.id) from exc
        if not (200 <= response.status_code < 300):
            raise RemoteHttpError(response.status_code, response.text, self.id)
        try:
            body = response.json()
            text = body["choices"][0]["text"]
        except (ValueError, LookupError, TypeError) as exc:
            raise MalformedResponseError(
                f"response is not a completions payload: {exc}", self.id
            ) from exc
        if not isinstance(text, str):
            raise MalformedResponseError(
                f"completion text has type {type(text).__name__}, expected str", self.id
            )
        return RemoteCompletion(text=text, raw_response=body)

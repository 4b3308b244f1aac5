"""Provider abstraction: pluggable sources of next-token distributions or completions.

Two provider modes exist:

* ``"distribution"`` — exposes ``tokenize`` / ``detokenize`` /
  ``next_distribution`` / ``eot_token`` and lets the local sampling loop own
  top-p and penalty application (the n-gram toy model).
* ``"completion"`` — exposes ``complete`` only; sampling happens on the
  remote side and the hyperparameters are forwarded verbatim (the
  OpenAI-compatible remote client).

Providers are duck-typed; every provider carries an ``id`` string and a
``mode`` attribute set to one of the values above.
"""

from __future__ import annotations

DISTRIBUTION_MODE = "distribution"
COMPLETION_MODE = "completion"


class UnknownProviderError(KeyError):
    """Requested provider id is not registered."""

    def __init__(self, provider_id: str, known: list[str]):
        super().__init__(provider_id)
        self.provider_id = provider_id
        self.known = known

    def __str__(self) -> str:
        return f"unknown provider {self.provider_id!r}; registered: {sorted(self.known)}"


class ProviderError(RuntimeError):
    """A provider failed to produce output; carries the provider id."""

    def __init__(self, message: str, provider_id: str = ""):
        super().__init__(message)
        self.provider_id = provider_id


class ProviderRegistry:
    """Maps provider ids to provider instances, with a default."""

    def __init__(self):
        self._providers: dict[str, object] = {}
        self._default_id: str | None = None

    def register(self, provider, default: bool = False) -> None:
        self._providers[provider.id] = provider
        if default or self._default_id is None:
            self._default_id = provider.id

    def resolve(self, provider_id: str | None = None):
        """Return the provider for ``provider_id``, or the default when None."""
        if provider_id is None:
            provider_id = self._default_id
        if provider_id is None or provider_id not in self._providers:
            raise UnknownProviderError(str(provider_id), list(self._providers))
        return self._providers[provider_id]

    def ids(self) -> list[str]:
        return sorted(self._providers)

    @property
    def default_id(self) -> str | None:
        return self._default_id

from samplelab.providers.base import (
    COMPLETION_MODE,
    DISTRIBUTION_MODE,
    ProviderError,
    ProviderRegistry,
    UnknownProviderError,
)
from samplelab.providers.ngram import (
    EOT_TOKEN,
    EmptyCorpusError,
    NGramModel,
    NGramProvider,
    detokenize,
    next_distribution,
    tokenize,
    train_ngram,
)
from samplelab.providers.remote import (
    API_KEY_ENV_VAR,
    MalformedResponseError,
    RemoteCompletion,
    RemoteHttpError,
    RemoteProvider,
    RemoteProviderConfig,
    RemoteTimeoutError,
)

__all__ = [
    "API_KEY_ENV_VAR",
    "COMPLETION_MODE",
    "DISTRIBUTION_MODE",
    "EOT_TOKEN",
    "EmptyCorpusError",
    "MalformedResponseError",
    "NGramModel",
    "NGramProvider",
    "ProviderError",
    "ProviderRegistry",
    "RemoteCompletion",
    "RemoteHttpError",
    "RemoteProvider",
    "RemoteProviderConfig",
    "RemoteTimeoutError",
    "UnknownProviderError",
    "detokenize",
    "next_distribution",
    "tokenize",
    "train_ngram",
]

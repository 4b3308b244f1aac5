from __future__ import annotations

import itertools

import pytest
from fastapi.testclient import TestClient

from samplelab.cli import packaged_corpus_text
from samplelab.providers.base import ProviderRegistry
from samplelab.providers.ngram import NGramProvider, train_ngram
from samplelab.sampling import SamplingParams, TokenDistribution
from samplelab.service import create_app
from samplelab.store import InteractionRecord, JsonLinesStore

_ids = itertools.count()


def make_record(
    prompt: str = "a prompt",
    created_at: str = "2026-01-01T00:00:00.000000+00:00",
    top_p: float = 0.9,
    frequency_penalty: float = 0.0,
    presence_penalty: float = 0.0,
    seed: int = 0,
    output: str = "some output",
    rating: int | None = None,
    record_id: str | None = None,
) -> InteractionRecord:
    return InteractionRecord(
        id=record_id or f"rec-{next(_ids):04d}",
        prompt=prompt,
        params=SamplingParams(
            top_p=top_p,
            frequency_penalty=frequency_penalty,
            presence_penalty=presence_penalty,
            seed=seed,
        ),
        output=output,
        provider_id="ngram",
        sampled_locally=True,
        created_at=created_at,
        rating=rating,
    )


class ScriptedProvider:
    """Distribution provider that replays a fixed list of distributions."""

    mode = "distribution"
    eot_token = "<eot>"

    def __init__(self, dists: list[TokenDistribution], provider_id: str = "scripted"):
        self.id = provider_id
        self._dists = dists
        self.contexts: list[list[str]] = []

    def next_distribution(self, context) -> TokenDistribution:
        self.contexts.append(list(context))
        return self._dists[min(len(self.contexts) - 1, len(self._dists) - 1)]

    def tokenize(self, text: str) -> list[str]:
        return list(text)

    def detokenize(self, tokens) -> str:
        return "".join(tokens)


@pytest.fixture
def bigram_provider() -> NGramProvider:
    """The hand-traceable toy: bigrams of 'abababab'."""
    return NGramProvider(train_ngram("abababab", order=2, tokenizer="char"), tokenizer="char")


@pytest.fixture(scope="session")
def corpus_provider() -> NGramProvider:
    """Character trigram model over the packaged corpus."""
    return NGramProvider.from_corpus(packaged_corpus_text(), order=3, tokenizer="char")


@pytest.fixture
def store(tmp_path) -> JsonLinesStore:
    return JsonLinesStore(tmp_path / "interactions.jsonl")


@pytest.fixture
def api(store, bigram_provider):
    """TestClient over an app with the toy provider and a fresh store."""
    registry = ProviderRegistry()
    registry.register(bigram_provider, default=True)
    app = create_app(store, registry)
    with TestClient(app) as client:
        yield client, store, registry

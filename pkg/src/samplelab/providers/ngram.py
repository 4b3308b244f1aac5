"""Add-one smoothed n-gram language model: the offline stand-in for a real LLM.

Small enough to hand-check, deterministic, and distribution-capable, so the
local sampling loop can exercise the full penalty / nucleus pipeline without
network access or model weights.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from collections.abc import Sequence
from dataclasses import dataclass

from samplelab.providers.base import DISTRIBUTION_MODE
from samplelab.sampling import TokenDistribution

#: End-of-text marker; part of every model vocabulary but never counted from
#: the corpus, so it only ever receives smoothing mass.
EOT_TOKEN = "<eot>"

TOKENIZERS = ("char", "word")


class EmptyCorpusError(ValueError):
    """The corpus produced no tokens under the chosen tokenizer."""


def tokenize(text: str, tokenizer: str) -> list[str]:
    """Split text into tokens: every character, or whitespace-separated words."""
    if tokenizer == "char":
        return list(text)
    if tokenizer == "word":
        return text.split()
    raise ValueError(f"tokenizer must be one of {TOKENIZERS}, got {tokenizer!r}")


def detokenize(tokens: Sequence[str], tokenizer: str) -> str:
    if tokenizer == "char":
        return "".join(tokens)
    if tokenizer == "word":
        return " ".join(tokens)
    raise ValueError(f"tokenizer must be one of {TOKENIZERS}, got {tokenizer!r}")


@dataclass(frozen=True)
class NGramModel:
    """Sliding-window counts of order-k token windows plus the vocabulary.

    ``counts`` maps each (k-1)-token context to a per-next-token tally.
    The model is a pure function of (corpus, order, tokenizer): training is
    deterministic and the vocabulary is kept sorted, so identical inputs
    yield bit-identical conditional distributions.
    """

    order: int
    vocabulary: tuple[str, ...]
    counts: dict[tuple[str, ...], Counter[str]]

    def context_key(self, context: Sequence[str]) -> tuple[str, ...]:
        """Trailing k-1 tokens of the context (shorter contexts pass through)."""
        return tuple(context[-(self.order - 1):])


def train_ngram(corpus: str, order: int, tokenizer: str = "char") -> NGramModel:
    """Tally all order-k sliding windows of the tokenized corpus.

    The vocabulary is the set of distinct corpus tokens plus ``EOT_TOKEN``.
    Corpora shorter than ``order`` tokens simply produce no windows; every
    context is then unseen and smoothing yields the uniform distribution.
    """
    if order < 2:
        raise ValueError(f"order must be >= 2, got {order}")
    tokens = tokenize(corpus, tokenizer)
    if not tokens:
        raise EmptyCorpusError("corpus contains no tokens after tokenization")
    vocabulary = tuple(sorted(set(tokens) | {EOT_TOKEN}))
    counts: dict[tuple[str, ...], Counter[str]] = defaultdict(Counter)
    for i in range(len(tokens) - order + 1):
        window = tokens[i : i + order]
        counts[tuple(window[:-1])][window[-1]] += 1
    return NGramModel(order=order, vocabulary=vocabulary, counts=dict(counts))


def next_distribution(model: NGramModel, context: Sequence[str]) -> TokenDistribution:
    """Laplace add-one conditional distribution for the trailing context.

    ``P(t | ctx) = (count(ctx, t) + 1) / (count(ctx, .) + |vocabulary|)``.
    Unseen contexts (including contexts shorter than k-1) have all-zero
    counts and therefore come out uniform. No token ever gets probability
    zero.
    """
    ctx_counts = model.counts.get(model.context_key(context), {})
    denom = sum(ctx_counts.values()) + len(model.vocabulary)
    return TokenDistribution(
        {token: (ctx_counts.get(token, 0) + 1) / denom for token in model.vocabulary}
    )


class NGramProvider:
    """Distribution-capable provider wrapping a trained :class:`NGramModel`."""

    mode = DISTRIBUTION_MODE

    def __init__(self, model: NGramModel, tokenizer: str = "char", provider_id: str = "ngram"):
        if tokenizer not in TOKENIZERS:
            raise ValueError(f"tokenizer must be one of {TOKENIZERS}, got {tokenizer!r}")
        self.id = provider_id
        self.model = model
        self.tokenizer = tokenizer

    @property
    def eot_token(self) -> str:
        return EOT_TOKEN

    def tokenize(self, text: str) -> list[str]:
        return tokenize(text, self.tokenizer)

    def detokenize(self, tokens: Sequence[str]) -> str:
        return detokenize(tokens, self.tokenizer)

    def next_distribution(self, context: Sequence[str]) -> TokenDistribution:
        return next_distribution(self.model, context)

    @classmethod
    def from_corpus(
        cls,
        corpus: str,
        order: int = 3,
        tokenizer: str = "char",
        provider_id: str = "ngram",
    ) -> "NGramProvider":
        return cls(train_ngram(corpus, order, tokenizer), tokenizer, provider_id)

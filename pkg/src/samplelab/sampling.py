"""Core sampling transforms: penalty reweighting, nucleus filtering, token draws.

Everything here is a pure function over immutable-by-convention inputs, so the
module is safe to call from any number of threads. Randomness is never hidden:
``sample_token`` and ``generate_sequence`` take an explicit PRNG / seed.
"""

from __future__ import annotations

import math
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

#: Absolute tolerance for "probabilities sum to one" checks.
SUM_TOLERANCE = 1e-9

#: Bit-stream algorithm behind generation. ``numpy.random.Generator`` over
#: PCG64, consumed through ``Generator.random()`` (53-bit doubles) and an
#: explicit inverse-CDF walk, so draws are reproducible across builds.
RNG_ALGORITHM = "pcg64"

_SEED_MAX = 2**64 - 1


class AllZeroWeightsError(ValueError):
    """Every penalized weight collapsed to zero; the configuration is degenerate."""


class EmptyPoolError(ValueError):
    """A token draw was requested from an empty candidate pool."""


class ParameterRangeError(ValueError):
    """A sampling parameter fell outside its allowed range.

    Carries the offending field name and a human-readable range so callers
    (notably the HTTP layer) can report exactly what was wrong.
    """

    def __init__(self, param: str, allowed: str, value: object):
        super().__init__(f"{param} must be in {allowed}, got {value!r}")
        self.param = param
        self.allowed = allowed
        self.value = value


class TokenDistribution(Mapping[str, float]):
    """Probability mass function over a finite token vocabulary.

    Entries keep their insertion order. Construction validates that the
    vocabulary is non-empty, every probability is a finite non-negative
    float, and the total mass is 1 within ``SUM_TOLERANCE``.
    """

    __slots__ = ("_probs",)

    def __init__(self, probs: Mapping[str, float]):
        if not probs:
            raise ValueError("a token distribution needs a non-empty vocabulary")
        for token, prob in probs.items():
            if not math.isfinite(prob) or prob < 0.0:
                raise ValueError(
                    f"probability of token {token!r} must be finite and >= 0, got {prob!r}"
                )
        total = math.fsum(probs.values())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"probabilities must sum to 1 within {SUM_TOLERANCE}, got {total!r}")
        self._probs = dict(probs)

    def __getitem__(self, token: str) -> float:
        return self._probs[token]

    def __iter__(self) -> Iterator[str]:
        return iter(self._probs)

    def __len__(self) -> int:
        return len(self._probs)

    def support(self) -> list[str]:
        """Tokens with strictly positive probability, in entry order."""
        return [t for t, p in self._probs.items() if p > 0.0]

    def __repr__(self) -> str:
        return f"TokenDistribution({self._probs!r})"


@dataclass(frozen=True)
class SamplingParams:
    """The three exposed hyperparameters plus the seed that fixes the run.

    ``top_p`` must lie in (0, 1]; both penalties in [0, 2] so that the
    penalty denominators stay >= 1; ``seed`` is an unsigned 64-bit int.
    """

    top_p: float = 0.9
    frequency_penalty: float = 0.0
    presence_penalty: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.top_p <= 1.0):
            raise ParameterRangeError("top_p", "(0, 1]", self.top_p)
        if not (0.0 <= self.frequency_penalty <= 2.0):
            raise ParameterRangeError("frequency_penalty", "[0, 2]", self.frequency_penalty)
        if not (0.0 <= self.presence_penalty <= 2.0):
            raise ParameterRangeError("presence_penalty", "[0, 2]", self.presence_penalty)
        if not (0 <= int(self.seed) <= _SEED_MAX):
            raise ParameterRangeError("seed", "[0, 2^64)", self.seed)


class TokenHistory:
    """Exact occurrence counts of tokens emitted so far.

    Absent tokens count as zero. ``generate_sequence`` counts generated
    tokens only, never the prompt.
    """

    __slots__ = ("_counts",)

    def __init__(self, tokens: Iterable[str] = ()):
        self._counts: Counter[str] = Counter(tokens)

    def add(self, token: str) -> None:
        self._counts[token] += 1

    def count(self, token: str) -> int:
        return self._counts.get(token, 0)

    def as_dict(self) -> dict[str, int]:
        return dict(self._counts)

    def __contains__(self, token: str) -> bool:
        return token in self._counts

    def __len__(self) -> int:
        return len(self._counts)

    def __repr__(self) -> str:
        return f"TokenHistory({dict(self._counts)!r})"


@dataclass(frozen=True)
class NucleusSet:
    """Smallest high-probability token subset whose mass reaches the threshold."""

    tokens: frozenset[str]
    cumulative_mass: float

    def __contains__(self, token: str) -> bool:
        return token in self.tokens

    def __len__(self) -> int:
        return len(self.tokens)


def apply_penalties(
    dist: TokenDistribution,
    history: TokenHistory,
    frequency_penalty: float,
    presence_penalty: float,
) -> dict[str, float]:
    """Reweight a distribution against prior token occurrences.

    Each token's weight becomes::

        P(t) / ((1 + frequency_penalty * count(t)) * (1 + presence_penalty * seen(t)))

    where ``count(t)`` is the token's occurrence count and ``seen(t)`` is 1 if
    the token occurred at all, else 0. With both penalties in [0, 2] the
    denominators are >= 1, so weights never exceed the input probabilities and
    the map is the exact identity at zero penalties. The result is NOT a valid
    pmf; pass it through :func:`renormalize` before sampling.
    """
    if not (0.0 <= frequency_penalty <= 2.0):
        raise ParameterRangeError("frequency_penalty", "[0, 2]", frequency_penalty)
    if not (0.0 <= presence_penalty <= 2.0):
        raise ParameterRangeError("presence_penalty", "[0, 2]", presence_penalty)
    weights: dict[str, float] = {}
    for token, prob in dist.items():
        count = history.count(token)
        denom = (1.0 + frequency_penalty * count) * (1.0 + presence_penalty * (count > 0))
        weights[token] = prob / denom
    return weights


def renormalize(weights: Mapping[str, float]) -> TokenDistribution:
    """Scale non-negative weights into a valid probability distribution.

    Raises :class:`AllZeroWeightsError` when every weight is zero, which
    signals a degenerate penalty configuration rather than silently falling
    back to uniform.
    """
    if not weights:
        raise ValueError("cannot renormalize an empty weight map")
    for token, weight in weights.items():
        if not math.isfinite(weight) or weight < 0.0:
            raise ValueError(f"weight of token {token!r} must be finite and >= 0, got {weight!r}")
    total = math.fsum(weights.values())
    if total == 0.0:
        raise AllZeroWeightsError("all token weights are zero; penalties erased the distribution")
    return TokenDistribution({token: weight / total for token, weight in weights.items()})


def _by_probability(dist: Mapping[str, float]):
    """Sort key: descending probability, ties broken by ascending token."""
    return lambda token: (-dist[token], token)


def nucleus_filter(dist: TokenDistribution, top_p: float) -> NucleusSet:
    """Select the smallest token set whose cumulative mass meets ``top_p``.

    Tokens are taken greedily by descending probability (ties broken by
    ascending token order) until the running mass meets or exceeds the
    threshold. Zero-probability tokens never enter the set; at ``top_p=1``
    the result is the full support even if floating-point summation lands a
    hair under 1.
    """
    if not (0.0 < top_p <= 1.0):
        raise ParameterRangeError("top_p", "(0, 1]", top_p)
    members: list[str] = []
    cumulative = 0.0
    for token in sorted(dist.support(), key=_by_probability(dist)):
        members.append(token)
        cumulative += dist[token]
        if cumulative >= top_p:
            break
    return NucleusSet(frozenset(members), cumulative)


def sample_token(pool: NucleusSet, dist: TokenDistribution, rng: np.random.Generator) -> str:
    """Draw one token from the pool, proportionally to its probability.

    Pool members are renormalized among themselves and walked in canonical
    order (descending probability, then token) with a single uniform draw,
    so an identical ``rng`` state always yields the identical token.
    """
    if not pool.tokens:
        raise EmptyPoolError("cannot sample from an empty nucleus")
    members = sorted(pool.tokens, key=_by_probability(dist))
    for token in members:
        if dist.get(token, 0.0) <= 0.0:
            raise ValueError(f"pool token {token!r} is outside the distribution support")
    total = math.fsum(dist[t] for t in members)
    u = rng.random() * total
    cumulative = 0.0
    for token in members:
        cumulative += dist[token]
        if u < cumulative:
            return token
    return members[-1]


@dataclass(frozen=True)
class GenerationResult:
    """Tokens produced by one generation run plus reproducibility metadata."""

    tokens: tuple[str, ...]
    params: SamplingParams
    rng_algorithm: str = RNG_ALGORITHM
    stopped_early: bool = False

    def __len__(self) -> int:
        return len(self.tokens)


def generate_sequence(
    provider,
    prompt: Sequence[str],
    params: SamplingParams,
    max_tokens: int,
) -> GenerationResult:
    """Run the token-by-token generation loop against a distribution provider.

    Each step asks ``provider.next_distribution(context)`` for the next-token
    pmf over the full context, penalizes it against the tokens generated so
    far (prompt tokens are never penalized), renormalizes, keeps the nucleus
    at ``params.top_p`` and draws one token. Stops after ``max_tokens`` steps
    or as soon as the provider's end-of-text token is drawn (the end-of-text
    token itself is not emitted). Deterministic in all arguments, including
    ``params.seed``.
    """
    if max_tokens < 1:
        raise ValueError(f"max_tokens must be >= 1, got {max_tokens}")
    rng = np.random.default_rng(params.seed)
    context = list(prompt)
    history = TokenHistory()
    generated: list[str] = []
    stopped_early = False
    for _ in range(max_tokens):
        dist = provider.next_distribution(context)
        weights = apply_penalties(dist, history, params.frequency_penalty, params.presence_penalty)
        pmf = renormalize(weights)
        pool = nucleus_filter(pmf, params.top_p)
        token = sample_token(pool, pmf, rng)
        if token == provider.eot_token:
            stopped_early = True
            break
        generated.append(token)
        context.append(token)
        history.add(token)
    return GenerationResult(tuple(generated), params, stopped_early=stopped_early)

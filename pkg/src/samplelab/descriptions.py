"""Plain-language help text for the three exposed hyperparameters.

Served by ``GET /api/hyperparameters`` and rendered verbatim by the UI help
panels.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class HyperparameterDescription:
    name: str
    summary: str
    range: tuple[float, float]
    default: float
    min_exclusive: bool = False

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "summary": self.summary,
            "range": list(self.range),
            "default": self.default,
            "min_exclusive": self.min_exclusive,
        }


HYPERPARAMETERS = (
    HyperparameterDescription(
        name="top_p",
        summary=(
            "Controls nucleus sampling. At each step the model keeps only the "
            "smallest group of most-likely next tokens whose combined probability "
            "reaches this threshold, then draws randomly inside that group. Low "
            "values make the output focused and predictable because only the very "
            "top candidates survive; values near 1 let rarer, more surprising "
            "tokens through, which usually reads as more creative but less "
            "consistent text."
        ),
        range=(0.0, 1.0),
        default=0.9,
        min_exclusive=True,
    ),
    HyperparameterDescription(
        name="frequency_penalty",
        summary=(
            "Discourages repetition in proportion to how often a token has already "
            "been generated. Every prior occurrence shrinks that token's chance of "
            "being chosen again, so the more something has been said, the harder it "
            "becomes to say it once more. Raise this when the output keeps looping "
            "over the same words or phrases; leave it at zero for an unmodified "
            "model."
        ),
        range=(0.0, 2.0),
        default=0.0,
    ),
    HyperparameterDescription(
        name="presence_penalty",
        summary=(
            "Applies a single flat penalty to any token that has appeared at least "
            "once in the generated text, no matter how many times. It does not "
            "escalate with repeated use; it simply makes every already-used token a "
            "bit less attractive than fresh ones. Raise this to nudge the model "
            "toward new vocabulary and topics instead of revisiting what it has "
            "already produced."
        ),
        range=(0.0, 2.0),
        default=0.0,
    ),
)

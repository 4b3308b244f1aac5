"""Durable log of generation interactions and their ratings.

Backend is an append-only JSON Lines file: one ``record`` line per
interaction at creation time, plus one ``rating`` line when the output gets
scored (ratings are write-once). An in-memory index is rebuilt from the log
at startup; all mutations go through a single lock, reads see a consistent
prefix of the log.
"""

from __future__ import annotations

import json
import threading
import unicodedata
from dataclasses import dataclass, replace
from pathlib import Path

from samplelab.sampling import SamplingParams

SCHEMA_VERSION = 1

MAX_PAGE_SIZE = 1000

RATING_RANGE = (1, 5)


class StoreError(Exception):
    """Base class for session store failures."""


class NotFoundError(StoreError):
    """No record with the requested id exists."""


class AlreadyRatedError(StoreError):
    """The record already carries a rating; ratings are write-once."""


class RatingOutOfRangeError(StoreError):
    """Rating score is not an integer in [1, 5]."""


class InvalidRecordError(StoreError):
    """The record violates the creation contract (e.g. pre-set rating, dup id)."""


class StorageFullError(StoreError):
    """The backing file could not be written."""


class SerializationFailureError(StoreError):
    """The record could not be encoded as JSON."""


@dataclass(frozen=True)
class InteractionRecord:
    """One generation event: prompt, parameters, output and optional score.

    Immutable except for the rating, which is set exactly once after
    creation. ``created_at`` is an RFC 3339 UTC timestamp string.
    """

    id: str
    prompt: str
    params: SamplingParams
    output: str
    provider_id: str
    sampled_locally: bool
    created_at: str
    rating: int | None = None


@dataclass(frozen=True)
class ScoreGraphPoint:
    """Projection of one record onto the penalty plane, shaded by rating."""

    presence: float
    frequency: float
    rating: int | None
    record_id: str


def prompt_key(prompt: str) -> str:
    """Canonical form used for prompt matching: NFC plus trailing-space trim."""
    return unicodedata.normalize("NFC", prompt).rstrip()


def record_to_json(record: InteractionRecord) -> dict:
    return {
        "v": SCHEMA_VERSION,
        "type": "record",
        "id": record.id,
        "prompt": record.prompt,
        "params": {
            "top_p": record.params.top_p,
            "frequency_penalty": record.params.frequency_penalty,
            "presence_penalty": record.params.presence_penalty,
            "seed": record.params.seed,
        },
        "output": record.output,
        "provider_id": record.provider_id,
        "sampled_locally": record.sampled_locally,
        "created_at": record.created_at,
    }


def record_from_json(obj: dict) -> InteractionRecord:
    params = obj["params"]
    return InteractionRecord(
        id=obj["id"],
        prompt=obj["prompt"],
        params=SamplingParams(
            top_p=params["top_p"],
            frequency_penalty=params["frequency_penalty"],
            presence_penalty=params["presence_penalty"],
            seed=params["seed"],
        ),
        output=obj["output"],
        provider_id=obj["provider_id"],
        sampled_locally=obj["sampled_locally"],
        created_at=obj["created_at"],
    )


def _validate_score(score) -> int:
    if isinstance(score, bool) or not isinstance(score, int):
        raise RatingOutOfRangeError(f"rating must be an integer in [1, 5], got {score!r}")
    low, high = RATING_RANGE
    if not (low <= score <= high):
        raise RatingOutOfRangeError(f"rating must be an integer in [1, 5], got {score}")
    return score


class JsonLinesStore:
    """Log-structured interaction store over a single JSON Lines file."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records: dict[str, InteractionRecord] = {}
        self._order: list[str] = []  # append order, stabilizes timestamp ties
        self._load()

    def _load(self) -> None:
        if not self.path.is_file():
            return
        with self.path.open("r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                kind = obj.get("type")
                if kind == "record":
                    record = record_from_json(obj)
                    self._records[record.id] = record
                    self._order.append(record.id)
                elif kind == "rating":
                    record = self._records.get(obj["id"])
                    if record is None:
                        raise InvalidRecordError(
                            f"{self.path}:{line_no}: rating for unknown record {obj['id']!r}"
                        )
                    self._records[record.id] = replace(record, rating=obj["rating"])
                else:
                    raise InvalidRecordError(f"{self.path}:{line_no}: unknown line type {kind!r}")

    def _append_line(self, obj: dict) -> None:
        try:
            line = json.dumps(obj, ensure_ascii=False)
        except (TypeError, ValueError) as exc:
            raise SerializationFailureError(f"record is not JSON-serializable: {exc}") from exc
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(line + "\n")
        except OSError as exc:
            raise StorageFullError(f"cannot write to {self.path}: {exc}") from exc

    def append(self, record: InteractionRecord) -> str:
        """Persist a freshly created record; ratings must be absent at creation."""
        if record.rating is not None:
            raise InvalidRecordError("new records must not carry a rating")
        with self._lock:
            if record.id in self._records:
                raise InvalidRecordError(f"duplicate record id {record.id!r}")
            self._append_line(record_to_json(record))
            self._records[record.id] = record
            self._order.append(record.id)
        return record.id

    def get(self, record_id: str) -> InteractionRecord:
        with self._lock:
            record = self._records.get(record_id)
        if record is None:
            raise NotFoundError(f"no record with id {record_id!r}")
        return record

    def set_rating(self, record_id: str, score: int) -> InteractionRecord:
        """Attach a write-once rating in [1, 5] to an existing record."""
        score = _validate_score(score)
        with self._lock:
            record = self._records.get(record_id)
            if record is None:
                raise NotFoundError(f"no record with id {record_id!r}")
            if record.rating is not None:
                raise AlreadyRatedError(f"record {record_id!r} is already rated {record.rating}")
            self._append_line({"v": SCHEMA_VERSION, "type": "rating", "id": record_id, "rating": score})
            updated = replace(record, rating=score)
            self._records[record_id] = updated
        return updated

    def _snapshot(self) -> list[InteractionRecord]:
        with self._lock:
            return [self._records[record_id] for record_id in self._order]

    def query_by_prompt(self, prompt: str) -> list[InteractionRecord]:
        """Records whose prompt matches after NFC + trailing-whitespace trim, oldest first."""
        key = prompt_key(prompt)
        matches = [r for r in self._snapshot() if prompt_key(r.prompt) == key]
        matches.sort(key=lambda r: r.created_at)  # append order breaks timestamp ties
        return matches

    def score_graph_points(self, prompt: str) -> list[ScoreGraphPoint]:
        """(presence, frequency, rating) projection of every matching record."""
        return [
            ScoreGraphPoint(
                presence=r.params.presence_penalty,
                frequency=r.params.frequency_penalty,
                rating=r.rating,
                record_id=r.id,
            )
            for r in self.query_by_prompt(prompt)
        ]

    def list_all(self, limit: int, offset: int = 0) -> list[InteractionRecord]:
        """Newest-first page of all records; stable across repeated calls."""
        if not (1 <= limit <= MAX_PAGE_SIZE):
            raise ValueError(f"limit must be in [1, {MAX_PAGE_SIZE}], got {limit}")
        if offset < 0:
            raise ValueError(f"offset must be >= 0, got {offset}")
        records = self._snapshot()
        records.reverse()
        records.sort(key=lambda r: r.created_at, reverse=True)  # stable: ties stay newest-first
        return records[offset : offset + limit]

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)

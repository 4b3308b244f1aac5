"""Offline reporting: dump the session log to CSV and render score graphs.

The figures mirror the web UI's encoding of the penalty plane: presence
penalty on x, frequency penalty on y, point opacity 0.2..1.0 for ratings
1..5, hollow markers for unrated runs.
"""

from __future__ import annotations

import csv
from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from samplelab.store import MAX_PAGE_SIZE, InteractionRecord, JsonLinesStore, ScoreGraphPoint

CSV_COLUMNS = [
    "id",
    "created_at",
    "provider_id",
    "sampled_locally",
    "prompt",
    "top_p",
    "frequency_penalty",
    "presence_penalty",
    "seed",
    "rating",
    "output",
]


def rating_opacity(rating: int) -> float:
    """Linear shade map: rating 1 -> 0.2, rating 5 -> 1.0."""
    return 0.2 + 0.2 * (rating - 1)


def export_csv(records: Sequence[InteractionRecord], path: Path) -> Path:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.id,
                    r.created_at,
                    r.provider_id,
                    r.sampled_locally,
                    r.prompt,
                    r.params.top_p,
                    r.params.frequency_penalty,
                    r.params.presence_penalty,
                    r.params.seed,
                    "" if r.rating is None else r.rating,
                    r.output,
                ]
            )
    return path


def render_score_graph(points: Sequence[ScoreGraphPoint], prompt: str, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 5))
    for point in points:
        if point.rating is None:
            ax.scatter(
                point.presence,
                point.frequency,
                s=90,
                facecolors="none",
                edgecolors="tab:blue",
                linewidths=1.5,
            )
        else:
            ax.scatter(
                point.presence,
                point.frequency,
                s=90,
                color="tab:blue",
                alpha=rating_opacity(point.rating),
            )
            ax.annotate(
                str(point.rating),
                (point.presence, point.frequency),
                textcoords="offset points",
                xytext=(6, 6),
                fontsize=8,
            )
    ax.set_xlim(-0.1, 2.1)
    ax.set_ylim(-0.1, 2.1)
    ax.set_xlabel("presence penalty")
    ax.set_ylabel("frequency penalty")
    title = prompt if len(prompt) <= 60 else prompt[:57] + "..."
    ax.set_title(f"score graph: {title!r}", fontsize=10)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def render_ratings_histogram(records: Sequence[InteractionRecord], path: Path) -> Path:
    ratings = [r.rating for r in records if r.rating is not None]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.hist(ratings, bins=[0.5, 1.5, 2.5, 3.5, 4.5, 5.5], rwidth=0.8, color="tab:blue")
    ax.set_xticks([1, 2, 3, 4, 5])
    ax.set_xlabel("rating")
    ax.set_ylabel("count")
    ax.set_title(f"ratings over {len(records)} interactions ({len(ratings)} rated)", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_report(store: JsonLinesStore, out_dir: str | Path, prompt: str | None = None) -> list[Path]:
    """Write interactions.csv plus one score-graph figure per distinct prompt.

    With ``prompt`` given, only matching interactions are exported. Returns
    the list of written paths, CSV first.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if prompt is not None:
        records = store.query_by_prompt(prompt)
    else:
        records = []
        offset = 0
        while True:
            page = store.list_all(limit=MAX_PAGE_SIZE, offset=offset)
            if not page:
                break
            records.extend(page)
            offset += MAX_PAGE_SIZE
        records.reverse()  # oldest first, matching the per-prompt exports
    written = [export_csv(records, out / "interactions.csv")]

    seen: list[str] = []
    for record in records:
        if record.prompt not in seen:
            seen.append(record.prompt)
    for index, distinct_prompt in enumerate(seen, start=1):
        points = store.score_graph_points(distinct_prompt)
        written.append(
            render_score_graph(points, distinct_prompt, out / f"score_graph_{index:02d}.png")
        )
    if records:
        written.append(render_ratings_histogram(records, out / "ratings_histogram.png"))
    return written

"""Command-line entry points: serve the API/UI, one-shot generate, and report."""

from __future__ import annotations

import os
import secrets
import sys
from importlib import resources
from pathlib import Path
from uuid import uuid4

import click

from samplelab.providers.base import ProviderRegistry
from samplelab.providers.ngram import TOKENIZERS, NGramProvider
from samplelab.providers.remote import API_KEY_ENV_VAR, RemoteProvider, RemoteProviderConfig
from samplelab.sampling import SamplingParams, generate_sequence
from samplelab.store import InteractionRecord, JsonLinesStore

DEFAULT_STATIC_DIR = "frontend/dist"


def packaged_corpus_text() -> str:
    return resources.files("samplelab").joinpath("data/corpus.txt").read_text(encoding="utf-8")


def load_corpus(path: str | None) -> str:
    if path is None:
        return packaged_corpus_text()
    return Path(path).read_text(encoding="utf-8")


def build_registry(
    corpus: str | None,
    ngram_order: int,
    tokenizer: str,
    remote_url: str | None = None,
    remote_model: str | None = None,
    remote_timeout: float = 30.0,
) -> ProviderRegistry:
    registry = ProviderRegistry()
    registry.register(
        NGramProvider.from_corpus(load_corpus(corpus), order=ngram_order, tokenizer=tokenizer),
        default=True,
    )
    if remote_url:
        if not remote_model:
            raise click.UsageError("--remote-model is required when --remote-url is set")
        config = RemoteProviderConfig(
            base_url=remote_url,
            model_name=remote_model,
            api_key=os.environ.get(API_KEY_ENV_VAR, ""),
            timeout=remote_timeout,
        )
        registry.register(RemoteProvider(config))
    return registry


@click.group()
def main() -> None:
    """Explore how top-p and the frequency/presence penalties change model output."""


@main.command()
@click.option("--port", type=click.IntRange(1, 65535), default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--db-path", default="interactions.jsonl", show_default=True,
              help="JSON Lines session log.")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Training text for the toy model (default: packaged corpus).")
@click.option("--ngram-order", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--tokenizer", type=click.Choice(TOKENIZERS), default="char", show_default=True)
@click.option("--remote-url", default=None, help="Base URL of an OpenAI-compatible server.")
@click.option("--remote-model", default=None, help="Model name sent to the remote server.")
@click.option("--remote-timeout", type=float, default=30.0, show_default=True)
@click.option("--static-dir", type=click.Path(file_okay=False), default=None,
              help=f"Web UI build to serve at / (default: {DEFAULT_STATIC_DIR} if present).")
def serve(port, host, db_path, corpus, ngram_order, tokenizer,
          remote_url, remote_model, remote_timeout, static_dir):
    """Run the HTTP service (API plus web UI) on one port."""
    import uvicorn

    from samplelab.service import create_app

    registry = build_registry(corpus, ngram_order, tokenizer,
                              remote_url, remote_model, remote_timeout)
    store = JsonLinesStore(db_path)
    if static_dir is None and Path(DEFAULT_STATIC_DIR).is_dir():
        static_dir = DEFAULT_STATIC_DIR
    app = create_app(store, registry, static_dir=static_dir)
    click.echo(f"serving on http://{host}:{port} "
               f"(providers: {', '.join(registry.ids())}; db: {db_path})")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("--prompt", required=True)
@click.option("--top-p", type=float, default=0.9, show_default=True)
@click.option("--frequency-penalty", type=float, default=0.0, show_default=True)
@click.option("--presence-penalty", type=float, default=0.0, show_default=True)
@click.option("--seed", type=int, default=None, help="Defaults to a fresh random seed.")
@click.option("--max-tokens", type=click.IntRange(min=1), default=128, show_default=True)
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--ngram-order", type=click.IntRange(min=2), default=3, show_default=True)
@click.option("--tokenizer", type=click.Choice(TOKENIZERS), default="char", show_default=True)
@click.option("--db-path", default=None, help="Also append the run to this session log.")
def generate(prompt, top_p, frequency_penalty, presence_penalty, seed,
             max_tokens, corpus, ngram_order, tokenizer, db_path):
    """Generate once from the toy model and print the output."""
    from samplelab.service import _utc_now_rfc3339

    provider = NGramProvider.from_corpus(load_corpus(corpus), order=ngram_order,
                                         tokenizer=tokenizer)
    if seed is None:
        seed = secrets.randbits(64)
    params = SamplingParams(top_p=top_p, frequency_penalty=frequency_penalty,
                            presence_penalty=presence_penalty, seed=seed)
    result = generate_sequence(provider, provider.tokenize(prompt), params, max_tokens)
    output = provider.detokenize(result.tokens)
    click.echo(f"seed={seed} rng={result.rng_algorithm} tokens={len(result)}", err=True)
    click.echo(output)
    if db_path:
        store = JsonLinesStore(db_path)
        store.append(
            InteractionRecord(
                id=str(uuid4()),
                prompt=prompt,
                params=params,
                output=output,
                provider_id=provider.id,
                sampled_locally=True,
                created_at=_utc_now_rfc3339(),
            )
        )
        click.echo(f"recorded to {db_path}", err=True)


@main.command()
@click.option("--db-path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", default="reports", show_default=True,
              help="Directory for the CSV and the rendered figures.")
@click.option("--prompt", default=None, help="Restrict the report to one prompt.")
def report(db_path, out_dir, prompt):
    """Export the session log as CSV plus score-graph figures."""
    from samplelab.report import write_report

    store = JsonLinesStore(db_path)
    if len(store) == 0:
        click.echo("session log is empty; nothing to report", err=True)
        sys.exit(1)
    for path in write_report(store, out_dir, prompt=prompt):
        click.echo(str(path))


if __name__ == "__main__":
    main()

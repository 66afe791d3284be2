"""Operational CLI: corpus ingestion and the API server."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .assoc import MalformedRowError, load_associations_csv, load_lexicon_csv
from .corpus import (
    BlobStore,
    CorpusError,
    DuplicateIdError,
    ingest_manifest,
    load_index,
    load_manifest,
    save_index,
)
from .providers import ProviderSuite
from .server import create_app
from .studio import Studio


@click.group()
def main():
    """Promotional-post design studio backend."""


def _providers(mode, seed=0):
    if mode == "live":
        return ProviderSuite.from_env(seed=seed)
    return ProviderSuite.mock(seed)


def _load_graph(associations, lexicon, reverse):
    graph = load_associations_csv(associations, reverse=reverse)
    if lexicon:
        load_lexicon_csv(graph, lexicon)
    return graph


@main.command()
@click.option("--manifest", required=True, type=click.Path(exists=True))
@click.option("--associations", required=True, type=click.Path(exists=True))
@click.option("--lexicon", type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--providers", "provider_mode", default="mock",
              type=click.Choice(["mock", "live"]))
@click.option("--reverse-associations", is_flag=True,
              help="Store association edges response -> cue.")
@click.option("--resume", type=click.Path(exists=True),
              help="Existing index file; already-annotated records are kept.")
def ingest(manifest, associations, lexicon, out, provider_mode,
           reverse_associations, resume):
    """Annotate a JSONL image manifest and write the corpus index."""
    try:
        graph = _load_graph(associations, lexicon, reverse_associations)
    except MalformedRowError as exc:
        click.echo(f"error: associations: {exc}", err=True)
        sys.exit(1)

    suite = _providers(provider_mode)
    existing = load_index(resume) if resume else None
    skipped = []
    try:
        rows = load_manifest(manifest)
        index = ingest_manifest(rows, suite, graph=graph, existing=existing,
                                report=skipped)
    except (CorpusError, DuplicateIdError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)

    for rid, reason in skipped:
        click.echo(f"skipped {rid}: {reason}", err=True)
    save_index(index, out)
    click.echo(
        f"ingested {len(index)} records, {len(index.by_keyword)} keywords, "
        f"{len(index.by_object)} object tags -> {out}"
    )
    click.echo(f"association graph: {len(graph.nodes)} nodes")


@main.command()
@click.option("--index", "index_path", required=True, type=click.Path(exists=True))
@click.option("--associations", required=True, type=click.Path(exists=True))
@click.option("--lexicon", type=click.Path(exists=True))
@click.option("--providers", "provider_mode", default="mock",
              type=click.Choice(["mock", "live"]))
@click.option("--reverse-associations", is_flag=True)
@click.option("--port", default=8000, type=int)
@click.option("--host", default="127.0.0.1")
@click.option("--data-dir", default="promoboard-data", type=click.Path())
@click.option("--rng-seed", default=0, type=int)
def serve(index_path, associations, lexicon, provider_mode,
          reverse_associations, port, host, data_dir, rng_seed):
    """Serve the studio API over HTTP."""
    import uvicorn

    graph = _load_graph(associations, lexicon, reverse_associations)
    index = load_index(index_path)
    blobs = BlobStore(Path(data_dir) / "blobs")
    studio = Studio(index, graph, _providers(provider_mode, rng_seed), blobs,
                    rng_seed=rng_seed)
    uvicorn.run(create_app(studio), host=host, port=port)


@main.command()
@click.option("--pixels", default=1_000_000, type=int, help="Pixel count per trial.")
@click.option("--trials", default=5, type=int)
def bench(pixels, trials):
    """Compare the compiled color kernels against the numpy fallback."""
    from .bench import run_benchmark

    run_benchmark(pixels=pixels, trials=trials, echo=click.echo)


if __name__ == "__main__":
    main()

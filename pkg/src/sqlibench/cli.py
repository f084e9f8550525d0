"""Command-line interface.

Subcommands: kb build, generate, evaluate, diversity, stats, report, grid,
seed-ablation. Exit codes: 0 success, 1 partial results (shortfalls or
per-config failures), 2 configuration error, 3 infrastructure error.
"""

from __future__ import annotations

import csv
import functools
import logging
import sys
from pathlib import Path

import click

from .errors import ConfigError, InfrastructureError, SqlibenchError
from .evaluation.executor import EmbeddedExecutor
from .evaluation.matrix import run_evaluation_matrix
from .diversity.report import score_payload_set
from .generators import read_payloads_jsonl, write_payloads_jsonl
from .knowledge.chunking import Chunk, chunk_document
from .knowledge.embedding import HashedNgramEmbedder
from .knowledge.index import build_index, save_index
from .llm.base import ProviderRegistry
from .llm.mock import MockProvider
from .llm.remote import RemoteProvider, load_provider_configs
from .runner.ablation import seed_ablation
from .runner.config import ExperimentConfig, load_config_file, parse_config, parse_grid
from .runner.experiment import build_detectors, generate_for_run
from .runner.grid import run_grid
from .runner.reports import correlations_from_columns, emit_report, write_csv
from .stats.summaries import bypass_rate
from .errors import NoDataError

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARTIAL = 1
EXIT_CONFIG = 2
EXIT_INFRA = 3


def _exit_codes(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)
        except InfrastructureError as exc:
            click.echo(f"infrastructure error: {exc}", err=True)
            sys.exit(EXIT_INFRA)
        except SqlibenchError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_CONFIG)

    return wrapper


@click.group()
@click.option("--config", "config_path", type=click.Path(), help="experiment config JSON")
@click.option("--out", "out_dir", type=click.Path(), default="out", show_default=True)
@click.option("--mock", is_flag=True, help="force the deterministic mock provider")
@click.option("--seed", type=int, default=None, help="override the base RNG seed")
@click.option("--mock-seed", type=int, default=0, show_default=True,
              help="seed for the mock provider")
@click.option("--provider", "provider_id", default=None, help="select provider id")
@click.option("--providers-config", type=click.Path(), default=None,
              help="remote provider definitions (JSON)")
@click.option("-v", "--verbose", is_flag=True)
@click.pass_context
def main(ctx, config_path, out_dir, mock, seed, mock_seed, provider_id, providers_config, verbose):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    registry = ProviderRegistry()
    registry.register(MockProvider(seed=mock_seed))
    if providers_config:
        for provider_config in load_provider_configs(providers_config):
            registry.register(RemoteProvider(provider_config))
    ctx.obj = {
        "config_path": config_path,
        "out": Path(out_dir),
        "mock": mock,
        "seed": seed,
        "provider": provider_id,
        "registry": registry,
    }


def _load_experiment_config(ctx_obj, **overrides) -> ExperimentConfig:
    if not ctx_obj["config_path"]:
        raise ConfigError("this command needs --config <file>")
    data = load_config_file(ctx_obj["config_path"])
    config = parse_config(data)
    return _apply_global_overrides(ctx_obj, config, **overrides)


def _apply_global_overrides(ctx_obj, config: ExperimentConfig, **overrides) -> ExperimentConfig:
    if ctx_obj["mock"]:
        overrides.setdefault("provider", "mock")
        overrides.setdefault("discriminator_provider", "mock")
    elif ctx_obj["provider"]:
        overrides.setdefault("provider", ctx_obj["provider"])
    if ctx_obj["seed"] is not None:
        overrides.setdefault("rng_seed", ctx_obj["seed"])
    return config.replace(**overrides) if overrides else config


@main.group()
def kb():
    """Knowledge-base maintenance."""


@kb.command("build")
@click.option("--input", "inputs", type=click.Path(exists=True), multiple=True, required=True,
              help="plain-text source document (repeatable)")
@click.option("--chunk-size", type=int, default=200, show_default=True)
@click.option("--overlap", type=int, default=50, show_default=True)
@click.option("--index-file", type=click.Path(), required=True)
@click.pass_obj
@_exit_codes
def kb_build(ctx_obj, inputs, chunk_size, overlap, index_file):
    """Chunk, embed, and index source documents into a portable index file."""
    chunks: list[Chunk] = []
    for path in inputs:
        text = Path(path).read_text(encoding="utf-8")
        for chunk in chunk_document(text, chunk_size, overlap, source_doc=Path(path).name):
            chunks.append(Chunk(len(chunks), chunk.text, chunk.source_doc, chunk.offset))
    index = build_index(chunks, HashedNgramEmbedder())
    save_index(index, index_file)
    click.echo(f"indexed {len(index)} chunks (dim {index.dimension}) -> {index_file}")


@main.command()
@click.pass_obj
@_exit_codes
def generate(ctx_obj):
    """Run payload generation for run 0 of the configured experiment."""
    config = _load_experiment_config(ctx_obj)
    out = ctx_obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    from .runner.experiment import build_knowledge_index

    embedder = HashedNgramEmbedder()
    shared = {"embedder": embedder, "seeds": None}
    if config.seeds_path:
        from .generators import load_seed_list

        shared["seeds"] = load_seed_list(config.seeds_path, config.seed_framing)
    if config.generator == "radagas":
        shared["index"] = build_knowledge_index(config, embedder)
        shared["gate_executor"] = EmbeddedExecutor() if config.executor == "embedded" else None
    result = generate_for_run(config, ctx_obj["registry"], 0, out, shared)
    path = out / "payloads.jsonl"
    write_payloads_jsonl(result.payloads, str(path))
    click.echo(f"{len(result.payloads)} payloads -> {path} (shortfall {result.shortfall})")
    if result.shortfall:
        sys.exit(EXIT_PARTIAL)


@main.command()
@click.option("--payloads", "payloads_path", type=click.Path(exists=True), required=True)
@click.option("--detector", "detector_specs", multiple=True,
              help="detector spec (default: built-in rule PLs + ML stub)")
@click.option("--no-exec", is_flag=True, help="skip the execution validator")
@click.pass_obj
@_exit_codes
def evaluate(ctx_obj, payloads_path, detector_specs, no_exec):
    """Evaluate a payload file against detectors and the execution validator."""
    from .runner.config import DEFAULT_DETECTORS

    payloads = read_payloads_jsonl(payloads_path)
    if not payloads:
        raise ConfigError(f"no payloads in {payloads_path}")
    detectors = build_detectors(tuple(detector_specs) or DEFAULT_DETECTORS)
    executor = None if no_exec else EmbeddedExecutor()
    out = ctx_obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    matrix = run_evaluation_matrix(
        [p.text for p in payloads], detectors, executor,
        store_path=str(out / "evaluation.csv"),
    )
    detector_ids = [d.detector_id for d in detectors] + (
        [executor.detector_id] if executor else []
    )
    rows = []
    for detector_id in detector_ids:
        try:
            s = bypass_rate(matrix.records, detector_id)
            rows.append([s.detector_id, s.bypassed, s.tested, s.rate_pct])
        except NoDataError:
            rows.append([detector_id, 0, 0, None])
    write_csv(out / "bypass.csv", ["detector_id", "bypassed", "tested", "rate_pct"], rows)
    click.echo(f"{len(matrix.records)} records -> {out / 'evaluation.csv'}")


@main.command()
@click.option("--payloads", "payloads_path", type=click.Path(exists=True), required=True)
@click.pass_obj
@_exit_codes
def diversity(ctx_obj, payloads_path):
    """Score a payload file with the six diversity metrics."""
    payloads = read_payloads_jsonl(payloads_path)
    if not payloads:
        raise ConfigError(f"no payloads in {payloads_path}")
    texts = [p.text for p in payloads]
    executor = EmbeddedExecutor()
    matrix = run_evaluation_matrix(texts, [], executor)
    report, details = score_payload_set(texts, matrix.signatures, HashedNgramEmbedder())
    out = ctx_obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    write_csv(
        out / "diversity.csv",
        ["uniqueness_pct", "semantic", "lexical", "contextual", "ngram", "ast",
         "functional", "total"],
        [[report.uniqueness_pct, report.semantic, report.lexical, report.contextual,
          report.ngram, report.ast, report.functional, report.total]],
    )
    write_csv(
        out / "diversity_detail.csv",
        ["index", "semantic", "lexical", "contextual", "ngram", "ast", "category"],
        [
            [d.index, d.semantic, d.lexical, d.contextual, d.ngram, d.ast, sig.category]
            for d, sig in zip(details, matrix.signatures)
        ],
    )
    click.echo(f"diversity total {report.total:.4f} -> {out / 'diversity.csv'}")


@main.command()
@click.option("--input", "input_csv", type=click.Path(exists=True), required=True,
              help="CSV with a system column, metric columns, and a bypass column")
@click.option("--bypass-column", default="bypass_pct", show_default=True)
@click.pass_obj
@_exit_codes
def stats(ctx_obj, input_csv, bypass_column):
    """Correlate metric columns against bypass rates (three methods)."""
    with open(input_csv, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise ConfigError(f"{input_csv} has no data rows")
    if bypass_column not in rows[0]:
        raise ConfigError(f"column {bypass_column!r} not in {input_csv}")
    bypass = [float(r[bypass_column]) for r in rows]
    metrics: dict[str, list[float]] = {}
    for column in rows[0]:
        if column in (bypass_column, "system"):
            continue
        try:
            metrics[column] = [float(r[column]) for r in rows]
        except ValueError:
            log.debug("skipping non-numeric column %s", column)
    header, out_rows = correlations_from_columns(metrics, bypass)
    out = ctx_obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    path = out / "correlations.csv"
    write_csv(path, header, out_rows)
    click.echo(f"{len(out_rows)} metric rows -> {path}")


@main.command()
@click.option("--runs-dir", "summary_dirs", type=click.Path(exists=True), multiple=True,
              required=True, help="config output directory (repeatable, one per system)")
@click.option("--format", "fmt", type=click.Choice(["csv", "text"]), default="csv",
              show_default=True)
@click.option("--reference", is_flag=True,
              help="also emit the shipped reference tables for side-by-side reading")
@click.pass_obj
@_exit_codes
def report(ctx_obj, summary_dirs, fmt, reference):
    """Emit per-WAF, diversity, and correlation tables from run summaries."""
    written = emit_report(list(summary_dirs), ctx_obj["out"], fmt, reference)
    for path in written:
        click.echo(str(path))


@main.command()
@click.pass_obj
@_exit_codes
def grid(ctx_obj):
    """Run the (temperature, theta) grid defined by the config file."""
    if not ctx_obj["config_path"]:
        raise ConfigError("grid needs --config <file>")
    data = load_config_file(ctx_obj["config_path"])
    spec = parse_grid(data)
    spec = type(spec)(
        base=_apply_global_overrides(ctx_obj, spec.base),
        temperatures=spec.temperatures,
        thetas=spec.thetas,
    )
    result = run_grid(spec, ctx_obj["registry"], ctx_obj["out"])
    click.echo(f"grid: {len(result['rows'])} configs, {len(result['failures'])} failures")
    if result["best"]:
        best = result["best"]
        click.echo(
            f"best: theta={best['theta']} T={best['temperature']} "
            f"mean={best['mean_pct']:.2f}%"
        )
    if result["failures"]:
        sys.exit(EXIT_PARTIAL)
    if any(row.get("total_shortfall") or row.get("mean_pct") is None for row in result["rows"]):
        sys.exit(EXIT_PARTIAL)


@main.command("seed-ablation")
@click.option("--seeds", "seeds_path", type=click.Path(exists=True), required=True)
@click.option("--framing", type=click.Choice(["raw", "string_context"]),
              default="string_context", show_default=True)
@click.option("--n", type=int, default=1000, show_default=True)
@click.option("--runs", type=int, default=5, show_default=True)
@click.option("--seeds-only", is_flag=True, help="evaluate the raw seeds and stop")
@click.option("--format", "fmt", type=click.Choice(["csv", "text"]), default="csv",
              show_default=True)
@click.pass_obj
@_exit_codes
def seed_ablation_cmd(ctx_obj, seeds_path, framing, n, runs, seeds_only, fmt):
    """Compare raw seeds against the two seeded generation systems."""
    base = ExperimentConfig(
        generator="seed_only",
        seeds_path=seeds_path,
        seed_framing=framing,
        n=n,
        runs=runs,
        rng_seed=ctx_obj["seed"] if ctx_obj["seed"] is not None else 1,
    )
    base = _apply_global_overrides(ctx_obj, base)
    systems = []
    if not seeds_only:
        systems = [
            base.replace(generator="template_icl", label="template-icl-v2"),
            base.replace(generator="reflexqli", label="reflexqli-v2"),
        ]
    result = seed_ablation(base, systems, ctx_obj["registry"], ctx_obj["out"], fmt)
    rate = result["seed_only"]["overall_rate"]
    click.echo(f"seed-only overall rate: {rate:.2f}%" if rate is not None else "seed-only: n/a")
    for summary in result["systems"]:
        click.echo(f"{summary['label']}: mean {summary['mean_pct']:.2f}%")


if __name__ == "__main__":
    main()

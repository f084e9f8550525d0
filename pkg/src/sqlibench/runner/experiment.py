"""Single-configuration experiment execution.

One experiment = ``runs`` sequential runs with derived seeds
(base seed + run index). Each run generates payloads, scores post-hoc
diversity, evaluates the payload x detector matrix, and writes its
artifacts under ``<out>/<config_digest>/run_<k>/``. Nothing written here
contains wall-clock values, so identical configs reproduce byte-identical
trees.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import asdict
from pathlib import Path

from ..diversity.report import DiversityReport, score_payload_set
from ..errors import ConfigError, NoDataError
from ..evaluation.dbexec import build_mysql_executor
from ..evaluation.executor import EmbeddedExecutor
from ..evaluation.matrix import run_evaluation_matrix
from ..evaluation.mlstub import MlStubWaf
from ..evaluation.remote import RemoteWaf, RemoteWafConfig
from ..evaluation.rules import RuleWaf, load_ruleset
from ..generators import (
    GenerationParams,
    GenerationResult,
    ReflexParams,
    SeedList,
    generate_radagas,
    generate_reflexqli,
    generate_template_icl,
    generate_traditional,
    generate_vanilla,
    load_seed_list,
    seed_only_payloads,
    write_payloads_jsonl,
)
from ..knowledge.chunking import chunk_document
from ..knowledge.embedding import HashedNgramEmbedder
from ..knowledge.index import build_index, load_index
from ..llm.base import ProviderRegistry
from ..resources import (
    builtin_catalog_path,
    builtin_kb_text,
    builtin_ml_weights_path,
    builtin_ruleset_path,
)
from ..stats.summaries import bypass_rate, mean_sigma
from .config import ExperimentConfig

log = logging.getLogger(__name__)

SUMMARY_VERSION = 1


def build_detectors(specs: tuple[str, ...]) -> list:
    """Detector spec strings: rule:pl<1-3>[:ruleset.json], ml[:weights.json],
    remote:<config.json>."""
    detectors = []
    default_rules = None
    for spec in specs:
        parts = spec.split(":")
        kind = parts[0]
        if kind == "rule":
            if len(parts) < 2 or not parts[1].startswith("pl"):
                raise ConfigError(f"bad rule detector spec {spec!r}")
            level = int(parts[1][2:])
            if len(parts) > 2:
                rules = load_ruleset(":".join(parts[2:]))
            else:
                if default_rules is None:
                    default_rules = load_ruleset(builtin_ruleset_path())
                rules = default_rules
            detectors.append(RuleWaf(rules, level))
        elif kind == "ml":
            path = ":".join(parts[1:]) if len(parts) > 1 else builtin_ml_weights_path()
            detectors.append(MlStubWaf.from_file(path))
        elif kind == "remote":
            if len(parts) < 2:
                raise ConfigError(f"remote detector spec needs a config path: {spec!r}")
            with open(":".join(parts[1:]), encoding="utf-8") as fh:
                raw = json.load(fh)
            detectors.append(
                RemoteWaf(
                    RemoteWafConfig(
                        url=raw["url"],
                        param=raw.get("param", "q"),
                        block_statuses=frozenset(raw.get("block_statuses", [403, 406])),
                        pass_statuses=frozenset(raw.get("pass_statuses", [200])),
                        timeout_s=float(raw.get("timeout_s", 10.0)),
                        detector_id=raw.get("detector_id", "remote-waf"),
                    )
                )
            )
        else:
            raise ConfigError(f"unknown detector spec {spec!r}")
    return detectors


def build_executor(config: ExperimentConfig):
    if config.executor == "embedded":
        return EmbeddedExecutor()
    if config.executor == "mysql":
        return build_mysql_executor(config.db)
    return None


def build_knowledge_index(config: ExperimentConfig, embedder: HashedNgramEmbedder):
    if config.kb_index:
        index = load_index(config.kb_index)
        if index.dimension != embedder.dimension:
            raise ConfigError(
                f"index {config.kb_index} has dimension {index.dimension}, "
                f"embedder provides {embedder.dimension}"
            )
        return index
    if config.kb_paths:
        chunks = []
        for path in config.kb_paths:
            text = Path(path).read_text(encoding="utf-8")
            for chunk in chunk_document(text, source_doc=Path(path).name):
                chunks.append(chunk)
        # renumber ids across documents so tie-breaking stays well defined
        from ..knowledge.chunking import Chunk

        chunks = [Chunk(i, c.text, c.source_doc, c.offset) for i, c in enumerate(chunks)]
    else:
        chunks = chunk_document(builtin_kb_text(), source_doc="builtin")
    return build_index(chunks, embedder)


def _load_seeds(config: ExperimentConfig) -> SeedList | None:
    if not config.seeds_path:
        return None
    return load_seed_list(config.seeds_path, config.seed_framing)


def generate_for_run(
    config: ExperimentConfig,
    registry: ProviderRegistry,
    run_index: int,
    run_dir: Path,
    shared: dict,
) -> GenerationResult:
    params = GenerationParams(
        n=config.n,
        temperature=config.temperature,
        diversity_theta=config.theta,
        rng_seed=config.rng_seed + run_index,
        run_id=f"run_{run_index}",
        config_digest=config.digest(),
    )
    seeds = shared.get("seeds")
    if config.generator == "traditional":
        return generate_traditional(config.catalog_path or builtin_catalog_path(), params)
    if config.generator == "seed_only":
        if seeds is None:
            raise ConfigError("seed_only requires seeds_path")
        return seed_only_payloads(seeds, params.run_id, params.config_digest)
    provider = registry.get(config.provider)
    if config.generator == "vanilla":
        return generate_vanilla(provider, params)
    if config.generator == "template_icl":
        if seeds is None:
            raise ConfigError("template_icl requires seeds_path")
        return generate_template_icl(provider, seeds, params)
    if config.generator == "radagas":
        return generate_radagas(
            provider,
            shared["index"],
            config.query,
            params,
            executor=shared.get("gate_executor"),
            embedder=shared["embedder"],
            seeds=seeds,
            mmr_lambda=config.mmr_lambda,
        )
    if config.generator == "reflexqli":
        disc = registry.get(config.discriminator_provider or config.provider)
        return generate_reflexqli(
            provider,
            disc,
            params,
            ReflexParams(config.reflex_i_max, config.reflex_tau, config.waf_profile),
            seeds=seeds,
            cot_dir=run_dir / "cot",
        )
    raise ConfigError(f"unhandled generator {config.generator!r}")


def run_experiment(
    config: ExperimentConfig, registry: ProviderRegistry, out_root: str | Path
) -> dict:
    """Execute all runs for one config; returns the written summary dict."""
    digest = config.digest()
    out_dir = Path(out_root) / digest
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(
        json.dumps({"version": 1, **asdict(config)}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    embedder = HashedNgramEmbedder()
    detectors = build_detectors(config.detectors)
    executor = build_executor(config)
    shared = {"embedder": embedder, "seeds": _load_seeds(config)}
    if config.generator == "radagas":
        shared["index"] = build_knowledge_index(config, embedder)
        shared["gate_executor"] = executor

    per_run = []
    total_shortfall = 0
    for run_index in range(config.runs):
        run_dir = out_dir / f"run_{run_index}"
        run_dir.mkdir(exist_ok=True)
        result = generate_for_run(config, registry, run_index, run_dir, shared)
        total_shortfall += result.shortfall
        per_run.append(
            _evaluate_run(config, result, detectors, executor, run_dir, embedder)
        )

    rates = [r["overall_rate"] for r in per_run if r["overall_rate"] is not None]
    mean, sigma = mean_sigma(rates) if rates else (None, None)
    detector_ids = [d.detector_id for d in detectors] + (
        [executor.detector_id] if executor else []
    )
    summary = {
        "version": SUMMARY_VERSION,
        "config_digest": digest,
        "label": config.display_label,
        "generator": config.generator,
        "provider": config.provider,
        "temperature": config.temperature,
        "theta": config.theta if config.generator == "radagas" else None,
        "n": config.n,
        "runs": config.runs,
        "detector_ids": detector_ids,
        "per_run": per_run,
        "mean_pct": mean,
        "sigma_pct": sigma,
        "detector_means": _detector_means(per_run, detector_ids),
        "diversity_mean": _diversity_means(per_run),
        "total_shortfall": total_shortfall,
        "complete": True,
    }
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return summary


def _evaluate_run(config, result, detectors, executor, run_dir: Path, embedder) -> dict:
    payloads = result.payloads
    write_payloads_jsonl(payloads, str(run_dir / "payloads.jsonl"))
    stats = {
        "attempts": result.attempts,
        "calls": result.calls,
        "refusals": result.refusals,
        "dropped": result.dropped,
        "iterations": result.iterations,
        "shortfall": result.shortfall,
        "delivered": len(payloads),
        "response_chars": result.response_chars,
    }
    (run_dir / "generation_stats.json").write_text(
        json.dumps(stats, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if result.acceptance_log:
        with open(run_dir / "acceptance_log.jsonl", "w", encoding="utf-8") as fh:
            for entry in result.acceptance_log:
                fh.write(json.dumps(entry, ensure_ascii=False, sort_keys=True) + "\n")

    run_summary: dict = {
        "run_id": run_dir.name,
        "delivered": len(payloads),
        "shortfall": result.shortfall,
        "rates": {},
        "overall_rate": None,
        "diversity": None,
    }
    if not payloads:
        log.warning("%s: run produced no payloads; skipping evaluation", run_dir.name)
        (run_dir / "run_summary.json").write_text(
            json.dumps(run_summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        return run_summary

    texts = [p.text for p in payloads]
    matrix = run_evaluation_matrix(
        texts, detectors, executor, store_path=str(run_dir / "evaluation.csv")
    )

    rates = {}
    detector_ids = [d.detector_id for d in detectors] + (
        [executor.detector_id] if executor else []
    )
    for detector_id in detector_ids:
        try:
            summary = bypass_rate(matrix.records, detector_id)
            rates[detector_id] = summary.rate_pct
        except NoDataError:
            rates[detector_id] = None
    usable = [v for v in rates.values() if v is not None]
    overall = sum(usable) / len(usable) if usable else None

    with open(run_dir / "bypass.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["detector_id", "bypassed", "tested", "rate_pct"])
        for detector_id in detector_ids:
            try:
                s = bypass_rate(matrix.records, detector_id)
                writer.writerow([s.detector_id, s.bypassed, s.tested, f"{s.rate_pct:.4f}"])
            except NoDataError:
                writer.writerow([detector_id, 0, 0, ""])
        if overall is not None:
            writer.writerow(["overall_mean", "", "", f"{overall:.4f}"])

    diversity = None
    if matrix.signatures is not None:
        report, details = score_payload_set(texts, matrix.signatures, embedder)
        diversity = asdict(report)
        _write_diversity_csv(run_dir, report, details, matrix.signatures)
    else:
        log.warning("no executor configured; functional diversity unavailable for %s", run_dir)

    run_summary.update(rates=rates, overall_rate=overall, diversity=diversity)
    (run_dir / "run_summary.json").write_text(
        json.dumps(run_summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return run_summary


def _write_diversity_csv(run_dir: Path, report: DiversityReport, details, signatures):
    with open(run_dir / "diversity.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["uniqueness_pct", "semantic", "lexical", "contextual", "ngram", "ast",
             "functional", "total"]
        )
        writer.writerow(
            [f"{report.uniqueness_pct:.4f}"] +
            [f"{getattr(report, m):.6f}" for m in
             ("semantic", "lexical", "contextual", "ngram", "ast", "functional", "total")]
        )
    with open(run_dir / "diversity_detail.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["index", "semantic", "lexical", "contextual", "ngram", "ast",
             "category", "error_class", "row_bucket", "delay_bucket"]
        )
        for detail, sig in zip(details, signatures):
            writer.writerow(
                [detail.index] +
                [f"{v:.6f}" for v in
                 (detail.semantic, detail.lexical, detail.contextual, detail.ngram, detail.ast)] +
                [sig.category, sig.error_class, sig.row_bucket, sig.delay_bucket]
            )


def _detector_means(per_run: list[dict], detector_ids: list[str]) -> dict:
    means = {}
    for detector_id in detector_ids:
        values = [
            r["rates"].get(detector_id)
            for r in per_run
            if r["rates"].get(detector_id) is not None
        ]
        means[detector_id] = sum(values) / len(values) if values else None
    return means


def _diversity_means(per_run: list[dict]) -> dict | None:
    reports = [r["diversity"] for r in per_run if r["diversity"]]
    if not reports:
        return None
    keys = reports[0].keys()
    return {k: sum(r[k] for r in reports) / len(reports) for k in keys}

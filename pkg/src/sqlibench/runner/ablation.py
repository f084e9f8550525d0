"""Seed-effect ablation: raw seeds vs two seeded generation systems."""

from __future__ import annotations

import json
import logging
from pathlib import Path

from ..evaluation.matrix import run_evaluation_matrix
from ..generators import load_seed_list, seed_only_payloads, write_payloads_jsonl
from ..llm.base import ProviderRegistry
from ..stats.summaries import bypass_rate
from ..errors import NoDataError
from .config import ExperimentConfig
from .experiment import build_detectors, build_executor, run_experiment
from .reports import format_text_table, write_csv

log = logging.getLogger(__name__)


def evaluate_seed_only(config: ExperimentConfig, out_dir: Path) -> dict:
    """Evaluate the framed seeds directly against the configured detectors."""
    seeds = load_seed_list(config.seeds_path, config.seed_framing)
    result = seed_only_payloads(seeds, "seed_only", config.digest())
    out_dir.mkdir(parents=True, exist_ok=True)
    write_payloads_jsonl(result.payloads, str(out_dir / "payloads.jsonl"))

    detectors = build_detectors(config.detectors)
    executor = build_executor(config)
    matrix = run_evaluation_matrix(
        [p.text for p in result.payloads],
        detectors,
        executor,
        store_path=str(out_dir / "evaluation.csv"),
    )
    detector_ids = [d.detector_id for d in detectors] + (
        [executor.detector_id] if executor else []
    )
    rates = {}
    for detector_id in detector_ids:
        try:
            rates[detector_id] = bypass_rate(matrix.records, detector_id).rate_pct
        except NoDataError:
            rates[detector_id] = None
    usable = [v for v in rates.values() if v is not None]
    summary = {
        "label": "Seed-Only",
        "rates": rates,
        "overall_rate": sum(usable) / len(usable) if usable else None,
        "mysql_rate": rates.get("mysql-exec"),
        "seed_count": len(result.payloads),
    }
    (out_dir / "seed_only_summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return summary


def seed_ablation(
    base_config: ExperimentConfig,
    system_configs: list[ExperimentConfig],
    registry: ProviderRegistry,
    out_root: str | Path,
    fmt: str = "csv",
) -> dict:
    """Seed-only row plus one row per seeded system, with deltas vs seeds.

    ``system_configs`` may be empty for the seeds-only minimal mode.
    """
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)
    seed_summary = evaluate_seed_only(base_config, out_root / "seed_only")
    seed_rate = seed_summary["overall_rate"]

    system_summaries = []
    for config in system_configs:
        system_summaries.append(run_experiment(config, registry, out_root))

    header = ["configuration", "bypass_pct", "sigma_pct", "mysql_pct", "delta_vs_seed"]
    rows: list[list] = [
        [seed_summary["label"], seed_rate, None, seed_summary["mysql_rate"], None]
    ]
    for summary in system_summaries:
        mean = summary["mean_pct"]
        delta = None if (mean is None or seed_rate is None) else mean - seed_rate
        rows.append(
            [
                summary["label"],
                mean,
                summary["sigma_pct"],
                summary["detector_means"].get("mysql-exec"),
                delta,
            ]
        )
    write_csv(out_root / "seed_effect_summary.csv", header, rows)
    if fmt == "text":
        (out_root / "seed_effect_summary.txt").write_text(
            format_text_table(header, rows), encoding="utf-8"
        )

    per_waf = None
    if len(system_summaries) == 2:
        a, b = system_summaries
        detector_ids = [d for d in a["detector_ids"] if d in b["detector_ids"]]
        waf_header = ["waf", a["label"], b["label"], "delta"]
        waf_rows = []
        for detector_id in detector_ids:
            ra = a["detector_means"].get(detector_id)
            rb = b["detector_means"].get(detector_id)
            delta = None if (ra is None or rb is None) else rb - ra
            waf_rows.append([detector_id, ra, rb, delta])
        ma, mb = a["mean_pct"], b["mean_pct"]
        waf_rows.append(
            ["mean", ma, mb, None if (ma is None or mb is None) else mb - ma]
        )
        write_csv(out_root / "seed_effect_per_waf.csv", waf_header, waf_rows)
        if fmt == "text":
            (out_root / "seed_effect_per_waf.txt").write_text(
                format_text_table(waf_header, waf_rows), encoding="utf-8"
            )
        per_waf = {"header": waf_header, "rows": waf_rows}

    return {"seed_only": seed_summary, "systems": system_summaries, "per_waf": per_waf}

"""Parameter-grid execution over (temperature, theta) cross products."""

from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ..llm.base import ProviderRegistry
from .config import GridSpec
from .experiment import run_experiment

log = logging.getLogger(__name__)

GRID_SUMMARY_COLUMNS = ("model", "theta", "temperature", "mean_pct", "sigma_pct")


def run_grid(
    spec: GridSpec,
    registry: ProviderRegistry,
    out_root: str | Path,
    resume: bool = True,
    max_workers: int = 2,
) -> dict:
    """Run every grid config; per-config failures are recorded, not fatal.

    With ``resume`` a config whose complete summary already exists on disk is
    loaded instead of re-run, so an interrupted grid picks up where it left
    off.
    """
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)
    configs = spec.configs()

    def one(config):
        summary_path = out_root / config.digest() / "summary.json"
        if resume and summary_path.exists():
            try:
                existing = json.loads(summary_path.read_text(encoding="utf-8"))
                if existing.get("complete"):
                    log.info("grid: reusing complete config %s", config.digest())
                    return config, existing, None
            except (OSError, json.JSONDecodeError):
                pass
        try:
            return config, run_experiment(config, registry, out_root), None
        except Exception as exc:  # noqa: BLE001 - grid keeps going
            log.error("grid: config %s failed: %s", config.digest(), exc)
            return config, None, str(exc)

    if max_workers > 1 and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(one, configs))
    else:
        results = [one(c) for c in configs]

    rows = []
    failures = []
    for config, summary, error in results:
        if summary is None:
            failures.append({"config_digest": config.digest(), "error": error})
            continue
        rows.append(
            {
                "model": summary["provider"],
                "theta": config.theta,
                "temperature": config.temperature,
                "mean_pct": summary["mean_pct"],
                "sigma_pct": summary["sigma_pct"],
                "config_digest": summary["config_digest"],
                "total_shortfall": summary.get("total_shortfall", 0),
            }
        )

    # mean descending; ties resolved by (theta asc, temperature asc)
    rows.sort(
        key=lambda r: (
            -(r["mean_pct"] if r["mean_pct"] is not None else float("-inf")),
            r["theta"],
            r["temperature"],
        )
    )
    with open(out_root / "grid_summary.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(GRID_SUMMARY_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    row["model"],
                    row["theta"],
                    row["temperature"],
                    "" if row["mean_pct"] is None else f"{row['mean_pct']:.4f}",
                    "" if row["sigma_pct"] is None else f"{row['sigma_pct']:.4f}",
                ]
            )

    best = rows[0] if rows else None
    grid_result = {"best": best, "rows": rows, "failures": failures}
    (out_root / "best_config.json").write_text(
        json.dumps({"best": best, "failures": failures}, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return grid_result

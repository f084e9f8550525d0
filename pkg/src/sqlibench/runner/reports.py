"""Report emission: per-WAF matrix, diversity table, correlation table.

Reports are emitted as CSV (machine) and aligned text (human). The shipped
reference result tables can be rendered side by side with local
measurements; those reference numbers come from external systems and are
informational, never acceptance targets.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

from ..errors import ConfigError, NoDataError
from ..resources import reference_csv_path
from ..stats.correlations import kendall, pearson, spearman

log = logging.getLogger(__name__)

DIVERSITY_COLUMNS = (
    "uniqueness_pct", "semantic", "lexical", "contextual", "ngram", "ast",
    "functional", "total",
)

REFERENCE_TABLES = (
    "per_waf_rates.csv",
    "cross_system_diversity.csv",
    "cross_system_correlations.csv",
    "seed_effect_summary.csv",
    "seed_effect_per_waf.csv",
    "seed_effect_diversity.csv",
)


def load_summary(config_dir: str | Path) -> dict:
    path = Path(config_dir) / "summary.json"
    try:
        summary = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load summary {path}: {exc}") from exc
    if not summary.get("complete"):
        raise ConfigError(f"summary {path} is incomplete")
    return summary


def per_waf_matrix(summaries: list[dict]) -> tuple[list[str], list[list]]:
    """Rows = systems, columns = detectors + unweighted overall mean."""
    detector_ids: list[str] = []
    for summary in summaries:
        for detector_id in summary["detector_ids"]:
            if detector_id not in detector_ids:
                detector_ids.append(detector_id)
    usable = [
        d for d in detector_ids
        if any(s["detector_means"].get(d) is not None for s in summaries)
    ]
    dropped = set(detector_ids) - set(usable)
    if dropped:
        log.warning("report: dropping detector columns with no data: %s", sorted(dropped))

    header = ["system", *usable, "overall_mean"]
    rows = []
    for summary in summaries:
        means = summary["detector_means"]
        values = [means.get(d) for d in usable]
        present = [v for v in values if v is not None]
        overall = sum(present) / len(present) if present else None
        rows.append([summary["label"], *values, overall])
    return header, rows


def diversity_table(summaries: list[dict]) -> tuple[list[str], list[list]]:
    header = ["system", "bypass_pct", *DIVERSITY_COLUMNS]
    rows = []
    for summary in summaries:
        div = summary.get("diversity_mean") or {}
        rows.append(
            [summary["label"], summary["mean_pct"], *[div.get(c) for c in DIVERSITY_COLUMNS]]
        )
    return header, rows


def correlation_table(summaries: list[dict]) -> tuple[list[str], list[list]]:
    """Metric-vs-bypass correlations across systems (needs >= 3 systems)."""
    points = [
        s for s in summaries
        if s.get("mean_pct") is not None and s.get("diversity_mean")
    ]
    if len(points) < 3:
        raise NoDataError(f"correlation table needs >= 3 systems, have {len(points)}")
    bypass = [s["mean_pct"] for s in points]
    header = ["metric", "pearson_r", "pearson_p", "spearman_rho", "spearman_p",
              "kendall_tau", "kendall_p"]
    rows = []
    for metric in DIVERSITY_COLUMNS:
        xs = [s["diversity_mean"][metric] for s in points]
        try:
            p = pearson(xs, bypass)
            sp = spearman(xs, bypass)
            k = kendall(xs, bypass)
            rows.append([metric, p.coefficient, p.p_value, sp.coefficient, sp.p_value,
                         k.coefficient, k.p_value])
        except Exception as exc:  # degenerate columns stay visible, not fatal
            log.warning("correlation for %s failed: %s", metric, exc)
            rows.append([metric, None, None, None, None, None, None])
    return header, rows


def correlations_from_columns(
    metrics: dict[str, list[float]], bypass: list[float]
) -> tuple[list[str], list[list]]:
    """Correlation table from explicit metric columns (the stats CLI path)."""
    header = ["metric", "pearson_r", "pearson_p", "spearman_rho", "spearman_p",
              "kendall_tau", "kendall_p"]
    rows = []
    for metric, xs in metrics.items():
        p = pearson(xs, bypass)
        sp = spearman(xs, bypass)
        k = kendall(xs, bypass)
        rows.append([metric, p.coefficient, p.p_value, sp.coefficient, sp.p_value,
                     k.coefficient, k.p_value])
    return header, rows


def _fmt(value, places: int = 4) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.{places}f}"
    return str(value)


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def format_text_table(header: list[str], rows: list[list]) -> str:
    cells = [[_fmt(v) for v in row] for row in rows]
    widths = [
        max(len(header[i]), *(len(r[i]) for r in cells)) if cells else len(header[i])
        for i in range(len(header))
    ]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(header, widths)),
        "  ".join("-" * w for w in widths),
    ]
    for row in cells:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def read_reference_table(name: str) -> tuple[list[str], list[list]]:
    with open(reference_csv_path(name), newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [list(row) for row in reader]


def emit_report(
    summary_dirs: list[str],
    out_dir: str | Path,
    fmt: str = "csv",
    include_reference: bool = False,
) -> list[Path]:
    """Emit the three report tables; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summaries = [load_summary(d) for d in summary_dirs]
    if not summaries:
        raise NoDataError("no summaries to report")

    written: list[Path] = []
    tables: list[tuple[str, list[str], list[list]]] = []
    header, rows = per_waf_matrix(summaries)
    tables.append(("report_per_waf", header, rows))
    header, rows = diversity_table(summaries)
    tables.append(("report_diversity", header, rows))
    try:
        header, rows = correlation_table(summaries)
        tables.append(("report_correlations", header, rows))
    except NoDataError as exc:
        log.warning("report: %s", exc)

    for name, header, rows in tables:
        csv_path = out_dir / f"{name}.csv"
        write_csv(csv_path, header, rows)
        written.append(csv_path)
        if fmt == "text":
            txt_path = out_dir / f"{name}.txt"
            txt_path.write_text(format_text_table(header, rows), encoding="utf-8")
            written.append(txt_path)

    if include_reference:
        for name in REFERENCE_TABLES:
            header, rows = read_reference_table(name)
            ref_path = out_dir / f"reference_{name}"
            write_csv(ref_path, header, rows)
            written.append(ref_path)
            if fmt == "text":
                txt_path = out_dir / f"reference_{Path(name).stem}.txt"
                txt_path.write_text(format_text_table(header, rows), encoding="utf-8")
                written.append(txt_path)
    return written

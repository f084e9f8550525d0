from __future__ import annotations

import csv
import json

import pytest

from sqlibench.errors import ConfigError, NoDataError
from sqlibench.llm.base import ProviderRegistry
from sqlibench.llm.mock import MockProvider
from sqlibench.resources import builtin_seeds_path
from sqlibench.runner import (
    ExperimentConfig,
    GridSpec,
    correlation_table,
    diversity_table,
    emit_report,
    load_summary,
    parse_config,
    parse_grid,
    per_waf_matrix,
    read_reference_table,
    run_experiment,
    run_grid,
    seed_ablation,
)


@pytest.fixture()
def registry():
    reg = ProviderRegistry()
    reg.register(MockProvider())
    return reg


def _config(**overrides):
    base = dict(generator="traditional", n=10, runs=2, rng_seed=5)
    base.update(overrides)
    return ExperimentConfig(**base)


class TestConfig:
    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError):
            parse_config({"generator": "vanilla", "n": 5, "runz": 3})

    def test_version_checked(self):
        with pytest.raises(ConfigError):
            parse_config({"version": 99, "generator": "vanilla"})

    def test_digest_stable_and_label_independent(self):
        a = _config(label="system-a")
        b = _config(label="system-b")
        assert a.digest() == b.digest()
        assert a.digest() == _config(label="system-a").digest()
        assert _config(n=11).digest() != a.digest()

    def test_defaults_match_protocol(self):
        config = parse_config({"generator": "vanilla"})
        assert config.n == 1000
        assert config.runs == 5
        assert config.temperature == 0.7

    def test_grid_cross_product(self):
        spec = parse_grid(
            {"generator": "radagas", "n": 5, "temperatures": [0.1, 0.9],
             "thetas": [0.7, 0.8, 0.9]}
        )
        configs = spec.configs()
        assert len(configs) == 6
        assert {(c.temperature, c.theta) for c in configs} == {
            (t, th) for t in (0.1, 0.9) for th in (0.7, 0.8, 0.9)
        }

    def test_bad_values(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(generator="nope")
        with pytest.raises(ConfigError):
            ExperimentConfig(generator="radagas", theta=1.5)
        with pytest.raises(ConfigError):
            ExperimentConfig(generator="template_icl")  # seeds required


class TestRunExperiment:
    def test_artifact_cardinality(self, registry, tmp_path):
        config = _config()
        summary = run_experiment(config, registry, tmp_path)
        out = tmp_path / config.digest()
        for run in ("run_0", "run_1"):
            payloads = (out / run / "payloads.jsonl").read_text().splitlines()
            assert len(payloads) == 10
            rows = (out / run / "evaluation.csv").read_text().splitlines()
            assert len(rows) == 1 + 10 * 5  # header + 4 detectors + executor
        assert summary["complete"] is True
        assert len(summary["per_run"]) == 2
        assert summary["sigma_pct"] is not None

    def test_deterministic_artifacts(self, registry, tmp_path):
        config = _config(generator="vanilla", provider="mock")
        run_experiment(config, registry, tmp_path / "a")
        run_experiment(config, registry, tmp_path / "b")
        digest = config.digest()
        for run in ("run_0", "run_1"):
            for name in ("payloads.jsonl", "evaluation.csv", "bypass.csv", "diversity.csv"):
                pa = (tmp_path / "a" / digest / run / name).read_bytes()
                pb = (tmp_path / "b" / digest / run / name).read_bytes()
                assert pa == pb, f"{run}/{name} differs"

    def test_run_seeds_derived_from_base(self, registry, tmp_path):
        config = _config(generator="vanilla", runs=2)
        summary = run_experiment(config, registry, tmp_path)
        p0 = (tmp_path / config.digest() / "run_0" / "payloads.jsonl").read_text()
        p1 = (tmp_path / config.digest() / "run_1" / "payloads.jsonl").read_text()
        texts0 = [json.loads(l)["text"] for l in p0.splitlines()]
        texts1 = [json.loads(l)["text"] for l in p1.splitlines()]
        assert texts0 != texts1  # run index shifts the seed

    def test_overall_rate_is_unweighted_detector_mean(self, registry, tmp_path):
        config = _config()
        summary = run_experiment(config, registry, tmp_path)
        for run in summary["per_run"]:
            rates = [v for v in run["rates"].values() if v is not None]
            assert run["overall_rate"] == pytest.approx(sum(rates) / len(rates), abs=1e-9)


class TestGrid:
    def test_rows_and_best(self, registry, tmp_path):
        base = ExperimentConfig(generator="radagas", n=6, runs=1, rng_seed=3)
        spec = GridSpec(base, (0.3, 0.9), (0.75, 0.9))
        result = run_grid(spec, registry, tmp_path, max_workers=1)
        assert len(result["rows"]) == 4
        assert not result["failures"]
        summary_csv = (tmp_path / "grid_summary.csv").read_text().splitlines()
        assert summary_csv[0] == "model,theta,temperature,mean_pct,sigma_pct"
        assert len(summary_csv) == 5
        means = []
        for line in summary_csv[1:]:
            mean = line.split(",")[3]
            means.append(float(mean) if mean else float("-inf"))
        assert means == sorted(means, reverse=True)

    def test_resume_skips_complete_configs(self, registry, tmp_path):
        base = ExperimentConfig(generator="traditional", n=5, runs=1, rng_seed=1)
        spec = GridSpec(base, (0.7,), (0.8,))
        run_grid(spec, registry, tmp_path, max_workers=1)
        digest = spec.configs()[0].digest()
        marker = tmp_path / digest / "run_0" / "payloads.jsonl"
        marker.unlink()  # resume must not regenerate this
        result = run_grid(spec, registry, tmp_path, resume=True, max_workers=1)
        assert not marker.exists()
        assert len(result["rows"]) == 1

    def test_failed_config_recorded_not_fatal(self, tmp_path):
        registry = ProviderRegistry()  # no providers registered at all
        base = ExperimentConfig(generator="vanilla", provider="ghost", n=3, runs=1)
        spec = GridSpec(base, (0.7,), (0.8,))
        result = run_grid(spec, registry, tmp_path, max_workers=1)
        assert len(result["failures"]) == 1
        assert result["rows"] == []


class TestReports:
    @pytest.fixture()
    def three_systems(self, registry, tmp_path):
        dirs = []
        for generator, seed in (("traditional", 1), ("vanilla", 2), ("reflexqli", 3)):
            config = ExperimentConfig(
                generator=generator, n=8, runs=2, rng_seed=seed,
                label=f"sys-{generator}",
            )
            run_experiment(config, registry, tmp_path)
            dirs.append(str(tmp_path / config.digest()))
        return dirs

    def test_per_waf_matrix_shape(self, three_systems):
        summaries = [load_summary(d) for d in three_systems]
        header, rows = per_waf_matrix(summaries)
        assert header[0] == "system"
        assert header[-1] == "overall_mean"
        assert len(header) == 2 + 5  # 4 detectors + executor
        assert len(rows) == 3
        for row in rows:
            values = [v for v in row[1:-1] if v is not None]
            assert row[-1] == pytest.approx(sum(values) / len(values), abs=1e-9)

    def test_diversity_table_shape(self, three_systems):
        summaries = [load_summary(d) for d in three_systems]
        header, rows = diversity_table(summaries)
        assert header == [
            "system", "bypass_pct", "uniqueness_pct", "semantic", "lexical",
            "contextual", "ngram", "ast", "functional", "total",
        ]
        assert len(rows) == 3

    def test_correlation_needs_three_systems(self, three_systems):
        summaries = [load_summary(d) for d in three_systems[:2]]
        with pytest.raises(NoDataError):
            correlation_table(summaries)
        header, rows = correlation_table([load_summary(d) for d in three_systems])
        assert len(rows) == 8  # six metrics + uniqueness + total

    def test_emit_report_files(self, three_systems, tmp_path):
        out = tmp_path / "report"
        written = emit_report(three_systems, out, fmt="text", include_reference=True)
        names = {p.name for p in written}
        assert "report_per_waf.csv" in names
        assert "report_diversity.txt" in names
        assert "reference_per_waf_rates.csv" in names

    def test_reference_tables_load(self):
        for name in ("per_waf_rates.csv", "cross_system_diversity.csv",
                     "cross_system_correlations.csv", "seed_effect_summary.csv",
                     "seed_effect_per_waf.csv", "seed_effect_diversity.csv"):
            header, rows = read_reference_table(name)
            assert header and rows


class TestSeedAblation:
    def test_minimal_seed_only_mode(self, registry, tmp_path):
        base = ExperimentConfig(
            generator="seed_only", seeds_path=builtin_seeds_path(),
            seed_framing="string_context", n=11, runs=1,
        )
        result = seed_ablation(base, [], registry, tmp_path)
        assert result["seed_only"]["seed_count"] == 11
        assert result["systems"] == []
        summary = (tmp_path / "seed_effect_summary.csv").read_text().splitlines()
        assert len(summary) == 2  # header + seed-only row

    def test_delta_is_system_minus_seed(self, registry, tmp_path):
        base = ExperimentConfig(
            generator="seed_only", seeds_path=builtin_seeds_path(),
            seed_framing="string_context", n=10, runs=2, rng_seed=3,
        )
        systems = [
            base.replace(generator="template_icl", label="icl-v2"),
            base.replace(generator="reflexqli", label="reflex-v2"),
        ]
        result = seed_ablation(base, systems, registry, tmp_path)
        seed_rate = result["seed_only"]["overall_rate"]
        with open(tmp_path / "seed_effect_summary.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 3
        for row, summary in zip(rows[1:], result["systems"]):
            assert float(row["delta_vs_seed"]) == pytest.approx(
                summary["mean_pct"] - seed_rate, abs=1e-3
            )
        per_waf = (tmp_path / "seed_effect_per_waf.csv").read_text().splitlines()
        assert per_waf[0] == "waf,icl-v2,reflex-v2,delta"
        assert per_waf[-1].startswith("mean,")

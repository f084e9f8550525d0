"""Access to the data files shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_path(*parts: str) -> Path:
    return Path(str(resources.files("sqlibench") / "data")).joinpath(*parts)


def builtin_catalog_path() -> str:
    return str(data_path("catalog.txt"))


def builtin_ruleset_path() -> str:
    return str(data_path("waf_rules.json"))


def builtin_ml_weights_path() -> str:
    return str(data_path("ml_weights.json"))


def builtin_seeds_path() -> str:
    return str(data_path("seeds.txt"))


def builtin_kb_text() -> str:
    return data_path("kb", "sqli_techniques.txt").read_text(encoding="utf-8")


def reference_csv_path(name: str) -> str:
    return str(data_path("reference", name))

"""Experiment configuration: schema, validation, content digest."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields

from ..errors import ConfigError
from ..generators.base import GENERATORS

CONFIG_VERSION = 1

DEFAULT_QUERY = "string-context MySQL injection techniques that bypass signature-based filters"
DEFAULT_WAF_PROFILE = "generic signature-based WAF, CRS-like ruleset with paranoia levels"
DEFAULT_DETECTORS = ("rule:pl1", "rule:pl2", "rule:pl3", "ml")


@dataclass(frozen=True)
class ExperimentConfig:
    generator: str
    provider: str = "mock"
    discriminator_provider: str | None = None  # None: same as provider
    n: int = 1000
    runs: int = 5
    temperature: float = 0.7
    theta: float = 0.8
    rng_seed: int = 1
    mmr_lambda: float = 0.5
    query: str = DEFAULT_QUERY
    reflex_i_max: int = 3
    reflex_tau: int = 7
    waf_profile: str = DEFAULT_WAF_PROFILE
    seeds_path: str | None = None
    seed_framing: str = "raw"
    detectors: tuple[str, ...] = DEFAULT_DETECTORS
    executor: str = "embedded"  # embedded | none | mysql
    db: dict | None = None  # host/port/database/user, password_env
    kb_paths: tuple[str, ...] = ()  # empty: built-in knowledge document
    kb_index: str | None = None  # prebuilt index file; overrides kb_paths
    catalog_path: str | None = None  # None: built-in catalog
    label: str | None = None  # report display name

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ConfigError(
                f"unknown generator {self.generator!r} (one of {', '.join(GENERATORS)})"
            )
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if self.runs < 1:
            raise ConfigError(f"runs must be >= 1, got {self.runs}")
        if not 0.0 <= self.temperature <= 2.0:
            raise ConfigError(f"temperature {self.temperature} outside [0, 2]")
        if self.generator == "radagas" and not 0.0 < self.theta < 1.0:
            raise ConfigError(f"theta {self.theta} outside (0, 1)")
        if self.executor not in ("embedded", "none", "mysql"):
            raise ConfigError(
                f"executor must be embedded, none, or mysql, got {self.executor!r}"
            )
        if self.executor == "mysql" and not self.db:
            raise ConfigError("executor 'mysql' requires a db config block")
        if self.seed_framing not in ("raw", "string_context"):
            raise ConfigError(f"seed_framing must be raw or string_context")
        if self.generator in ("template_icl", "seed_only") and not self.seeds_path:
            raise ConfigError(f"generator {self.generator} requires seeds_path")

    @property
    def display_label(self) -> str:
        return self.label or f"{self.generator}-{self.provider}"

    def digest(self) -> str:
        """Stable content hash; identical configs share an output directory."""
        payload = {k: v for k, v in asdict(self).items() if k != "label"}
        canonical = json.dumps(payload, sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]

    def replace(self, **overrides) -> "ExperimentConfig":
        data = asdict(self)
        data.update(overrides)
        for key in ("detectors", "kb_paths"):
            data[key] = tuple(data[key])
        return ExperimentConfig(**data)


@dataclass(frozen=True)
class GridSpec:
    base: ExperimentConfig
    temperatures: tuple[float, ...]
    thetas: tuple[float, ...]

    def __post_init__(self):
        if not self.temperatures or not self.thetas:
            raise ConfigError("grid needs at least one temperature and one theta")

    def configs(self) -> list[ExperimentConfig]:
        return [
            self.base.replace(temperature=t, theta=th)
            for t in self.temperatures
            for th in self.thetas
        ]


_CONFIG_FIELDS = {f.name for f in fields(ExperimentConfig)}
_TOP_LEVEL_KEYS = _CONFIG_FIELDS | {"version", "temperatures", "thetas"}


def parse_config(data: dict) -> ExperimentConfig:
    unknown = set(data) - _TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    version = data.get("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise ConfigError(f"unsupported config version {version} (expected {CONFIG_VERSION})")
    kwargs = {k: v for k, v in data.items() if k in _CONFIG_FIELDS}
    for key in ("detectors", "kb_paths"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    try:
        return ExperimentConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad config: {exc}") from exc


def parse_grid(data: dict) -> GridSpec:
    base = parse_config(data)
    temperatures = tuple(data.get("temperatures", (base.temperature,)))
    thetas = tuple(data.get("thetas", (base.theta,)))
    return GridSpec(base, temperatures, thetas)


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load config {path}: {exc}") from exc

"""Shared generator types, payload persistence, and seed handling."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from ..errors import SeedError

GENERATORS = ("traditional", "vanilla", "template_icl", "radagas", "reflexqli", "seed_only")

STRING_CONTEXT_PREFIX = "' "
STRING_CONTEXT_SUFFIX = " -- "

BATCH_SIZE = 10  # payload requests per LLM call for batched generators


@dataclass(frozen=True)
class Payload:
    text: str
    generator: str
    run_id: str
    index: int
    config_digest: str
    seed_parent: str | None = None
    cot_trace_path: str | None = None
    discriminator_score: int | None = None


@dataclass(frozen=True)
class GenerationParams:
    n: int
    temperature: float = 0.7
    diversity_theta: float = 0.8  # consumed by radagas only
    rng_seed: int = 0
    run_id: str = "run0"
    config_digest: str = ""


@dataclass(frozen=True)
class ReflexParams:
    i_max: int = 3
    tau: int = 7  # accept when discriminator score < tau (max score 10)
    waf_profile: str = "generic signature-based WAF, CRS-like ruleset"

    def __post_init__(self):
        if self.i_max < 1:
            raise SeedError(f"i_max must be >= 1, got {self.i_max}")
        if not 0 <= self.tau <= 10:
            raise SeedError(f"tau must be in 0..10, got {self.tau}")


@dataclass(frozen=True)
class SeedList:
    seeds: tuple[str, ...]
    framing: str = "raw"  # raw | string_context

    def __post_init__(self):
        if not self.seeds:
            raise SeedError("seed list is empty")
        if self.framing not in ("raw", "string_context"):
            raise SeedError(f"unknown framing {self.framing!r}")

    def framed(self) -> list[str]:
        if self.framing == "raw":
            return list(self.seeds)
        return [f"{STRING_CONTEXT_PREFIX}{s}{STRING_CONTEXT_SUFFIX}" for s in self.seeds]


def load_seed_list(path: str, framing: str = "raw") -> SeedList:
    try:
        with open(path, encoding="utf-8") as fh:
            seeds = tuple(line.rstrip("\n") for line in fh if line.strip())
    except OSError as exc:
        raise SeedError(f"cannot read seed file {path}: {exc}") from exc
    return SeedList(seeds, framing)


@dataclass
class GenerationResult:
    """Payloads plus the run statistics the orchestrator reports."""

    payloads: list[Payload]
    attempts: int = 0
    calls: int = 0
    refusals: int = 0
    dropped: int = 0  # adversarial-loop slots that never passed
    iterations: int = 0  # adversarial-loop generation iterations
    shortfall: int = 0  # requested minus delivered when a budget ran out
    response_chars: int = 0  # provider output volume for the run
    acceptance_log: list[dict] = field(default_factory=list)


def derive_seed(base: int, *parts: int) -> int:
    """Stable per-call seed derivation; keeps runs reproducible call by call."""
    material = ":".join(str(p) for p in (base, *parts)).encode()
    return int.from_bytes(hashlib.blake2b(material, digest_size=8).digest(), "big")


def write_payloads_jsonl(payloads: list[Payload], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in payloads:
            record = {
                "text": p.text,
                "generator": p.generator,
                "run_id": p.run_id,
                "index": p.index,
                "config_digest": p.config_digest,
                "seed_parent": p.seed_parent,
            }
            if p.cot_trace_path is not None:
                record["cot_trace_path"] = p.cot_trace_path
            if p.discriminator_score is not None:
                record["discriminator_score"] = p.discriminator_score
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_payloads_jsonl(path: str) -> list[Payload]:
    payloads = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            record = json.loads(line)
            payloads.append(
                Payload(
                    text=record["text"],
                    generator=record["generator"],
                    run_id=record["run_id"],
                    index=record["index"],
                    config_digest=record["config_digest"],
                    seed_parent=record.get("seed_parent"),
                    cot_trace_path=record.get("cot_trace_path"),
                    discriminator_score=record.get("discriminator_score"),
                )
            )
    return payloads

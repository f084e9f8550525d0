"""Direct seed evaluation: wrap seed strings as payloads, no LLM involved."""

from __future__ import annotations

from .base import GenerationResult, Payload, SeedList


def seed_only_payloads(
    seeds: SeedList, run_id: str = "seed0", config_digest: str = ""
) -> GenerationResult:
    payloads = [
        Payload(
            text=framed,
            generator="seed_only",
            run_id=run_id,
            index=i,
            config_digest=config_digest,
            seed_parent=raw,
        )
        for i, (raw, framed) in enumerate(zip(seeds.seeds, seeds.framed()))
    ]
    return GenerationResult(payloads, attempts=len(payloads))

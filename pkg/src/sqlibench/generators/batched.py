"""Batched LLM generators: vanilla zero-shot and template-ICL.

Both accumulate extracted payloads until ``n`` are collected or the call
budget of 3n requests runs out; falling short is reported as a shortfall on
the result, not an abort (the run continues and logs it). Each call gets a
distinct derived request seed so a deterministic provider still produces
fresh batches.
"""

from __future__ import annotations

import logging

from ..errors import ProviderError, RefusalError
from ..llm.base import ChatProvider, ChatRequest
from ..llm.extract import extract_payloads
from ..llm.prompts import format_seed_block, render_prompt
from .base import (
    BATCH_SIZE,
    GenerationParams,
    GenerationResult,
    Payload,
    SeedList,
    derive_seed,
)

log = logging.getLogger(__name__)

CALL_BUDGET_FACTOR = 3


def _accumulate(
    provider: ChatProvider,
    params: GenerationParams,
    generator: str,
    build_prompt,
) -> GenerationResult:
    result = GenerationResult(payloads=[])
    budget = CALL_BUDGET_FACTOR * params.n
    while len(result.payloads) < params.n and result.calls < budget:
        want = min(BATCH_SIZE, params.n - len(result.payloads))
        prompt = build_prompt(want)
        request = ChatRequest(
            provider_id=provider.provider_id,
            prompt=prompt,
            temperature=params.temperature,
            seed=derive_seed(params.rng_seed, result.calls),
        )
        result.calls += 1
        try:
            response = provider.complete(request)
        except RefusalError as exc:
            result.refusals += 1
            log.info("%s: provider refusal (%s)", generator, exc)
            continue
        except ProviderError as exc:
            log.warning("%s: provider error, call skipped: %s", generator, exc)
            continue
        result.response_chars += len(response.text)
        for text in extract_payloads(response.text):
            if len(result.payloads) >= params.n:
                break
            result.payloads.append(
                Payload(
                    text=text,
                    generator=generator,
                    run_id=params.run_id,
                    index=len(result.payloads),
                    config_digest=params.config_digest,
                )
            )
    result.attempts = result.calls
    result.shortfall = params.n - len(result.payloads)
    if result.shortfall:
        log.warning(
            "%s: call budget exhausted at %d/%d payloads", generator, len(result.payloads), params.n
        )
    return result


def generate_vanilla(provider: ChatProvider, params: GenerationParams) -> GenerationResult:
    """Zero-shot generation: no context, no seeds, plain instruction."""

    def build_prompt(count: int) -> str:
        return render_prompt("vanilla_zero_shot", {"count": str(count)})

    return _accumulate(provider, params, "vanilla", build_prompt)


def generate_template_icl(
    provider: ChatProvider, seeds: SeedList, params: GenerationParams
) -> GenerationResult:
    """In-context mutation of the seed payloads (GenSQLi-style baseline)."""
    seed_block = format_seed_block(seeds.framed())

    def build_prompt(count: int) -> str:
        return render_prompt("template_icl", {"seeds": seed_block, "count": str(count)})

    return _accumulate(provider, params, "template_icl", build_prompt)

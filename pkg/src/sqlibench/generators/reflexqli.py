"""Chain-of-thought generation with an adversarial dual-LLM loop.

Phase 1 runs four chained completions per payload slot (WAF analysis,
evasion strategy, payload design, refinement), each consuming the previous
phase's text. Phase 2 generates a candidate from the refinement context and
asks the discriminator for a 0-10 detectability score; the candidate is
accepted when score < tau, otherwise a rejection line plus the score is
appended to the refinement context and the loop retries, up to i_max
iterations. Slots that never pass are dropped, never padded.
"""

from __future__ import annotations

import logging
import re
from pathlib import Path

from ..errors import ProviderError, RefusalError, ScoreParseError
from ..llm.base import ChatProvider, ChatRequest
from ..llm.extract import extract_payloads
from ..llm.prompts import SINGLE_PAYLOAD_CONTRACT, format_seed_block, render_prompt
from .base import (
    GenerationParams,
    GenerationResult,
    Payload,
    ReflexParams,
    SeedList,
    derive_seed,
)

log = logging.getLogger(__name__)

REJECT_FEEDBACK = "REJECT!: Detected patterns: refine payload"

_SCORE_TOKEN_RE = re.compile(r"\b(10|\d)\b")


def score_discriminator(
    provider: ChatProvider, payload: str, waf_profile: str, seed: int = 0
) -> int:
    """Ask the discriminator for a 0-10 detectability rating and parse it."""
    prompt = render_prompt(
        "discriminator_score", {"payload": payload, "waf_profile": waf_profile}
    )
    response = provider.complete(
        ChatRequest(provider_id=provider.provider_id, prompt=prompt, temperature=0.0, seed=seed)
    )
    m = _SCORE_TOKEN_RE.search(response.text)
    if m is None:
        raise ScoreParseError(f"no 0-10 integer in discriminator response: {response.text[:80]!r}")
    return int(m.group(1))


def generate_reflexqli(
    gen_provider: ChatProvider,
    disc_provider: ChatProvider,
    params: GenerationParams,
    reflex: ReflexParams,
    seeds: SeedList | None = None,
    cot_dir: str | Path | None = None,
) -> GenerationResult:
    result = GenerationResult(payloads=[])
    seed_block = format_seed_block(seeds.framed()) if seeds else None
    if cot_dir is not None:
        cot_dir = Path(cot_dir)
        cot_dir.mkdir(parents=True, exist_ok=True)

    for slot in range(params.n):
        base = derive_seed(params.rng_seed, slot)
        try:
            trace, phase1_chars = _run_phase1(gen_provider, params, reflex, base)
        except (ProviderError, RefusalError) as exc:
            log.warning("reflexqli: slot %d failed in reasoning phase: %s", slot, exc)
            result.dropped += 1
            continue
        result.response_chars += phase1_chars

        refinement = trace["refinement"]
        if seed_block:
            refinement += f"\n\nBEGIN EXAMPLES\n{seed_block}\nEND EXAMPLES"

        accepted_payload = None
        accepted_score = None
        iteration = 0
        while iteration < reflex.i_max and accepted_payload is None:
            gen_prompt = f"{refinement}\n\n{SINGLE_PAYLOAD_CONTRACT}"
            result.iterations += 1
            result.calls += 1
            try:
                response = gen_provider.complete(
                    ChatRequest(
                        provider_id=gen_provider.provider_id,
                        prompt=gen_prompt,
                        temperature=params.temperature,
                        seed=derive_seed(base, 100 + iteration),
                    )
                )
                result.response_chars += len(response.text)
                candidates = extract_payloads(response.text)
            except RefusalError:
                result.refusals += 1
                candidates = []
            except ProviderError as exc:
                log.warning("reflexqli: generation call failed: %s", exc)
                candidates = []

            score = None
            if candidates:
                try:
                    score = score_discriminator(
                        disc_provider,
                        candidates[0],
                        reflex.waf_profile,
                        seed=derive_seed(base, 200 + iteration),
                    )
                except (ScoreParseError, ProviderError, RefusalError) as exc:
                    log.info("reflexqli: scoring failed, iteration rejected: %s", exc)

            if candidates and score is not None and score < reflex.tau:
                accepted_payload = candidates[0]
                accepted_score = score
            else:
                feedback = f"\n\n{REJECT_FEEDBACK}"
                if score is not None:
                    feedback += f"\nDiscriminator score: {score}/10"
                refinement += feedback
                trace["feedback"] = trace.get("feedback", "") + feedback
            iteration += 1

        if accepted_payload is None:
            result.dropped += 1
            continue

        trace_path = None
        if cot_dir is not None:
            trace_path = f"cot/{params.run_id}_{slot:05d}.txt"
            _write_trace(cot_dir / f"{params.run_id}_{slot:05d}.txt", trace)
        result.payloads.append(
            Payload(
                text=accepted_payload,
                generator="reflexqli",
                run_id=params.run_id,
                index=len(result.payloads),
                config_digest=params.config_digest,
                cot_trace_path=trace_path,
                discriminator_score=accepted_score,
            )
        )

    result.shortfall = params.n - len(result.payloads)
    return result


def _run_phase1(
    provider: ChatProvider, params: GenerationParams, reflex: ReflexParams, base: int
) -> tuple[dict[str, str], int]:
    chars = 0

    def ask(template_id: str, bindings: dict[str, str], step: int) -> str:
        nonlocal chars
        response = provider.complete(
            ChatRequest(
                provider_id=provider.provider_id,
                prompt=render_prompt(template_id, bindings),
                temperature=params.temperature,
                seed=derive_seed(base, step),
            )
        )
        chars += len(response.text)
        return response.text

    analysis = ask("reflex_analysis", {"waf_profile": reflex.waf_profile}, 0)
    strategy = ask("reflex_strategy", {"analysis": analysis}, 1)
    design = ask("reflex_design", {"strategy": strategy}, 2)
    refinement = ask("reflex_refine", {"design": design}, 3)
    trace = {
        "analysis": analysis,
        "strategy": strategy,
        "design": design,
        "refinement": refinement,
    }
    return trace, chars


def _write_trace(path: Path, trace: dict[str, str]) -> None:
    sections = []
    for key in ("analysis", "strategy", "design", "refinement", "feedback"):
        if key in trace:
            sections.append(f"=== {key.upper()} ===\n{trace[key]}")
    path.write_text("\n\n".join(sections) + "\n", encoding="utf-8")

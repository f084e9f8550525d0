"""Retrieval-augmented generation with multi-stage diversity filtering.

Per accepted payload the loop retrieves k=3 context chunks by MMR, prompts
the model with the retrieved techniques plus the most recent accepted
payloads, then gates every extracted candidate through:

  (a) SQL validity: the candidate must parse inside the vulnerable template,
      and execute without SQL error when an executor is configured;
  (b) semantic diversity  > theta,
  (c) lexical diversity   > theta,
  (d) contextual max F1   < theta,

all against the accepted set at that moment. One shared theta drives the
three diversity gates with their written orientations. Every candidate
decision lands in the acceptance log so a run can be audited or replayed.
"""

from __future__ import annotations

import logging

from ..errors import EmptyIndexError, InvalidParamsError, ProviderError, RefusalError
from ..evaluation.executor import VULNERABLE_TEMPLATE, EmbeddedExecutor
from ..evaluation.sqlparser import SqlParseError, parse_sql
from ..knowledge.embedding import EmbeddingProvider, HashedNgramEmbedder
from ..knowledge.index import VectorIndex
from ..knowledge.mmr import RetrievalParams, mmr_retrieve
from ..llm.base import ChatProvider, ChatRequest
from ..llm.extract import extract_payloads
from ..llm.prompts import (
    format_context_block,
    format_recent_block,
    format_seed_block,
    render_prompt,
)
from .base import (
    BATCH_SIZE,
    GenerationParams,
    GenerationResult,
    Payload,
    SeedList,
    derive_seed,
)
from ..diversity.metrics import passes_filter

log = logging.getLogger(__name__)

ATTEMPT_BUDGET_FACTOR = 10
RETRIEVAL_K = 3
RECENT_WINDOW = 20  # accepted payloads carried in the prompt


def generate_radagas(
    provider: ChatProvider,
    index: VectorIndex,
    query: str,
    params: GenerationParams,
    executor: EmbeddedExecutor | None = None,
    embedder: EmbeddingProvider | None = None,
    seeds: SeedList | None = None,
    mmr_lambda: float = 0.5,
) -> GenerationResult:
    if len(index) == 0:
        raise EmptyIndexError("knowledge index is empty")
    if not 0.0 < params.diversity_theta < 1.0:
        raise InvalidParamsError(f"theta {params.diversity_theta} outside (0, 1)")
    embedder = embedder or HashedNgramEmbedder()
    query_vec = embedder.embed_text(query)
    retrieval = RetrievalParams(k=min(RETRIEVAL_K, len(index)), lambda_=mmr_lambda)
    seed_block = format_seed_block(seeds.framed()) if seeds else None

    result = GenerationResult(payloads=[])
    accepted: list[str] = []
    budget = ATTEMPT_BUDGET_FACTOR * params.n

    while len(accepted) < params.n and result.attempts < budget:
        chunks = mmr_retrieve(index, query_vec, retrieval)
        prompt = render_prompt(
            "radagas",
            {
                "query": query,
                "context": format_context_block([c.text for c in chunks]),
                "recent": format_recent_block(accepted[-RECENT_WINDOW:]),
                "count": str(min(BATCH_SIZE, params.n - len(accepted))),
            },
        )
        if seed_block:
            prompt += f"\n\nBEGIN EXAMPLES\n{seed_block}\nEND EXAMPLES"
        request = ChatRequest(
            provider_id=provider.provider_id,
            prompt=prompt,
            temperature=params.temperature,
            seed=derive_seed(params.rng_seed, result.calls),
        )
        result.calls += 1
        try:
            response = provider.complete(request)
        except RefusalError:
            result.refusals += 1
            result.attempts += 1
            continue
        except ProviderError as exc:
            log.warning("radagas: provider error, call skipped: %s", exc)
            result.attempts += 1
            continue

        result.response_chars += len(response.text)
        candidates = extract_payloads(response.text)
        if not candidates:
            result.attempts += 1
            continue
        for candidate in candidates:
            if len(accepted) >= params.n or result.attempts >= budget:
                break
            result.attempts += 1
            entry = _gate_candidate(
                candidate, accepted, params.diversity_theta, embedder, executor
            )
            entry["attempt"] = result.attempts
            result.acceptance_log.append(entry)
            if entry["accepted"]:
                accepted.append(candidate)
                result.payloads.append(
                    Payload(
                        text=candidate,
                        generator="radagas",
                        run_id=params.run_id,
                        index=len(result.payloads),
                        config_digest=params.config_digest,
                    )
                )

    result.shortfall = params.n - len(accepted)
    if result.shortfall:
        log.warning(
            "radagas: attempt budget exhausted at %d/%d payloads", len(accepted), params.n
        )
    return result


def _gate_candidate(
    candidate: str,
    accepted: list[str],
    theta: float,
    embedder: EmbeddingProvider,
    executor: EmbeddedExecutor | None,
) -> dict:
    entry: dict = {"candidate": candidate, "accepted": False}
    try:
        parse_sql(VULNERABLE_TEMPLATE.format(payload=candidate))
        entry["sql_valid"] = True
    except SqlParseError as exc:
        entry["sql_valid"] = False
        entry["parse_error"] = str(exc)
        return entry
    if executor is not None:
        outcome = executor.run_payload(candidate)
        entry["exec_status"] = outcome.status
        if outcome.status == "sql_error":  # execution errors reject the candidate
            return entry
    passed, gates = passes_filter(candidate, accepted, theta, embedder)
    entry["gates"] = gates
    entry["theta"] = theta
    entry["accepted"] = passed
    return entry

"""Rule-based catalog sampler (the SQLMap-style baseline)."""

from __future__ import annotations

import random

from ..errors import CatalogError
from .base import GenerationParams, GenerationResult, Payload

TABLE_VOCAB = ("users", "accounts", "orders", "members")
COLUMN_VOCAB = ("name", "id", "email", "username")


def load_catalog(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            templates = [line.rstrip("\n") for line in fh if line.strip()]
    except OSError as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc}") from exc
    if not templates:
        raise CatalogError(f"catalog {path} has no templates")
    return templates


def fill_template(template: str, rng: random.Random) -> str:
    text = template
    while "{TBL}" in text:
        text = text.replace("{TBL}", rng.choice(TABLE_VOCAB), 1)
    while "{COL}" in text:
        text = text.replace("{COL}", rng.choice(COLUMN_VOCAB), 1)
    return text


def sample_indices(catalog_size: int, n: int, rng_seed: int) -> list[int]:
    """The sampling trace: uniform with replacement, one PRNG stream."""
    rng = random.Random(rng_seed)
    return [rng.randrange(catalog_size) for _ in range(n)]


def generate_traditional(catalog_path: str, params: GenerationParams) -> GenerationResult:
    templates = load_catalog(catalog_path)
    rng = random.Random(params.rng_seed)
    fill_rng = random.Random(params.rng_seed ^ 0x5EED)
    payloads = []
    for i in range(params.n):
        template = templates[rng.randrange(len(templates))]
        payloads.append(
            Payload(
                text=fill_template(template, fill_rng),
                generator="traditional",
                run_id=params.run_id,
                index=i,
                config_digest=params.config_digest,
            )
        )
    return GenerationResult(payloads, attempts=params.n)

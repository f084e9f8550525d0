"""The five payload generation systems plus seed handling."""

from .base import (
    BATCH_SIZE,
    GENERATORS,
    GenerationParams,
    GenerationResult,
    Payload,
    ReflexParams,
    SeedList,
    derive_seed,
    load_seed_list,
    read_payloads_jsonl,
    write_payloads_jsonl,
)
from .batched import generate_template_icl, generate_vanilla
from .radagas import generate_radagas
from .reflexqli import generate_reflexqli, score_discriminator
from .seeds import seed_only_payloads
from .traditional import (
    COLUMN_VOCAB,
    TABLE_VOCAB,
    fill_template,
    generate_traditional,
    load_catalog,
    sample_indices,
)

__all__ = [
    "BATCH_SIZE",
    "COLUMN_VOCAB",
    "GENERATORS",
    "GenerationParams",
    "GenerationResult",
    "Payload",
    "ReflexParams",
    "SeedList",
    "TABLE_VOCAB",
    "derive_seed",
    "fill_template",
    "generate_radagas",
    "generate_reflexqli",
    "generate_template_icl",
    "generate_traditional",
    "generate_vanilla",
    "load_catalog",
    "load_seed_list",
    "read_payloads_jsonl",
    "sample_indices",
    "score_discriminator",
    "seed_only_payloads",
    "write_payloads_jsonl",
]

"""Adversarial SQL injection generation, diversity measurement, and WAF
evaluation toolkit.

Subpackages:
    kernels     hot string/tree distance kernels (compiled or pure Python)
    knowledge   chunking, embedding, vector index, MMR retrieval
    llm         chat-completion providers, prompt templates, output parsing
    generators  the five payload generation systems plus seed handling
    diversity   six post-hoc diversity metrics and the runtime filter
    evaluation  WAF rule engine, ML stub, remote client, SQL executor
    stats       bypass rates, correlations, bootstrap intervals
    runner      experiment orchestration, grids, reports
"""

__version__ = "0.1.0"

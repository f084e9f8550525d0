"""Prompt template registry and single-pass rendering.

Placeholders use ``{name}`` syntax and are substituted in one pass, so a
binding that itself contains a placeholder-shaped substring stays literal.
Every template states the authorized-assessment framing and the exact
output contract the extraction layer parses.
"""

from __future__ import annotations

import re

from ..errors import TemplateError

_PLACEHOLDER_RE = re.compile(r"\{([a-z_]+)\}")

PAYLOAD_LIST_CONTRACT = (
    "Return exactly {count} candidate payloads as a numbered list "
    '("1.", "2.", ...), one payload per line, injection strings only, '
    "no explanations and no code fences."
)

SINGLE_PAYLOAD_CONTRACT = (
    "Return exactly 1 candidate payload as a numbered list "
    '("1."), the injection string only, no explanation.'
)

TEMPLATES: dict[str, str] = {
    "radagas": (
        "You are assisting an authorized security assessment of a MySQL-backed "
        "web application. The target parameter is vulnerable in a string-literal "
        "context (quote break prefix, comment suffix).\n"
        "Goal: {query}\n"
        "\n"
        "Reference techniques retrieved from the knowledge base:\n"
        "{context}\n"
        "\n"
        "Recently accepted payloads; every new payload must differ substantially "
        "from all of them:\n"
        "{recent}\n"
        "\n" + PAYLOAD_LIST_CONTRACT
    ),
    "vanilla_zero_shot": (
        "You are assisting an authorized security assessment of a MySQL-backed "
        "web application. Produce SQL injection payloads for a string-literal "
        "parameter context.\n"
        "\n" + PAYLOAD_LIST_CONTRACT
    ),
    "template_icl": (
        "You are assisting an authorized security assessment of a MySQL-backed "
        "web application. Below are known-good SQL injection payloads for the "
        "target parameter.\n"
        "\n"
        "BEGIN EXAMPLES\n"
        "{seeds}\n"
        "END EXAMPLES\n"
        "\n"
        "Mutate the examples into new variants using obfuscation operators: "
        "case toggling, inline comments (/**/), whitespace substitution, and "
        "hex or CHAR() encoding of string literals. Preserve the injection "
        "semantics.\n"
        "\n" + PAYLOAD_LIST_CONTRACT
    ),
    "reflex_analysis": (
        "You are the payload-design half of an authorized adversarial testing "
        "exercise. Analyze the following WAF and list the signature families "
        "and normalization steps it most likely applies.\n"
        "Target WAF characteristics: {waf_profile}\n"
    ),
    "reflex_strategy": (
        "Given your WAF analysis below, formulate an evasion strategy: which "
        "grammatical shapes, encodings, and keyword placements avoid the "
        "signature families you identified.\n"
        "\n"
        "ANALYSIS:\n{analysis}\n"
    ),
    "reflex_design": (
        "Design the structure of one SQL injection payload for a MySQL "
        "string-literal parameter context following this strategy. Describe "
        "the clause layout and the obfuscation applied to each part.\n"
        "\n"
        "STRATEGY:\n{strategy}\n"
    ),
    "reflex_refine": (
        "Refine the payload design below for subtlety: minimize high-signal "
        "tokens, prefer uncommon but valid MySQL constructs, and keep the "
        "statement executable.\n"
        "\n"
        "DESIGN:\n{design}\n"
    ),
    "discriminator_score": (
        "You are a WAF signature analyst in an authorized adversarial testing "
        "exercise. Rate how detectable the candidate payload is on a 0-10 "
        "scale (0 = matches no known signature, 10 = certain detection), "
        "considering this WAF:\n"
        "{waf_profile}\n"
        "\n"
        "Candidate payload between the markers:\n"
        "<<<PAYLOAD\n"
        "{payload}\n"
        "PAYLOAD>>>\n"
        "\n"
        "Reply with the integer score first, then one short justification."
    ),
}


def render_prompt(template_id: str, bindings: dict[str, str]) -> str:
    """Substitute all placeholders in one pass; unbound names raise TemplateError."""
    body = TEMPLATES.get(template_id)
    if body is None:
        raise TemplateError([f"<unknown template {template_id}>"])
    needed = set(_PLACEHOLDER_RE.findall(body))
    missing = needed - set(bindings)
    if missing:
        raise TemplateError(missing)
    return _PLACEHOLDER_RE.sub(lambda m: bindings[m.group(1)], body)


def format_seed_block(seeds: list[str]) -> str:
    return "\n".join(f"- {s}" for s in seeds)


def format_context_block(chunks: list[str]) -> str:
    return "\n".join(f"[{i + 1}] {c}" for i, c in enumerate(chunks))


def format_recent_block(payloads: list[str]) -> str:
    if not payloads:
        return "(none yet)"
    return "\n".join(f"- {p}" for p in payloads)

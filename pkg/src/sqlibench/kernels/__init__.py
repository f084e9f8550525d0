"""Hot distance kernels with a compiled core and a pure-Python fallback.

The compiled extension is preferred when it built; ``BACKEND`` records which
implementation is live. ``backends()`` exposes every importable backend so
tests and the benchmark can compare them.
"""

from __future__ import annotations

from . import _pure
from .trees import FlatTree, flatten, intern_pair

try:  # pragma: no cover - exercised indirectly via BACKEND
    from . import _speedups as _impl

    BACKEND = "compiled"
except ImportError:  # pragma: no cover
    _impl = _pure
    BACKEND = "pure"

levenshtein = _impl.levenshtein
tree_edit_distance = _impl.tree_edit_distance


def backends() -> dict:
    """Every importable kernel backend, keyed by name."""
    found = {"pure": _pure}
    if _impl is not _pure:
        found["compiled"] = _impl
    return found


def flat_tree_distance(a: FlatTree, b: FlatTree) -> int:
    """Tree edit distance between two flattened trees (label interning included)."""
    ids_a, ids_b = intern_pair(a, b)
    return tree_edit_distance(
        ids_a, list(a.lld), list(a.keyroots), ids_b, list(b.lld), list(b.keyroots)
    )


__all__ = [
    "BACKEND",
    "FlatTree",
    "backends",
    "flat_tree_distance",
    "flatten",
    "intern_pair",
    "levenshtein",
    "tree_edit_distance",
]

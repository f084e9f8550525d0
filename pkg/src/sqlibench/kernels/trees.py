"""Post-order tree flattening for the tree edit distance kernels.

The kernels operate on three parallel arrays per tree: integer labels in
post-order, each node's leftmost-leaf-descendant index, and the keyroot
indices (nodes with no later node sharing their leftmost leaf).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FlatTree:
    labels: tuple[str, ...]  # post-order node labels
    lld: tuple[int, ...]  # leftmost leaf descendant per node
    keyroots: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.labels)


def flatten(root, get_children, get_label) -> FlatTree:
    """Flatten a rooted ordered tree into the kernel representation."""
    labels: list[str] = []
    lld: list[int] = []

    def walk(node) -> int:
        child_lld = [walk(c) for c in get_children(node)]
        idx = len(labels)
        labels.append(get_label(node))
        lld.append(child_lld[0] if child_lld else idx)
        return lld[idx]

    walk(root)
    last_for_lld: dict[int, int] = {}
    for i, v in enumerate(lld):
        last_for_lld[v] = i
    keyroots = tuple(sorted(last_for_lld.values()))
    return FlatTree(tuple(labels), tuple(lld), keyroots)


def intern_pair(a: FlatTree, b: FlatTree) -> tuple[list[int], list[int]]:
    """Map the label strings of two trees onto one shared integer space."""
    table: dict[str, int] = {}
    out = []
    for tree in (a, b):
        ids = []
        for lab in tree.labels:
            code = table.get(lab)
            if code is None:
                code = len(table)
                table[lab] = code
            ids.append(code)
        out.append(ids)
    return out[0], out[1]

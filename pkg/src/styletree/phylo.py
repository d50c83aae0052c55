"""Neighbor-joining trees, Newick text, and Phylip distance files.

The agglomeration is classic neighbor joining: repeatedly join the pair
minimizing Q(i,j) = (k-2) d(i,j) - r_i - r_j. Exact Q ties are resolved
toward the lexicographically smallest (name, name) pair, where a
cluster is named by the smallest leaf it contains, so equidistant
inputs always build the same tree. Joined branches get

    b_i = d(i,j)/2 + (r_i - r_j) / (2 (k-2))
    b_j = d(i,j) - b_i

and replacement distances d(u,m) = (d(i,m) + d(j,m) - d(i,j)) / 2, which
reproduces every additive matrix exactly. Negative branch lengths are
clamped to zero and the deficit logged.

Serialization is bit-exact by construction: fixed 6-decimal branch
lengths, children ordered by smallest contained leaf, and the output
rooted at the internal node adjacent to the lexicographically first
leaf. Two-leaf trees are presented split at the edge midpoint.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractError, ExportError

log = logging.getLogger(__name__)

PHYLIP_NAME_WIDTH = 10


@dataclass
class PhyloTree:
    """Unrooted tree: leaf names plus an id-based weighted adjacency."""

    leaf_names: list[str]
    leaf_ids: dict[str, int]
    adjacency: dict[int, list[tuple[int, float]]] = field(default_factory=dict)

    def add_edge(self, a: int, b: int, length: float) -> None:
        self.adjacency.setdefault(a, []).append((b, length))
        self.adjacency.setdefault(b, []).append((a, length))

    def leaf_path_lengths(self) -> np.ndarray:
        """Pairwise path-length matrix in leaf_names order."""
        n = len(self.leaf_names)
        out = np.zeros((n, n))
        for i, name in enumerate(self.leaf_names):
            dist = {self.leaf_ids[name]: 0.0}
            stack = [self.leaf_ids[name]]
            while stack:
                v = stack.pop()
                for w, length in self.adjacency[v]:
                    if w not in dist:
                        dist[w] = dist[v] + length
                        stack.append(w)
            for j, other in enumerate(self.leaf_names):
                out[i, j] = dist[self.leaf_ids[other]]
        return out


def _check_square_distances(d: np.ndarray, names: list[str]) -> np.ndarray:
    d = np.asarray(d, dtype=np.float64)
    n = len(names)
    if len(set(names)) != n:
        raise ContractError("duplicate taxon names")
    if d.shape != (n, n):
        raise ContractError(f"matrix shape {d.shape} does not match {n} names")
    if not (d == d.T).all():
        raise ContractError("distance matrix is not symmetric")
    if (np.diag(d) != 0.0).any():
        raise ContractError("distance matrix has a nonzero diagonal")
    return d


def _clamped(length: float, context: str) -> float:
    if length < 0.0:
        log.info("clamping negative branch length %.3g at %s", length, context)
        return 0.0
    return length


def neighbor_joining(d: np.ndarray, names: list[str]) -> PhyloTree:
    """Agglomerate a symmetric zero-diagonal matrix into an unrooted tree."""
    d = _check_square_distances(d, names)
    n = len(names)
    if n < 2:
        raise ContractError("need at least 2 taxa")

    tree = PhyloTree(leaf_names=list(names),
                     leaf_ids={name: i for i, name in enumerate(names)})
    next_id = n
    # Active clusters: aligned node ids and tie-break keys (min leaf name).
    node_ids = list(range(n))
    keys = list(names)
    mat = d.copy()

    while len(node_ids) > 2:
        k = len(node_ids)
        r = mat.sum(axis=1)
        q = (k - 2) * mat - r[:, None] - r[None, :]

        best = None
        for i in range(k):
            for j in range(i + 1, k):
                pair_key = (keys[i], keys[j]) if keys[i] < keys[j] else (keys[j], keys[i])
                cand = (q[i, j], pair_key, i, j)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        _, _, i, j = best

        dij = mat[i, j]
        bi = 0.5 * dij + (r[i] - r[j]) / (2.0 * (k - 2))
        bj = dij - bi
        u = next_id
        next_id += 1
        tree.add_edge(u, node_ids[i], _clamped(bi, keys[i]))
        tree.add_edge(u, node_ids[j], _clamped(bj, keys[j]))

        rest = [m for m in range(k) if m not in (i, j)]
        new_row = (mat[i, rest] + mat[j, rest] - dij) / 2.0
        sub = mat[np.ix_(rest, rest)]
        mat = np.zeros((k - 1, k - 1))
        mat[:-1, :-1] = sub
        mat[-1, :-1] = new_row
        mat[:-1, -1] = new_row
        node_ids = [node_ids[m] for m in rest] + [u]
        keys = [keys[m] for m in rest] + [min(keys[i], keys[j])]

    tree.add_edge(node_ids[0], node_ids[1], _clamped(mat[0, 1], "final join"))
    return tree


def _subtree_min_leaf(tree: PhyloTree, v: int, parent: int, memo: dict) -> str:
    if (v, parent) in memo:
        return memo[(v, parent)]
    if v < len(tree.leaf_names):
        result = tree.leaf_names[v]
    else:
        result = min(_subtree_min_leaf(tree, w, v, memo)
                     for w, _ in tree.adjacency[v] if w != parent)
    memo[(v, parent)] = result
    return result


def _render(tree: PhyloTree, v: int, parent: int, length: float, memo: dict) -> str:
    if v < len(tree.leaf_names):
        return f"{tree.leaf_names[v]}:{length:.6f}"
    children = sorted(((w, lw) for w, lw in tree.adjacency[v] if w != parent),
                      key=lambda wl: _subtree_min_leaf(tree, wl[0], v, memo))
    inner = ",".join(_render(tree, w, v, lw, memo) for w, lw in children)
    return f"({inner}):{length:.6f}"


def to_newick(tree: PhyloTree) -> str:
    """Deterministic Newick text, 6-decimal lengths, newline-terminated."""
    first = min(tree.leaf_names)
    first_id = tree.leaf_ids[first]

    if len(tree.leaf_names) == 2:
        (other_id, length), = tree.adjacency[first_id]
        half = length / 2.0
        a, b = sorted(tree.leaf_names)
        return f"({a}:{half:.6f},{b}:{half:.6f});\n"

    (root, _), = tree.adjacency[first_id]
    memo: dict = {}
    children = sorted(tree.adjacency[root],
                      key=lambda wl: _subtree_min_leaf(tree, wl[0], root, memo))
    inner = ",".join(_render(tree, w, root, lw, memo) for w, lw in children)
    return f"({inner});\n"


def export_phylip(d: np.ndarray, names: list[str]) -> str:
    """Phylip square distance "infile" text, LF-terminated lines.

    Taxon count right-justified in 4 columns; names padded/truncated to
    exactly 10 characters; distances as adjacent "%9.6f" fields, whose
    leading space is the separator (line length 10 + 9 * taxa). Names
    that collide after truncation are an error.
    """
    d = _check_square_distances(d, names)
    n = len(names)
    truncated = [name[:PHYLIP_NAME_WIDTH] for name in names]
    seen: dict[str, str] = {}
    for orig, trunc in zip(names, truncated):
        if trunc in seen:
            raise ExportError(
                f"taxon names {seen[trunc]!r} and {orig!r} collide at "
                f"{PHYLIP_NAME_WIDTH} characters")
        seen[trunc] = orig

    lines = [f"{n:>4}"]
    for i, trunc in enumerate(truncated):
        row = "".join(f"{v:9.6f}" for v in d[i])
        lines.append(f"{trunc:<{PHYLIP_NAME_WIDTH}}{row}")
    return "\n".join(lines) + "\n"

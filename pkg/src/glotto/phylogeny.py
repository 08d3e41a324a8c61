"""UPGMA trees over separation-time matrices, clade cuts and Newick export."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .language_distance import PairMatrix
from .newick import NewickNode, parse_newick, quote_label


class InvalidMatrixError(ValueError):
    pass


class AmbiguousCutError(ValueError):
    def __init__(self, count: int, heights: Sequence[float]):
        self.heights = tuple(heights)
        super().__init__(
            f"cannot cut into exactly {count} clades: tied merge heights {list(self.heights)}"
        )


@dataclass(frozen=True)
class Clade:
    """A tree node. Leaves have a label and height 0."""

    height: float
    children: tuple["Clade", ...] = ()
    label: str | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["Clade"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def leaf_labels(self) -> list[str]:
        return [c.label for c in self.walk() if c.is_leaf]

    def key(self) -> str:
        return min(self.leaf_labels())


@dataclass(frozen=True)
class Phylogeny:
    root: Clade

    @property
    def labels(self) -> list[str]:
        return sorted(self.root.leaf_labels())

    @property
    def height(self) -> float:
        return self.root.height

    def internal_nodes(self) -> list[Clade]:
        return [c for c in self.root.walk() if not c.is_leaf]

    def clusters(self) -> dict[frozenset[str], float]:
        """Leaf set of every internal node mapped to its height."""
        return {frozenset(c.leaf_labels()): c.height for c in self.internal_nodes()}

    def cophenetic(self) -> dict[tuple[str, str], float]:
        """Height of the most recent common ancestor for every leaf pair."""
        out = {}
        for node in self.internal_nodes():
            groups = [child.leaf_labels() for child in node.children]
            for gi, ga in enumerate(groups):
                for gb in groups[gi + 1:]:
                    for a in ga:
                        for b in gb:
                            out[(a, b)] = out[(b, a)] = node.height
        return out

    def root_to_leaf_lengths(self) -> dict[str, float]:
        out = {}

        def visit(node: Clade, acc: float):
            if node.is_leaf:
                out[node.label] = acc
            for child in node.children:
                visit(child, acc + node.height - child.height)

        visit(self.root, 0.0)
        return out

    def to_newick_node(self) -> NewickNode:
        def convert(node: Clade, parent_height: float | None) -> NewickNode:
            length = None if parent_height is None else parent_height - node.height
            return NewickNode(node.label, length, [convert(c, node.height) for c in node.children])

        return convert(self.root, None)


def upgma(tm: PairMatrix) -> Phylogeny:
    """Average-linkage agglomeration; merge heights are half the linkage.

    Ties on the minimal linkage go to the pair whose cluster identifiers
    (smallest leaf label) sort first lexicographically.
    """
    n = tm.n
    if n < 2:
        raise InvalidMatrixError("UPGMA needs at least two labels")
    if np.any(np.isnan(tm.entries)):
        raise InvalidMatrixError("matrix contains NaN")
    if np.any(tm.entries < 0):
        raise InvalidMatrixError("matrix contains negative entries")

    dist = tm.square()
    np.fill_diagonal(dist, np.inf)
    nodes: list[Clade] = [Clade(0.0, label=lab) for lab in tm.labels]
    ids = list(tm.labels)
    sizes = np.ones(n)
    active = np.ones(n, dtype=bool)

    for _ in range(n - 1):
        masked = np.where(active[:, None] & active[None, :], dist, np.inf)
        best = masked.min()
        ii, jj = np.nonzero(np.triu(masked == best, k=1))
        candidates = [
            (min(ids[i], ids[j]), max(ids[i], ids[j]), i, j) for i, j in zip(ii.tolist(), jj.tolist())
        ]
        _, _, i, j = min(candidates)
        pair = sorted((nodes[i], nodes[j]), key=Clade.key)
        merged = Clade(best / 2.0, tuple(pair))

        new_row = (sizes[i] * dist[i] + sizes[j] * dist[j]) / (sizes[i] + sizes[j])
        dist[i, :] = new_row
        dist[:, i] = new_row
        dist[i, i] = np.inf
        active[j] = False
        dist[j, :] = np.inf
        dist[:, j] = np.inf
        sizes[i] += sizes[j]
        nodes[i] = merged
        ids[i] = min(ids[i], ids[j])

    return Phylogeny(nodes[int(np.flatnonzero(active)[0])])


def partitions_at_depth(p: Phylogeny, count: int) -> list[frozenset[str]]:
    """Undo the ``count - 1`` highest merges; return the resulting clades
    ordered by their smallest label."""
    n = len(p.labels)
    if not 1 <= count <= n:
        raise ValueError(f"count must be in [1, {n}], got {count}")
    internal = sorted(p.internal_nodes(), key=lambda c: -c.height)
    k = count - 1
    if 0 < k < len(internal) and internal[k - 1].height == internal[k].height:
        tied = sorted({c.height for c in internal if c.height == internal[k].height}, reverse=True)
        raise AmbiguousCutError(count, tied)
    undone = {id(c) for c in internal[:k]}

    out: list[frozenset[str]] = []

    def visit(node: Clade):
        if id(node) in undone:
            for child in node.children:
                visit(child)
        else:
            out.append(frozenset(node.leaf_labels()))

    visit(p.root)
    return sorted(out, key=min)


def group_assignments(p: Phylogeny, count: int) -> dict[str, int]:
    """Label -> 1-based clade index for a ``count``-way cut."""
    return {lab: k for k, clade in enumerate(partitions_at_depth(p, count), start=1) for lab in clade}


def to_newick(p: Phylogeny, groups: Mapping[str, int] | None = None) -> str:
    """Newick string, branch lengths in years with two decimals.

    ``groups`` adds ``[&group=k]`` comments after leaf labels.
    """

    def render(node: Clade, parent_height: float | None) -> str:
        if node.is_leaf:
            text = quote_label(node.label)
            if groups is not None and node.label in groups:
                text += f"[&group={groups[node.label]}]"
        else:
            text = "(" + ",".join(render(c, node.height) for c in node.children) + ")"
        if parent_height is not None:
            text += f":{parent_height - node.height:.2f}"
        return text

    return render(p.root, None) + ";"


def from_newick(text: str, tol: float = 1e-6) -> Phylogeny:
    """Read an ultrametric Newick tree back into a :class:`Phylogeny`.

    Branch lengths written with two decimals carry up to 0.005 rounding
    each, so the ultrametric check allows that much per edge on the path.
    """
    tree = parse_newick(text)

    def depth_to_leaf(node: NewickNode) -> tuple[float, int]:
        if node.is_leaf:
            return 0.0, 0
        below = [depth_to_leaf(c) for c in node.children]
        heights = [h + (c.length or 0.0) for (h, _), c in zip(below, node.children)]
        edges = 1 + max(e for _, e in below)
        slack = tol * max(1.0, max(heights)) + 0.01 * edges
        if max(heights) - min(heights) > slack:
            raise ValueError("tree is not ultrametric")
        return max(heights), edges

    def convert(node: NewickNode) -> Clade:
        if node.is_leaf:
            return Clade(0.0, label=node.name)
        kids = tuple(sorted((convert(c) for c in node.children), key=Clade.key))
        return Clade(depth_to_leaf(node)[0], kids)

    return Phylogeny(convert(tree))

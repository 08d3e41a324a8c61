"""Minimal Newick reader/writer for trees with branch lengths."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator


class NewickError(ValueError):
    pass


@dataclass
class NewickNode:
    name: str | None = None
    length: float | None = None
    children: list["NewickNode"] = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator["NewickNode"]:
        """Preorder traversal."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list["NewickNode"]:
        return [n for n in self.walk() if n.is_leaf]

    def leaf_names(self) -> list[str]:
        return [n.name for n in self.leaves()]


_TOKEN = re.compile(r"\s*('(?:[^']|'')*'|\[[^\]]*\]|[(),:;]|[^\s(),:;\[\]']+)")
_SAFE_LABEL = re.compile(r"^[^\s(),:;\[\]']+$")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise NewickError(f"unexpected character {text[pos]!r} at offset {pos}")
        tok = m.group(1)
        pos = m.end()
        if tok.startswith("["):
            continue  # comment
        out.append(tok)
    return out


def parse_newick(text: str) -> NewickNode:
    toks = _tokens(text)
    if not toks or toks[-1] != ";":
        raise NewickError("Newick string must end with ';'")
    pos = 0

    def peek() -> str | None:
        return toks[pos] if pos < len(toks) else None

    def take() -> str:
        nonlocal pos
        if pos >= len(toks):
            raise NewickError("unexpected end of input")
        tok = toks[pos]
        pos += 1
        return tok

    def subtree() -> NewickNode:
        node = NewickNode()
        if peek() == "(":
            take()
            node.children.append(subtree())
            while peek() == ",":
                take()
                node.children.append(subtree())
            if take() != ")":
                raise NewickError("expected ')'")
        tok = peek()
        if tok is not None and tok not in "(),:;":
            take()
            node.name = tok[1:-1].replace("''", "'") if tok.startswith("'") else tok
        if peek() == ":":
            take()
            raw = take()
            try:
                node.length = float(raw)
            except ValueError:
                raise NewickError(f"bad branch length {raw!r}") from None
        return node

    root = subtree()
    if take() != ";" or pos != len(toks):
        raise NewickError("trailing input after ';'")
    for node in root.walk():
        if node.is_leaf and not node.name:
            raise NewickError("unnamed leaf")
    return root


def quote_label(label: str) -> str:
    if _SAFE_LABEL.match(label):
        return label
    return "'" + label.replace("'", "''") + "'"


def patristic_distances(root: NewickNode) -> dict[tuple[str, str], float]:
    """Sum of branch lengths between every pair of leaves (missing lengths count as 0)."""
    depth: dict[int, float] = {}
    parent: dict[int, NewickNode | None] = {id(root): None}
    nodes = list(root.walk())
    depth[id(root)] = 0.0
    for node in nodes:
        for child in node.children:
            parent[id(child)] = node
            depth[id(child)] = depth[id(node)] + (child.length or 0.0)

    def ancestors(node):
        chain = []
        while node is not None:
            chain.append(node)
            node = parent[id(node)]
        return chain

    leaves = root.leaves()
    chains = {leaf.name: ancestors(leaf) for leaf in leaves}
    out = {}
    for i, a in enumerate(leaves):
        anc_a = {id(n) for n in chains[a.name]}
        for b in leaves[i + 1:]:
            mrca = next(n for n in chains[b.name] if id(n) in anc_a)
            d = depth[id(a)] + depth[id(b)] - 2 * depth[id(mrca)]
            out[(a.name, b.name)] = out[(b.name, a.name)] = d
    return out

"""Independent reference implementations used only by the test-suite."""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np


# --- edit distance ------------------------------------------------------------

def edit_script_bfs(a: str, b: str) -> int:
    """Cheapest edit script found by breadth-first search over script prefixes.

    A state (i, j) means the first i characters of ``a`` have been consumed
    and the first j characters of ``b`` produced. Copying a matching
    character is free, every other step costs one, so this is a 0-1 BFS.
    """
    start, goal = (0, 0), (len(a), len(b))
    best = {start: 0}
    queue = deque([start])
    while queue:
        i, j = queue.popleft()
        cost = best[(i, j)]
        if (i, j) == goal:
            return cost
        moves = []
        if i < len(a) and j < len(b):
            moves.append(((i + 1, j + 1), 0 if a[i] == b[j] else 1))
        if i < len(a):
            moves.append(((i + 1, j), 1))
        if j < len(b):
            moves.append(((i, j + 1), 1))
        for state, step in moves:
            if state not in best or best[state] > cost + step:
                best[state] = cost + step
                if step == 0:
                    queue.appendleft(state)
                else:
                    queue.append(state)
    raise AssertionError("goal unreachable")


def string_space_bfs(a: str, b: str) -> int:
    """Breadth-first search over whole strings, one edit operation per edge.

    The search alphabet is the characters of both words and intermediate
    strings never exceed the longer word; an optimal script always exists
    inside that space (delete, then substitute, then insert).
    """
    if a == b:
        return 0
    alphabet = sorted(set(a) | set(b))
    cap = max(len(a), len(b))
    seen = {a}
    frontier = [a]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for w in frontier:
            cands = set()
            for k in range(len(w)):
                cands.add(w[:k] + w[k + 1:])
                for ch in alphabet:
                    if ch != w[k]:
                        cands.add(w[:k] + ch + w[k + 1:])
            if len(w) < cap:
                for k in range(len(w) + 1):
                    for ch in alphabet:
                        cands.add(w[:k] + ch + w[k:])
            for c in cands:
                if c == b:
                    return depth
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    raise AssertionError("target unreachable")


def random_word(rng, alphabet: str, max_len: int, min_len: int = 0) -> str:
    n = int(rng.integers(min_len, max_len + 1))
    return "".join(alphabet[int(k)] for k in rng.integers(len(alphabet), size=n))


# --- trees ----------------------------------------------------------------------

def rooted_topologies(labels):
    """All rooted binary topologies as nested 2-tuples (15 for 4 leaves, 105 for 5)."""
    labels = list(labels)
    if len(labels) == 1:
        return [labels[0]]
    trees = [(labels[0], labels[1])]
    for leaf in labels[2:]:
        grown = []
        for tree in trees:
            grown.extend(_insert_everywhere(tree, leaf))
        trees = grown
    return trees


def _insert_everywhere(tree, leaf):
    out = [(tree, leaf)]
    if isinstance(tree, tuple):
        left, right = tree
        out += [(sub, right) for sub in _insert_everywhere(left, leaf)]
        out += [(left, sub) for sub in _insert_everywhere(right, leaf)]
    return out


def _leaves(tree):
    return [tree] if not isinstance(tree, tuple) else _leaves(tree[0]) + _leaves(tree[1])


def least_squares_ultrametric(labels, times: np.ndarray):
    """Best-fitting topology over exhaustive enumeration.

    Each internal node's height is fitted as the mean of half the times of
    the leaf pairs it separates; returns ``(clusters -> height, residual)``.
    """
    index = {lab: k for k, lab in enumerate(labels)}
    best = None
    for topo in rooted_topologies(labels):
        clusters = {}
        residual = 0.0

        def visit(node):
            nonlocal residual
            if not isinstance(node, tuple):
                return
            left, right = _leaves(node[0]), _leaves(node[1])
            halves = [times[index[x], index[y]] / 2 for x in left for y in right]
            h = float(np.mean(halves))
            residual += float(np.sum((np.array(halves) - h) ** 2))
            clusters[frozenset(left + right)] = h
            visit(node[0])
            visit(node[1])

        visit(topo)
        if best is None or residual < best[1]:
            best = (clusters, residual)
    return best


def random_ultrametric(labels, rng):
    """Random coalescent-style tree; returns (clusters -> height, times matrix)."""
    clusters = [frozenset([lab]) for lab in labels]
    heights = np.sort(rng.uniform(1.0, 1000.0, size=len(labels) - 1))
    index = {lab: k for k, lab in enumerate(labels)}
    times = np.zeros((len(labels), len(labels)))
    truth = {}
    for h in heights:
        i, j = sorted(rng.choice(len(clusters), size=2, replace=False))
        a, b = clusters[i], clusters[j]
        for x in a:
            for y in b:
                times[index[x], index[y]] = times[index[y], index[x]] = 2 * h
        merged = a | b
        truth[merged] = float(h)
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)] + [merged]
    return truth, times


def read_newick(text: str):
    """Character-level Newick reader: returns (clusters -> height-from-leaves, leaf set)."""
    pos = 0

    def node():
        nonlocal pos
        children = []
        if text[pos] == "(":
            pos += 1
            while True:
                children.append(node())
                if text[pos] == ",":
                    pos += 1
                    continue
                assert text[pos] == ")"
                pos += 1
                break
        start = pos
        while text[pos] not in ":,);":
            pos += 1
        name = text[start:pos]
        length = 0.0
        if text[pos] == ":":
            pos += 1
            start = pos
            while text[pos] not in ",);":
                pos += 1
            length = float(text[start:pos])
        return name, length, children

    root = node()
    assert text[pos] == ";"
    clusters = {}

    def collect(n):
        name, _, children = n
        if not children:
            return [name], 0.0
        leaves, depth = [], None
        for child in children:
            sub, h = collect(child)
            leaves += sub
            depth = h + child[1] if depth is None else depth
        clusters[frozenset(leaves)] = depth
        return leaves, depth

    leaves, _ = collect(root)
    return clusters, set(leaves)

"""Pairwise lexical distance between languages and the N x N matrix.

The distance between two lexicons is the mean renormalized word distance
over the meanings both of them attest. Matrices store only the strict
upper triangle, row-major: pair ``(i, j)`` with ``i < j`` lives at
``i*N - i*(i+1)//2 + (j - i - 1)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .edit_distance import word_distance
from .lexicon import Corpus, Lexicon


class InsufficientOverlapError(ValueError):
    def __init__(self, a: str, b: str, shared: int, required: int):
        self.pair = (a, b)
        super().__init__(
            f"languages {a!r} and {b!r} share {shared} meaning(s), need at least {required}"
        )


class MatrixFormatError(ValueError):
    pass


def pair_index(i: int, j: int, n: int) -> int:
    if i == j:
        raise ValueError("diagonal has no stored entry")
    if i > j:
        i, j = j, i
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def n_pairs(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True, eq=False)
class PairMatrix:
    """Symmetric matrix with zero diagonal, stored as its upper triangle."""

    labels: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        entries = np.asarray(self.entries, dtype=float).copy()
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate labels")
        if entries.shape != (n_pairs(len(labels)),):
            raise ValueError(
                f"{len(labels)} labels need {n_pairs(len(labels))} entries, got {entries.shape}"
            )
        entries.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", entries)

    def __eq__(self, other):
        if not isinstance(other, PairMatrix):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.entries, other.entries)

    __hash__ = None

    @property
    def n(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(label) from None

    def __getitem__(self, key: tuple[int | str, int | str]) -> float:
        i, j = (self.index_of(k) if isinstance(k, str) else k for k in key)
        if i == j:
            return 0.0
        return float(self.entries[pair_index(i, j, self.n)])

    def pairs(self) -> Iterable[tuple[int, int]]:
        for i in range(self.n):
            for j in range(i + 1, self.n):
                yield i, j

    def square(self) -> np.ndarray:
        n = self.n
        out = np.zeros((n, n))
        iu = np.triu_indices(n, k=1)
        out[iu] = self.entries
        out.T[iu] = self.entries
        return out

    @classmethod
    def from_square(cls, labels: Sequence[str], square, **kwargs):
        square = np.asarray(square, dtype=float)
        n = len(labels)
        if square.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got {square.shape}")
        return cls(tuple(labels), square[np.triu_indices(n, k=1)], **kwargs)

    def permuted(self, order: Sequence[int]):
        sq = self.square()[np.ix_(order, order)]
        return type(self).from_square([self.labels[k] for k in order], sq)


@dataclass(frozen=True, eq=False)
class DistanceMatrix(PairMatrix):
    """Lexical distances; ``coverage`` counts meanings compared per pair."""

    coverage: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        super().__post_init__()
        if np.any(np.isnan(self.entries)) or np.any(self.entries < 0) or np.any(self.entries > 1):
            raise ValueError("distances must lie in [0, 1]")
        if self.coverage is not None:
            cov = np.asarray(self.coverage, dtype=np.int64).copy()
            if cov.shape != self.entries.shape:
                raise ValueError("coverage shape does not match entries")
            cov.flags.writeable = False
            object.__setattr__(self, "coverage", cov)

    def coverage_square(self) -> np.ndarray:
        if self.coverage is None:
            raise ValueError("matrix carries no coverage information")
        n = self.n
        out = np.zeros((n, n), dtype=np.int64)
        iu = np.triu_indices(n, k=1)
        out[iu] = self.coverage
        out.T[iu] = self.coverage
        return out

    def permuted(self, order: Sequence[int]):
        dm = PairMatrix.permuted(self, order)
        cov = None
        if self.coverage is not None:
            cov = self.coverage_square()[np.ix_(order, order)][np.triu_indices(self.n, k=1)]
        return DistanceMatrix(dm.labels, dm.entries, coverage=cov)


def language_distance(a: Lexicon, b: Lexicon, min_shared: int = 1) -> tuple[float, int]:
    """Mean word distance over shared meanings, and the number of them."""
    shared = sorted(a.meanings() & b.meanings())
    if len(shared) < max(min_shared, 1):
        raise InsufficientOverlapError(a.language_tag, b.language_tag, len(shared), max(min_shared, 1))
    ea, eb = a.entries, b.entries
    total = math.fsum(word_distance(ea[m], eb[m]) for m in shared)
    return total / len(shared), len(shared)


def distance_matrix(corpus: Corpus, min_shared: int = 1) -> DistanceMatrix:
    lexicons = corpus.lexicons
    n = len(lexicons)
    if n < 2:
        raise ValueError("need at least two languages")
    entries = np.empty(n_pairs(n))
    coverage = np.empty(n_pairs(n), dtype=np.int64)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            entries[k], coverage[k] = language_distance(lexicons[i], lexicons[j], min_shared)
            k += 1
    return DistanceMatrix(tuple(corpus.labels), entries, coverage=coverage)


def external_reference_report(
    corpus: Corpus,
    references: Sequence[str],
    matrix: DistanceMatrix | None = None,
    min_shared: int = 1,
) -> list[tuple[str, str, float]]:
    """Distances from every non-reference language to each reference,
    sorted by (dialect, reference)."""
    for ref in references:
        if ref not in corpus:
            raise KeyError(f"unknown reference language {ref!r}")
    if not references:
        return []
    refs = set(references)
    rows = []
    for lex in corpus.lexicons:
        if lex.language_tag in refs:
            continue
        for ref in references:
            if matrix is not None:
                d = matrix[lex.language_tag, ref]
            else:
                d, _ = language_distance(lex, corpus[ref], min_shared)
            rows.append((lex.language_tag, ref, d))
    rows.sort(key=lambda row: (row[0], row[1]))
    return rows


# --- export / import -------------------------------------------------------

def _fmt(value: float) -> str:
    return f"{value:.6f}"


def format_matrix_csv(matrix: PairMatrix, values: np.ndarray | None = None, integer: bool = False) -> str:
    sq = matrix.square() if values is None else values
    buf = io.StringIO()
    buf.write("label," + ",".join(matrix.labels) + "\n")
    for label, row in zip(matrix.labels, sq):
        cells = [str(int(v)) if integer else _fmt(v) for v in row]
        buf.write(label + "," + ",".join(cells) + "\n")
    return buf.getvalue()


def format_coverage_csv(matrix: DistanceMatrix) -> str:
    return format_matrix_csv(matrix, matrix.coverage_square(), integer=True)


def format_phylip(matrix: PairMatrix) -> str:
    sq = matrix.square()
    lines = [f"{matrix.n}"]
    for label, row in zip(matrix.labels, sq):
        lines.append(f"{label[:10]:<10}" + "".join(" " + _fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_matrix_csv(text: str) -> tuple[list[str], np.ndarray]:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows or rows[0][0] != "label":
        raise MatrixFormatError("matrix CSV must start with a 'label,...' header")
    labels = rows[0][1:]
    n = len(labels)
    if len(rows) - 1 != n:
        raise MatrixFormatError(f"header names {n} labels but there are {len(rows) - 1} data rows")
    square = np.zeros((n, n))
    for i, row in enumerate(rows[1:]):
        if len(row) != n + 1:
            raise MatrixFormatError(f"row {i + 2}: expected {n + 1} fields, got {len(row)}")
        if row[0] != labels[i]:
            raise MatrixFormatError(f"row {i + 2}: label {row[0]!r} does not match header {labels[i]!r}")
        try:
            square[i] = [float(v) for v in row[1:]]
        except ValueError as exc:
            raise MatrixFormatError(f"row {i + 2}: {exc}") from None
    if not np.array_equal(square, square.T) or np.any(np.diag(square) != 0):
        raise MatrixFormatError("matrix must be symmetric with a zero diagonal")
    return labels, square


def read_distance_matrix(path) -> DistanceMatrix:
    with open(path, encoding="utf-8") as fh:
        labels, square = parse_matrix_csv(fh.read())
    return DistanceMatrix.from_square(labels, square)


def format_report_csv(rows: Sequence[tuple[str, str, float]]) -> str:
    return "dialect,reference,distance\n" + "".join(f"{d},{r},{_fmt(v)}\n" for d, r, v in rows)

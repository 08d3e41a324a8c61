"""Euclidean embedding of a distance matrix and its spherical read-out.

The embedding is classical metric scaling: squared distances are double
centred into a Gram matrix whose leading eigenvectors, scaled by the root
of their eigenvalues, give centred coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .language_distance import PairMatrix


class EigenConvergenceError(ArithmeticError):
    def __init__(self, sweeps: int, off_norm: float, threshold: float):
        self.sweeps = sweeps
        self.off_norm = off_norm
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps: "
            f"off-diagonal norm {off_norm:.3e} > threshold {threshold:.3e}"
        )


class DegenerateMatrixError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def jacobi_eigh(a, rtol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Iterates until the Frobenius norm of the off-diagonal part is at most
    ``rtol`` times the norm of the matrix. Returns ``(values, vectors)``
    sorted by descending eigenvalue; ``vectors[:, k]`` pairs with ``values[k]``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0.0))):
        raise ValueError("matrix must be symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    threshold = rtol * np.linalg.norm(a)

    upper = np.triu_indices(n, k=1)

    def off_norm() -> float:
        return math.sqrt(2.0 * float(np.sum(a[upper] ** 2)))

    sweep = 0
    while True:
        off = off_norm()
        if off <= threshold:
            break
        if sweep >= max_sweeps:
            raise EigenConvergenceError(sweep, off, threshold)
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], v[:, order]


def numpy_eigh(a) -> tuple[np.ndarray, np.ndarray]:
    values, vectors = np.linalg.eigh(np.asarray(a, dtype=float))
    order = np.argsort(-values, kind="stable")
    return values[order], vectors[:, order]


SOLVERS = {"jacobi": jacobi_eigh, "lapack": numpy_eigh}


def double_center(square_distances: np.ndarray) -> np.ndarray:
    """G = -1/2 J D2 J with J the centring projector."""
    d2 = np.asarray(square_distances, dtype=float) ** 2
    n = d2.shape[0]
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    return -0.5 * j @ d2 @ j


@dataclass(frozen=True, eq=False)
class Embedding:
    labels: tuple[str, ...]
    coordinates: np.ndarray
    eigenvalues: np.ndarray

    @property
    def n(self) -> int:
        return self.coordinates.shape[1]

    def distances(self) -> np.ndarray:
        diff = self.coordinates[:, None, :] - self.coordinates[None, :, :]
        return np.sqrt(np.sum(diff * diff, axis=-1))

    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.coordinates, axis=1)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    vectors = vectors.copy()
    for k in range(vectors.shape[1]):
        col = vectors[:, k]
        # argmax returns the first index on ties, i.e. the lowest label index
        if col[int(np.argmax(np.abs(col)))] < 0:
            vectors[:, k] = -col
    return vectors


def embed(dm: PairMatrix, n: int, solver: str = "jacobi") -> Embedding:
    """Centred n-dimensional coordinates reproducing the distances of ``dm``."""
    size = dm.n
    if not 1 <= n <= size - 1:
        raise DimensionError(f"embedding dimension must be in [1, {size - 1}], got {n}")
    try:
        eigh = SOLVERS[solver]
    except KeyError:
        raise ValueError(f"unknown solver {solver!r}") from None
    gram = double_center(dm.square())
    values, vectors = eigh(gram)
    vectors = _fix_signs(vectors[:, :n])
    scale = np.sqrt(np.clip(values[:n], 0.0, None))
    coords = vectors * scale
    coords -= coords.mean(axis=0)
    coords.flags.writeable = False
    values.flags.writeable = False
    return Embedding(tuple(dm.labels), coords, values)


def _positive_floor(values: np.ndarray) -> float:
    # eigenvalues below this are rounding noise of an exactly low-rank Gram matrix
    return values.size * np.finfo(float).eps * float(np.max(np.abs(values), initial=0.0))


def residual_ratio(e: Embedding) -> float:
    """Share of the positive spectrum not captured by the first n axes."""
    floor = _positive_floor(e.eigenvalues)
    positive = np.where(e.eigenvalues > floor, e.eigenvalues, 0.0)
    total = positive.sum()
    if not total > 0:
        raise DegenerateMatrixError("Gram matrix has no positive eigenvalue")
    return float(positive[e.n:].sum() / total)


@dataclass(frozen=True)
class SphericalPoint:
    label: str
    r: float
    theta: float | None
    phi: float | None


def cartesian_to_spherical(x: float, y: float, z: float) -> tuple[float, float | None, float | None]:
    r = math.sqrt(x * x + y * y + z * z)
    if r == 0.0:
        return 0.0, None, None
    theta = math.acos(max(-1.0, min(1.0, z / r)))
    phi = math.atan2(y, x)
    if phi == -math.pi:
        phi = math.pi
    return r, theta, phi + 0.0


def spherical_to_cartesian(r: float, theta: float, phi: float) -> tuple[float, float, float]:
    st = math.sin(theta)
    return r * st * math.cos(phi), r * st * math.sin(phi), r * math.cos(theta)


def spherical(e: Embedding) -> list[SphericalPoint]:
    """Radius, zenith and azimuth of every point of a 3-D embedding.

    Axes follow eigenvalue order, so z is the third principal axis.
    """
    if e.n != 3:
        raise DimensionError(f"spherical coordinates need n=3, embedding has n={e.n}")
    return [
        SphericalPoint(label, *cartesian_to_spherical(*map(float, row)))
        for label, row in zip(e.labels, e.coordinates)
    ]


def radial_variance(e: Embedding) -> float:
    """Population variance of distances from the centroid in all n dimensions."""
    return float(np.var(e.radii()))


def radial_variance_profile(e: Embedding) -> list[float]:
    """Radial variance using the first k axes, for k = 1..n."""
    return [float(np.var(np.linalg.norm(e.coordinates[:, :k], axis=1))) for k in range(1, e.n + 1)]


def mean_pairwise_angle(points: Sequence[Sequence[float]]) -> float:
    """Mean angle (radians) between direction vectors of ``points``."""
    pts = np.asarray(points, dtype=float)
    unit = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    cos = np.clip(unit @ unit.T, -1.0, 1.0)
    iu = np.triu_indices(len(pts), k=1)
    return float(np.mean(np.arccos(cos[iu])))

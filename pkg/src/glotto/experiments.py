"""Synthetic experiments with known ground truth.

Both experiments drive the simulator and then the ordinary pipeline, so
they double as end-to-end checks. ``scripts/`` wraps them for the command
line; the acceptance tests call them directly.
"""

from __future__ import annotations

import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .chronology import random_lexicon, random_word_baseline, simulate_divergence, tau_for_rate
from .geometry import embed, radial_variance
from .language_distance import PairMatrix, distance_matrix, parse_matrix_csv
from .newick import NewickNode, parse_newick

# Ultrametric 8-leaf tree, branch lengths in years. With rate 0.001 the
# branches span 0.1 to 1.0 times the mean word lifetime 1/rate.
RECOVERY_TREE = (
    "((((a:100,b:100):200,(c:100,d:100):200):200,"
    "((e:200,f:200):200,g:400):100):500,h:1000);"
)


@dataclass(frozen=True)
class RecoveryConfig:
    newick: str = RECOVERY_TREE
    rate: float = 0.001
    m_catalog: int = 500
    seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    baseline_samples: int = 20000
    baseline_seed: int = 0


@dataclass(frozen=True)
class RecoveryRun:
    seed: int
    topology_ok: bool
    mean_relative_error: float
    max_relative_error: float


def _clusters(node: NewickNode) -> set[frozenset[str]]:
    out = set()
    for sub in node.walk():
        if not sub.is_leaf:
            out.add(frozenset(sub.leaf_names()))
    return out


def _read_matrix(path: Path) -> PairMatrix:
    return PairMatrix.from_square(*parse_matrix_csv(path.read_text(encoding="utf-8")))


def run_recovery(config: RecoveryConfig = RecoveryConfig(), workdir: str | None = None) -> list[RecoveryRun]:
    """simulate -> dist -> tree through the CLI, scored against the true times.

    The model uses tau matched to the simulated rate and d_max set to the
    measured random-word baseline.
    """
    from .cli import main

    tree = parse_newick(config.newick)
    truth_clusters = _clusters(tree)
    d_max = random_word_baseline(config.baseline_samples, config.baseline_seed)
    runs = []
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        root = Path(tmp)
        (root / "tree.nwk").write_text(config.newick + "\n", encoding="utf-8")
        for seed in config.seeds:
            out = root / f"seed{seed}"
            argv_common = ["--quiet", "--out-dir"]
            steps = [
                ["simulate", str(root / "tree.nwk"), "--rate", repr(config.rate), "--seed", str(seed),
                 "--m-catalog", str(config.m_catalog), *argv_common, str(out / "sim")],
                ["dist", str(out / "sim" / "corpus.tsv"), "--m-catalog", str(config.m_catalog),
                 *argv_common, str(out / "dist")],
                ["tree", str(out / "dist" / "matrix.csv"), "--tau", repr(tau_for_rate(config.rate)),
                 "--d-max", repr(d_max), *argv_common, str(out / "tree")],
            ]
            for argv in steps:
                code = main(argv)
                if code != 0:
                    raise RuntimeError(f"glotto {argv[0]} exited with {code}")
            truth = _read_matrix(out / "sim" / "true_times.csv")
            est = _read_matrix(out / "tree" / "times.csv")
            est = est.permuted([est.index_of(lab) for lab in truth.labels])
            rel = np.abs(est.entries - truth.entries) / truth.entries
            recovered = parse_newick((out / "tree" / "tree.nwk").read_text(encoding="utf-8"))
            runs.append(RecoveryRun(
                seed=seed,
                topology_ok=_clusters(recovered) == truth_clusters,
                mean_relative_error=float(np.mean(rel)),
                max_relative_error=float(np.max(rel)),
            ))
    return runs


@dataclass(frozen=True)
class StarVarianceConfig:
    leaves: int = 30
    m_catalog: int = 200
    rate: float = 0.002
    times: tuple[float, ...] = tuple(float(t) for t in np.linspace(5.0, 50.0, 10))
    replicates: int = 20
    solver: str = "lapack"


@dataclass(frozen=True)
class StarVarianceResult:
    times: tuple[float, ...]
    variances: tuple[float, ...]
    slope: float
    intercept: float
    r_squared: float


def star_tree(leaves: int, branch: float) -> NewickNode:
    return NewickNode(None, None, [NewickNode(f"L{k:02d}", branch) for k in range(leaves)])


def linear_fit(x, y) -> tuple[float, float, float]:
    """Least-squares line; returns (slope, intercept, R^2)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    total = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - float(np.sum(resid ** 2) / total) if total > 0 else math.nan
    return float(slope), float(intercept), r2


def run_star_variance(config: StarVarianceConfig = StarVarianceConfig()) -> StarVarianceResult:
    """Replicate-averaged radial variance of full-dimension embeddings of star trees."""
    means = []
    for t in config.times:
        values = []
        for rep in range(config.replicates):
            anc = random_lexicon("anc", config.m_catalog, np.random.default_rng([rep, 0]))
            corpus = simulate_divergence(anc, star_tree(config.leaves, t), config.rate, seed=rep * 1000 + round(t))
            e = embed(distance_matrix(corpus), config.leaves - 1, solver=config.solver)
            values.append(radial_variance(e))
        means.append(float(np.mean(values)))
    slope, intercept, r2 = linear_fit(config.times, means)
    return StarVarianceResult(tuple(config.times), tuple(means), slope, intercept, r2)


__all__ = [
    "RECOVERY_TREE",
    "RecoveryConfig",
    "RecoveryRun",
    "StarVarianceConfig",
    "StarVarianceResult",
    "linear_fit",
    "run_recovery",
    "run_star_variance",
    "star_tree",
]

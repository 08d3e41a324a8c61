"""Distance-to-time conversion, calibration and a divergence simulator.

Separation times are patristic: the total number of years along both
lineages since two languages split, so a UPGMA merge at half the linkage
sits at the age of the common ancestor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .edit_distance import word_distance
from .language_distance import PairMatrix, n_pairs
from .lexicon import Corpus, Lexicon
from .newick import NewickNode


class SaturationError(ValueError):
    pass


class CalibrationError(ValueError):
    pass


class ConfigError(ValueError):
    pass


class LogarithmicRule:
    """T = -(tau / 2) * ln(1 - d / d_max) and its inverse."""

    name = "log"

    def time(self, d: float, tau: float, d_max: float) -> float:
        return -0.5 * tau * math.log1p(-d / d_max)

    def distance(self, t: float, tau: float, d_max: float) -> float:
        return -d_max * math.expm1(-2.0 * t / tau)


RULES = {"log": LogarithmicRule()}


@dataclass(frozen=True)
class ChronologyModel:
    """Parameters of the distance-to-time rule and of absolute dating.

    With words replaced at rate r per lineage, two languages separated by
    patristic time T keep a fraction exp(-r T) of cognates, so the rule is
    exact for tau = 2 / r (see :func:`tau_for_rate`).
    """

    tau: float = 1000.0
    d_max: float = 1.0
    k_var: float | None = None
    reference_year: int = 2000
    rule: str = "log"

    def __post_init__(self):
        if not self.tau > 0:
            raise ConfigError(f"tau must be > 0, got {self.tau}")
        if not 0 < self.d_max <= 1:
            raise ConfigError(f"d_max must be in (0, 1], got {self.d_max}")
        if self.k_var is not None and not self.k_var > 0:
            raise ConfigError(f"k_var must be > 0, got {self.k_var}")
        if self.rule not in RULES:
            raise ConfigError(f"unknown rule {self.rule!r}")

    @property
    def time_rule(self) -> LogarithmicRule:
        return RULES[self.rule]


CONFIG_KEYS = {"tau": float, "d_max": float, "k_var": float, "reference_year": int}


def parse_config(text: str) -> dict[str, float | int]:
    """Read ``key=value`` lines (``#`` comments allowed); unknown keys are kept as strings."""
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        conv = CONFIG_KEYS.get(key, str)
        try:
            out[key] = conv(value)
        except ValueError:
            raise ConfigError(f"config line {lineno}: bad value {value!r} for {key}") from None
    return out


def model_from_mapping(values: Mapping[str, object]) -> ChronologyModel:
    kwargs = {k: CONFIG_KEYS[k](v) for k, v in values.items() if k in CONFIG_KEYS and v is not None}
    return ChronologyModel(**kwargs)


def time_from_distance(d: float, model: ChronologyModel) -> float:
    if d < 0:
        raise ValueError(f"distance must be >= 0, got {d}")
    if d >= model.d_max:
        raise SaturationError(f"distance {d} is at or beyond saturation d_max={model.d_max}")
    return model.time_rule.time(d, model.tau, model.d_max)


def distance_from_time(t: float, model: ChronologyModel) -> float:
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    return model.time_rule.distance(t, model.tau, model.d_max)


@dataclass(frozen=True, eq=False)
class TimeMatrix(PairMatrix):
    """Pairwise separation times in years."""


def time_matrix(dm: PairMatrix, model: ChronologyModel) -> TimeMatrix:
    times = np.empty(n_pairs(dm.n))
    for k, (i, j) in enumerate(dm.pairs()):
        d = float(dm.entries[k])
        if d >= model.d_max:
            raise SaturationError(
                f"pair ({dm.labels[i]}, {dm.labels[j]}): distance {d} at or beyond d_max={model.d_max}"
            )
        times[k] = time_from_distance(d, model)
    return TimeMatrix(dm.labels, times)


def calibrate_tau(dm: PairMatrix, anchor_root_age: float, model: ChronologyModel) -> ChronologyModel:
    """Rescale tau so the UPGMA root of the time matrix sits at ``anchor_root_age``.

    Times are linear in tau, so one multiplicative correction is exact.
    """
    from .phylogeny import upgma

    if not anchor_root_age > 0:
        raise CalibrationError("anchor_root_age must be > 0")
    if dm.n < 2 or not np.any(dm.entries > 0):
        raise CalibrationError("cannot calibrate on a matrix without positive distances")
    root = upgma(time_matrix(dm, model)).height
    if not root > 0:
        raise CalibrationError("UPGMA root height is zero")
    return replace(model, tau=model.tau * anchor_root_age / root)


def date_from_variance(radial_variance: float, model: ChronologyModel) -> float:
    """Years since divergence, proportional to the radial variance."""
    if radial_variance < 0:
        raise ValueError("variance must be >= 0")
    if model.k_var is None:
        raise ConfigError("k_var is not configured")
    return model.k_var * radial_variance


def calendar_year(lag: float, model: ChronologyModel) -> float:
    return model.reference_year - lag


def format_calendar_year(year: float) -> str:
    y = round(year)
    return f"A.D. {y}" if y > 0 else f"{1 - y} B.C."


# --- synthetic evolution -----------------------------------------------------

@dataclass(frozen=True)
class WordGenerator:
    """Random words: alternating consonant/vowel letters, uniform length."""

    consonants: str = "bdfghklmnprstvz"
    vowels: str = "aeiou"
    min_len: int = 3
    max_len: int = 8

    def __call__(self, rng: np.random.Generator) -> str:
        length = int(rng.integers(self.min_len, self.max_len + 1))
        start = int(rng.integers(2))
        chars = []
        for k in range(length):
            pool = self.consonants if (k + start) % 2 == 0 else self.vowels
            chars.append(pool[int(rng.integers(len(pool)))])
        return "".join(chars)


DEFAULT_GENERATOR = WordGenerator()


def random_lexicon(tag: str, m: int, rng: np.random.Generator, generator: WordGenerator = DEFAULT_GENERATOR) -> Lexicon:
    return Lexicon(tag, {k: generator(rng) for k in range(1, m + 1)})


def random_word_baseline(n_samples: int = 20000, seed: int = 0, generator: WordGenerator = DEFAULT_GENERATOR) -> float:
    """Monte-Carlo mean distance between two independent generated words."""
    rng = np.random.default_rng(seed)
    total = math.fsum(word_distance(generator(rng), generator(rng)) for _ in range(n_samples))
    return total / n_samples


def simulate_divergence(
    ancestor: Lexicon,
    tree,
    rate: float,
    seed: int,
    m_catalog: int | None = None,
    generator: WordGenerator = DEFAULT_GENERATOR,
) -> Corpus:
    """Evolve ``ancestor`` down ``tree`` (a NewickNode or Phylogeny).

    On a branch of length t every word is independently replaced by a
    fresh random word with probability 1 - exp(-rate * t). Leaves come out
    in preorder.
    """
    if not rate > 0:
        raise ValueError("rate must be > 0")
    if not isinstance(tree, NewickNode):
        tree = tree.to_newick_node()
    rng = np.random.default_rng(seed)
    leaves: list[Lexicon] = []

    def evolve(node: NewickNode, words: dict[int, str]):
        t = node.length or 0.0
        if t > 0:
            p = -math.expm1(-rate * t)
            words = dict(words)
            for mid in sorted(words):
                if rng.random() < p:
                    words[mid] = generator(rng)
        if node.is_leaf:
            leaves.append(Lexicon(node.name, words))
        for child in node.children:
            evolve(child, words)

    evolve(tree, dict(ancestor.entries))
    if m_catalog is None:
        m_catalog = max(max(ancestor.entries, default=1), 1)
    return Corpus(tuple(leaves), m_catalog)


def tau_for_rate(rate: float) -> float:
    """tau matching a per-lineage replacement rate under the logarithmic rule."""
    return 2.0 / rate

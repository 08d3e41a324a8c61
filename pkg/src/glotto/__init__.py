"""Lexical distances between languages from word lists, with UPGMA
phylogeny, Euclidean geometry and glottochronological dating."""

__version__ = "0.1.0"

from .chronology import (
    ChronologyModel,
    TimeMatrix,
    calibrate_tau,
    date_from_variance,
    distance_from_time,
    simulate_divergence,
    time_from_distance,
    time_matrix,
)
from .edit_distance import batch_word_distances, levenshtein, word_distance
from .geometry import Embedding, embed, radial_variance, residual_ratio, spherical
from .language_distance import DistanceMatrix, distance_matrix, external_reference_report, language_distance
from .lexicon import Corpus, Lexicon, NormalizationPolicy, normalize_word, parse_corpus, read_corpus
from .phylogeny import Phylogeny, partitions_at_depth, to_newick, upgma

__all__ = [
    "ChronologyModel", "Corpus", "DistanceMatrix", "Embedding", "Lexicon", "NormalizationPolicy",
    "Phylogeny", "TimeMatrix", "batch_word_distances", "calibrate_tau", "date_from_variance",
    "distance_from_time", "distance_matrix", "embed", "external_reference_report",
    "language_distance", "levenshtein", "normalize_word", "parse_corpus", "partitions_at_depth", "read_corpus",
    "radial_variance", "residual_ratio", "simulate_divergence", "spherical", "time_from_distance",
    "time_matrix", "to_newick", "upgma", "word_distance",
]

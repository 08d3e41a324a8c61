import functools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glotto.edit_distance import KERNELS, batch_word_distances, levenshtein, word_distance
from oracles import edit_script_bfs, random_word, string_space_bfs

short = st.text(alphabet="abcd", max_size=8)
nonempty = st.text(alphabet="abcdñé", min_size=1, max_size=12)


@pytest.mark.parametrize(
    "a, b, expected",
    [("rano", "rano", 0), ("ab", "ax", 1), ("abc", "xyz", 3), ("", "abc", 3), ("kitten", "sitting", 3)],
)
def test_levenshtein_examples(a, b, expected):
    for kernel in KERNELS:
        assert levenshtein(a, b, kernel=kernel) == expected


def test_word_distance_goldens():
    assert word_distance("ab", "ax") == 0.5
    assert word_distance("abcdefgh", "abcdefgx") == 0.125
    assert word_distance("rano", "rano") == 0.0


def test_length_is_in_code_points():
    # one substitution on two-character words, whatever the UTF-8 byte length
    assert word_distance("ñy", "ny") == 0.5
    assert levenshtein("ñ", "n") == 1


def test_unknown_kernel():
    with pytest.raises(ValueError):
        levenshtein("a", "b", kernel="fast")


def test_random_pairs_match_brute_force(rng):
    for _ in range(2000):
        a, b = random_word(rng, "abcd", 8), random_word(rng, "abcd", 8)
        assert levenshtein(a, b) == edit_script_bfs(a, b)


def test_script_search_matches_string_space_search(rng):
    # the prefix-state search is complete: check it against unrestricted BFS on strings
    for _ in range(300):
        a, b = random_word(rng, "abcd", 5), random_word(rng, "abcd", 5)
        assert edit_script_bfs(a, b) == string_space_bfs(a, b)


@given(short, short)
def test_kernels_agree(a, b):
    reference = KERNELS["full"](a, b)
    assert KERNELS["bitparallel"](a, b) == reference
    assert KERNELS["tworow"](a, b) == reference


@given(st.text(alphabet="ab", max_size=70), st.text(alphabet="ab", max_size=70))
def test_bitparallel_beyond_machine_word(a, b):
    assert levenshtein(a, b) == KERNELS["full"](a, b)


@given(short, short, st.integers(0, 9))
def test_band_exact_or_lower_bound(a, b, band):
    exact = levenshtein(a, b)
    got = levenshtein(a, b, band=band)
    assert got == (exact if exact <= band else band + 1)


@given(nonempty, nonempty)
def test_metric_basics(a, b):
    d = word_distance(a, b)
    assert d == word_distance(b, a)
    assert 0.0 <= d <= 1.0
    assert (d == 0.0) == (a == b)
    assert levenshtein(a, b) == levenshtein(b, a)


def test_distance_one_for_disjoint_alphabets():
    assert word_distance("aaaa", "bb") == 1.0


def test_batch_matches_sequential(rng):
    assert batch_word_distances([]) == []
    assert batch_word_distances([("ab", "ax"), ("abcdefgh", "abcdefgx")]) == [0.5, 0.125]
    pairs = [(random_word(rng, "abcd", 8, 1), random_word(rng, "abcd", 8, 1)) for _ in range(10_000)]
    sequential = [word_distance(a, b) for a, b in pairs]
    assert batch_word_distances(pairs) == sequential
    assert batch_word_distances(pairs, workers=2, chunk_size=1500) == sequential


def test_renormalized_distance_is_not_a_metric():
    # d(ab, ba) = 2/2 but the detour through "aba" costs 1/3 + 1/3
    assert word_distance("ab", "ba") == 1.0
    assert word_distance("ab", "aba") + word_distance("aba", "ba") == pytest.approx(2 / 3)


@pytest.mark.slow
def test_triangle_inequality_sampled():
    """10**6 random triples, length <= 10 over a 4-letter alphabet.

    Plain Levenshtein never violates the triangle inequality; the
    renormalized distance does, rarely, and every violation is confirmed
    in exact rational arithmetic.
    """
    rng = np.random.default_rng(7)
    n = 1_000_000
    lengths = rng.integers(1, 11, size=(n, 3))
    letters = rng.integers(0, 4, size=(n, 3, 10))
    alphabet = np.array(list("abcd"))
    lev = functools.lru_cache(maxsize=None)(levenshtein)
    raw_violations, violations = 0, []
    for k in range(n):
        a, b, c = ("".join(alphabet[letters[k, s, : lengths[k, s]]]) for s in range(3))
        ab, bc, ac = lev(a, b), lev(b, c), lev(a, c)
        if ac > ab + bc:
            raw_violations += 1
        la, lb, lc = len(a), len(b), len(c)
        if Fraction(ac, max(la, lc)) > Fraction(ab, max(la, lb)) + Fraction(bc, max(lb, lc)):
            violations.append((a, b, c))
    assert raw_violations == 0
    assert 0 < len(violations) < 100
    for a, b, c in violations[:5]:
        assert word_distance(a, c) > word_distance(a, b) + word_distance(b, c)
        assert string_space_bfs(a, c) == levenshtein(a, c)

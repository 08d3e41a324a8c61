import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glotto.chronology import (
    CalibrationError,
    ChronologyModel,
    ConfigError,
    SaturationError,
    TimeMatrix,
    calendar_year,
    calibrate_tau,
    date_from_variance,
    distance_from_time,
    format_calendar_year,
    model_from_mapping,
    parse_config,
    random_lexicon,
    random_word_baseline,
    simulate_divergence,
    tau_for_rate,
    time_from_distance,
    time_matrix,
)
from glotto.edit_distance import word_distance
from glotto.language_distance import DistanceMatrix, distance_matrix
from glotto.newick import NewickNode, parse_newick
from glotto.phylogeny import upgma


def star(n, t):
    return NewickNode(children=[NewickNode(f"L{k}", t) for k in range(n)])


def random_dm(rng, n, hi=0.9):
    return DistanceMatrix(tuple(f"L{k}" for k in range(n)), rng.uniform(0.05, hi, size=n * (n - 1) // 2))


def test_time_from_distance_examples():
    model = ChronologyModel(tau=1000.0)
    assert time_from_distance(0.0, model) == 0.0
    assert time_from_distance(1 - math.exp(-2), model) == pytest.approx(1000.0, rel=1e-12)
    assert time_from_distance(0.5, ChronologyModel(tau=2000.0)) == pytest.approx(693.147180559945, rel=1e-12)
    half = ChronologyModel(tau=1000.0, d_max=0.8)
    assert time_from_distance(0.8 * (1 - math.exp(-2)), half) == pytest.approx(1000.0, rel=1e-12)


def test_saturation_and_range():
    model = ChronologyModel(d_max=0.8)
    with pytest.raises(SaturationError):
        time_from_distance(0.8, model)
    with pytest.raises(SaturationError):
        time_from_distance(0.95, model)
    with pytest.raises(ValueError):
        time_from_distance(-0.1, model)


@pytest.mark.parametrize("kwargs", [{"tau": 0}, {"d_max": 0}, {"d_max": 1.2}, {"k_var": -1}, {"rule": "linear"}])
def test_model_invariants(kwargs):
    with pytest.raises(ConfigError):
        ChronologyModel(**kwargs)


@pytest.mark.parametrize("d_max", [1.0, 0.87, 0.5])
def test_round_trip_grid(d_max):
    model = ChronologyModel(tau=1234.5, d_max=d_max)
    for d in np.linspace(0.0, 0.99 * d_max, 1000):
        t = time_from_distance(d, model)
        assert distance_from_time(t, model) == pytest.approx(d, rel=1e-12, abs=0)
        assert time_from_distance(distance_from_time(t, model), model) == pytest.approx(t, rel=1e-12, abs=0)


@given(st.floats(0, 0.98), st.floats(0, 0.98))
def test_strictly_increasing(a, b):
    model = ChronologyModel(tau=800.0)
    if a < b:
        assert time_from_distance(a, model) < time_from_distance(b, model)


def test_time_matrix_examples(rng):
    model = ChronologyModel(tau=1000.0)
    zero = DistanceMatrix(("a", "b", "c"), [0.0, 0.0, 0.0])
    assert np.all(time_matrix(zero, model).entries == 0)
    one = DistanceMatrix(("a", "b"), [0.3])
    tm = time_matrix(one, model)
    assert tm.labels == ("a", "b")
    assert tm.entries.tolist() == [time_from_distance(0.3, model)]
    for _ in range(20):
        dm = random_dm(rng, 6, hi=0.6)
        bigger = DistanceMatrix(dm.labels, dm.entries + rng.uniform(0.01, 0.3, size=dm.entries.shape))
        assert np.all(time_matrix(bigger, model).entries > time_matrix(dm, model).entries)


def test_time_matrix_saturation_names_pair():
    dm = DistanceMatrix(("a", "b", "c"), [0.2, 0.9, 0.3])
    with pytest.raises(SaturationError, match=r"\(a, c\)"):
        time_matrix(dm, ChronologyModel(d_max=0.85))


def test_calibration(rng):
    for _ in range(25):
        dm = random_dm(rng, 7)
        model = ChronologyModel(tau=float(rng.uniform(100, 5000)), d_max=0.95)
        cal = calibrate_tau(dm, 1350.0, model)
        root = upgma(time_matrix(dm, cal)).height
        assert root == pytest.approx(1350.0, rel=1e-9)
        again = calibrate_tau(dm, 1350.0, cal)
        assert abs(again.tau - cal.tau) <= 1e-12 * cal.tau
        doubled = calibrate_tau(dm, 2700.0, model)
        assert doubled.tau == pytest.approx(2 * cal.tau, rel=1e-12)
        h1 = upgma(time_matrix(dm, cal)).clusters()
        h2 = upgma(time_matrix(dm, doubled)).clusters()
        assert h1.keys() == h2.keys()
        assert all(h2[k] == pytest.approx(2 * h1[k], rel=1e-12) for k in h1)


def test_calibration_errors():
    model = ChronologyModel()
    with pytest.raises(CalibrationError):
        calibrate_tau(DistanceMatrix(("a", "b", "c"), [0, 0, 0]), 1350.0, model)
    with pytest.raises(CalibrationError):
        calibrate_tau(DistanceMatrix(("a", "b"), [0.2]), 0.0, model)


def test_date_from_variance():
    model = ChronologyModel(k_var=2.5e5, reference_year=2000)
    assert date_from_variance(0.0, model) == 0.0
    assert date_from_variance(0.0054, model) == pytest.approx(1350.0)
    assert date_from_variance(0.0108, model) == 2 * date_from_variance(0.0054, model)
    assert format_calendar_year(calendar_year(1350.0, model)) == "A.D. 650"
    assert format_calendar_year(calendar_year(2100.0, model)) == "101 B.C."
    with pytest.raises(ConfigError):
        date_from_variance(1.0, ChronologyModel())
    with pytest.raises(ValueError):
        date_from_variance(-1.0, model)


def test_config_parsing():
    cfg = parse_config("# comment\ntau = 1500\nd_max=0.9 # inline\nk_var=2e5\nreference_year=2010\nfoo=bar\n")
    assert cfg == {"tau": 1500.0, "d_max": 0.9, "k_var": 2e5, "reference_year": 2010, "foo": "bar"}
    assert model_from_mapping(cfg) == ChronologyModel(1500.0, 0.9, 2e5, 2010)
    with pytest.raises(ConfigError):
        parse_config("tau\n")
    with pytest.raises(ConfigError):
        parse_config("tau=fast\n")


# --- simulator ---------------------------------------------------------------

def test_simulator_deterministic(rng):
    anc = random_lexicon("anc", 50, rng)
    tree = parse_newick("((a:100,b:100):50,c:150);")
    one = simulate_divergence(anc, tree, 0.002, seed=5)
    two = simulate_divergence(anc, tree, 0.002, seed=5)
    other = simulate_divergence(anc, tree, 0.002, seed=6)
    assert one == two
    assert one != other
    assert one.labels == ["a", "b", "c"]


def test_simulator_accepts_phylogeny(rng):
    anc = random_lexicon("anc", 20, rng)
    tm = TimeMatrix(("a", "b", "c"), [200.0, 800.0, 800.0])
    corpus = simulate_divergence(anc, upgma(tm), 0.001, seed=1)
    assert sorted(corpus.labels) == ["a", "b", "c"]


def test_vanishing_rate(rng):
    anc = random_lexicon("anc", 200, rng)
    corpus = simulate_divergence(anc, star(5, 1000.0), 1e-12, seed=3)
    assert all(dict(lex.entries) == dict(anc.entries) for lex in corpus.lexicons)
    assert np.all(distance_matrix(corpus).entries == 0)


def test_large_separation_reaches_random_baseline(rng):
    baseline = random_word_baseline(20000, seed=11)
    anc = random_lexicon("anc", 2000, rng)
    corpus = simulate_divergence(anc, star(2, 1e5), 0.002, seed=4)
    a, b = corpus.lexicons
    ds = [word_distance(a.entries[k], b.entries[k]) for k in a.entries]
    se = np.std(ds) / math.sqrt(len(ds))
    assert abs(np.mean(ds) - baseline) < 4 * se


def test_star_tree_time_recovery(rng):
    tau = 1000.0
    rate = 2 / tau
    assert tau_for_rate(rate) == tau
    baseline = random_word_baseline(50000, seed=1)
    model = ChronologyModel(tau=tau, d_max=baseline)
    t = 250.0
    anc = random_lexicon("anc", 200, rng)
    corpus = simulate_divergence(anc, star(8, t), rate, seed=9)
    tm = time_matrix(distance_matrix(corpus), model)
    fitted_branch = tm.entries / 2
    assert abs(fitted_branch.mean() - t) / t < 0.10


@pytest.mark.slow
def test_simulator_consistency_over_seeds():
    tau, t = 1000.0, 200.0
    rate = 2 / tau
    baseline = random_word_baseline(50000, seed=2)
    model = ChronologyModel(tau=tau, d_max=baseline)
    means = []
    for seed in range(100):
        anc = random_lexicon("anc", 200, np.random.default_rng(1000 + seed))
        corpus = simulate_divergence(anc, star(2, t), rate, seed=seed)
        means.append(distance_matrix(corpus).entries[0])
    expected = distance_from_time(2 * t, model)
    se = np.std(means, ddof=1) / math.sqrt(len(means))
    assert abs(np.mean(means) - expected) < 3 * se

import io
import random

import numpy as np
import pytest

from hothand.correlogram import aggregate_correlogram, player_correlograms
from hothand.errors import InvalidParameter, InvalidSpec, WrongModelKind
from hothand.sequences import build_sequences
from hothand.shot_data import validate, write_events
from hothand.synthgen import (
    GAME_LENGTH_S,
    LeagueSpec,
    ShooterModel,
    gap_coupled_fg_curve,
    generate,
    markov_acf,
    stationary_rate,
)


def acf_by_matrix_power(a, b, k):
    """Stationary lag-k correlation of the 0/1 chain from P**k directly."""
    P = np.array([[1 - b, b], [1 - a, a]])
    pi = b / (1 - a + b)
    Pk = np.linalg.matrix_power(P, k)
    # E[X0 Xk] = pi * P^k[1, 1]
    cov = pi * Pk[1, 1] - pi * pi
    return cov / (pi * (1 - pi))


@pytest.mark.parametrize("a,b", [(0.6, 0.4), (0.3, 0.7), (0.45, 0.45), (0.9, 0.05), (0.2, 0.5)])
@pytest.mark.parametrize("k", [0, 1, 2, 3, 7])
def test_markov_acf_matches_matrix_power(a, b, k):
    assert markov_acf(a, b, k) == pytest.approx(acf_by_matrix_power(a, b, k), abs=1e-12)


def test_markov_acf_examples():
    assert markov_acf(0.6, 0.4, 1) == pytest.approx(0.2)
    assert markov_acf(0.45, 0.45, 3) == 0.0
    assert markov_acf(0.3, 0.9, 0) == 1.0


@pytest.mark.parametrize("a,b,k", [(0.0, 0.5, 1), (0.5, 1.0, 1), (0.5, 0.5, -1)])
def test_markov_acf_invalid(a, b, k):
    with pytest.raises(InvalidParameter):
        markov_acf(a, b, k)


def test_markov_acf_against_naive_simulation():
    # plain-Python chain, independent of generate()
    rnd = random.Random(42)
    a, b = 0.6, 0.4
    x = [1 if rnd.random() < stationary_rate(a, b) else 0]
    for _ in range(200_000):
        x.append(1 if rnd.random() < (a if x[-1] else b) else 0)
    x = np.array(x)
    for k in (1, 2):
        r = np.corrcoef(x[:-k], x[k:])[0, 1]
        assert r == pytest.approx(markov_acf(a, b, k), abs=0.01)


def test_gap_curve_examples():
    m = ShooterModel.gap_coupled(0.45, 60, 120)
    expected = 0.45 * (1 / 60) / (0.45 / 60 + 0.55 / 120)
    assert gap_coupled_fg_curve(m, 0.0) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.621, abs=5e-4)
    assert gap_coupled_fg_curve(m, 1e5) == pytest.approx(0.0, abs=1e-12)
    ts = np.linspace(0, 3000, 200)
    assert np.all(np.diff(gap_coupled_fg_curve(m, ts)) < 0)


def test_gap_curve_equal_means_constant():
    m = ShooterModel.gap_coupled(0.45, 90, 90)
    assert np.allclose(gap_coupled_fg_curve(m, np.array([0, 10, 500, 5000])), 0.45)


def test_gap_curve_wrong_kind():
    with pytest.raises(WrongModelKind):
        gap_coupled_fg_curve(ShooterModel.bernoulli(0.5), 10)


def test_gap_curve_against_direct_simulation():
    rng = np.random.default_rng(0)
    n = 2_000_000
    made = rng.random(n) < 0.45
    gap = rng.exponential(np.where(made, 60.0, 120.0))
    m = ShooterModel.gap_coupled(0.45, 60, 120)
    for t in (30, 90, 240):
        window = np.abs(gap - t) < 3
        assert made[window].mean() == pytest.approx(gap_coupled_fg_curve(m, t), abs=0.02)


# -- generate -----------------------------------------------------------------
def test_fixed_ten_shots_conform():
    m = ShooterModel.bernoulli(0.5, shots_per_game_mean=10, fixed_shots=True, games_per_season=1)
    ds = generate(LeagueSpec(1, m, seed=4))
    assert len(ds) == 10
    assert validate(ds) == []
    assert set(ds.game_id) == {"2014-G001"} and set(ds.player_id) == {"P0001"}


def test_timestamps_within_regulation_and_increasing():
    m = ShooterModel.bernoulli(0.45, mu_s=200, shots_per_game_mean=30, games_per_season=40)
    ds = generate(LeagueSpec(5, m, seed=1))
    assert ds.t.max() <= GAME_LENGTH_S
    assert validate(ds) == []
    for s in build_sequences(ds):
        assert np.all(np.diff(s.times) > 0)
    # mean 200 s gaps fit ~14 shots per game, so the clock truncates
    assert len(ds) < 5 * 40 * 30 * 0.6


def test_distances_in_range():
    ds = generate(LeagueSpec(3, ShooterModel.bernoulli(0.4, games_per_season=10), seed=2))
    assert ds.distance_ft.min() >= 1.0 and ds.distance_ft.max() <= 30.0


def _csv(ds):
    buf = io.StringIO()
    write_events(ds, buf)
    return buf.getvalue()


def test_determinism_byte_identical():
    spec = LeagueSpec(20, ShooterModel.markov(0.6, 0.4, games_per_season=10), seasons=(2014, 2015), seed=9)
    assert _csv(generate(spec)) == _csv(generate(spec))
    assert _csv(generate(spec)) == _csv(generate(spec, threads=4))
    other = LeagueSpec(20, spec.models, seasons=(2014, 2015), seed=10)
    assert _csv(generate(other)) != _csv(generate(spec))


def test_player_streams_independent_of_league_size():
    m = ShooterModel.bernoulli(0.45, games_per_season=5)
    small = generate(LeagueSpec(2, m, seed=3))
    big = generate(LeagueSpec(7, m, seed=3))
    p1 = small.take(small.player_id == "P0001")
    assert p1 == big.take(big.player_id == "P0001")


@pytest.mark.slow
def test_markov_stationary_rate():
    m = ShooterModel.markov(0.6, 0.4, mu_s=30, shots_per_game_mean=40)
    ds = generate(LeagueSpec(305, m, seed=21))
    assert len(ds) >= 950_000
    assert ds.made.mean() == pytest.approx(0.5, abs=0.003)


def test_memory_decay_keeps_rate_and_shrinks_correlation():
    base = dict(mu_s=60, shots_per_game_mean=30, games_per_season=82)
    fading = ShooterModel.markov(0.35, 0.55, memory_s=30, **base)
    ds = generate(LeagueSpec(60, fading, seed=5))
    assert ds.made.mean() == pytest.approx(stationary_rate(0.35, 0.55), abs=0.01)
    agg = aggregate_correlogram(player_correlograms(build_sequences(ds), lags=[1]))
    # dependence fades, so |r(1)| sits well below |a - b| = 0.2
    assert -0.2 < agg.r(1) < -0.02


def test_per_player_models():
    models = [ShooterModel.bernoulli(0.2, games_per_season=30), ShooterModel.bernoulli(0.8, games_per_season=30)]
    ds = generate(LeagueSpec(2, models, seed=0))
    assert ds.made[ds.player_id == "P0001"].mean() < 0.35
    assert ds.made[ds.player_id == "P0002"].mean() > 0.65


@pytest.mark.parametrize(
    "kw",
    [
        dict(kind="poisson"),
        dict(kind="bernoulli", p=1.0),
        dict(kind="markov", a=1.2, b=0.4),
        dict(kind="markov", a=0.5),
        dict(kind="gap_coupled", p=0.4, mu_make_s=60),
        dict(kind="gap_coupled", p=0.4, mu_make_s=-1, mu_miss_s=60),
        dict(kind="bernoulli", mu_s=0),
        dict(kind="bernoulli", memory_s=10),
        dict(kind="bernoulli", games_per_season=0),
        dict(kind="bernoulli", shots_per_game_mean=0),
    ],
)
def test_invalid_models(kw):
    with pytest.raises(InvalidSpec):
        ShooterModel(**kw)


def test_invalid_league():
    m = ShooterModel()
    with pytest.raises(InvalidSpec):
        LeagueSpec(0, m)
    with pytest.raises(InvalidSpec):
        LeagueSpec(2, [m])
    with pytest.raises(InvalidSpec):
        LeagueSpec(1, m, seasons=())
    with pytest.raises(InvalidSpec):
        LeagueSpec(1, m, seed=-1)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hothand.errors import InvalidParameter, LagMismatch, TooFewPlayers, UnknownSeason
from hothand.sequences import SequenceFilter
from hothand.shot_data import Dataset
from hothand.streakiness import SeasonStreakMetric, cross_season, pearson, season_metrics
from hothand.synthgen import LeagueSpec, ShooterModel, generate

from conftest import ev


def test_alternating_player_is_minus_one():
    ds = Dataset.from_events([ev(10 * i, i % 2 == 0) for i in range(100)])
    (m,) = season_metrics(ds, 2014, 1, min_pairs=50)
    assert m.r == -1.0 and m.n_pairs == 99


def test_sparse_player_omitted():
    ds = Dataset.from_events(
        [ev(10 * i, i % 3 == 0) for i in range(11)]
        + [ev(10 * i, i % 2 == 0, player="P2") for i in range(200)]
    )
    out = season_metrics(ds, 2014, 1, min_pairs=50)
    assert [m.player_id for m in out] == ["P2"]


def test_pairs_stay_within_games():
    # two 3-shot games give 4 lag-1 pairs, not 5
    ds = Dataset.from_events([ev(t, t % 2, game=g) for g in ("G1", "G2") for t in (1, 2, 3)])
    (m,) = season_metrics(ds, 2014, 1, min_pairs=2)
    assert m.n_pairs == 4


def test_season_filter_overrides_filter_seasons():
    ds = Dataset.from_events(
        [ev(10 * i, i % 2, season=2014) for i in range(120)]
        + [ev(10 * i, i % 2, season=2015, game="G9") for i in range(120)]
    )
    out = season_metrics(ds, 2015, 1, SequenceFilter(seasons={2014}), min_pairs=100)
    assert [(m.season, m.n_pairs) for m in out] == [(2015, 119)]


def test_unknown_season():
    ds = Dataset.from_events([ev(1), ev(2)])
    with pytest.raises(UnknownSeason):
        season_metrics(ds, 2016, 1)


def test_lag_zero_rejected():
    ds = Dataset.from_events([ev(1), ev(2)])
    with pytest.raises(InvalidParameter):
        season_metrics(ds, 2014, 0)


def metrics(values, k=1, season=2014):
    return [SeasonStreakMetric(f"P{i:03d}", season, k, r, 500) for i, r in enumerate(values)]


def test_cross_season_self_is_one():
    a = metrics([0.1, -0.05, 0.02, -0.2, 0.07])
    sc = cross_season(a, a)
    assert sc.r_across == 1.0 and sc.n_players == 5


def test_cross_season_inner_join_and_undefined():
    a = metrics([0.1, -0.1, 0.2, None, 0.3])
    b = metrics([0.2, -0.2, 0.1, 0.0], season=2015)
    sc = cross_season(a, b)
    assert [p[0] for p in sc.points] == ["P000", "P001", "P002"]
    assert sc.r_across == pytest.approx(np.corrcoef([0.1, -0.1, 0.2], [0.2, -0.2, 0.1])[0, 1])


def test_cross_season_errors():
    with pytest.raises(LagMismatch):
        cross_season(metrics([0.1, 0.2, 0.3]), metrics([0.1, 0.2, 0.3], k=2))
    with pytest.raises(TooFewPlayers):
        cross_season(metrics([0.1, 0.2]), metrics([0.1, 0.2]))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-1, 1), st.floats(-1, 1)), min_size=3, max_size=40))
def test_cross_season_reflection_symmetry(pairs):
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    a, b = metrics(xs), metrics(ys, season=2015)
    try:
        ab = cross_season(a, b)
    except TooFewPlayers:
        assert math.isnan(pearson(xs, ys))
        return
    ba = cross_season(b, a)
    assert ab.r_across == ba.r_across
    assert [(p, y, x) for p, x, y in ab.points] == ba.points
    assert -1.0 <= ab.r_across <= 1.0


def test_bernoulli_players_inside_null_band():
    m = ShooterModel.bernoulli(0.45, games_per_season=82, shots_per_game_mean=15)
    ds = generate(LeagueSpec(40, m, seed=17))
    out = season_metrics(ds, 2014, 1)
    assert len(out) == 40
    for s in out:
        assert abs(s.r) < 4 / math.sqrt(s.n_pairs)

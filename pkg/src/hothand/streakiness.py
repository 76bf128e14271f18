"""Per-season streakiness metrics and their season-to-season correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .correlogram import group_sequences, player_correlogram
from .errors import InvalidParameter, LagMismatch, TooFewPlayers, UnknownSeason
from .sequences import SequenceFilter, build_sequences
from .shot_data import Dataset

DEFAULT_MIN_PAIRS = 100
DEFAULT_LAGS = (1, 2)


@dataclass(frozen=True)
class SeasonStreakMetric:
    player_id: str
    season: int
    k: int
    r: float | None
    n_pairs: int


@dataclass(frozen=True)
class CrossSeasonScatter:
    k: int
    points: list[tuple[str, float, float]]
    r_across: float

    @property
    def n_players(self) -> int:
        return len(self.points)


def season_metrics(
    ds: Dataset,
    season: int,
    k: int,
    f: SequenceFilter | None = None,
    min_pairs: int = DEFAULT_MIN_PAIRS,
) -> list[SeasonStreakMetric]:
    """Pooled lag-k correlation for each player with enough pairs in ``season``.

    ``f``'s own season selection is replaced by ``season``. Players with fewer
    than ``min_pairs`` within-game pairs are omitted; a player with enough
    pairs but a constant side keeps ``r=None``.
    """
    if k < 1:
        raise InvalidParameter(f"streakiness lag must be >= 1, got {k}")
    if season not in set(ds.season.tolist()):
        raise UnknownSeason(f"season {season} not present in dataset")
    f = replace(f or SequenceFilter(), seasons=frozenset([season]))
    out = []
    for player, seqs in group_sequences(build_sequences(ds, f)).items():
        c = player_correlogram(seqs, lags=[k], min_pairs=min_pairs)
        pt = c.points[k]
        if pt.n_pairs >= min_pairs:
            out.append(SeasonStreakMetric(player, season, k, pt.r, pt.n_pairs))
    return out


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample correlation of two real vectors; NaN if either is constant."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = math.fsum(dx * dx), math.fsum(dy * dy)
    if sxx == 0 or syy == 0:
        return math.nan
    sxy = math.fsum(dx * dy)
    r = sxy / sxx if sxx == syy else sxy / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def cross_season(a: Sequence[SeasonStreakMetric], b: Sequence[SeasonStreakMetric]) -> CrossSeasonScatter:
    """Join two seasons' metrics on player_id and correlate the defined pairs."""
    lags = {m.k for m in a} | {m.k for m in b}
    if len(lags) > 1:
        raise LagMismatch(f"metrics mix lags {sorted(lags)}")
    rb = {m.player_id: m.r for m in b if m.r is not None}
    points = sorted(
        (m.player_id, m.r, rb[m.player_id]) for m in a if m.r is not None and m.player_id in rb
    )
    if len(points) < 3:
        raise TooFewPlayers(f"{len(points)} players defined in both seasons, need 3")
    r_across = pearson([p[1] for p in points], [p[2] for p in points])
    if math.isnan(r_across):
        raise TooFewPlayers("streakiness is constant across matched players; correlation undefined")
    return CrossSeasonScatter(lags.pop(), points, r_across)

"""Per-player per-game make/miss sequences under row and gap filters."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConflictingFilter, InvalidParameter
from .shot_data import Dataset


@dataclass(frozen=True)
class SequenceFilter:
    """Row filters plus an optional maximum gap between consecutive shots.

    ``min_distance_ft`` keeps shots strictly farther than the threshold.
    ``max_gap_s`` splits a player's game into maximal segments whose
    consecutive gaps are all <= the threshold.
    """

    min_distance_ft: float | None = None
    home_only: bool = False
    away_only: bool = False
    seasons: frozenset[int] | None = None
    max_gap_s: float | None = None

    def __post_init__(self):
        if self.home_only and self.away_only:
            raise ConflictingFilter("home_only and away_only are mutually exclusive")
        if self.max_gap_s is not None and not self.max_gap_s > 0:
            raise InvalidParameter(f"max_gap_s must be > 0, got {self.max_gap_s}")
        if self.min_distance_ft is not None and not self.min_distance_ft >= 0:
            raise InvalidParameter(f"min_distance_ft must be >= 0, got {self.min_distance_ft}")
        if self.seasons is not None:
            object.__setattr__(self, "seasons", frozenset(int(s) for s in self.seasons))

    def row_mask(self, ds: Dataset, distance: bool = True) -> np.ndarray:
        keep = np.ones(len(ds), dtype=bool)
        if distance and self.min_distance_ft is not None:
            keep &= ds.distance_ft > self.min_distance_ft
        if self.home_only:
            keep &= ds.is_home
        if self.away_only:
            keep &= ~ds.is_home
        if self.seasons is not None:
            keep &= np.isin(ds.season, sorted(self.seasons))
        return keep

    def label(self) -> str:
        parts = []
        if self.min_distance_ft is not None:
            parts.append(f"dist>{self.min_distance_ft:g}")
        if self.home_only:
            parts.append("home")
        if self.away_only:
            parts.append("away")
        if self.seasons is not None:
            parts.append("seasons=" + "+".join(str(s) for s in sorted(self.seasons)))
        if self.max_gap_s is not None:
            parts.append(f"max_gap={self.max_gap_s:g}s")
        return ";".join(parts) or "all"


@dataclass(frozen=True, eq=False)
class ShotSequence:
    player_id: str
    game_id: str
    season: int
    outcomes: np.ndarray
    times: np.ndarray

    def __post_init__(self):
        o = np.asarray(self.outcomes, dtype=np.int8)
        t = np.asarray(self.times, dtype=np.float64)
        if o.shape != t.shape or o.ndim != 1:
            raise ValueError("outcomes and times must be 1-d and the same length")
        object.__setattr__(self, "outcomes", o)
        object.__setattr__(self, "times", t)

    def __len__(self) -> int:
        return len(self.outcomes)

    def __eq__(self, other):
        if not isinstance(other, ShotSequence):
            return NotImplemented
        return (
            (self.player_id, self.game_id, self.season)
            == (other.player_id, other.game_id, other.season)
            and np.array_equal(self.outcomes, other.outcomes)
            and np.array_equal(self.times, other.times)
        )

    __hash__ = None


def _breaks(times: np.ndarray, max_gap_s: float | None) -> np.ndarray:
    if max_gap_s is None or math.isinf(max_gap_s):
        return np.zeros(max(len(times) - 1, 0), dtype=bool)
    return np.diff(times) > max_gap_s


def segment(seq: ShotSequence, max_gap_s: float | None) -> list[ShotSequence]:
    """Split one sequence wherever a consecutive gap exceeds ``max_gap_s``."""
    cuts = np.flatnonzero(_breaks(seq.times, max_gap_s)) + 1
    return [
        ShotSequence(seq.player_id, seq.game_id, seq.season, o, t)
        for o, t in zip(np.split(seq.outcomes, cuts), np.split(seq.times, cuts))
    ]


def build_sequences(ds: Dataset, f: SequenceFilter | None = None) -> list[ShotSequence]:
    """Filtered shot sequences, never spanning games.

    Row filters run first, so gaps are measured between surviving shots.
    Output is ordered by (player_id, game_id, first shot time).
    """
    f = SequenceFilter() if f is None else f
    sub = ds.take(f.row_mask(ds))
    if len(sub) == 0:
        return []
    order = np.lexsort((sub.t, sub.game_id, sub.player_id))
    player, game = sub.player_id[order], sub.game_id[order]
    season, t, made = sub.season[order], sub.t[order], sub.made[order]

    new_group = (player[1:] != player[:-1]) | (game[1:] != game[:-1])
    gap_break = _breaks(t, f.max_gap_s)
    starts = np.concatenate(([0], np.flatnonzero(new_group | gap_break) + 1))
    stops = np.append(starts[1:], len(t))
    return [
        ShotSequence(str(player[a]), str(game[a]), int(season[a]), made[a:b], t[a:b])
        for a, b in zip(starts.tolist(), stops.tolist())
    ]

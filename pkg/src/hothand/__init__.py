"""Streak analytics for make/miss shot sequences.

Lag-k autocorrelograms of binary shot signals, FG% by time to the next
shot, season-to-season streakiness, and synthetic leagues with known
answers for checking all of the above.
"""

from .correlogram import (
    Correlogram,
    LagPairs,
    LagPoint,
    aggregate_correlogram,
    lag_pairs,
    pearson_r,
    permutation_test,
    player_correlogram,
    player_correlograms,
)
from .gap_analysis import GapBucketTable, fg_by_gap
from .sequences import SequenceFilter, ShotSequence, build_sequences
from .shot_data import Dataset, ShotEvent, load_events, validate, write_events
from .streakiness import CrossSeasonScatter, SeasonStreakMetric, cross_season, season_metrics
from .synthgen import LeagueSpec, ShooterModel, gap_coupled_fg_curve, generate, markov_acf

__version__ = "0.1.0"

__all__ = [
    "Correlogram",
    "CrossSeasonScatter",
    "Dataset",
    "GapBucketTable",
    "LagPairs",
    "LagPoint",
    "LeagueSpec",
    "SeasonStreakMetric",
    "SequenceFilter",
    "ShooterModel",
    "ShotEvent",
    "ShotSequence",
    "aggregate_correlogram",
    "build_sequences",
    "cross_season",
    "fg_by_gap",
    "gap_coupled_fg_curve",
    "generate",
    "lag_pairs",
    "load_events",
    "markov_acf",
    "pearson_r",
    "permutation_test",
    "player_correlogram",
    "player_correlograms",
    "season_metrics",
    "validate",
    "write_events",
]

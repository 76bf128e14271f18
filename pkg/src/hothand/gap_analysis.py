"""Field-goal percentage of a shot as a function of time until the next one."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter
from .sequences import SequenceFilter, build_sequences
from .shot_data import Dataset

DEFAULT_MAX_GAP_MINUTES = 15
GAP_MODES = ("pair", "sequence_mean")


@dataclass(frozen=True)
class GapBucket:
    attempts: int
    makes: int

    @property
    def fg_pct(self) -> float:
        return self.makes / self.attempts


@dataclass(frozen=True)
class GapBucketTable:
    buckets: dict[int, GapBucket]
    filter_echo: SequenceFilter
    mode: str = "pair"

    @property
    def total_attempts(self) -> int:
        return sum(b.attempts for b in self.buckets.values())

    def rows(self) -> list[dict]:
        return [
            {"bucket": m, "attempts": b.attempts, "makes": b.makes, "fg_pct": b.fg_pct}
            for m, b in sorted(self.buckets.items())
        ]


def round_minutes(gap_s) -> np.ndarray:
    """Gap in seconds to whole minutes, halves rounded up (90 s -> 2)."""
    return np.floor(np.asarray(gap_s, dtype=np.float64) / 60.0 + 0.5).astype(np.int64)


def bucket_center_s(bucket: int) -> float:
    """Midpoint in seconds of the gap interval that rounds to ``bucket``.

    Bucket 0 only covers [0, 30) s, so its midpoint is 15 s.
    """
    lo = max(0.0, (bucket - 0.5) * 60.0)
    return (lo + (bucket + 0.5) * 60.0) / 2.0


def _pairs(ds: Dataset, f: SequenceFilter, distance_first_only: bool):
    """(first-shot outcome, gap seconds, sequence index) for admissible pairs."""
    if not distance_first_only or f.min_distance_ft is None:
        seqs = build_sequences(ds, f)
        firsts, gaps, sids = [], [], []
        for j, s in enumerate(seqs):
            if len(s) < 2:
                continue
            firsts.append(s.outcomes[:-1])
            gaps.append(np.diff(s.times))
            sids.append(np.full(len(s) - 1, j))
        if not firsts:
            return np.zeros(0, np.int8), np.zeros(0), np.zeros(0, np.int64)
        return np.concatenate(firsts), np.concatenate(gaps), np.concatenate(sids)

    # distance cut on the first shot only: build sequences without it, then
    # keep pairs whose opening shot is far enough
    relaxed = SequenceFilter(
        home_only=f.home_only, away_only=f.away_only, seasons=f.seasons, max_gap_s=f.max_gap_s
    )
    keep = relaxed.row_mask(ds)
    sub = ds.take(keep)
    order = np.lexsort((sub.t, sub.game_id, sub.player_id))
    player, game = sub.player_id[order], sub.game_id[order]
    t, made, dist = sub.t[order], sub.made[order], sub.distance_ft[order]
    gap = np.diff(t)
    ok = (player[1:] == player[:-1]) & (game[1:] == game[:-1])
    if f.max_gap_s is not None:
        ok &= gap <= f.max_gap_s
    ok &= dist[:-1] > f.min_distance_ft
    # a sequence index for sequence_mean mode: runs of consecutive admissible pairs
    sid = np.cumsum(np.concatenate(([True], ~ok[:-1])))[ok] if len(ok) else np.zeros(0, np.int64)
    return made[:-1][ok], gap[ok], sid


def fg_by_gap(
    ds: Dataset,
    f: SequenceFilter | None = None,
    max_gap_minutes: int = DEFAULT_MAX_GAP_MINUTES,
    mode: str = "pair",
    distance_first_only: bool = False,
) -> GapBucketTable:
    """Tally each adjacent same-player same-game pair by its rounded gap.

    The first shot's outcome is counted in the bucket of the gap to the next
    attempt. In ``pair`` mode each pair uses its own gap; in
    ``sequence_mean`` mode every pair of a sequence uses that sequence's mean
    gap. Pairs rounding above ``max_gap_minutes`` are dropped and empty
    buckets are omitted.
    """
    if not isinstance(max_gap_minutes, (int, np.integer)) or max_gap_minutes < 1:
        raise InvalidParameter(f"max_gap_minutes must be an integer >= 1, got {max_gap_minutes!r}")
    if mode not in GAP_MODES:
        raise InvalidParameter(f"mode must be one of {GAP_MODES}, got {mode!r}")
    f = SequenceFilter() if f is None else f

    firsts, gaps, sids = _pairs(ds, f, distance_first_only)
    if mode == "sequence_mean" and len(gaps):
        _, inv, counts = np.unique(sids, return_inverse=True, return_counts=True)
        inv = inv.reshape(-1)
        mean_gap = np.bincount(inv, weights=gaps) / counts
        gaps = mean_gap[inv]

    minutes = round_minutes(gaps)
    keep = minutes <= max_gap_minutes
    minutes, firsts = minutes[keep], firsts[keep].astype(np.int64)
    attempts = np.bincount(minutes, minlength=max_gap_minutes + 1)
    makes = np.bincount(minutes, weights=firsts, minlength=max_gap_minutes + 1)
    buckets = {
        m: GapBucket(int(attempts[m]), int(round(makes[m])))
        for m in range(len(attempts))
        if attempts[m] > 0
    }
    return GapBucketTable(buckets, f, mode)


"""Lag-k autocorrelation of binary shot sequences.

A player's lag-k value pools every within-sequence pair
``(outcome[i], outcome[i+k])`` over all of that player's sequences and takes
the mean-centered Pearson correlation of the pooled pairs. An aggregate
correlogram averages the per-player values lag by lag. Pairs never cross a
sequence boundary, so they never cross games.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptyInput,
    InvalidParameter,
    MixedPlayers,
    NoDefinedPoints,
    TooFewPairs,
)
from .sequences import ShotSequence

DEFAULT_LAGS = tuple(range(11))
DEFAULT_MIN_PAIRS = 50
Z95 = 1.959963984540054

WEIGHTINGS = ("equal", "by_pairs")
POOLINGS = ("player", "player_game")


@dataclass(frozen=True, eq=False)
class LagPairs:
    k: int
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=np.int8).reshape(-1)
        ys = np.asarray(self.ys, dtype=np.int8).reshape(-1)
        if xs.shape != ys.shape:
            raise ValueError("xs and ys must have equal length")
        if ((xs != 0) & (xs != 1)).any() or ((ys != 0) & (ys != 1)).any():
            raise ValueError("pair values must be 0 or 1")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    def __len__(self) -> int:
        return len(self.xs)


@dataclass(frozen=True)
class LagPoint:
    r: float | None
    n_pairs: int


@dataclass
class Correlogram:
    """Correlation by lag for one scope (a player id or ``"aggregate"``).

    ``band`` maps lag to a (low, high) 95% null band; ``p_values`` is only
    filled by a permutation test.
    """

    scope: str
    points: dict[int, LagPoint]
    band: dict[int, tuple[float, float]] | None = None
    p_values: dict[int, float] | None = field(default=None)

    @property
    def lags(self) -> list[int]:
        return sorted(self.points)

    def r(self, k: int) -> float | None:
        return self.points[k].r


# -- flat layout shared by lag_pairs and the permutation test -----------------
def _flatten(seqs: Sequence[ShotSequence]) -> tuple[np.ndarray, np.ndarray]:
    if not seqs:
        return np.zeros(0, dtype=np.int8), np.zeros(0, dtype=np.int64)
    outcomes = np.concatenate([s.outcomes for s in seqs])
    sid = np.repeat(np.arange(len(seqs)), [len(s) for s in seqs])
    return outcomes, sid


def _pair_index(sid: np.ndarray, k: int) -> np.ndarray:
    """Start indices i whose partner i+k lies in the same sequence."""
    n = len(sid)
    if k >= n:
        return np.zeros(0, dtype=np.int64)
    return np.flatnonzero(sid[: n - k] == sid[k:])


def lag_pairs(seqs: Sequence[ShotSequence], k: int) -> LagPairs:
    if k < 0:
        raise InvalidParameter(f"lag must be >= 0, got {k}")
    outcomes, sid = _flatten(seqs)
    i = _pair_index(sid, k)
    return LagPairs(k, outcomes[i], outcomes[i + k])


# -- Pearson on binary pairs --------------------------------------------------
def _r_from_counts(n: int, sx: int, sy: int, sxy: int) -> float | None:
    # integer numerators/denominators keep r(x, x) == 1.0 exactly
    num = n * sxy - sx * sy
    dx = n * sx - sx * sx
    dy = n * sy - sy * sy
    if dx == 0 or dy == 0:
        return None
    r = num / dx if dx == dy else num / math.sqrt(dx * dy)
    return min(1.0, max(-1.0, r))


def pearson_r(p: LagPairs, min_pairs: int = 2) -> float | None:
    """Mean-centered sample correlation of the pairs, or None when undefined.

    Undefined means fewer than ``min_pairs`` pairs or a constant side.
    """
    if min_pairs < 2:
        raise InvalidParameter(f"min_pairs must be >= 2, got {min_pairs}")
    n = len(p)
    if n < min_pairs:
        return None
    xs = p.xs.astype(np.int64)
    ys = p.ys.astype(np.int64)
    return _r_from_counts(n, int(xs.sum()), int(ys.sum()), int((xs & ys).sum()))


def _r_rows(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise r for 2-d binary arrays; NaN where a side is constant."""
    n = x.shape[1]
    sx = x.sum(axis=1, dtype=np.int64)
    sy = y.sum(axis=1, dtype=np.int64)
    sxy = (x & y).sum(axis=1, dtype=np.int64)
    num = (n * sxy - sx * sy).astype(np.float64)
    dx = (n * sx - sx * sx).astype(np.float64)
    dy = (n * sy - sy * sy).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / np.sqrt(dx * dy)
    r[(dx == 0) | (dy == 0)] = np.nan
    return np.clip(r, -1.0, 1.0)


# -- correlograms -------------------------------------------------------------
def _check_lags(lags: Iterable[int]) -> list[int]:
    lags = sorted(set(int(k) for k in lags))
    if not lags or lags[0] < 0:
        raise InvalidParameter(f"lags must be a non-empty set of integers >= 0, got {lags}")
    return lags


def _normal_half_width(n: int) -> float:
    return Z95 / math.sqrt(n)


def _correlogram(scope: str, seqs: Sequence[ShotSequence], lags: list[int], min_pairs: int) -> Correlogram:
    outcomes, sid = _flatten(seqs)
    o64 = outcomes.astype(np.int64)
    points, band = {}, {}
    for k in lags:
        i = _pair_index(sid, k)
        n = len(i)
        r = None
        if n >= min_pairs:
            x, y = o64[i], o64[i + k]
            r = _r_from_counts(n, int(x.sum()), int(y.sum()), int((x & y).sum()))
        points[k] = LagPoint(r, n)
        if k > 0 and r is not None:
            h = _normal_half_width(n)
            band[k] = (-h, h)
    return Correlogram(scope, points, band)


def player_correlogram(
    seqs: Sequence[ShotSequence],
    lags: Iterable[int] = DEFAULT_LAGS,
    min_pairs: int = DEFAULT_MIN_PAIRS,
) -> Correlogram:
    """Pooled lag-k correlations for one player's sequences.

    The attached band is the normal-approximation null band ``±1.96/sqrt(n)``.
    """
    if min_pairs < 2:
        raise InvalidParameter(f"min_pairs must be >= 2, got {min_pairs}")
    if not seqs:
        raise EmptyInput("no sequences given")
    players = {s.player_id for s in seqs}
    if len(players) > 1:
        raise MixedPlayers(f"sequences belong to {len(players)} players: {sorted(players)[:5]}")
    return _correlogram(seqs[0].player_id, seqs, _check_lags(lags), min_pairs)


def group_sequences(seqs: Iterable[ShotSequence], pooling: str = "player") -> dict[str, list[ShotSequence]]:
    """Sequences keyed by analysis unit, in sorted key order.

    ``pooling="player"`` pools a player's games; ``"player_game"`` keeps each
    player-game as its own unit (keyed ``player/game``).
    """
    if pooling not in POOLINGS:
        raise InvalidParameter(f"pooling must be one of {POOLINGS}, got {pooling!r}")
    groups: dict[str, list[ShotSequence]] = {}
    for s in seqs:
        key = s.player_id if pooling == "player" else f"{s.player_id}/{s.game_id}"
        groups.setdefault(key, []).append(s)
    return {k: groups[k] for k in sorted(groups)}


def player_correlograms(
    seqs: Iterable[ShotSequence],
    lags: Iterable[int] = DEFAULT_LAGS,
    min_pairs: int = DEFAULT_MIN_PAIRS,
    pooling: str = "player",
    threads: int = 1,
) -> list[Correlogram]:
    """One correlogram per unit, ordered by unit key whatever ``threads`` is."""
    if min_pairs < 2:
        raise InvalidParameter(f"min_pairs must be >= 2, got {min_pairs}")
    lags = _check_lags(lags)
    groups = group_sequences(seqs, pooling)

    def one(item):
        return _correlogram(item[0], item[1], lags, min_pairs)

    if threads > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(one, groups.items()))
    return [one(item) for item in groups.items()]


def aggregate_correlogram(per_player: Sequence[Correlogram], weighting: str = "equal") -> Correlogram:
    """Average per-player r lag by lag, skipping players undefined at a lag.

    ``equal`` gives each contributing player weight 1; ``by_pairs`` weights
    by pair count. The band is the null band of the weighted mean under
    independent per-player estimates with variance ``1/n_pairs``.
    """
    if weighting not in WEIGHTINGS:
        raise InvalidParameter(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")
    if not per_player:
        raise EmptyInput("no per-player correlograms to aggregate")
    lags = sorted(set().union(*(c.points for c in per_player)))
    points, band = {}, {}
    for k in lags:
        contrib = [c.points[k] for c in per_player if k in c.points and c.points[k].r is not None]
        n_total = sum(p.n_pairs for p in contrib)
        if not contrib:
            points[k] = LagPoint(None, 0)
            continue
        if weighting == "equal":
            r = math.fsum(p.r for p in contrib) / len(contrib)
            half = Z95 * math.sqrt(math.fsum(1.0 / p.n_pairs for p in contrib)) / len(contrib)
        else:
            r = math.fsum(p.r * p.n_pairs for p in contrib) / n_total
            half = _normal_half_width(n_total)
        points[k] = LagPoint(min(1.0, max(-1.0, r)), n_total)
        if k > 0:
            band[k] = (-half, half)
    if all(p.r is None for p in points.values()):
        raise NoDefinedPoints("no player has a defined correlation at any requested lag")
    return Correlogram("aggregate", points, band)


# -- permutation test ----------------------------------------------------------
@dataclass(frozen=True)
class PermutationResult:
    k: int
    r_obs: float
    p_two_sided: float
    band_95: tuple[float, float]
    n_pairs: int
    n_perm: int


# elements per shuffled block; fixed so results do not depend on threads
_BLOCK_ELEMENTS = 1 << 21
_TIE_TOL = 1e-12


def permutation_test(
    seqs: Sequence[ShotSequence],
    k: int,
    n_perm: int = 1000,
    seed: int | None = 0,
    min_pairs: int = DEFAULT_MIN_PAIRS,
    threads: int = 1,
) -> PermutationResult:
    """Shuffle-within-sequence test of the pooled lag-k correlation.

    Each replicate permutes outcomes uniformly inside every sequence, which
    keeps each sequence's length, make count and timestamps. The two-sided
    p-value is ``(1 + #{|r_perm| >= |r_obs|}) / (n_perm + 1)`` and the band is
    the 2.5/97.5 percentile range of the replicates. Replicates whose r is
    undefined (a constant side) never count as extreme and are left out of
    the band.
    """
    if n_perm < 100:
        raise InvalidParameter(f"n_perm must be >= 100, got {n_perm}")
    if k < 0:
        raise InvalidParameter(f"lag must be >= 0, got {k}")
    if min_pairs < 2:
        raise InvalidParameter(f"min_pairs must be >= 2, got {min_pairs}")
    seqs = [s for s in seqs if len(s) > k]
    outcomes, sid = _flatten(seqs)
    idx = _pair_index(sid, k)
    if len(idx) < min_pairs:
        raise TooFewPairs(f"{len(idx)} pairs at lag {k}, need {min_pairs}")
    r_obs = float(_r_rows(outcomes[None, idx], outcomes[None, idx + k])[0])
    if math.isnan(r_obs):
        raise TooFewPairs(f"observed lag-{k} correlation is undefined (constant outcomes)")

    n = len(outcomes)
    block = max(1, _BLOCK_ELEMENTS // n)
    sizes = [min(block, n_perm - s) for s in range(0, n_perm, block)]
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    offset = sid.astype(np.float64)

    def run(args):
        size, ss = args
        rng = np.random.Generator(np.random.PCG64(ss))
        order = np.argsort(rng.random((size, n)) + offset, axis=1)
        shuffled = outcomes[order]
        return _r_rows(shuffled[:, idx], shuffled[:, idx + k])

    jobs = list(zip(sizes, children))
    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            r_perm = np.concatenate(list(ex.map(run, jobs)))
    else:
        r_perm = np.concatenate([run(j) for j in jobs])

    with np.errstate(invalid="ignore"):
        extreme = int(np.count_nonzero(np.abs(r_perm) >= abs(r_obs) - _TIE_TOL))
    valid = r_perm[~np.isnan(r_perm)]
    lo, hi = np.percentile(valid, [2.5, 97.5]) if len(valid) else (math.nan, math.nan)
    return PermutationResult(
        k=k,
        r_obs=r_obs,
        p_two_sided=(1 + extreme) / (n_perm + 1),
        band_95=(float(lo), float(hi)),
        n_pairs=len(idx),
        n_perm=n_perm,
    )


def with_permutation_band(
    c: Correlogram,
    seqs: Sequence[ShotSequence],
    n_perm: int,
    seed: int | None = 0,
    min_pairs: int = DEFAULT_MIN_PAIRS,
    threads: int = 1,
) -> Correlogram:
    """Copy of a player correlogram whose band and p-values come from
    :func:`permutation_test` at every defined lag >= 1."""
    band, pvals = {}, {}
    for k in c.lags:
        if k == 0 or c.points[k].r is None:
            continue
        res = permutation_test(seqs, k, n_perm=n_perm, seed=seed, min_pairs=min_pairs, threads=threads)
        band[k] = res.band_95
        pvals[k] = res.p_two_sided
    return Correlogram(c.scope, dict(c.points), band, pvals)

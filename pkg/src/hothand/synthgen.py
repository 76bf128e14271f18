"""Synthetic shooters and leagues with known streak statistics.

Randomness comes from numpy's PCG64 bit generator. Player ``i`` draws from
``PCG64(SeedSequence(seed, spawn_key=(i,)))``, so every player's stream is
fixed by ``(seed, i)`` alone and players can be generated in any order.

Shooter kinds:

``bernoulli``
    independent makes with probability ``p``; gaps ~ Exp(mean ``mu_s``).
``markov``
    two-state chain, ``a = P(make | make)``, ``b = P(make | miss)``, started
    from its stationary rate ``b / (1 - a + b)``; gaps ~ Exp(``mu_s``). With
    ``memory_s`` set, the pull of the previous shot fades with the gap ``g``
    as ``exp(-g / memory_s)`` while the stationary rate is unchanged.
``gap_coupled``
    independent makes with probability ``p``; the gap after a make has mean
    ``mu_make_s`` and after a miss ``mu_miss_s``.

Shot counts per game are Poisson around ``shots_per_game_mean`` (or exactly
that many with ``fixed_shots``). Timestamps are whole milliseconds (gaps of
at least 1 ms) and shots past the end of regulation (2880 s) are dropped.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidParameter, InvalidSpec, WrongModelKind
from .shot_data import Dataset

GAME_LENGTH_S = 2880.0
KINDS = ("bernoulli", "markov", "gap_coupled")


def _unit_open(name, v):
    if v is None or not 0.0 < v < 1.0:
        raise InvalidSpec(f"{name} must be in (0, 1), got {v!r}")


def _positive(name, v):
    if v is None or not (v > 0 and math.isfinite(v)):
        raise InvalidSpec(f"{name} must be a finite number > 0, got {v!r}")


@dataclass(frozen=True)
class ShooterModel:
    kind: str = "bernoulli"
    p: float = 0.45
    a: float | None = None
    b: float | None = None
    mu_s: float = 60.0
    mu_make_s: float | None = None
    mu_miss_s: float | None = None
    memory_s: float | None = None
    shots_per_game_mean: float = 20.0
    fixed_shots: bool = False
    games_per_season: int = 82
    distance_range_ft: tuple[float, float] = (1.0, 30.0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "markov":
            _unit_open("a", self.a)
            _unit_open("b", self.b)
            if self.memory_s is not None:
                _positive("memory_s", self.memory_s)
        else:
            _unit_open("p", self.p)
            if self.memory_s is not None:
                raise InvalidSpec("memory_s only applies to markov shooters")
        if self.kind == "gap_coupled":
            _positive("mu_make_s", self.mu_make_s)
            _positive("mu_miss_s", self.mu_miss_s)
        else:
            _positive("mu_s", self.mu_s)
        _positive("shots_per_game_mean", self.shots_per_game_mean)
        if not isinstance(self.games_per_season, (int, np.integer)) or self.games_per_season < 1:
            raise InvalidSpec(f"games_per_season must be an integer >= 1, got {self.games_per_season!r}")
        lo, hi = self.distance_range_ft
        if not 0 <= lo <= hi:
            raise InvalidSpec(f"distance_range_ft must satisfy 0 <= lo <= hi, got {(lo, hi)}")

    @classmethod
    def bernoulli(cls, p: float, **kw) -> "ShooterModel":
        return cls(kind="bernoulli", p=p, **kw)

    @classmethod
    def markov(cls, a: float, b: float, **kw) -> "ShooterModel":
        return cls(kind="markov", a=a, b=b, **kw)

    @classmethod
    def gap_coupled(cls, p: float, mu_make_s: float, mu_miss_s: float, **kw) -> "ShooterModel":
        return cls(kind="gap_coupled", p=p, mu_make_s=mu_make_s, mu_miss_s=mu_miss_s, **kw)

    @property
    def make_rate(self) -> float:
        if self.kind == "markov":
            return self.b / (1.0 - self.a + self.b)
        return self.p


@dataclass(frozen=True)
class LeagueSpec:
    n_players: int
    models: ShooterModel | Sequence[ShooterModel]
    seasons: Sequence[int] = (2014,)
    seed: int = 0

    def __post_init__(self):
        if not isinstance(self.n_players, (int, np.integer)) or self.n_players < 1:
            raise InvalidSpec(f"n_players must be an integer >= 1, got {self.n_players!r}")
        if not isinstance(self.models, ShooterModel):
            models = tuple(self.models)
            if len(models) != self.n_players or not all(isinstance(m, ShooterModel) for m in models):
                raise InvalidSpec("models must be one ShooterModel or one per player")
            object.__setattr__(self, "models", models)
        seasons = tuple(int(s) for s in self.seasons)
        if not seasons or len(set(seasons)) != len(seasons):
            raise InvalidSpec(f"seasons must be non-empty and distinct, got {seasons}")
        object.__setattr__(self, "seasons", seasons)
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidSpec(f"seed must fit in 64 unsigned bits, got {self.seed}")

    def model_for(self, i: int) -> ShooterModel:
        return self.models if isinstance(self.models, ShooterModel) else self.models[i]


def player_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(index,))))


def _season_shots(m: ShooterModel, rng: np.random.Generator):
    """Simulate one season for one shooter.

    Returns (game index, outcome, t seconds, distance) arrays of kept shots.
    """
    g = m.games_per_season
    if m.fixed_shots:
        counts = np.full(g, max(1, round(m.shots_per_game_mean)))
    else:
        counts = rng.poisson(m.shots_per_game_mean, g)
    width = max(int(counts.max()), 1)
    u = rng.random((g, width))
    e = rng.standard_exponential((g, width))
    dist = np.round(rng.uniform(*m.distance_range_ft, (g, width)), 1)

    def to_ms(seconds):
        return np.maximum(1, np.rint(seconds * 1000.0)).astype(np.int64)

    if m.kind == "gap_coupled":
        made = u < m.p
        first = to_ms(e[:, :1] * 0.5 * (m.mu_make_s + m.mu_miss_s))
        after = to_ms(e[:, 1:] * np.where(made[:, :-1], m.mu_make_s, m.mu_miss_s))
        gaps_ms = np.concatenate([first, after], axis=1)
    else:
        gaps_ms = to_ms(e * m.mu_s)
        if m.kind == "bernoulli":
            made = u < m.p
        else:
            pi = m.make_rate
            made = np.empty((g, width), dtype=bool)
            made[:, 0] = u[:, 0] < pi
            for j in range(1, width):
                prob = np.where(made[:, j - 1], m.a, m.b)
                if m.memory_s is not None:
                    fade = np.exp(-(gaps_ms[:, j] / 1000.0) / m.memory_s)
                    prob = pi + (prob - pi) * fade
                made[:, j] = u[:, j] < prob

    t_ms = np.cumsum(gaps_ms, axis=1)
    keep = (np.arange(width)[None, :] < counts[:, None]) & (t_ms <= int(GAME_LENGTH_S * 1000))
    game_idx = np.broadcast_to(np.arange(g)[:, None], (g, width))
    return game_idx[keep], made[keep].astype(np.int8), t_ms[keep] / 1000.0, dist[keep]


def _player_columns(spec: LeagueSpec, i: int, width: int) -> dict[str, np.ndarray]:
    m = spec.model_for(i)
    rng = player_rng(spec.seed, i)
    pid = f"P{i + 1:0{width}d}"
    parts = []
    for season in spec.seasons:
        gi, made, t, dist = _season_shots(m, rng)
        games = np.array([f"{season}-G{k + 1:03d}" for k in range(m.games_per_season)])
        parts.append({
            "season": np.full(len(gi), season, dtype=np.int64),
            "game_id": games[gi],
            "player_id": np.full(len(gi), pid),
            "is_home": gi % 2 == 0,
            "t": t,
            "made": made,
            "distance_ft": dist,
        })
    return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}


def generate(spec: LeagueSpec, threads: int = 1) -> Dataset:
    """Deterministic synthetic league in the canonical event schema.

    Game ids are ``<season>-G<nnn>``, player ids ``P<nnnn>``; a player is at
    home in even-indexed games. ``threads`` never changes the result.
    """
    width = max(4, len(str(spec.n_players)))

    def one(i):
        return _player_columns(spec, i, width)

    if threads > 1 and spec.n_players > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            players = list(ex.map(one, range(spec.n_players)))
    else:
        players = [one(i) for i in range(spec.n_players)]
    ds = Dataset(
        **{k: np.concatenate([p[k] for p in players]) for k in players[0]},
        provenance=(f"synthgen:seed={spec.seed}",),
    )
    return ds.sorted()


# -- closed-form oracles --------------------------------------------------------
def stationary_rate(a: float, b: float) -> float:
    return b / (1.0 - a + b)


def markov_acf(a: float, b: float, k: int) -> float:
    """Lag-k autocorrelation of the stationary two-state chain: ``(a - b) ** k``."""
    for name, v in (("a", a), ("b", b)):
        if not 0.0 < v < 1.0:
            raise InvalidParameter(f"{name} must be in (0, 1), got {v!r}")
    if k < 0:
        raise InvalidParameter(f"k must be >= 0, got {k}")
    return (a - b) ** k


def gap_coupled_fg_curve(model: ShooterModel, t):
    """P(shot made | gap to the next shot = t seconds) for a gap-coupled shooter.

    Bayes over the two exponential gap densities, weighted by the make rate.
    Accepts a scalar or an array of gaps.
    """
    if model.kind != "gap_coupled":
        raise WrongModelKind(f"needs a gap_coupled model, got {model.kind!r}")
    t = np.asarray(t, dtype=np.float64)
    pi = model.make_rate
    # log-space keeps the ratio finite for large t
    log_make = math.log(pi) - math.log(model.mu_make_s) - t / model.mu_make_s
    log_miss = math.log1p(-pi) - math.log(model.mu_miss_s) - t / model.mu_miss_s
    with np.errstate(over="ignore"):
        out = 1.0 / (1.0 + np.exp(log_miss - log_make))
    return float(out) if out.ndim == 0 else out

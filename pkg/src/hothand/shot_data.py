"""Canonical shot-event model, CSV ingest and dataset validation.

The on-disk format is a header-first CSV holding field-goal attempts only::

    season,game_id,player_id,is_home,t,made,distance_ft

``t`` is elapsed game time in seconds from tip-off (monotone across quarters
and overtime). Quarter-relative clocks must be converted by the producer.
"""

from __future__ import annotations

import csv
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .errors import EmptyDataset, FileNotReadable, RowParseError, SchemaMismatch

COLUMNS = ("season", "game_id", "player_id", "is_home", "t", "made", "distance_ft")
HEADER = ",".join(COLUMNS)


@dataclass(frozen=True)
class ShotEvent:
    season: int
    game_id: str
    player_id: str
    is_home: bool
    t: float
    made: bool
    distance_ft: float


@dataclass(frozen=True)
class SkippedRow:
    line: int
    reason: str


@dataclass(frozen=True)
class Issue:
    kind: str  # "duplicate" | "range" | "order" | "empty"
    message: str


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable column store of shot events.

    Columns are numpy arrays of equal length. ``provenance`` and ``skipped``
    describe where the rows came from and do not take part in equality.
    """

    season: np.ndarray
    game_id: np.ndarray
    player_id: np.ndarray
    is_home: np.ndarray
    t: np.ndarray
    made: np.ndarray
    distance_ft: np.ndarray
    provenance: tuple[str, ...] = ()
    skipped: tuple[SkippedRow, ...] = field(default=())

    def __post_init__(self):
        cols = {
            "season": np.asarray(self.season, dtype=np.int64),
            "game_id": np.asarray(self.game_id, dtype=str),
            "player_id": np.asarray(self.player_id, dtype=str),
            "is_home": np.asarray(self.is_home, dtype=bool),
            "t": np.asarray(self.t, dtype=np.float64),
            "made": np.asarray(self.made, dtype=np.int8),
            "distance_ft": np.asarray(self.distance_ft, dtype=np.float64),
        }
        n = {len(v) for v in cols.values()}
        if len(n) != 1:
            raise ValueError(f"column lengths differ: {n}")
        for name, arr in cols.items():
            object.__setattr__(self, name, _frozen(arr))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        object.__setattr__(self, "skipped", tuple(self.skipped))

    @classmethod
    def from_events(cls, events: Iterable[ShotEvent], provenance=()) -> "Dataset":
        events = list(events)
        return cls(
            season=[e.season for e in events],
            game_id=[e.game_id for e in events],
            player_id=[e.player_id for e in events],
            is_home=[e.is_home for e in events],
            t=[e.t for e in events],
            made=[e.made for e in events],
            distance_ft=[e.distance_ft for e in events],
            provenance=provenance,
        )

    def __len__(self) -> int:
        return len(self.t)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, c), getattr(other, c)) for c in COLUMNS
        )

    __hash__ = None

    @property
    def events(self) -> tuple[ShotEvent, ...]:
        return tuple(
            ShotEvent(s, g, p, bool(h), t, bool(m), d)
            for s, g, p, h, t, m, d in zip(*(getattr(self, c).tolist() for c in COLUMNS))
        )

    @property
    def seasons(self) -> list[int]:
        return sorted(set(self.season.tolist()))

    def take(self, index) -> "Dataset":
        """Row subset (boolean mask or integer index), keeping provenance."""
        return Dataset(
            **{c: getattr(self, c)[index] for c in COLUMNS},
            provenance=self.provenance,
            skipped=self.skipped,
        )

    def sorted(self) -> "Dataset":
        """Rows in canonical (game_id, player_id, t) order."""
        order = np.lexsort((self.t, self.player_id, self.game_id))
        return self.take(order)


# -- ingest -----------------------------------------------------------------
def _parse_bit(text: str, name: str) -> int:
    text = text.strip()
    if text not in ("0", "1"):
        raise ValueError(f"{name} must be 0 or 1, got {text!r}")
    return int(text)


def _parse_nonneg(text: str, name: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ValueError(f"{name} is not a number: {text!r}") from None
    if not math.isfinite(v) or v < 0:
        raise ValueError(f"{name} must be a finite non-negative number, got {text!r}")
    return v


def _parse_row(row: list[str]) -> tuple:
    if len(row) != len(COLUMNS):
        raise ValueError(f"expected {len(COLUMNS)} fields, got {len(row)}")
    season_s, game, player, home_s, t_s, made_s, dist_s = row
    try:
        season = int(season_s)
    except ValueError:
        raise ValueError(f"season is not an integer: {season_s!r}") from None
    game, player = game.strip(), player.strip()
    if not game or not player:
        raise ValueError("game_id and player_id must be non-empty")
    return (
        season,
        game,
        player,
        _parse_bit(home_s, "is_home"),
        _parse_nonneg(t_s, "t"),
        _parse_bit(made_s, "made"),
        _parse_nonneg(dist_s, "distance_ft"),
    )


def load_events(path, strict: bool = True, report: IO[str] | None = None) -> Dataset:
    """Read a canonical shot-event CSV into a sorted :class:`Dataset`.

    In strict mode the first malformed or duplicated row raises
    :class:`RowParseError`. In lenient mode such rows are skipped, one line per
    skip is written to ``report`` (standard error by default) and the skips are
    kept on ``Dataset.skipped``. Of duplicate (game, player, t) rows the first
    in file order is kept.
    """
    path = Path(path)
    report = sys.stderr if report is None else report
    try:
        fh = open(path, newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise FileNotReadable(f"cannot read {path}: {exc.strerror or exc}") from exc

    rows: list[tuple] = []
    skipped: list[SkippedRow] = []
    seen: set[tuple] = set()
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader, None)
        except (csv.Error, UnicodeDecodeError) as exc:
            raise SchemaMismatch(f"{path}: unreadable header ({exc})") from exc
        if header is None or [h.strip() for h in header] != list(COLUMNS):
            raise SchemaMismatch(
                f"{path}: header must be exactly {HEADER!r}, got {','.join(header or [])!r}"
            )
        while True:
            try:
                row = next(reader)
            except StopIteration:
                break
            except (csv.Error, UnicodeDecodeError) as exc:
                line = reader.line_num
                if strict:
                    raise RowParseError(line, str(exc)) from exc
                skipped.append(SkippedRow(line, str(exc)))
                continue
            if not row:
                continue
            line = reader.line_num
            try:
                rec = _parse_row(row)
                key = (rec[1], rec[2], rec[4])
                if key in seen:
                    raise ValueError(
                        f"duplicate event for game {rec[1]!r}, player {rec[2]!r} at t={rec[4]!r}"
                    )
            except ValueError as exc:
                if strict:
                    raise RowParseError(line, str(exc)) from None
                skipped.append(SkippedRow(line, str(exc)))
                continue
            seen.add(key)
            rows.append(rec)

    for s in skipped:
        print(f"{path}: line {s.line}: skipped: {s.reason}", file=report)
    if not rows:
        raise EmptyDataset(f"{path}: no valid shot events")

    cols = list(zip(*rows))
    ds = Dataset(*cols, provenance=(str(path),), skipped=tuple(skipped))
    return ds.sorted()


def _fmt_float(v: float) -> str:
    return repr(float(v))


def write_events(ds: Dataset, dest) -> None:
    """Write ``ds`` in the canonical CSV format (``\\n`` line endings).

    Floats are written with ``repr`` so a reload reproduces them exactly.
    """
    own = isinstance(dest, (str, Path))
    fh = open(dest, "w", newline="", encoding="utf-8") if own else dest
    try:
        fh.write(HEADER + "\n")
        for s, g, p, h, t, m, d in zip(*(getattr(ds, c).tolist() for c in COLUMNS)):
            fh.write(f"{s},{g},{p},{int(h)},{_fmt_float(t)},{m},{_fmt_float(d)}\n")
    finally:
        if own:
            fh.close()


# -- validation -------------------------------------------------------------
def group_codes(ds: Dataset) -> np.ndarray:
    """Integer code per row identifying its (game_id, player_id) group."""
    if len(ds) == 0:
        return np.zeros(0, dtype=np.int64)
    keys = np.char.add(np.char.add(ds.game_id, "\x1f"), ds.player_id)
    _, codes = np.unique(keys, return_inverse=True)
    return codes.reshape(-1)


def validate(ds: Dataset) -> list[Issue]:
    """Check every ShotEvent/Dataset invariant; an empty list means clean."""
    issues: list[Issue] = []
    if len(ds) == 0:
        return [Issue("empty", "dataset has no events")]

    for name in ("t", "distance_ft"):
        col = getattr(ds, name)
        for i in np.flatnonzero(~(np.isfinite(col) & (col >= 0))):
            issues.append(
                Issue("range", f"row {i}: {name}={col[i]!r} (game {ds.game_id[i]}, player {ds.player_id[i]})")
            )

    codes = group_codes(ds)
    order = np.lexsort((ds.t, codes))
    c, t = codes[order], ds.t[order]
    dup = np.flatnonzero((c[1:] == c[:-1]) & (t[1:] == t[:-1])) + 1
    for j in dup:
        i = order[j]
        issues.append(
            Issue("duplicate", f"row {i}: game {ds.game_id[i]}, player {ds.player_id[i]} repeats t={ds.t[i]!r}")
        )

    # storage order within each group must be non-decreasing in t
    stable = np.argsort(codes, kind="stable")
    c, t = codes[stable], ds.t[stable]
    back = np.flatnonzero((c[1:] == c[:-1]) & (t[1:] < t[:-1])) + 1
    for g in np.unique(c[back]):
        i = stable[np.searchsorted(c, g)]
        issues.append(
            Issue("order", f"game {ds.game_id[i]}, player {ds.player_id[i]}: timestamps not increasing")
        )
    return issues

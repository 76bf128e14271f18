"""``hothand`` command line: plot-ready tables for streak analysis.

Subcommands::

    correlogram   lag-k correlations, aggregate or one player (--player)
    fgtime        FG% of a shot by rounded minutes until the next shot
    streakyear    per-player streakiness in two seasons and its correlation
    simulate      synthetic league in the canonical CSV format
    validate      schema / invariant report for an event file

Exit codes: 0 success, 1 data or runtime error, 2 usage error. Tables go to
``--output`` (or standard output); diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .correlogram import (
    DEFAULT_MIN_PAIRS,
    aggregate_correlogram,
    player_correlogram,
    player_correlograms,
    with_permutation_band,
)
from .errors import HotHandError, InvalidSpec
from .gap_analysis import DEFAULT_MAX_GAP_MINUTES, fg_by_gap
from .sequences import SequenceFilter, build_sequences
from .shot_data import load_events, validate, write_events
from .streakiness import DEFAULT_MIN_PAIRS as SEASON_MIN_PAIRS
from .streakiness import cross_season, season_metrics
from .synthgen import KINDS, LeagueSpec, ShooterModel, generate

log = logging.getLogger("hothand")


class DataError(Exception):
    """Runtime problem with the input data (exit 1)."""


# -- argument types -----------------------------------------------------------
def parse_lags(text: str) -> list[int]:
    """``"0..10"``, ``"1,2"`` or a mix such as ``"0..3,5"``."""
    lags: set[int] = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = (int(x) for x in part.split(".."))
                if hi < lo:
                    raise ValueError
                lags.update(range(lo, hi + 1))
            else:
                lags.add(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid lag list {text!r}") from None
    if not lags or min(lags) < 0:
        raise argparse.ArgumentTypeError(f"lags must be integers >= 0, got {text!r}")
    return sorted(lags)


def parse_seasons(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid season list {text!r}") from None


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be > 0, got {text!r}")
    return v


def _nonneg_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return v


def _int_at_least(lo: int):
    def conv(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v

    return conv


# -- parser -------------------------------------------------------------------
def _io_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", required=True, help="canonical shot-event CSV")
    p.add_argument("--output", help="output file (default: standard output)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--lenient", action="store_true", help="skip malformed rows instead of failing")
    p.add_argument("--threads", type=_int_at_least(1), default=1, help="worker threads (output is identical for any value)")
    return p


def _filter_parent(seasons: bool = True) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--min-distance", type=_nonneg_float, help="keep shots strictly beyond this many feet")
    side = p.add_mutually_exclusive_group()
    side.add_argument("--home", action="store_true", help="home shots only")
    side.add_argument("--away", action="store_true", help="away shots only")
    if seasons:
        p.add_argument("--seasons", type=parse_seasons, help="comma-separated season labels")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hothand", description="Shot-streak autocorrelation analytics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="progress messages on standard error")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("correlogram", parents=[_io_parent(), _filter_parent()], help="lag-k correlations")
    c.add_argument("--max-gap", type=_positive_float, action="append",
                   help="seconds; split sequences at larger gaps. Repeat for several curves")
    c.add_argument("--lags", type=parse_lags, default=list(range(11)))
    c.add_argument("--min-pairs", type=_int_at_least(2), default=DEFAULT_MIN_PAIRS)
    c.add_argument("--weighting", choices=("equal", "by-pairs"), default="equal")
    c.add_argument("--pooling", choices=("player", "player-game"), default="player",
                   help="unit whose pairs are pooled before averaging")
    c.add_argument("--player", help="one player's correlogram instead of the aggregate")
    c.add_argument("--permutations", type=_int_at_least(0), default=0,
                   help="with --player: permutation band and p-values (>= 100)")
    c.add_argument("--seed", type=_int_at_least(0), default=0)
    c.set_defaults(func=cmd_correlogram)

    g = sub.add_parser("fgtime", parents=[_io_parent(), _filter_parent()], help="FG%% by time to next shot")
    g.set_defaults(min_distance=15.0)
    g.add_argument("--all-distances", action="store_true", help="drop the default 15 ft filter")
    g.add_argument("--max-gap", type=_positive_float, help="seconds; split sequences at larger gaps")
    g.add_argument("--max-gap-minutes", type=_int_at_least(1), default=DEFAULT_MAX_GAP_MINUTES)
    g.add_argument("--gap-mode", choices=("pair", "sequence-mean"), default="pair")
    g.add_argument("--distance-first-only", action="store_true",
                   help="apply the distance filter to the first shot of each pair only")
    g.set_defaults(func=cmd_fgtime)

    s = sub.add_parser("streakyear", parents=[_io_parent(), _filter_parent(seasons=False)],
                       help="season-to-season streakiness")
    s.add_argument("--season-a", type=int, required=True)
    s.add_argument("--season-b", type=int, required=True)
    s.add_argument("--max-gap", type=_positive_float, help="seconds; split sequences at larger gaps")
    s.add_argument("--lags", type=parse_lags, default=[1, 2])
    s.add_argument("--min-pairs", type=_int_at_least(2), default=SEASON_MIN_PAIRS)
    s.set_defaults(func=cmd_streakyear)

    m = sub.add_parser("simulate", help="write a synthetic league")
    m.add_argument("--output", help="output CSV (default: standard output)")
    m.add_argument("--model", choices=KINDS, default="bernoulli")
    m.add_argument("--p", type=float, default=0.45, help="make probability (bernoulli, gap_coupled)")
    m.add_argument("--a", type=float, help="P(make | make) (markov)")
    m.add_argument("--b", type=float, help="P(make | miss) (markov)")
    m.add_argument("--memory", type=float, help="seconds over which markov dependence fades")
    m.add_argument("--mu", type=float, default=60.0, help="mean gap seconds (bernoulli, markov)")
    m.add_argument("--mu-make", type=float, help="mean gap after a make (gap_coupled)")
    m.add_argument("--mu-miss", type=float, help="mean gap after a miss (gap_coupled)")
    m.add_argument("--players", type=int, default=100)
    m.add_argument("--games", type=int, default=82, help="games per season")
    m.add_argument("--shots-per-game", type=float, default=20.0)
    m.add_argument("--fixed-shots", action="store_true", help="exactly --shots-per-game shots per game")
    m.add_argument("--seasons", type=parse_seasons, default=[2014])
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--threads", type=_int_at_least(1), default=1)
    m.set_defaults(func=cmd_simulate)

    v = sub.add_parser("validate", help="check an event file")
    v.add_argument("--input", required=True)
    v.add_argument("--output")
    v.add_argument("--format", choices=("csv", "json"), default="csv")
    v.add_argument("--threads", type=_int_at_least(1), default=1, help="accepted for uniformity; validation is serial")
    v.set_defaults(func=cmd_validate)
    return parser


# -- output -------------------------------------------------------------------
def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows: list[dict], fields: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{k: r.get(k) for k in fields} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_cell(r.get(k)) for k in fields])
    return buf.getvalue()


def emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        Path(output).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write {output}: {exc.strerror or exc}") from exc


# -- subcommands --------------------------------------------------------------
def _filter(args, max_gap=None) -> SequenceFilter:
    return SequenceFilter(
        min_distance_ft=args.min_distance,
        home_only=args.home,
        away_only=args.away,
        seasons=getattr(args, "seasons", None),
        max_gap_s=max_gap,
    )


def _load(args):
    ds = load_events(args.input, strict=not args.lenient)
    log.info("loaded %d events from %s", len(ds), args.input)
    return ds


CORRELOGRAM_FIELDS = ["variant", "scope", "lag", "r", "n_pairs", "band_lo", "band_hi", "p_value"]


def cmd_correlogram(args) -> int:
    if args.permutations and not args.player:
        raise UsageError("--permutations needs --player")
    if 0 < args.permutations < 100:
        raise UsageError("--permutations must be 0 or >= 100")
    ds = _load(args)
    rows = []
    for gap in args.max_gap or [None]:
        variant = "all" if gap is None else f"max_gap={gap:g}s"
        seqs = build_sequences(ds, _filter(args, gap))
        if args.player:
            seqs = [q for q in seqs if q.player_id == args.player]
            if not seqs:
                raise DataError(f"player {args.player!r} has no shots after filters")
            c = player_correlogram(seqs, args.lags, args.min_pairs)
            if args.permutations:
                c = with_permutation_band(c, seqs, args.permutations, args.seed, args.min_pairs, args.threads)
        else:
            if not seqs:
                raise DataError("no shots left after filters")
            per = player_correlograms(
                seqs, args.lags, args.min_pairs, args.pooling.replace("-", "_"), args.threads
            )
            c = aggregate_correlogram(per, args.weighting.replace("-", "_"))
        log.info("%s: %d sequences", variant, len(seqs))
        for k in c.lags:
            lo, hi = (c.band or {}).get(k, (None, None))
            rows.append({
                "variant": variant,
                "scope": c.scope,
                "lag": k,
                "r": c.points[k].r,
                "n_pairs": c.points[k].n_pairs,
                "band_lo": lo,
                "band_hi": hi,
                "p_value": (c.p_values or {}).get(k),
            })
    emit(render(rows, CORRELOGRAM_FIELDS, args.format), args.output)
    return 0


def cmd_fgtime(args) -> int:
    if args.all_distances:
        args.min_distance = None
    ds = _load(args)
    table = fg_by_gap(
        ds,
        _filter(args, args.max_gap),
        args.max_gap_minutes,
        mode=args.gap_mode.replace("-", "_"),
        distance_first_only=args.distance_first_only,
    )
    if not table.buckets:
        raise DataError("no adjacent shot pairs left after filters")
    emit(render(table.rows(), ["bucket", "attempts", "makes", "fg_pct"], args.format), args.output)
    return 0


STREAK_FIELDS = ["lag", "record", "player_id", "r_a", "r_b", "r_across", "n_players"]


def cmd_streakyear(args) -> int:
    ds = _load(args)
    f = _filter(args, args.max_gap)
    rows = []
    for k in args.lags:
        if k < 1:
            raise UsageError("streakyear lags must be >= 1")
        a = season_metrics(ds, args.season_a, k, f, args.min_pairs)
        b = season_metrics(ds, args.season_b, k, f, args.min_pairs)
        sc = cross_season(a, b)
        for pid, ra, rb in sc.points:
            rows.append({"lag": k, "record": "point", "player_id": pid, "r_a": ra, "r_b": rb})
        rows.append({"lag": k, "record": "summary", "r_across": sc.r_across, "n_players": sc.n_players})
    emit(render(rows, STREAK_FIELDS, args.format), args.output)
    return 0


def cmd_simulate(args) -> int:
    try:
        model = ShooterModel(
            kind=args.model,
            p=args.p,
            a=args.a,
            b=args.b,
            mu_s=args.mu,
            mu_make_s=args.mu_make,
            mu_miss_s=args.mu_miss,
            memory_s=args.memory,
            shots_per_game_mean=args.shots_per_game,
            fixed_shots=args.fixed_shots,
            games_per_season=args.games,
        )
        spec = LeagueSpec(args.players, model, args.seasons, args.seed)
    except InvalidSpec as exc:
        raise UsageError(str(exc)) from exc
    ds = generate(spec, threads=args.threads)
    buf = io.StringIO()
    write_events(ds, buf)
    emit(buf.getvalue(), args.output)
    log.info("wrote %d events", len(ds))
    return 0


def cmd_validate(args) -> int:
    sink = io.StringIO()
    ds = load_events(args.input, strict=False, report=sink)
    rows = [{"kind": "row", "line": s.line, "message": s.reason} for s in ds.skipped]
    rows += [{"kind": i.kind, "line": None, "message": i.message} for i in validate(ds)]
    emit(render(rows, ["kind", "line", "message"], args.format), args.output)
    if rows:
        print(f"{args.input}: {len(rows)} issue(s)", file=sys.stderr)
        return 1
    return 0


class UsageError(Exception):
    """Flag combination rejected after parsing (exit 2)."""


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="hothand: %(message)s",
    )
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hothand {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (HotHandError, DataError) as exc:
        print(f"hothand {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

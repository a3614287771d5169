"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data unavailable, 3 validation
errors (including a sync that failed verification).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import date
from decimal import Decimal
from pathlib import Path
from typing import Optional, Sequence, TextIO

from kabaddi.ingest import ManifestError, build_store
from kabaddi.model import MatchDetail, SubjectKind, ZoneType
from kabaddi.query import (
    MatchFilter,
    Table,
    get_match_events,
    get_player_rvd,
    get_season_matches,
    get_standings,
    get_team_info,
    get_team_roster,
    get_zones,
    player_name,
)
from kabaddi.rules import validate_match
from kabaddi.stats import compute_point_progression
from kabaddi.store import DataStore, DataUnavailable
from kabaddi.sync import SyncError, SyncOptions, sync
from kabaddi.viz import (
    RenderOptions,
    ZonePanel,
    cell,
    export_csv,
    render_point_progression,
    render_zone_grid,
    render_zone_heatmap,
    table_records,
)

EXIT_OK, EXIT_USAGE, EXIT_UNAVAILABLE, EXIT_INVALID = 0, 1, 2, 3
ENV_DATA_DIR = "KABADDI_DATA_DIR"

EVENT_TEXT_COLUMNS = (
    "event_no", "event_half", "clock", "event", "event_text", "raider_id",
    "defender_id", "raid_points", "defending_points", "do_or_die", "score",
)
TEAM_INFO_TABLES = ("rank", "value", "per-match", "raider-skills", "defender-skills")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors exit 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO date: {text!r}") from None


def _id_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ids, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--data-dir", default=argparse.SUPPRESS,
                        help=f"fixture directory (default ${ENV_DATA_DIR} or ./data)")
    common.add_argument("--format", choices=("text", "csv", "json"), default=argparse.SUPPRESS,
                        help="table output format (default text)")

    parser = _Parser(prog="kabaddi", description="Query, validate and plot Pro Kabaddi League data.",
                     parents=[common])
    parser.set_defaults(data_dir=None, format="text")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("matches", parents=[common], help="season match summaries")
    p.add_argument("--season", type=int, required=True)
    p.add_argument("--stage", help='league stage, e.g. "Semi Final"')
    p.add_argument("--team", help="team id or exact team name")
    p.add_argument("--from", dest="date_from", type=_date, help="earliest date (YYYY-MM-DD)")
    p.add_argument("--to", dest="date_to", type=_date, help="latest date (YYYY-MM-DD)")

    p = sub.add_parser("events", parents=[common], help="play-by-play for one match")
    p.add_argument("--season", type=int, required=True)
    p.add_argument("--match-id", type=int, required=True)

    p = sub.add_parser("standings", parents=[common], help="season standings")
    p.add_argument("--season", type=int, required=True)

    p = sub.add_parser("team-info", parents=[common], help="team season metrics and skills")
    p.add_argument("--season", type=int, required=True)
    p.add_argument("--team-id", type=int, required=True)
    p.add_argument("--table", choices=TEAM_INFO_TABLES + ("all",), default="all",
                   help="which table to print (csv needs a single table)")

    p = sub.add_parser("roster", parents=[common], help="team season roster")
    p.add_argument("--team-id", type=int, required=True)
    p.add_argument("--season", type=int, required=True)
    p.add_argument("--sort", help="column to sort by")
    p.add_argument("--desc", action="store_true", help="sort descending")
    p.add_argument("--top", type=int, help="keep the first N rows")

    p = sub.add_parser("rvd", parents=[common], help="raider vs number of defenders")
    p.add_argument("--player-id", type=int, required=True)
    p.add_argument("--season", type=int)

    p = sub.add_parser("validate", parents=[common], help="check fixtures and match rules")
    p.add_argument("--season", type=int)
    p.add_argument("--match-id", type=int)

    p = sub.add_parser("plot", help="render an SVG figure")
    plots = p.add_subparsers(dest="plot", metavar="FIGURE")
    plots.required = True
    q = plots.add_parser("point-progression", parents=[common])
    q.add_argument("--season", type=int, required=True)
    q.add_argument("--match-id", type=int, required=True)
    q = plots.add_parser("team-zones", parents=[common])
    q.add_argument("--team-id", type=int, required=True)
    q.add_argument("--season", type=int, required=True)
    q.add_argument("--zone-type", choices=("strong", "weak"), default="strong")
    q = plots.add_parser("player-zones", parents=[common])
    q.add_argument("--player-ids", type=_id_list, required=True)
    q.add_argument("--season", type=int, required=True)
    q.add_argument("--zone-type", choices=("strong", "weak"), default="strong")
    q.add_argument("--max-cols", type=int, default=2)
    for q in plots.choices.values():
        q.add_argument("-o", "--output", help="output file (default stdout)")
        q.add_argument("--width", type=int)
        q.add_argument("--height", type=int)
        q.add_argument("--title")

    p = sub.add_parser("sync", parents=[common], help="mirror a remote fixture repository")
    p.add_argument("--base-url", required=True)
    p.add_argument("--verify-only", action="store_true", help="report drift without writing")
    p.add_argument("--max-parallel", type=int, default=4)
    return parser


# ---------------------------------------------------------------------------
# output


def _is_number(value) -> bool:
    return isinstance(value, (int, float, Decimal)) and not isinstance(value, bool)


def format_text(table: Table) -> str:
    """Aligned columns; numbers right-aligned, everything else left."""
    cells = [[cell(v) for v in row] for row in table.rows]
    widths = [len(c) for c in table.columns]
    for row in cells:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    numeric = [
        bool(table.rows) and all(_is_number(row[i]) for row in table.rows)
        for i in range(len(table.columns))
    ]

    def line(values):
        parts = [v.rjust(w) if num else v.ljust(w) for v, w, num in zip(values, widths, numeric)]
        return "  ".join(parts).rstrip()

    out = [line(table.columns), line(["-" * w for w in widths])]
    out += [line(r) for r in cells]
    return "\n".join(out) + "\n"


def emit(table: Table, fmt: str, out: TextIO) -> None:
    if fmt == "csv":
        out.write(export_csv(table).decode("utf-8"))
    elif fmt == "json":
        out.write(json.dumps(table_records(table), indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(format_text(table))


def _events_table(detail: MatchDetail, columns) -> Table:
    rows = []
    for e in detail.events:
        row = e.as_row()
        rows.append(tuple(row[c] for c in columns))
    return Table(tuple(columns), tuple(rows), detail.events)


# ---------------------------------------------------------------------------
# commands


def _data_dir(args) -> Path:
    return Path(args.data_dir or os.environ.get(ENV_DATA_DIR) or "data")


def _load(args, err: TextIO) -> tuple[DataStore, list]:
    root = _data_dir(args)
    try:
        store, violations = build_store(root)
    except ManifestError as exc:
        raise DataUnavailable(f"cannot load data directory {root}: {exc}") from None
    bad = sorted({v.source_text() for v in violations if v.is_error and isinstance(v.source, str)})
    if bad and args.command != "validate":
        err.write(f"warning: {len(bad)} file(s) failed to load; run `kabaddi validate`\n")
    return store, violations


def cmd_matches(args, store, out, err) -> int:
    team_id = team_name = None
    if args.team is not None:
        if args.team.strip().isdigit():
            team_id = int(args.team)
        else:
            team_name = args.team
    f = MatchFilter(args.stage, team_id, team_name, args.date_from, args.date_to)
    emit(get_season_matches(store, args.season, f), args.format, out)
    return EXIT_OK


def cmd_events(args, store, out, err) -> int:
    detail = get_match_events(store, args.season, args.match_id)
    columns = EVENT_TEXT_COLUMNS if args.format == "text" else type(detail.events[0]).COLUMNS \
        if detail.events else EVENT_TEXT_COLUMNS
    emit(_events_table(detail, columns), args.format, out)
    return EXIT_OK


def cmd_standings(args, store, out, err) -> int:
    emit(get_standings(store, args.season), args.format, out)
    return EXIT_OK


def cmd_team_info(args, store, out, err) -> int:
    info = get_team_info(store, args.season, args.team_id)
    tables = dict(zip(TEAM_INFO_TABLES, info))
    if args.table != "all":
        emit(tables[args.table], args.format, out)
        return EXIT_OK
    if args.format == "csv":
        raise UsageError("csv output holds one table; choose one with --table")
    if args.format == "json":
        doc = {name: table_records(t) for name, t in tables.items()}
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
        return EXIT_OK
    for i, (name, t) in enumerate(tables.items()):
        if i:
            out.write("\n")
        out.write(f"[{name}]\n")
        out.write(format_text(t))
    return EXIT_OK


def cmd_roster(args, store, out, err) -> int:
    table = get_team_roster(store, args.team_id, args.season)
    if args.sort:
        if args.sort not in table.columns:
            raise UsageError(f"unknown sort column {args.sort!r}")
        table = table.sorted_by(args.sort, descending=args.desc)
    if args.top is not None:
        table = table.head(args.top)
    emit(table, args.format, out)
    return EXIT_OK


def cmd_rvd(args, store, out, err) -> int:
    emit(get_player_rvd(store, args.player_id, args.season), args.format, out)
    return EXIT_OK


def _in_scope(source: str, season: Optional[int], match_id: Optional[int]) -> bool:
    if season is None:
        return True
    if source == "rvd.json" or source == "manifest.json":
        return match_id is None
    if not source.startswith(f"season_{season}/"):
        return False
    if match_id is None:
        return True
    return source in (f"season_{season}/matches.json", f"season_{season}/events/match_{match_id}.json")


def cmd_validate(args, store, out, err, violations) -> int:
    if args.match_id is not None and args.season is None:
        raise UsageError("--match-id needs --season")
    found = [v for v in violations if _in_scope(v.source_text(), args.season, args.match_id)]
    if args.match_id is not None:
        if (args.season, args.match_id) not in store.events:
            get_match_events(store, args.season, args.match_id)  # raises DataUnavailable
        keys = [(args.season, args.match_id)]
    else:
        keys = sorted(k for k in store.events if args.season is None or k[0] == args.season)
        if args.season is not None and not keys and not found and args.season not in store.seasons:
            raise DataUnavailable(f"no data for season {args.season}")
    for key in keys:
        summary = store.matches.get(key)
        if summary is None:
            continue
        found += validate_match(MatchDetail(summary, store.events[key])).violations
    n_err = sum(1 for v in found if v.is_error)
    n_warn = len(found) - n_err
    for v in found:
        out.write(f"{v}\n")
    out.write(f"{len(keys)} match(es) checked: {n_err} errors, {n_warn} warnings\n")
    return EXIT_INVALID if n_err else EXIT_OK


def _write_svg(args, svg: str, out: TextIO) -> None:
    if args.output:
        Path(args.output).write_text(svg, encoding="utf-8", newline="\n")
    else:
        out.write(svg)


def _render_options(args, **defaults) -> RenderOptions:
    kw = dict(defaults)
    for name in ("width", "height", "title"):
        if getattr(args, name, None) is not None:
            kw[name] = getattr(args, name)
    if getattr(args, "max_cols", None) is not None:
        kw["max_cols"] = args.max_cols
    try:
        return RenderOptions(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_plot(args, store, out, err) -> int:
    if args.plot == "point-progression":
        detail = get_match_events(store, args.season, args.match_id)
        s = detail.summary
        opts = _render_options(args, title=f"{s.team_1.team_name} vs {s.team_2.team_name}, "
                                            f"season {s.season} {s.match_name}")
        svg = render_point_progression(compute_point_progression(detail),
                                       (s.team_1.team_name, s.team_2.team_name), opts)
    elif args.plot == "team-zones":
        zt = ZoneType(args.zone_type)
        records = get_zones(store, args.season, SubjectKind.TEAM, args.team_id, zt)
        stats = store.team_stats.get((args.season, args.team_id))
        name = stats.team_name if stats else f"Team {args.team_id}"
        opts = _render_options(args, title=f"{name}: {zt.value} zones, season {args.season}")
        svg = render_zone_heatmap(records, zt, opts)
    else:
        zt = ZoneType(args.zone_type)
        panels = []
        for pid in args.player_ids:
            try:
                records = get_zones(store, args.season, SubjectKind.PLAYER, pid, zt)
            except DataUnavailable:
                records = None
            panels.append(ZonePanel(pid, player_name(store, pid, args.season), records))
        if not panels:
            raise UsageError("--player-ids is empty")
        if all(p.records is None for p in panels):
            raise DataUnavailable(f"no {zt.value} zone data for any listed player",
                                  gap="zones", season=args.season)
        opts = _render_options(args, width=420, height=320)
        svg = render_zone_grid(panels, zt, opts)
    _write_svg(args, svg, out)
    return EXIT_OK


def cmd_sync(args, out, err) -> int:
    try:
        opts = SyncOptions(verify_only=args.verify_only, max_parallel=args.max_parallel)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        summary = sync(args.base_url, _data_dir(args), opts)
    except SyncError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INVALID
    for path in summary.drift:
        out.write(f"{'stale' if args.verify_only else 'fetch'} {path}\n")
    for failure in summary.failures:
        err.write(f"failed {failure}\n")
    out.write(f"downloaded {summary.downloaded}, skipped {summary.skipped}, "
              f"verified {summary.verified}, failed {summary.failed}\n")
    return EXIT_OK if summary.ok else EXIT_INVALID


COMMANDS = {
    "matches": cmd_matches,
    "events": cmd_events,
    "standings": cmd_standings,
    "team-info": cmd_team_info,
    "roster": cmd_roster,
    "rvd": cmd_rvd,
    "plot": cmd_plot,
}


def run_cli(argv: Sequence[str], out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if args.command == "sync":
            return cmd_sync(args, out, err)
        store, violations = _load(args, err)
        if args.command == "validate":
            return cmd_validate(args, store, out, err, violations)
        return COMMANDS[args.command](args, store, out, err)
    except DataUnavailable as exc:
        err.write(f"error: {exc}\n")
        return EXIT_UNAVAILABLE
    except (UsageError, ValueError) as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_cli(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

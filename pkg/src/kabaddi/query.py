"""Read API over a built ``DataStore``.

Every function here is a pure read. Table outputs have a fixed column order
(the record type's schema) and a fixed default row order, so serializing
the same query twice gives the same bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Any, Iterable, NamedTuple, Optional, Sequence, Union

from kabaddi.metrics import METRIC_KEYS, METRICS
from kabaddi.model import (
    LeagueStage,
    MatchDetail,
    MatchSummary,
    RosterEntry,
    RvdRow,
    SkillRecord,
    Standing,
    SubjectKind,
    ZoneRecord,
    ZoneType,
)
from kabaddi.store import DataStore, DataUnavailable, FixtureKind


@dataclass(frozen=True)
class Table:
    """A column-ordered table of plain values.

    ``records`` keeps the typed objects the rows came from when there are
    any, for callers that prefer attribute access.
    """

    columns: tuple[str, ...]
    rows: tuple[tuple, ...] = ()
    records: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        width = len(self.columns)
        for row in self.rows:
            if len(row) != width:
                raise ValueError(f"row has {len(row)} values for {width} columns")

    @classmethod
    def from_records(cls, records: Iterable, columns: Sequence[str]) -> "Table":
        records = tuple(records)
        rows = []
        for rec in records:
            row = rec.as_row()
            rows.append(tuple(row[c] for c in columns))
        return cls(tuple(columns), tuple(rows), records)

    def __len__(self) -> int:
        return len(self.rows)

    def dicts(self) -> list[dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def sorted_by(self, name: str, descending: bool = False) -> "Table":
        """Stable sort on one column; records follow their rows."""
        i = self.columns.index(name)
        order = sorted(range(len(self.rows)), key=lambda k: self.rows[k][i], reverse=descending)
        recs = tuple(self.records[k] for k in order) if self.records else ()
        return Table(self.columns, tuple(self.rows[k] for k in order), recs)

    def head(self, n: int) -> "Table":
        return Table(self.columns, self.rows[:n], self.records[:n])


# ---------------------------------------------------------------------------
# matches


@dataclass(frozen=True)
class MatchFilter:
    """Narrowing for ``get_season_matches``. Unset fields match everything."""

    league_stage: Union[LeagueStage, str, None] = None
    team_id: Optional[int] = None
    team_name: Optional[str] = None
    date_from: Optional[date] = None
    date_to: Optional[date] = None

    def __post_init__(self):
        if self.date_from and self.date_to and self.date_from > self.date_to:
            raise ValueError("date_from is after date_to")


def _stage_matches(m: MatchSummary, stage: Union[LeagueStage, str]) -> bool:
    if isinstance(stage, str):
        parsed = LeagueStage.parse(stage)
        if parsed is LeagueStage.OTHER:
            return m.stage_name.strip().casefold() == stage.strip().casefold()
        stage = parsed
    return m.league_stage is stage


def _check_team_identity(store: DataStore, matches: Iterable[MatchSummary], f: MatchFilter) -> None:
    wanted = store.canonical_team_name(f.team_name)
    for m in matches:
        for side in (m.team_1, m.team_2):
            if side.team_id == f.team_id and store.canonical_team_name(side.team_name) != wanted:
                raise ValueError(
                    f"team id {f.team_id} is {side.team_name!r}, not {f.team_name!r}"
                )


def _side_matches(store: DataStore, side, f: MatchFilter) -> bool:
    if f.team_id is not None and side.team_id != f.team_id:
        return False
    if f.team_name is not None:
        return store.canonical_team_name(side.team_name) == store.canonical_team_name(f.team_name)
    return True


def filter_matches(store: DataStore, matches: Iterable[MatchSummary], f: MatchFilter) -> list[MatchSummary]:
    matches = list(matches)
    if f.team_id is not None and f.team_name is not None:
        _check_team_identity(store, matches, f)
    out = []
    for m in matches:
        if f.league_stage is not None and not _stage_matches(m, f.league_stage):
            continue
        if (f.team_id is not None or f.team_name is not None) and not (
            _side_matches(store, m.team_1, f) or _side_matches(store, m.team_2, f)
        ):
            continue
        if f.date_from and m.end_date < f.date_from:
            continue
        if f.date_to and m.start_date > f.date_to:
            continue
        out.append(m)
    return out


def season_match_records(store: DataStore, season: int) -> list[MatchSummary]:
    if not store.has(season, FixtureKind.SEASON_MATCHES):
        raise DataUnavailable(f"no match data for season {season}", gap="events", season=season)
    found = [m for (s, _), m in store.matches.items() if s == season]
    return sorted(found, key=lambda m: (m.start_date, m.match_id))


def get_season_matches(store: DataStore, season: int, filter: Optional[MatchFilter] = None) -> Table:
    """Match summaries for a season, ordered by start date then match id."""
    matches = season_match_records(store, season)
    if filter is not None:
        matches = filter_matches(store, matches, filter)
    return Table.from_records(matches, MatchSummary.COLUMNS)


def get_match_events(store: DataStore, season: int, match_id: int) -> MatchDetail:
    """Summary plus play-by-play for one match, in event_no order."""
    summary = store.matches.get((season, match_id))
    events = store.events.get((season, match_id))
    if summary is None:
        raise DataUnavailable(f"unknown match {match_id} in season {season}",
                              gap="events", season=season)
    if events is None:
        raise DataUnavailable(f"no event data for match {match_id} in season {season}",
                              gap="events", season=season)
    return MatchDetail(summary, tuple(sorted(events, key=lambda e: e.event_no)))


# ---------------------------------------------------------------------------
# standings and team info


def get_standings(store: DataStore, season: int) -> Table:
    rows = store.standings.get(season)
    if rows is None:
        raise DataUnavailable(f"no standings for season {season}")
    ordered = sorted(rows, key=lambda s: (s.group, s.league_position))
    return Table.from_records(ordered, Standing.COLUMNS)


class TeamInfo(NamedTuple):
    """The five team-info tables, unpackable like a tuple."""

    rank: Table
    value: Table
    per_match: Table
    raider_skills: Table
    defender_skills: Table


IDENTITY = ("season", "team_id", "team_name", "matches_played")


def metric_column(key: str) -> str:
    return f"team-{key}"


def get_team_info(store: DataStore, season: int, team_id: int) -> TeamInfo:
    stats = store.team_stats.get((season, team_id))
    if stats is None:
        raise DataUnavailable(f"no team statistics for team {team_id} in season {season}")
    if stats.raider_skills is None or stats.defender_skills is None:
        raise DataUnavailable(
            f"no raider/defender skills for team {team_id} in season {season}",
            gap="skills", season=season,
        )
    ident = (stats.season, stats.team_id, stats.team_name, stats.matches_played)
    keys = [k for k in METRIC_KEYS if k in stats.metrics]
    per_keys = [k for k in keys if METRICS[k].per_match]

    def table(keys_, attr) -> Table:
        cols = IDENTITY + tuple(metric_column(k) for k in keys_)
        return Table(cols, (ident + tuple(getattr(stats.metrics[k], attr) for k in keys_),))

    return TeamInfo(
        rank=table(keys, "rank"),
        value=table(keys, "value"),
        per_match=table(per_keys, "per_match"),
        raider_skills=Table.from_records(stats.raider_skills, SkillRecord.COLUMNS),
        defender_skills=Table.from_records(stats.defender_skills, SkillRecord.COLUMNS),
    )


def get_team_roster(store: DataStore, team_id: int, season: int) -> Table:
    """Season roster in player_id order; callers sort as they like."""
    entries = store.rosters.get((season, team_id))
    if entries is None:
        raise DataUnavailable(f"no roster for team {team_id} in season {season}")
    return Table.from_records(sorted(entries, key=lambda e: e.player_id), RosterEntry.COLUMNS)


# ---------------------------------------------------------------------------
# players


def get_player_rvd(store: DataStore, player_id: int, season: Optional[int] = None) -> Table:
    """Raider-vs-defenders rows, sorted by season then defenders on the mat.

    Alias ids from the manifest resolve to the canonical player id.
    """
    canonical = store.resolve_player(player_id)
    rows = store.rvd.get(canonical)
    if season is not None:
        if rows is not None:
            rows = [r for r in rows if r.season == season] or None
        if rows is None:
            raise DataUnavailable(
                f"no raider-vs-defenders data for player {player_id} in season {season}",
                gap="rvd", season=season,
            )
    if rows is None:
        raise DataUnavailable(f"no raider-vs-defenders data for player {player_id}")
    ordered = sorted(rows, key=lambda r: (r.season, r.number_of_defenders))
    return Table.from_records(ordered, RvdRow.COLUMNS)


def get_zones(
    store: DataStore,
    season: int,
    subject_kind: SubjectKind,
    subject_id: int,
    zone_type: Optional[ZoneType] = None,
) -> tuple[ZoneRecord, ...]:
    """Zone records for one team or player, optionally one zone type only."""
    if subject_kind is SubjectKind.PLAYER:
        subject_id = store.resolve_player(subject_id)
    records = store.zones.get((season, subject_kind, subject_id))
    if not records:
        raise DataUnavailable(
            f"no zone data for {subject_kind.value} {subject_id} in season {season}",
            gap="zones", season=season,
        )
    if zone_type is not None:
        records = tuple(r for r in records if r.zone_type is zone_type)
        if not records:
            raise DataUnavailable(
                f"no {zone_type.value} zone data for {subject_kind.value} {subject_id} "
                f"in season {season}"
            )
    return tuple(records)


def player_name(store: DataStore, player_id: int, season: Optional[int] = None) -> str:
    """Best-known display name for a player, or ``Player <id>``."""
    pid = store.resolve_player(player_id)
    for (s, _), entries in sorted(store.rosters.items()):
        if season is not None and s != season:
            continue
        for e in entries:
            if e.player_id == pid:
                return e.name
    rows = store.rvd.get(pid)
    if rows:
        return rows[0].raider_name
    return f"Player {pid}"

"""Fixture parsing, canonical serialization, and store construction.

Layout of a data directory::

    manifest.json
    season_<N>/{matches,standings,team_stats,rosters,zones}.json
    season_<N>/events/match_<ID>.json
    rvd.json

Every file is UTF-8 JSON. Field names are matched case-insensitively with
spaces and dashes folded to underscores, so ``"Team_Id"``, ``"team id"`` and
``"team-id"`` all address ``team_id``.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from datetime import date
from decimal import Decimal
from enum import Enum
from pathlib import Path, PurePosixPath
from typing import Any, Callable, Mapping, Optional, Sequence

from kabaddi.metrics import METRICS
from kabaddi.model import (
    ClockParseError,
    Event,
    EventType,
    LeagueStage,
    MatchSummary,
    MetricValue,
    RosterEntry,
    RvdRow,
    Score,
    SkillName,
    SkillRecord,
    SkillType,
    Standing,
    SubjectKind,
    TeamRef,
    TeamSeasonStats,
    ZoneId,
    ZoneRecord,
    ZoneType,
    classify_event,
    format_clock,
    parse_clock,
    round_pct,
)
from kabaddi.store import DataStore, FixtureKind
from kabaddi.violations import Violation

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
MANIFEST_VERSION = 1

# Labels beyond the five core event names that the shipped fixtures use.
DEFAULT_EVENT_DIALECT: dict[str, EventType] = {
    "Green Card": EventType.GREEN_CARD,
    "Yellow Card": EventType.YELLOW_CARD,
    "Red Card": EventType.RED_CARD,
}


class FixtureParseError(ValueError):
    def __init__(self, source: str, line: int, column: int, detail: str):
        super().__init__(f"{source}:{line}:{column}: {detail}")
        self.source = source
        self.line = line
        self.column = column


class ManifestError(RuntimeError):
    pass


class _SchemaError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class EventLog:
    """Contents of one ``events/match_<ID>.json`` file."""

    season: int
    match_id: int
    events: tuple[Event, ...]


@dataclass(frozen=True, slots=True)
class ManifestEntry:
    path: str
    kind: FixtureKind
    season: Optional[int]
    sha256: str

    def __post_init__(self):
        check_relative_path(self.path)
        if not re.fullmatch(r"[0-9a-f]{64}", self.sha256):
            raise ValueError(f"{self.path}: sha256 must be 64 lowercase hex characters")


@dataclass(frozen=True, slots=True)
class Manifest:
    version: int
    files: tuple[ManifestEntry, ...]
    player_aliases: Mapping[int, int] = field(default_factory=dict)
    team_aliases: Mapping[str, str] = field(default_factory=dict)
    event_dialect: Mapping[str, EventType] = field(default_factory=dict)


def check_relative_path(path: str) -> str:
    p = PurePosixPath(path)
    if p.is_absolute() or "\\" in path or any(part in ("..", ".", "") for part in path.split("/")):
        raise ValueError(f"manifest path {path!r} must be relative and normalized")
    return path


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


# ---------------------------------------------------------------------------
# field coercion


def _norm_key(key: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", key.strip().lower()).strip("_")


def _is_nan(v) -> bool:
    return isinstance(v, (float, Decimal)) and v != v


def _int(v) -> int:
    if isinstance(v, bool):
        raise _SchemaError(f"expected integer, got boolean {v}")
    if isinstance(v, int):
        return v
    if isinstance(v, (Decimal, float)) and not _is_nan(v) and v == int(v):
        return int(v)
    if isinstance(v, str) and re.fullmatch(r"\s*-?\d+\s*", v):
        return int(v)
    raise _SchemaError(f"expected integer, got {v!r}")


def _opt_int(v) -> Optional[int]:
    return None if v is None or _is_nan(v) or v == "" else _int(v)


def _str(v) -> str:
    if not isinstance(v, str):
        raise _SchemaError(f"expected text, got {v!r}")
    return v


def _opt_str(v) -> Optional[str]:
    return None if v is None else _str(v)


def _bool(v) -> bool:
    if isinstance(v, bool):
        return v
    if isinstance(v, int) and v in (0, 1):
        return bool(v)
    if isinstance(v, str) and v.strip().lower() in ("true", "false"):
        return v.strip().lower() == "true"
    raise _SchemaError(f"expected boolean, got {v!r}")


def _date(v) -> date:
    try:
        return date.fromisoformat(_str(v)[:10])
    except ValueError as exc:
        raise _SchemaError(f"expected ISO-8601 date, got {v!r}") from exc


def _decimal(v) -> Decimal:
    if isinstance(v, bool) or not isinstance(v, (int, Decimal, float)):
        raise _SchemaError(f"expected number, got {v!r}")
    return Decimal(str(v)) if isinstance(v, float) else Decimal(v)


def _pct(v) -> Decimal:
    return round_pct(_decimal(v))


def _opt_pct(v) -> Optional[Decimal]:
    return None if v is None else _pct(v)


def _clock(v) -> Optional[int]:
    if v is None or v == "":
        return None
    if isinstance(v, str):
        try:
            return parse_clock(v)
        except ClockParseError as exc:
            raise _SchemaError(str(exc)) from exc
    return _int(v)


def _score(v) -> Optional[Score]:
    if v is None:
        return None
    if not isinstance(v, list) or len(v) != 2:
        raise _SchemaError(f"score must be a [team_1, team_2] pair, got {v!r}")
    return Score(_int(v[0]), _int(v[1]))


_REQUIRED = object()


@dataclass(frozen=True)
class _Field:
    name: str
    coerce: Callable[[Any], Any]
    default: Any = _REQUIRED
    aliases: tuple[str, ...] = ()


def _fields(*specs) -> dict[str, _Field]:
    return {f.name: f for f in specs}


def _pick(raw: Mapping, schema: Mapping[str, _Field]):
    """Return (values by field name, unknown original keys)."""
    lookup = {}
    for f in schema.values():
        lookup[f.name] = f.name
        for a in f.aliases:
            lookup[_norm_key(a)] = f.name
    values: dict[str, Any] = {}
    unknown = []
    for key, value in raw.items():
        name = lookup.get(_norm_key(key))
        if name is None:
            unknown.append(key)
            continue
        if name in values:
            raise _SchemaError(f"field {name!r} given twice (as {key!r})")
        values[name] = value
    out = {}
    for f in schema.values():
        if f.name in values:
            try:
                out[f.name] = f.coerce(values[f.name])
            except _SchemaError as exc:
                raise _SchemaError(f"{f.name}: {exc}") from None
        elif f.default is _REQUIRED:
            raise _SchemaError(f"missing required field {f.name!r}")
        elif f.default is not None:
            out[f.name] = f.default
    return out, unknown


# ---------------------------------------------------------------------------
# per-kind schemas

_TEAM_FIELDS = _fields(
    _Field("team_id", _int),
    _Field("team_name", _str),
    _Field("score", _int, aliases=("team_score",)),
)

_MATCH_FIELDS = _fields(
    _Field("season", _int),
    _Field("match_id", _int),
    _Field("match_name", _str, ""),
    _Field("league_stage", _str),
    _Field("year", _int),
    _Field("venue", _str, ""),
    _Field("start_date", _date),
    _Field("end_date", _date),
    _Field("team_1", lambda v: v, aliases=("team1",)),
    _Field("team_2", lambda v: v, aliases=("team2",)),
    _Field("match_outcome", _str, ""),
    _Field("winning_margin", _int),
    _Field("result", _str, ""),
)

_FLAT_TEAM_KEYS = {
    "team_id_1": ("team_1", "team_id"), "team_name_1": ("team_1", "team_name"),
    "team_score_1": ("team_1", "score"), "team_id_2": ("team_2", "team_id"),
    "team_name_2": ("team_2", "team_name"), "team_score_2": ("team_2", "score"),
}

_EVENT_FIELDS = _fields(
    _Field("event_no", _int),
    _Field("event", _str, aliases=("event_name",)),
    _Field("event_text", _opt_str, None),
    _Field("event_half", _int, aliases=("half",)),
    _Field("event_id", _int, 0),
    _Field("raiding_team_id", _opt_int, None),
    _Field("defending_team_id", _opt_int, None),
    _Field("raider_id", _opt_int, None),
    _Field("defender_id", _opt_int, None),
    *[_Field(name, _int, 0) for name in (
        "raid_points", "raid_touch_points", "raid_bonus_points", "raid_technical_points",
        "raid_all_out_points", "defending_points", "defending_capture_points",
        "defending_bonus_points", "defending_technical_points", "defending_all_out_points",
    )],
    *[_Field(name, _bool, False) for name in (
        "super_raid", "super_tackle", "do_or_die", "super_ten", "high_five", "review",
    )],
    _Field("clock", _clock, None),
    _Field("status_id", _int, 0),
    _Field("score", _score, None),
    _Field("seq_no", _int, 0),
    _Field("defenders", _int, 0),
    _Field("created_date", _opt_str, None),
    _Field("player_id", _opt_int, None),
    _Field("substituted_by", _opt_int, None),
    _Field("team_id", _opt_int, None),
    _Field("substitute_time", _opt_str, None),
)

_STANDING_FIELDS = _fields(
    _Field("group", _str),
    _Field("season", _int),
    _Field("team_id", _int),
    _Field("team_name", _str),
    _Field("league_position", _int),
    _Field("matches_played", _int),
    _Field("wins", _int),
    _Field("lost", _int),
    _Field("tied", _int),
    _Field("draws", _int, 0),
    _Field("no_result", _int, 0),
    _Field("league_points", _int, 0),
    _Field("score_diff", _int, 0),
    _Field("qualified", _bool, False),
)

_TEAM_STATS_FIELDS = _fields(
    _Field("season", _int),
    _Field("team_id", _int),
    _Field("team_name", _str),
    _Field("matches_played", _int),
    _Field("metrics", lambda v: v, {}),
    _Field("raider_skills", lambda v: v, None),
    _Field("defender_skills", lambda v: v, None),
)

_METRIC_FIELDS = _fields(
    _Field("value", _decimal),
    _Field("rank", _opt_int, None),
    _Field("per_match", lambda v: None if v is None else _decimal(v), None),
)

_SKILL_FIELDS = _fields(
    _Field("skill_name", _str, aliases=("name",)),
    _Field("value", _decimal),
    _Field("skill_type", _str, None),
    _Field("season", _int, None),
)

_ROSTER_FIELDS = _fields(
    _Field("player_id", _int),
    _Field("name", _str, aliases=("player_name",)),
    _Field("jersey_number", _opt_int, None),
    _Field("played_count", _int),
    _Field("total_points", _int),
    _Field("team_name", _str),
    _Field("team_id", _int),
    _Field("matches", _int),
    *[_Field(name, _int, 0) for name in (
        "captain_count", "green_card_count", "yellow_card_count", "red_card_count",
        "starter_count", "top_raider_count", "top_defender_count", "total_matches_in_season",
    )],
)

_RVD_FIELDS = _fields(
    _Field("season", _int),
    _Field("player_id", _int),
    _Field("raider_name", _str),
    _Field("team_id", _int),
    _Field("team_name", _str, ""),
    _Field("number_of_defenders", _int),
    _Field("total_raids", _int),
    _Field("percentage_of_raids", _pct, aliases=("percentage",)),
    _Field("empty_raids_percentage", _pct, Decimal("0.00")),
    _Field("successful_raids_percentage", _pct, Decimal("0.00")),
)

_ZONE_FIELDS = _fields(
    _Field("season", _int),
    _Field("subject_kind", _str, aliases=("subject",)),
    _Field("subject_id", _int),
    _Field("zone", _str, aliases=("zone_id", "zone_name")),
    _Field("zone_type", _str),
    _Field("points", _int),
)


class _Collector:
    def __init__(self, source: str):
        self.source = source
        self.violations: list[Violation] = []

    def add(self, rule_id: str, message: str, index: Optional[int] = None) -> None:
        where = f"record {index}: " if index is not None else ""
        self.violations.append(Violation(self.source, rule_id, where + message))


def _decode(data: bytes, source: str):
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FixtureParseError(source, 1, exc.start + 1, "not valid UTF-8") from None
    if text.startswith("﻿"):
        raise FixtureParseError(source, 1, 1, "byte order mark not allowed")
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise FixtureParseError(source, exc.lineno, exc.colno, exc.msg) from None


def _records(doc, source: str) -> list:
    if not isinstance(doc, list):
        raise _SchemaError(f"{source}: expected a JSON array of records")
    return doc


def load_fixture(
    kind: FixtureKind,
    data: bytes,
    source: str = "<bytes>",
    dialect: Optional[Mapping[str, EventType]] = None,
) -> tuple[list, list[Violation]]:
    """Parse one fixture document into typed records.

    Returns ``(records, violations)``. Records failing schema checks are left
    out and reported as Error violations; unknown fields are Warnings and the
    record is kept. Raises ``FixtureParseError`` on malformed JSON.
    """
    doc = _decode(data, source)
    out = _Collector(source)
    try:
        records = _PARSERS[kind](doc, out, DEFAULT_EVENT_DIALECT if dialect is None else dialect)
    except _SchemaError as exc:
        out.add("E-SCHEMA", str(exc))
        records = []
    return records, out.violations


def _each(doc, out: _Collector, source: str, build):
    records = []
    for i, raw in enumerate(_records(doc, source)):
        if not isinstance(raw, dict):
            out.add("E-SCHEMA", "expected an object", i)
            continue
        try:
            rec = build(raw, out, i)
        except (_SchemaError, ValueError, TypeError) as exc:
            out.add("E-SCHEMA", str(exc), i)
            continue
        if rec is not None:
            records.append(rec)
    return records


def _warn_unknown(out: _Collector, unknown, index) -> None:
    for key in unknown:
        out.add("W-UNKNOWN-FIELD", f"unknown field {key!r} ignored", index)


def _parse_matches(doc, out, _dialect):
    def build(raw, out, i):
        raw = dict(raw)
        nested: dict[str, dict] = {}
        for key in list(raw):
            target = _FLAT_TEAM_KEYS.get(_norm_key(key))
            if target:
                nested.setdefault(target[0], {})[target[1]] = raw.pop(key)
        for side, flat in nested.items():
            if not any(_norm_key(k) == side for k in raw):
                raw[side] = flat
        values, unknown = _pick(raw, _MATCH_FIELDS)
        _warn_unknown(out, unknown, i)
        teams = []
        for side in ("team_1", "team_2"):
            if not isinstance(values[side], dict):
                raise _SchemaError(f"{side} must be an object")
            tv, t_unknown = _pick(values[side], _TEAM_FIELDS)
            _warn_unknown(out, [f"{side}.{k}" for k in t_unknown], i)
            teams.append(TeamRef(**tv))
        label = values.pop("league_stage")
        stage = LeagueStage.parse(label)
        return MatchSummary(
            **{**values, "team_1": teams[0], "team_2": teams[1]},
            league_stage=stage,
            stage_label="" if stage.value == label else label,
        )

    return _each(doc, out, out.source, build)


def _parse_event(raw: Mapping, dialect) -> tuple[Event, list[str], bool]:
    values, unknown = _pick(raw, _EVENT_FIELDS)
    kind = classify_event(values["event"], dialect)
    return Event(kind=kind, **values), unknown, kind is EventType.OTHER


def _parse_events(doc, out, dialect):
    if not isinstance(doc, dict):
        raise _SchemaError("events document must be an object with season, match_id, events")
    header, unknown = _pick(
        {k: v for k, v in doc.items() if _norm_key(k) != "events"},
        _fields(_Field("season", _int), _Field("match_id", _int)),
    )
    _warn_unknown(out, unknown, None)
    raw_events = next((v for k, v in doc.items() if _norm_key(k) == "events"), None)
    if raw_events is None:
        raise _SchemaError("missing required field 'events'")
    events = []
    bad = False
    for i, raw in enumerate(_records(raw_events, out.source)):
        try:
            if not isinstance(raw, dict):
                raise _SchemaError("expected an object")
            event, unknown, other = _parse_event(raw, dialect)
        except (_SchemaError, ValueError, TypeError) as exc:
            out.add("E-SCHEMA", str(exc), i)
            bad = True
            continue
        _warn_unknown(out, unknown, i)
        if other:
            out.add("W-UNKNOWN-EVENT", f"event label {event.event!r} kept as Other", i)
        events.append(event)
    if bad:
        return []
    for i, event in enumerate(events):
        if event.raid_points != event.raid_component_sum():
            out.add("E-POINT-SUM", f"event {event.event_no}: raid_points {event.raid_points} "
                    f"!= components {event.raid_component_sum()}", i)
        if event.defending_points != event.defending_component_sum():
            out.add("E-POINT-SUM", f"event {event.event_no}: defending_points "
                    f"{event.defending_points} != components {event.defending_component_sum()}", i)
    return [EventLog(header["season"], header["match_id"], tuple(events))]


def _parse_standings(doc, out, _dialect):
    def build(raw, out, i):
        values, unknown = _pick(raw, _STANDING_FIELDS)
        _warn_unknown(out, unknown, i)
        return Standing(**values)

    return _each(doc, out, out.source, build)


def _parse_skills(raw_list, skill_type: SkillType, season: int, out, i) -> Optional[tuple]:
    if raw_list is None:
        return None
    if not isinstance(raw_list, list):
        raise _SchemaError(f"{skill_type.value.lower()}_skills must be a list or null")
    skills = []
    for raw in raw_list:
        values, unknown = _pick(raw, _SKILL_FIELDS)
        _warn_unknown(out, unknown, i)
        label = values["skill_name"]
        name = SkillName.parse(label)
        if name is SkillName.OTHER:
            out.add("W-UNKNOWN-SKILL", f"skill {label!r} kept as Other", i)
        if values.get("skill_type") and values["skill_type"].lower() != skill_type.value.lower():
            raise _SchemaError(f"skill {label!r} listed under {skill_type.value} skills")
        skills.append(SkillRecord(
            season=values.get("season", season),
            skill_type=skill_type,
            skill_name=name,
            value=values["value"],
            label="" if name.value == label else label,
        ))
    return tuple(skills)


def _parse_team_stats(doc, out, _dialect):
    def build(raw, out, i):
        values, unknown = _pick(raw, _TEAM_STATS_FIELDS)
        _warn_unknown(out, unknown, i)
        metrics = {}
        raw_metrics = values["metrics"]
        if not isinstance(raw_metrics, dict):
            raise _SchemaError("metrics must be an object keyed by metric name")
        for key, raw_metric in raw_metrics.items():
            mkey = key.strip().lower().replace("_", "-")
            mkey = mkey[len("team-"):] if mkey.startswith("team-") else mkey
            if mkey not in METRICS:
                out.add("W-UNKNOWN-FIELD", f"unknown metric {key!r} ignored", i)
                continue
            if not isinstance(raw_metric, dict):
                raw_metric = {"value": raw_metric}
            mv, m_unknown = _pick(raw_metric, _METRIC_FIELDS)
            _warn_unknown(out, [f"{key}.{k}" for k in m_unknown], i)
            if METRICS[mkey].is_percent:
                mv["value"] = round_pct(mv["value"])
            metrics[mkey] = MetricValue(**mv)
        season = values["season"]
        return TeamSeasonStats(
            season=season,
            team_id=values["team_id"],
            team_name=values["team_name"],
            matches_played=values["matches_played"],
            metrics=metrics,
            raider_skills=_parse_skills(values.get("raider_skills"), SkillType.RAIDER, season, out, i),
            defender_skills=_parse_skills(
                values.get("defender_skills"), SkillType.DEFENDER, season, out, i
            ),
        )

    return _each(doc, out, out.source, build)


def _parse_rosters(doc, out, _dialect):
    def build(raw, out, i):
        values, unknown = _pick(raw, _ROSTER_FIELDS)
        _warn_unknown(out, unknown, i)
        return RosterEntry(**values)

    return _each(doc, out, out.source, build)


def _parse_rvd(doc, out, _dialect):
    if isinstance(doc, dict):
        flat = []
        for player_key, rows in doc.items():
            if not isinstance(rows, list):
                raise _SchemaError(f"rvd rows for player {player_key!r} must be a list")
            for row in rows:
                if isinstance(row, dict) and not any(_norm_key(k) == "player_id" for k in row):
                    row = {"player_id": player_key, **row}
                flat.append(row)
        doc = flat

    def build(raw, out, i):
        values, unknown = _pick(raw, _RVD_FIELDS)
        _warn_unknown(out, unknown, i)
        return RvdRow(**values)

    return _each(doc, out, out.source, build)


def _parse_zones(doc, out, _dialect):
    seen = set()

    def build(raw, out, i):
        values, unknown = _pick(raw, _ZONE_FIELDS)
        _warn_unknown(out, unknown, i)
        try:
            subject_kind = SubjectKind(values["subject_kind"].strip().lower())
            zone_type = ZoneType(values["zone_type"].strip().lower())
        except ValueError as exc:
            raise _SchemaError(str(exc)) from None
        label = values["zone"]
        zone = ZoneId.parse(label)
        if zone is ZoneId.OTHER:
            out.add("W-UNKNOWN-ZONE", f"zone {label!r} kept as Other", i)
        rec = ZoneRecord(
            season=values["season"],
            subject_kind=subject_kind,
            subject_id=values["subject_id"],
            zone_id=zone,
            zone_type=zone_type,
            points=values["points"],
            zone_label="" if zone.value == label else label,
        )
        key = (rec.subject, rec.season, rec.zone_id, rec.zone_label, rec.zone_type)
        if key in seen:
            out.add("E-DUPLICATE-KEY", f"zone {label!r} ({zone_type.value}) repeated", i)
            return None
        seen.add(key)
        return rec

    return _each(doc, out, out.source, build)


def _parse_manifest(doc, out, _dialect):
    if not isinstance(doc, dict):
        raise _SchemaError("manifest must be an object")
    norm = {_norm_key(k): v for k, v in doc.items()}
    version = _int(norm.get("version"))
    if version != MANIFEST_VERSION:
        raise _SchemaError(f"unsupported manifest version {version}")
    entries = []
    for i, raw in enumerate(_records(norm.get("files", []), out.source)):
        try:
            values, unknown = _pick(raw, _fields(
                _Field("path", _str), _Field("kind", _str),
                _Field("season", _opt_int, None), _Field("sha256", _str),
            ))
            kind = FixtureKind(values.pop("kind"))
            entries.append(ManifestEntry(kind=kind, season=values.get("season"),
                                         path=values["path"], sha256=values["sha256"]))
        except (_SchemaError, ValueError, TypeError) as exc:
            out.add("E-SCHEMA", str(exc), i)
            continue
        _warn_unknown(out, unknown, i)
    aliases = norm.get("aliases") or {}
    players = {_int(k): _int(v) for k, v in (aliases.get("players") or {}).items()}
    teams = {_str(k): _str(v) for k, v in (aliases.get("teams") or {}).items()}
    dialect = {}
    for label, kind_name in (norm.get("event_dialect") or {}).items():
        try:
            dialect[label] = EventType[_norm_key(kind_name).upper()]
        except KeyError:
            dialect[label] = EventType(kind_name)
    for key in norm:
        if key not in ("version", "files", "aliases", "event_dialect"):
            out.add("W-UNKNOWN-FIELD", f"unknown manifest field {key!r} ignored")
    return [Manifest(version, tuple(entries), players, teams, dialect)]


_PARSERS = {
    FixtureKind.SEASON_MATCHES: _parse_matches,
    FixtureKind.MATCH_EVENTS: _parse_events,
    FixtureKind.STANDINGS: _parse_standings,
    FixtureKind.TEAM_STATS: _parse_team_stats,
    FixtureKind.ROSTERS: _parse_rosters,
    FixtureKind.RVD: _parse_rvd,
    FixtureKind.ZONES: _parse_zones,
    FixtureKind.MANIFEST: _parse_manifest,
}


# ---------------------------------------------------------------------------
# canonical serialization


def _jsonable(v):
    if isinstance(v, Decimal):
        return int(v) if v == v.to_integral_value() else float(v)
    if isinstance(v, date):
        return v.isoformat()
    if isinstance(v, Score):
        return v.as_list()
    if isinstance(v, Enum):
        return v.value
    return v


def _match_doc(m: MatchSummary) -> dict:
    def team(t: TeamRef) -> dict:
        return {"team_id": t.team_id, "team_name": t.team_name, "score": t.score}

    return {
        "season": m.season,
        "match_id": m.match_id,
        "match_name": m.match_name,
        "league_stage": m.stage_name,
        "year": m.year,
        "venue": m.venue,
        "start_date": m.start_date.isoformat(),
        "end_date": m.end_date.isoformat(),
        "team_1": team(m.team_1),
        "team_2": team(m.team_2),
        "match_outcome": m.match_outcome,
        "winning_margin": m.winning_margin,
        "result": m.result,
    }


def _event_doc(e: Event) -> dict:
    doc = {}
    for name in Event.COLUMNS:
        value = getattr(e, name)
        if name == "clock" and value is not None:
            value = format_clock(value)
        doc[name] = _jsonable(value)
    return doc


def _skill_doc(s: SkillRecord) -> dict:
    return {"skill_name": s.name, "value": _jsonable(s.value)}


def _team_stats_doc(t: TeamSeasonStats) -> dict:
    metrics = {}
    for key in METRICS:
        if key in t.metrics:
            mv = t.metrics[key]
            metrics[key] = {
                "value": _jsonable(mv.value),
                "rank": mv.rank,
                "per_match": _jsonable(mv.per_match),
            }
    return {
        "season": t.season,
        "team_id": t.team_id,
        "team_name": t.team_name,
        "matches_played": t.matches_played,
        "metrics": metrics,
        "raider_skills": None if t.raider_skills is None else [_skill_doc(s) for s in t.raider_skills],
        "defender_skills": (
            None if t.defender_skills is None else [_skill_doc(s) for s in t.defender_skills]
        ),
    }


def _row_doc(rec) -> dict:
    return {k: _jsonable(v) for k, v in rec.as_row().items()}


def _manifest_doc(m: Manifest) -> dict:
    doc: dict[str, Any] = {
        "version": m.version,
        "files": [
            {"path": f.path, "kind": f.kind.value, "season": f.season, "sha256": f.sha256}
            for f in m.files
        ],
    }
    if m.player_aliases or m.team_aliases:
        doc["aliases"] = {
            "players": {str(k): v for k, v in m.player_aliases.items()},
            "teams": dict(m.team_aliases),
        }
    if m.event_dialect:
        doc["event_dialect"] = {k: v.value for k, v in m.event_dialect.items()}
    return doc


def to_document(kind: FixtureKind, records: Sequence) -> Any:
    """JSON-ready document for ``records`` with keys in schema order."""
    if kind is FixtureKind.SEASON_MATCHES:
        return [_match_doc(m) for m in records]
    if kind is FixtureKind.MATCH_EVENTS:
        (log_,) = records
        return {
            "season": log_.season,
            "match_id": log_.match_id,
            "events": [_event_doc(e) for e in log_.events],
        }
    if kind is FixtureKind.TEAM_STATS:
        return [_team_stats_doc(t) for t in records]
    if kind is FixtureKind.RVD:
        by_player: dict[str, list] = {}
        for row in records:
            by_player.setdefault(str(row.player_id), []).append(_row_doc(row))
        return by_player
    if kind is FixtureKind.MANIFEST:
        (m,) = records
        return _manifest_doc(m)
    return [_row_doc(r) for r in records]


def dumps_canonical(doc: Any) -> bytes:
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def serialize(kind: FixtureKind, records: Sequence) -> bytes:
    return dumps_canonical(to_document(kind, records))


# ---------------------------------------------------------------------------
# store construction

_KIND_BY_FILENAME = {
    "matches.json": FixtureKind.SEASON_MATCHES,
    "standings.json": FixtureKind.STANDINGS,
    "team_stats.json": FixtureKind.TEAM_STATS,
    "rosters.json": FixtureKind.ROSTERS,
    "zones.json": FixtureKind.ZONES,
}


def infer_entry(rel_path: str) -> tuple[FixtureKind, Optional[int]]:
    """Kind and season implied by a path in the standard layout."""
    parts = rel_path.split("/")
    if parts == ["rvd.json"]:
        return FixtureKind.RVD, None
    m = re.fullmatch(r"season_(\d+)", parts[0]) if len(parts) > 1 else None
    if m is None:
        raise ValueError(f"{rel_path}: not in the data directory layout")
    season = int(m.group(1))
    if len(parts) == 2 and parts[1] in _KIND_BY_FILENAME:
        return _KIND_BY_FILENAME[parts[1]], season
    if len(parts) == 3 and parts[1] == "events" and re.fullmatch(r"match_\d+\.json", parts[2]):
        return FixtureKind.MATCH_EVENTS, season
    raise ValueError(f"{rel_path}: not in the data directory layout")


def write_manifest(data_dir, aliases: Optional[Manifest] = None) -> Manifest:
    """Rescan ``data_dir`` and rewrite manifest.json with fresh digests.

    Alias tables and event dialect are carried over from the existing
    manifest unless ``aliases`` supplies them.
    """
    root = Path(data_dir)
    if aliases is None and (root / MANIFEST_NAME).exists():
        (aliases,), _ = load_fixture(FixtureKind.MANIFEST, (root / MANIFEST_NAME).read_bytes())
    entries = []
    for path in sorted(p for p in root.rglob("*.json") if p.name != MANIFEST_NAME):
        rel = path.relative_to(root).as_posix()
        kind, season = infer_entry(rel)
        entries.append(ManifestEntry(rel, kind, season, sha256_hex(path.read_bytes())))
    manifest = Manifest(
        MANIFEST_VERSION,
        tuple(entries),
        aliases.player_aliases if aliases else {},
        aliases.team_aliases if aliases else {},
        aliases.event_dialect if aliases else {},
    )
    (root / MANIFEST_NAME).write_bytes(serialize(FixtureKind.MANIFEST, [manifest]))
    return manifest


def read_manifest(data_dir) -> Manifest:
    path = Path(data_dir) / MANIFEST_NAME
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc.strerror or exc}") from None
    try:
        records, violations = load_fixture(FixtureKind.MANIFEST, data, str(MANIFEST_NAME))
    except FixtureParseError as exc:
        raise ManifestError(f"malformed manifest: {exc}") from None
    bad = [v for v in violations if v.is_error]
    if not records or bad:
        raise ManifestError("invalid manifest: " + "; ".join(v.message for v in bad))
    return records[0]


def build_store(data_dir) -> tuple[DataStore, list[Violation]]:
    """Load every file listed in the manifest into a ``DataStore``.

    A file with any Error violation contributes nothing; other files still
    load. Violations come back ordered by path, then record index.
    """
    root = Path(data_dir)
    manifest = read_manifest(root)
    dialect = {**DEFAULT_EVENT_DIALECT, **manifest.event_dialect}
    by_path: dict[str, list[Violation]] = {}
    loaded: list[tuple[ManifestEntry, list]] = []

    for entry in sorted(manifest.files, key=lambda f: f.path):
        found = by_path.setdefault(entry.path, [])
        try:
            data = (root / entry.path).read_bytes()
        except OSError as exc:
            found.append(Violation(entry.path, "E-UNREADABLE", exc.strerror or str(exc)))
            continue
        if sha256_hex(data) != entry.sha256:
            found.append(Violation(entry.path, "E-DIGEST", "content does not match manifest sha256"))
            continue
        try:
            records, violations = load_fixture(entry.kind, data, entry.path, dialect)
        except FixtureParseError as exc:
            found.append(Violation(entry.path, "E-PARSE", f"line {exc.line} column {exc.column}: {exc}"))
            continue
        found.extend(violations)
        found.extend(_season_mismatch(entry, records))
        if not any(v.is_error for v in found):
            loaded.append((entry, records))

    tables = _Tables()
    for entry, records in loaded:
        if entry.kind is not FixtureKind.MATCH_EVENTS:
            tables.add(entry, records, by_path[entry.path])
    for entry, records in loaded:
        if entry.kind is FixtureKind.MATCH_EVENTS:
            tables.add(entry, records, by_path[entry.path])

    store = DataStore(
        matches=tables.matches,
        events=tables.events,
        standings={k: tuple(v) for k, v in tables.standings.items()},
        team_stats=tables.team_stats,
        rosters={k: tuple(sorted(v, key=lambda r: r.player_id)) for k, v in tables.rosters.items()},
        rvd={k: tuple(sorted(v, key=lambda r: (r.season, r.number_of_defenders)))
             for k, v in tables.rvd.items()},
        zones={k: tuple(v) for k, v in tables.zones.items()},
        availability=frozenset(tables.availability),
        player_aliases=manifest.player_aliases,
        team_aliases=manifest.team_aliases,
    )
    violations = [v for path in sorted(by_path) for v in by_path[path]]
    return store, violations


def _season_mismatch(entry: ManifestEntry, records) -> list[Violation]:
    if entry.season is None:
        return []
    out = []
    for i, rec in enumerate(records):
        season = getattr(rec, "season", None)
        if season is not None and season != entry.season:
            out.append(Violation(entry.path, "E-SCHEMA",
                                 f"record {i}: season {season} in a season-{entry.season} file"))
    return out


class _Tables:
    def __init__(self):
        self.matches: dict = {}
        self.events: dict = {}
        self.standings: dict = {}
        self.team_stats: dict = {}
        self.rosters: dict = {}
        self.rvd: dict = {}
        self.zones: dict = {}
        self.availability: set = set()

    def add(self, entry: ManifestEntry, records: list, found: list[Violation]) -> None:
        kind = entry.kind
        staged: list[tuple[dict, Any, Any]] = []
        dupes = []

        def put(table: dict, key, value):
            if key in table or any(t is table and k == key for t, k, _ in staged):
                dupes.append(key)
            else:
                staged.append((table, key, value))

        if kind is FixtureKind.SEASON_MATCHES:
            for m in records:
                put(self.matches, (m.season, m.match_id), m)
        elif kind is FixtureKind.MATCH_EVENTS:
            (log_,) = records
            key = (log_.season, log_.match_id)
            summary = self.matches.get(key)
            if summary is None:
                found.append(Violation(
                    entry.path, "E-ORPHAN-EVENTS",
                    f"no summary for match {log_.match_id} in season {log_.season}",
                ))
                return
            for e in log_.events:
                for team in (e.raiding_team_id, e.defending_team_id):
                    if team is not None and team not in summary.team_ids:
                        found.append(Violation(
                            entry.path, "E-TEAM-REF",
                            f"event {e.event_no}: team {team} not in match {log_.match_id}",
                        ))
            if any(v.rule_id == "E-TEAM-REF" for v in found):
                return
            put(self.events, key, log_.events)
        elif kind is FixtureKind.STANDINGS:
            if entry.season in self.standings:
                dupes.append(entry.season)
            staged.append((self.standings, entry.season, tuple(records)))
        elif kind is FixtureKind.TEAM_STATS:
            for t in records:
                put(self.team_stats, (t.season, t.team_id), t)
        elif kind is FixtureKind.ROSTERS:
            seen = set()
            for r in records:
                if (r.team_id, r.player_id) in seen:
                    dupes.append((r.team_id, r.player_id))
                seen.add((r.team_id, r.player_id))
                if (entry.season, r.team_id) in self.rosters:
                    dupes.append((entry.season, r.team_id))
                staged.append((self.rosters, (entry.season, r.team_id), r))
        elif kind is FixtureKind.RVD:
            seen = set()
            for r in records:
                key = (r.player_id, r.season, r.number_of_defenders)
                if key in seen:
                    dupes.append(key)
                seen.add(key)
                staged.append((self.rvd, r.player_id, r))
        elif kind is FixtureKind.ZONES:
            for z in records:
                staged.append((self.zones, (z.season, z.subject_kind, z.subject_id), z))

        if dupes:
            for key in dupes:
                found.append(Violation(entry.path, "E-DUPLICATE-KEY", f"duplicate key {key}"))
            return
        for table, key, value in staged:
            if table is self.rosters or table is self.rvd or table is self.zones:
                table.setdefault(key, []).append(value)
            else:
                table[key] = value
        self._mark(entry, records)

    def _mark(self, entry: ManifestEntry, records) -> None:
        if entry.kind is FixtureKind.RVD:
            for r in records:
                self.availability.add((r.season, FixtureKind.RVD))
        elif entry.season is not None:
            self.availability.add((entry.season, entry.kind))

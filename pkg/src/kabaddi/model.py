"""Domain types for Pro Kabaddi League data.

Every record is a frozen dataclass. ``as_row`` flattens a record into the
ordered column mapping that query tables and the CSV/JSON/text renderers use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Mapping, Optional

CLOCK_MAX = 20 * 60
MAX_DEFENDERS = 7

_CLOCK_RE = re.compile(r"^(\d{1,2}):(\d{2})$")
_TWO_PLACES = Decimal("0.01")


class ClockParseError(ValueError):
    """Raised when a match clock string is not ``MM:SS`` within a half."""


def winning_margin(a: int, b: int) -> int:
    return abs(a - b)


def parse_clock(text: str) -> int:
    """Convert ``MM:SS`` (time remaining in a half) to seconds."""
    token = text.strip()
    m = _CLOCK_RE.match(token)
    if m is None:
        raise ClockParseError(f"malformed clock token {text!r}: expected MM:SS")
    minutes, seconds = int(m.group(1)), int(m.group(2))
    if seconds > 59:
        raise ClockParseError(f"malformed clock token {text!r}: seconds {seconds} > 59")
    total = minutes * 60 + seconds
    if total > CLOCK_MAX:
        raise ClockParseError(f"malformed clock token {text!r}: exceeds 20:00")
    return total


def format_clock(seconds: int) -> str:
    if not 0 <= seconds <= CLOCK_MAX:
        raise ValueError(f"clock value {seconds} outside [0, {CLOCK_MAX}]")
    return f"{seconds // 60:02d}:{seconds % 60:02d}"


def round_pct(value) -> Decimal:
    """Half-up rounding to two decimals, the format the league publishes."""
    return Decimal(value).quantize(_TWO_PLACES, rounding=ROUND_HALF_UP)


def percent(numerator: int, denominator: int) -> Decimal:
    if denominator == 0:
        return round_pct(0)
    return round_pct(Decimal(100) * numerator / denominator)


class LeagueStage(Enum):
    LEAGUE = "League"
    ELIMINATOR = "Eliminator"
    QUALIFIER = "Qualifier"
    SEMI_FINAL = "Semi Final"
    FINAL = "Final"
    OTHER = "Other"

    @classmethod
    def parse(cls, text: str) -> "LeagueStage":
        key = re.sub(r"[\s_\-]+", "", text).lower()
        for member in cls:
            if member.value.replace(" ", "").lower() == key:
                return member
        return cls.OTHER


class EventType(Enum):
    SUCCESSFUL_RAID = "Successful Raid"
    UNSUCCESSFUL_RAID = "Unsuccessful Raid"
    EMPTY_RAID = "Empty Raid"
    SUBSTITUTION = "Substitution"
    TIMEOUT = "Timeout"
    ALL_OUT = "All Out"
    GREEN_CARD = "Green Card"
    YELLOW_CARD = "Yellow Card"
    RED_CARD = "Red Card"
    OTHER = "Other"

    @property
    def is_raid(self) -> bool:
        return self in RAID_TYPES

    @property
    def is_card(self) -> bool:
        return self in CARD_TYPES


RAID_TYPES = frozenset(
    {EventType.SUCCESSFUL_RAID, EventType.UNSUCCESSFUL_RAID, EventType.EMPTY_RAID}
)
CARD_TYPES = frozenset({EventType.GREEN_CARD, EventType.YELLOW_CARD, EventType.RED_CARD})

_BASE_EVENT_NAMES = {
    t.value.lower(): t
    for t in (
        EventType.SUCCESSFUL_RAID,
        EventType.UNSUCCESSFUL_RAID,
        EventType.EMPTY_RAID,
        EventType.SUBSTITUTION,
        EventType.TIMEOUT,
    )
}


def classify_event(event_name: str, dialect: Optional[Mapping[str, EventType]] = None) -> EventType:
    """Map a raw event label to an ``EventType``.

    Only the five core labels are recognised by default; ``dialect`` adds
    extra label mappings (matched case-insensitively). Unknown labels map to
    ``EventType.OTHER`` and callers keep the original text alongside.
    """
    key = " ".join(event_name.split()).lower()
    if key in _BASE_EVENT_NAMES:
        return _BASE_EVENT_NAMES[key]
    if dialect:
        for label, kind in dialect.items():
            if " ".join(label.split()).lower() == key:
                return kind
    return EventType.OTHER


class SkillType(Enum):
    RAIDER = "Raider"
    DEFENDER = "Defender"


class SkillName(Enum):
    # defensive moves
    WAIST_HOLD = "Waist Hold"
    ANKLE_HOLD = "Ankle Hold"
    THIGH_HOLD = "Thigh Hold"
    BLOCK = "Block"
    CHAIN_TACKLE = "Chain Tackle"
    DASH = "Dash"
    # offensive moves
    TOE_TOUCH = "Toe Touch"
    HAND_TOUCH = "Hand Touch"
    FRONT_SIDE_KICK = "Front Side Kick"
    REVERSE_KICK = "Reverse Kick"
    LEG_THRUST = "Leg Thrust"
    DUBKI = "Dubki"
    OTHER = "Other"

    @property
    def family(self) -> Optional[SkillType]:
        if self in _DEFENSIVE_SKILLS:
            return SkillType.DEFENDER
        if self is SkillName.OTHER:
            return None
        return SkillType.RAIDER

    @classmethod
    def parse(cls, text: str) -> "SkillName":
        key = _skill_key(text)
        return _SKILL_ALIASES.get(key, cls.OTHER)


_DEFENSIVE_SKILLS = frozenset(
    {
        SkillName.WAIST_HOLD,
        SkillName.ANKLE_HOLD,
        SkillName.THIGH_HOLD,
        SkillName.BLOCK,
        SkillName.CHAIN_TACKLE,
        SkillName.DASH,
    }
)


def _skill_key(text: str) -> str:
    return re.sub(r"[^a-z]", "", text.lower())


_SKILL_ALIASES = {_skill_key(s.value): s for s in SkillName if s is not SkillName.OTHER}
_SKILL_ALIASES.update(
    {
        "waistbackhold": SkillName.WAIST_HOLD,
        "backhold": SkillName.WAIST_HOLD,
        "frontandsidekick": SkillName.FRONT_SIDE_KICK,
        "reversebackkick": SkillName.REVERSE_KICK,
        "backkick": SkillName.REVERSE_KICK,
        "dubkiduck": SkillName.DUBKI,
        "duck": SkillName.DUBKI,
    }
)


class ZoneId(Enum):
    LEFT_LOBBY = "Left Lobby"
    RIGHT_LOBBY = "Right Lobby"
    MIDLINE_LEFT = "Midline Left"
    MIDLINE_CENTRE = "Midline Centre"
    MIDLINE_RIGHT = "Midline Right"
    BAULK_LEFT = "Baulk Left"
    BAULK_RIGHT = "Baulk Right"
    BONUS_LEFT = "Bonus Left"
    BONUS_RIGHT = "Bonus Right"
    OTHER = "Other"

    @classmethod
    def parse(cls, text: str) -> "ZoneId":
        key = re.sub(r"[^a-z]", "", text.lower()).replace("center", "centre")
        for member in cls:
            if member is not cls.OTHER and re.sub(r"[^a-z]", "", member.value.lower()) == key:
                return member
        return cls.OTHER


class ZoneType(Enum):
    STRONG = "strong"
    WEAK = "weak"


class SubjectKind(Enum):
    TEAM = "team"
    PLAYER = "player"


@dataclass(frozen=True, slots=True)
class TeamRef:
    team_id: int
    team_name: str
    score: int

    def __post_init__(self):
        if self.team_id <= 0:
            raise ValueError(f"team_id must be positive, got {self.team_id}")
        if self.score < 0:
            raise ValueError(f"score must be non-negative, got {self.score}")


@dataclass(frozen=True, slots=True)
class MatchSummary:
    season: int
    match_id: int
    match_name: str
    league_stage: LeagueStage
    year: int
    venue: str
    start_date: date
    end_date: date
    team_1: TeamRef
    team_2: TeamRef
    match_outcome: str
    winning_margin: int
    result: str
    stage_label: str = ""

    COLUMNS = (
        "season", "match_id", "match_name", "league_stage", "match_outcome",
        "team_score_1", "team_score_2", "team_name_1", "team_id_1",
        "team_name_2", "team_id_2", "winning_margin", "year", "venue",
        "start_date", "end_date", "result",
    )

    def __post_init__(self):
        if self.season <= 0 or self.match_id <= 0:
            raise ValueError("season and match_id must be positive")
        if self.winning_margin != winning_margin(self.team_1.score, self.team_2.score):
            raise ValueError(
                f"match {self.match_id}: winning_margin {self.winning_margin} != "
                f"|{self.team_1.score} - {self.team_2.score}|"
            )
        if self.start_date > self.end_date:
            raise ValueError(f"match {self.match_id}: start_date after end_date")

    @property
    def stage_name(self) -> str:
        return self.stage_label or self.league_stage.value

    @property
    def team_ids(self) -> tuple[int, int]:
        return (self.team_1.team_id, self.team_2.team_id)

    def as_row(self) -> dict:
        return {
            "season": self.season,
            "match_id": self.match_id,
            "match_name": self.match_name,
            "league_stage": self.stage_name,
            "match_outcome": self.match_outcome,
            "team_score_1": self.team_1.score,
            "team_score_2": self.team_2.score,
            "team_name_1": self.team_1.team_name,
            "team_id_1": self.team_1.team_id,
            "team_name_2": self.team_2.team_name,
            "team_id_2": self.team_2.team_id,
            "winning_margin": self.winning_margin,
            "year": self.year,
            "venue": self.venue,
            "start_date": self.start_date.isoformat(),
            "end_date": self.end_date.isoformat(),
            "result": self.result,
        }


@dataclass(frozen=True, slots=True)
class Score:
    team_1_total: int
    team_2_total: int

    def __post_init__(self):
        if self.team_1_total < 0 or self.team_2_total < 0:
            raise ValueError(f"negative score component in {self}")

    def add(self, team_1: int = 0, team_2: int = 0) -> "Score":
        return Score(self.team_1_total + team_1, self.team_2_total + team_2)

    def as_list(self) -> list[int]:
        return [self.team_1_total, self.team_2_total]


@dataclass(frozen=True, slots=True)
class Event:
    """One play-by-play row. ``score`` is the running total after the event."""

    event_no: int
    event: str
    event_text: Optional[str]
    event_half: int
    event_id: int
    clock: Optional[int]
    kind: EventType = EventType.OTHER
    raiding_team_id: Optional[int] = None
    defending_team_id: Optional[int] = None
    raider_id: Optional[int] = None
    defender_id: Optional[int] = None
    raid_points: int = 0
    raid_touch_points: int = 0
    raid_bonus_points: int = 0
    raid_technical_points: int = 0
    raid_all_out_points: int = 0
    defending_points: int = 0
    defending_capture_points: int = 0
    defending_bonus_points: int = 0
    defending_technical_points: int = 0
    defending_all_out_points: int = 0
    super_raid: bool = False
    super_tackle: bool = False
    do_or_die: bool = False
    super_ten: bool = False
    high_five: bool = False
    review: bool = False
    status_id: int = 0
    score: Optional[Score] = None
    seq_no: int = 0
    defenders: int = 0
    created_date: Optional[str] = None
    player_id: Optional[int] = None
    substituted_by: Optional[int] = None
    team_id: Optional[int] = None
    substitute_time: Optional[str] = None

    COLUMNS = (
        "event_no", "event", "event_text", "event_half", "event_id",
        "raiding_team_id", "defending_team_id", "raider_id", "defender_id",
        "raid_points", "raid_touch_points", "raid_bonus_points",
        "raid_technical_points", "raid_all_out_points", "defending_points",
        "defending_capture_points", "defending_bonus_points",
        "defending_technical_points", "defending_all_out_points",
        "super_raid", "super_tackle", "do_or_die", "super_ten", "high_five",
        "review", "clock", "status_id", "score", "seq_no", "defenders",
        "created_date", "player_id", "substituted_by", "team_id",
        "substitute_time",
    )

    def __post_init__(self):
        if self.event_no <= 0:
            raise ValueError(f"event_no must be positive, got {self.event_no}")
        if self.event_half not in (1, 2):
            raise ValueError(f"event {self.event_no}: event_half must be 1 or 2")
        if self.clock is not None and not 0 <= self.clock <= CLOCK_MAX:
            raise ValueError(f"event {self.event_no}: clock {self.clock} outside [0, {CLOCK_MAX}]")
        if not 0 <= self.defenders <= MAX_DEFENDERS:
            raise ValueError(f"event {self.event_no}: defenders {self.defenders} outside [0, 7]")
        for name in POINT_FIELDS:
            if getattr(self, name) < 0:
                raise ValueError(f"event {self.event_no}: {name} is negative")

    @property
    def is_raid(self) -> bool:
        return self.kind.is_raid

    def raid_component_sum(self) -> int:
        return (
            self.raid_touch_points
            + self.raid_bonus_points
            + self.raid_technical_points
            + self.raid_all_out_points
        )

    def defending_component_sum(self) -> int:
        return (
            self.defending_capture_points
            + self.defending_bonus_points
            + self.defending_technical_points
            + self.defending_all_out_points
        )

    def as_row(self) -> dict:
        row = {}
        for name in self.COLUMNS:
            value = getattr(self, name)
            if name == "score" and value is not None:
                value = value.as_list()
            elif name == "clock" and value is not None:
                value = format_clock(value)
            row[name] = value
        return row


POINT_FIELDS = (
    "raid_points",
    "raid_touch_points",
    "raid_bonus_points",
    "raid_technical_points",
    "raid_all_out_points",
    "defending_points",
    "defending_capture_points",
    "defending_bonus_points",
    "defending_technical_points",
    "defending_all_out_points",
)


@dataclass(frozen=True, slots=True)
class MatchDetail:
    summary: MatchSummary
    events: tuple[Event, ...] = ()

    @property
    def match_id(self) -> int:
        return self.summary.match_id


@dataclass(frozen=True, slots=True)
class Standing:
    group: str
    season: int
    team_id: int
    team_name: str
    league_position: int
    matches_played: int
    wins: int
    lost: int
    tied: int
    draws: int = 0
    no_result: int = 0
    league_points: int = 0
    score_diff: int = 0
    qualified: bool = False

    COLUMNS = (
        "group", "season", "team_id", "team_name", "league_position",
        "matches_played", "wins", "lost", "tied", "draws", "no_result",
        "league_points", "score_diff", "qualified",
    )

    def __post_init__(self):
        counts = (self.wins, self.lost, self.tied, self.draws, self.no_result)
        if min(counts) < 0 or self.matches_played < 0 or self.league_points < 0:
            raise ValueError(f"team {self.team_id}: negative standings count")
        if sum(counts) != self.matches_played:
            raise ValueError(
                f"team {self.team_id}: wins+lost+tied+draws+no_result "
                f"{sum(counts)} != matches_played {self.matches_played}"
            )
        if self.league_position <= 0:
            raise ValueError(f"team {self.team_id}: league_position must be positive")

    def as_row(self) -> dict:
        return {name: getattr(self, name) for name in self.COLUMNS}


@dataclass(frozen=True, slots=True)
class SkillRecord:
    season: int
    skill_type: SkillType
    skill_name: SkillName
    value: Decimal
    label: str = ""

    COLUMNS = ("season", "skill_type", "skill_name", "value")

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"skill value must be non-negative, got {self.value}")
        family = self.skill_name.family
        if family is not None and family is not self.skill_type:
            raise ValueError(
                f"skill {self.skill_name.value!r} is a {family.value} move, "
                f"not {self.skill_type.value}"
            )

    @property
    def name(self) -> str:
        return self.label or self.skill_name.value

    def as_row(self) -> dict:
        return {
            "season": self.season,
            "skill_type": self.skill_type.value,
            "skill_name": self.name,
            "value": self.value,
        }


@dataclass(frozen=True, slots=True)
class MetricValue:
    value: Decimal
    rank: Optional[int] = None
    per_match: Optional[Decimal] = None


@dataclass(frozen=True, slots=True)
class TeamSeasonStats:
    season: int
    team_id: int
    team_name: str
    matches_played: int
    metrics: Mapping[str, MetricValue] = field(default_factory=dict)
    raider_skills: Optional[tuple[SkillRecord, ...]] = None
    defender_skills: Optional[tuple[SkillRecord, ...]] = None

    def __post_init__(self):
        from kabaddi.metrics import METRICS

        for key, metric in self.metrics.items():
            if key not in METRICS:
                raise ValueError(f"unknown team metric {key!r}")
            if metric.value < 0:
                raise ValueError(f"metric {key} is negative")
            if METRICS[key].is_percent and metric.value > 100:
                raise ValueError(f"percent metric {key} = {metric.value} exceeds 100")
            if metric.rank is not None and metric.rank <= 0:
                raise ValueError(f"metric {key} rank must be positive")


@dataclass(frozen=True, slots=True)
class RosterEntry:
    player_id: int
    name: str
    jersey_number: Optional[int]
    played_count: int
    total_points: int
    team_name: str
    team_id: int
    matches: int
    captain_count: int = 0
    green_card_count: int = 0
    yellow_card_count: int = 0
    red_card_count: int = 0
    starter_count: int = 0
    top_raider_count: int = 0
    top_defender_count: int = 0
    total_matches_in_season: int = 0

    COLUMNS = (
        "player_id", "name", "jersey_number", "played_count", "total_points",
        "team_name", "team_id", "matches", "captain_count", "green_card_count",
        "yellow_card_count", "red_card_count", "starter_count",
        "top_raider_count", "top_defender_count", "total_matches_in_season",
    )

    def __post_init__(self):
        for name in self.COLUMNS:
            value = getattr(self, name)
            if isinstance(value, int) and not isinstance(value, bool) and value < 0:
                raise ValueError(f"player {self.player_id}: {name} is negative")
        if self.played_count > self.matches:
            raise ValueError(f"player {self.player_id}: played_count exceeds team matches")
        if self.starter_count > self.played_count:
            raise ValueError(f"player {self.player_id}: starter_count exceeds played_count")

    def as_row(self) -> dict:
        return {name: getattr(self, name) for name in self.COLUMNS}


@dataclass(frozen=True, slots=True)
class RvdRow:
    season: int
    player_id: int
    raider_name: str
    team_id: int
    team_name: str
    number_of_defenders: int
    total_raids: int
    percentage_of_raids: Decimal
    empty_raids_percentage: Decimal
    successful_raids_percentage: Decimal

    COLUMNS = (
        "season", "player_id", "raider_name", "team_id", "team_name",
        "number_of_defenders", "total_raids", "percentage_of_raids",
        "empty_raids_percentage", "successful_raids_percentage",
    )

    def __post_init__(self):
        if not 1 <= self.number_of_defenders <= MAX_DEFENDERS:
            raise ValueError(f"number_of_defenders {self.number_of_defenders} outside [1, 7]")
        if self.total_raids < 0:
            raise ValueError("total_raids is negative")
        for name in ("percentage_of_raids", "empty_raids_percentage", "successful_raids_percentage"):
            if not 0 <= getattr(self, name) <= 100:
                raise ValueError(f"{name} outside [0, 100]")

    def as_row(self) -> dict:
        return {name: getattr(self, name) for name in self.COLUMNS}


@dataclass(frozen=True, slots=True)
class ZoneRecord:
    season: int
    subject_kind: SubjectKind
    subject_id: int
    zone_id: ZoneId
    zone_type: ZoneType
    points: int
    zone_label: str = ""

    COLUMNS = ("season", "subject_kind", "subject_id", "zone", "zone_type", "points")

    def __post_init__(self):
        if self.points < 0:
            raise ValueError("zone points must be non-negative")

    @property
    def subject(self) -> tuple[SubjectKind, int]:
        return (self.subject_kind, self.subject_id)

    @property
    def zone_name(self) -> str:
        return self.zone_label or self.zone_id.value

    def as_row(self) -> dict:
        return {
            "season": self.season,
            "subject_kind": self.subject_kind.value,
            "subject_id": self.subject_id,
            "zone": self.zone_name,
            "zone_type": self.zone_type.value,
            "points": self.points,
        }

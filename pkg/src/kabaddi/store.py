"""The in-memory, read-only data store and data-availability bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping, Optional

from kabaddi.model import (
    Event,
    MatchSummary,
    RosterEntry,
    RvdRow,
    Standing,
    SubjectKind,
    TeamSeasonStats,
    ZoneRecord,
)


class FixtureKind(Enum):
    SEASON_MATCHES = "SeasonMatches"
    MATCH_EVENTS = "MatchEvents"
    STANDINGS = "Standings"
    TEAM_STATS = "TeamStats"
    ROSTERS = "Rosters"
    RVD = "Rvd"
    ZONES = "Zones"
    MANIFEST = "Manifest"


# Gaps in the publicly available source data, by kind.
KNOWN_GAPS: dict[str, tuple[frozenset[int], str]] = {
    "zones": (frozenset({8, 9, 10}), "zone data is not publicly available for seasons 8, 9, and 10"),
    "events": (frozenset({4}), "match breakdown data for season 4 is not publicly available"),
    "skills": (
        frozenset({1, 2, 3, 4}),
        "skill tables: unavailable for seasons 1 through 4",
    ),
    "rvd": (
        frozenset({1, 2, 3, 4}),
        "raider-vs-defenders tables: unavailable for seasons 1 through 4",
    ),
}


class DataUnavailable(LookupError):
    """The store has no data for the request. Distinct from an empty result."""

    def __init__(self, message: str, *, gap: Optional[str] = None, season: Optional[int] = None):
        if gap is not None and season is not None:
            seasons, note = KNOWN_GAPS[gap]
            if season in seasons:
                message = f"{message} ({note})"
        super().__init__(message)
        self.gap = gap
        self.season = season


def _frozen(mapping) -> Mapping:
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class DataStore:
    matches: Mapping[tuple[int, int], MatchSummary] = field(default_factory=dict)
    events: Mapping[tuple[int, int], tuple[Event, ...]] = field(default_factory=dict)
    standings: Mapping[int, tuple[Standing, ...]] = field(default_factory=dict)
    team_stats: Mapping[tuple[int, int], TeamSeasonStats] = field(default_factory=dict)
    rosters: Mapping[tuple[int, int], tuple[RosterEntry, ...]] = field(default_factory=dict)
    rvd: Mapping[int, tuple[RvdRow, ...]] = field(default_factory=dict)
    zones: Mapping[tuple[int, SubjectKind, int], tuple[ZoneRecord, ...]] = field(default_factory=dict)
    availability: frozenset[tuple[int, FixtureKind]] = frozenset()
    player_aliases: Mapping[int, int] = field(default_factory=dict)
    team_aliases: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("matches", "events", "standings", "team_stats", "rosters", "rvd",
                     "zones", "player_aliases", "team_aliases"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    def has(self, season: int, kind: FixtureKind) -> bool:
        return (season, kind) in self.availability

    @property
    def seasons(self) -> list[int]:
        return sorted({season for season, _ in self.availability})

    def resolve_player(self, player_id: int) -> int:
        return self.player_aliases.get(player_id, player_id)

    def canonical_team_name(self, name: str) -> str:
        name = name.strip()
        return self.team_aliases.get(name, name)

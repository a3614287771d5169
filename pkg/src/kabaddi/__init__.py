"""Pro Kabaddi League data toolkit: typed records, fixture ingestion, a rule
engine for play-by-play, derived statistics, queries, SVG figures, a CLI
and a mirror-sync client."""

from kabaddi.ingest import build_store
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
)
from kabaddi.store import DataStore, DataUnavailable

__all__ = [
    "DataStore",
    "DataUnavailable",
    "MatchFilter",
    "Table",
    "build_store",
    "get_match_events",
    "get_player_rvd",
    "get_season_matches",
    "get_standings",
    "get_team_info",
    "get_team_roster",
    "get_zones",
]

__version__ = "0.1.0"

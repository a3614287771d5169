from __future__ import annotations

from datetime import date
from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kabaddi.metrics import METRIC_KEYS, METRICS
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
    TeamRef,
    TeamSeasonStats,
    ZoneId,
    classify_event,
    format_clock,
    parse_clock,
    percent,
    round_pct,
)


@given(st.integers(0, 1200))
def test_clock_round_trip(seconds):
    assert parse_clock(format_clock(seconds)) == seconds


@pytest.mark.parametrize("token", ["", "1015", "10:60", "20:01", "ab:cd", "100:00"])
def test_bad_clock_names_token(token):
    with pytest.raises(ClockParseError, match="malformed clock token"):
        parse_clock(token)


def test_clock_examples():
    assert parse_clock("10:15") == 615
    assert parse_clock(" 00:00 ") == 0
    assert format_clock(1200) == "20:00"


@given(st.integers(0, 10_000), st.integers(1, 10_000))
def test_percent_half_up(n, d):
    # integer oracle: round(100 * n / d, 2) half-up
    scaled = 10_000 * n
    q, r = divmod(scaled, d)
    if 2 * r >= d:
        q += 1
    assert percent(n, d) == Decimal(q) / 100


def test_percent_zero_denominator():
    assert percent(3, 0) == Decimal("0.00")
    assert round_pct("2.675") == Decimal("2.68")


def _summary(s1=37, s2=21, margin=None, **kw):
    base = dict(
        season=10, match_id=3163, match_name="SF", league_stage=LeagueStage.SEMI_FINAL,
        year=2024, venue="v", start_date=date(2024, 2, 28), end_date=date(2024, 2, 28),
        team_1=TeamRef(7, "Puneri Paltan", s1), team_2=TeamRef(6, "Patna Pirates", s2),
        match_outcome="", winning_margin=abs(s1 - s2) if margin is None else margin,
        result="Result",
    )
    base.update(kw)
    return MatchSummary(**base)


def test_match_summary_invariants():
    m = _summary()
    assert m.winning_margin == 16
    assert m.as_row()["team_score_1"] == 37
    assert list(m.as_row()) == list(MatchSummary.COLUMNS)
    with pytest.raises(ValueError, match="winning_margin"):
        _summary(margin=15)
    with pytest.raises(ValueError, match="start_date"):
        _summary(start_date=date(2024, 3, 1))


def test_stage_label_preserved():
    m = _summary(league_stage=LeagueStage.OTHER, stage_label="Qualifier 2")
    assert m.as_row()["league_stage"] == "Qualifier 2"


@pytest.mark.parametrize("text,stage", [
    ("Semi Final", LeagueStage.SEMI_FINAL), ("semi-final", LeagueStage.SEMI_FINAL),
    ("League", LeagueStage.LEAGUE), ("Eliminator", LeagueStage.ELIMINATOR),
    ("Playoff round", LeagueStage.OTHER),
])
def test_league_stage_parse(text, stage):
    assert LeagueStage.parse(text) is stage


def test_classify_event():
    assert classify_event("  successful   RAID ") is EventType.SUCCESSFUL_RAID
    assert classify_event("Timeout") is EventType.TIMEOUT
    assert classify_event("Super Tackle Bonus") is EventType.OTHER
    assert classify_event("YC", {"YC": EventType.YELLOW_CARD}) is EventType.YELLOW_CARD


def _event(**kw):
    base = dict(event_no=1, event="Empty Raid", event_text=None, event_half=1, event_id=1,
                clock=600, kind=EventType.EMPTY_RAID)
    base.update(kw)
    return Event(**base)


def test_event_structural_checks():
    assert _event().as_row()["clock"] == "10:00"
    assert len(Event.COLUMNS) == 35
    for bad in (dict(event_no=0), dict(event_half=3), dict(clock=1201), dict(defenders=8),
                dict(raid_points=-1)):
        with pytest.raises(ValueError):
            _event(**bad)


def test_event_score_row_is_pair():
    e = _event(score=Score(9, 8))
    assert e.as_row()["score"] == [9, 8]
    assert Score(1, 2).add(2, 0) == Score(3, 2)


def test_standing_counts_must_sum():
    Standing("B", 5, 4, "Bengal Warriorz", 1, 22, 11, 5, 6, league_points=77)
    with pytest.raises(ValueError, match="matches_played"):
        Standing("B", 5, 4, "Bengal Warriorz", 1, 23, 11, 5, 6)


def test_skill_family_checked():
    SkillRecord(5, SkillType.RAIDER, SkillName.DUBKI, Decimal(3))
    with pytest.raises(ValueError, match="Raider|Defender"):
        SkillRecord(5, SkillType.RAIDER, SkillName.ANKLE_HOLD, Decimal(3))
    assert SkillName.parse("ankle-hold") is SkillName.ANKLE_HOLD
    assert SkillName.parse("scorpion kick") is SkillName.OTHER


def test_zone_parse():
    assert ZoneId.parse("midline center") is ZoneId.MIDLINE_CENTRE
    assert ZoneId.parse("BonusRight") is ZoneId.BONUS_RIGHT
    assert ZoneId.parse("corner") is ZoneId.OTHER


def test_team_stats_metric_keys_validated():
    metrics = {k: MetricValue(Decimal(1)) for k in METRIC_KEYS}
    TeamSeasonStats(5, 4, "Bengal Warriorz", 24, metrics)
    with pytest.raises(ValueError, match="unknown team metric"):
        TeamSeasonStats(5, 4, "x", 24, {"made-up": MetricValue(Decimal(1))})
    pct = next(k for k in METRIC_KEYS if METRICS[k].is_percent)
    with pytest.raises(ValueError, match="exceeds 100"):
        TeamSeasonStats(5, 4, "x", 24, {pct: MetricValue(Decimal(101))})


def test_metric_registry():
    assert len(METRIC_KEYS) == 19
    assert not METRICS["all-outs-conceded"].higher_is_better
    assert METRICS["super-raid"].per_match


def test_roster_and_rvd_invariants():
    with pytest.raises(ValueError, match="played_count"):
        RosterEntry(1, "x", 1, 25, 0, "t", 4, 24)
    with pytest.raises(ValueError, match="number_of_defenders"):
        RvdRow(5, 1, "x", 4, "t", 0, 1, Decimal(1), Decimal(0), Decimal(0))
    with pytest.raises(ValueError, match="percentage_of_raids"):
        RvdRow(5, 1, "x", 4, "t", 7, 1, Decimal(101), Decimal(0), Decimal(0))

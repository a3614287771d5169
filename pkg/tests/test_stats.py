from __future__ import annotations

import random
from datetime import date
from decimal import Decimal

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kabaddi.metrics import METRIC_KEYS
from kabaddi.model import LeagueStage, MatchSummary, MetricValue, TeamRef, TeamSeasonStats
from kabaddi.stats import (
    MixedRaidStreamError,
    RaidSample,
    StandingsPolicy,
    Tiebreak,
    UnknownTeamError,
    competition_ranks,
    compute_point_progression,
    compute_standings,
    compute_team_metrics,
    derive_player_match_flags,
    derive_rvd,
    rank_metrics,
)
from kabaddi.synthetic import MatchBuilder, random_match

from oracles import brute_force_standings, random_season


def match(mid, a, sa, b, sb, result=None):
    day = date(2024, 1, mid)
    return MatchSummary(
        1, mid, f"M{mid}", LeagueStage.LEAGUE, 2024, "", day, day,
        TeamRef(a, f"T{a}", sa), TeamRef(b, f"T{b}", sb),
        "", abs(sa - sb), result or ("Tie" if sa == sb else "Result"),
    )


def order(table):
    return [s.team_id for s in table]


def test_head_to_head_decides_level_teams():
    # teams 1 and 2 finish level on points, difference and score; 2 beat 1
    matches = [
        match(1, 2, 30, 1, 25),
        match(2, 1, 30, 3, 25),
        match(3, 2, 25, 4, 30),
    ]
    groups = dict.fromkeys((1, 2, 3, 4), "A")
    table = compute_standings(matches, groups)
    assert order(table) == [2, 1, 4, 3]
    t1, t2 = (next(s for s in table if s.team_id == t) for t in (1, 2))
    assert (t1.league_points, t1.score_diff) == (t2.league_points, t2.score_diff) == (6, 0)
    without_h2h = StandingsPolicy(tiebreak_order=(Tiebreak.LEAGUE_POINTS, Tiebreak.SCORE_DIFF))
    assert order(compute_standings(matches, groups, without_h2h)) == [1, 2, 4, 3]


def test_points_policy():
    p = StandingsPolicy()
    assert [p.match_points(30, 20), p.match_points(20, 20), p.match_points(20, 27),
            p.match_points(20, 28)] == [5, 3, 1, 0]
    with pytest.raises(ValueError):
        StandingsPolicy(points_win=1, points_tie=3)


def test_no_result_counts_played_only():
    table = compute_standings([match(1, 1, 0, 2, 0, "No Result")], {1: "A", 2: "A"})
    for s in table:
        assert (s.matches_played, s.no_result, s.league_points, s.score_diff) == (1, 1, 0, 0)


def test_unknown_team_in_match():
    with pytest.raises(UnknownTeamError):
        compute_standings([match(1, 1, 30, 9, 20)], {1: "A"})


def test_groups_and_qualification():
    matches = [match(i + 1, a, 30 + i, b, 20) for i, (a, b) in enumerate([(1, 2), (3, 4)])]
    table = compute_standings(matches, {1: "A", 2: "A", 3: "B", 4: "B"},
                              StandingsPolicy(qualifiers_per_group=1))
    assert [(s.group, s.league_position, s.qualified) for s in table] == \
        [("A", 1, True), ("A", 2, False), ("B", 1, True), ("B", 2, False)]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_standings_invariants(seed):
    matches, groups = random_season(random.Random(seed))
    table = compute_standings(matches, groups)
    assert sorted(order(table)) == sorted(groups)
    for g in set(groups.values()):
        positions = [s.league_position for s in table if s.group == g]
        assert positions == list(range(1, len(positions) + 1))
    assert sum(s.score_diff for s in table) == 0
    assert sum(s.wins for s in table) == sum(s.lost for s in table)
    rows = [(s.group, s.team_id, s.wins, s.lost, s.tied, s.league_points, s.score_diff,
             s.league_position) for s in table]
    assert rows == brute_force_standings(matches, groups, StandingsPolicy())


@pytest.mark.parametrize("values,higher,ranks", [
    ([10, 20, 20, 5], True, [3, 1, 1, 4]),
    ([10, 20, 20, 5], False, [2, 3, 3, 1]),
    ([7, 7, 7], True, [1, 1, 1]),
    ([], True, []),
])
def test_competition_ranks(values, higher, ranks):
    assert competition_ranks(values, higher) == ranks


@given(st.lists(st.integers(-50, 50), max_size=20))
def test_competition_ranks_property(values):
    ranks = competition_ranks(values)
    for v, r in zip(values, ranks):
        assert r == 1 + len([o for o in values if o > v])
    if values:
        assert min(ranks) == 1


def test_rank_metrics_lower_is_better():
    def team(tid, conceded):
        metrics = {k: MetricValue(Decimal(1)) for k in METRIC_KEYS}
        metrics["all-outs-conceded"] = MetricValue(Decimal(conceded))
        return TeamSeasonStats(1, tid, f"T{tid}", 2, metrics)

    ranked = rank_metrics([team(1, 4), team(2, 1), team(3, 4)])
    assert [t.metrics["all-outs-conceded"].rank for t in ranked] == [2, 1, 2]
    assert all(t.metrics["total-points"].rank == 1 for t in ranked)


def test_progression_matches_recorded_scores():
    detail = random_match(random.Random(5))
    series = compute_point_progression(detail)
    assert len(series) == len(detail.events)
    for (_, a, b), e in zip(series.points, detail.events):
        if e.score is not None:
            assert (a, b) == (e.score.team_1_total, e.score.team_2_total)
    last = series.points[-1]
    assert (last[1], last[2]) == (detail.summary.team_1.score, detail.summary.team_2.score)


def test_progression_single_event():
    b = MatchBuilder(1, (1, "A"), (2, "B"))
    b.raid(1, 101, touch=1)
    assert compute_point_progression(b.detail()).points == ((1, 1, 0),)


def test_team_metrics_scripted():
    b = MatchBuilder(1, (1, "A"), (2, "B"))
    b.raid(1, 101, touch=3)  # super raid
    b.raid(2, 201, tackled=True, defender_id=102)
    b.raid(1, 101)
    b.raid(2, 202, bonus=1)
    b.card(2, 203)
    stats = compute_team_metrics([b.detail()], 1)
    v = {k: stats.metrics[k].value for k in METRIC_KEYS}
    assert v["raid-points"] == 3
    assert v["super-raid"] == 1
    assert v["successful-raid-percent"] == Decimal("50.00")
    assert v["successful-tackles"] == 1
    # one tackle from two non-empty raids faced; the empty raid is not an attempt
    assert v["successful-tackle-percent"] == Decimal("50.00")
    assert v["tackle-points"] == 1
    assert v["total-points"] == 5  # 3 raid + 1 tackle + 1 technical
    assert v["total-points-conceded"] == 1
    assert stats.matches_played == 1
    with pytest.raises(ValueError):
        compute_team_metrics([b.detail()], 9)


def test_team_metric_totals_match_score():
    details = [random_match(random.Random(s), match_id=s + 1) for s in range(4)]
    stats = compute_team_metrics(details, 1)
    assert stats.metrics["total-points"].value == sum(d.summary.team_1.score for d in details)
    assert stats.metrics["total-points-conceded"].value == sum(d.summary.team_2.score for d in details)


def test_player_flags():
    b = MatchBuilder(1, (1, "A"), (2, "B"))
    for _ in range(5):
        b.raid(1, 101, touch=2)
        b.raid(2, 201)
    flags = derive_player_match_flags(b.events())
    assert flags[101].raid_points_total == 10 and flags[101].super_ten


def test_derive_rvd():
    b = MatchBuilder(1, (1, "A"), (2, "B"))
    b.raid(1, 101, touch=1)   # vs 7
    b.raid(2, 201)
    b.raid(1, 101)            # vs 6, empty
    b.raid(2, 202)
    b.raid(1, 101, touch=1)   # vs 6
    raids = [RaidSample(5, 101, e) for e in b.events() if e.raider_id == 101]
    rows = derive_rvd(raids)
    assert [(r.number_of_defenders, r.total_raids) for r in rows] == [(6, 2), (7, 1)]
    assert [r.percentage_of_raids for r in rows] == [Decimal("66.67"), Decimal("33.33")]
    assert rows[0].empty_raids_percentage == Decimal("50.00")
    assert rows[1].successful_raids_percentage == Decimal("100.00")
    assert derive_rvd([]) == []
    with pytest.raises(MixedRaidStreamError):
        derive_rvd(raids + [RaidSample(6, 101, raids[0].event)])

"""Derived statistics: standings, point progression, raider-vs-defenders
tables, per-player match milestones, and team season metrics."""

from __future__ import annotations

import functools
import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from decimal import Decimal
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from kabaddi.metrics import METRIC_KEYS, METRICS
from kabaddi.model import (
    Event,
    EventType,
    MatchDetail,
    MatchSummary,
    MetricValue,
    RvdRow,
    Standing,
    TeamSeasonStats,
    percent,
    round_pct,
)
from kabaddi.rules import HIGH_FIVE_POINTS, SUPER_TEN_POINTS, player_raid_points, reconstruct_score

log = logging.getLogger(__name__)


class Tiebreak(Enum):
    LEAGUE_POINTS = "LeaguePoints"
    SCORE_DIFF = "ScoreDiff"
    TOTAL_SCORE = "TotalScore"
    HEAD_TO_HEAD = "HeadToHead"


@dataclass(frozen=True, slots=True)
class StandingsPolicy:
    points_win: int = 5
    points_tie: int = 3
    points_loss: int = 0
    narrow_loss_margin: int = 7
    narrow_loss_points: int = 1
    qualifiers_per_group: int = 6
    tiebreak_order: tuple[Tiebreak, ...] = (
        Tiebreak.LEAGUE_POINTS,
        Tiebreak.SCORE_DIFF,
        Tiebreak.TOTAL_SCORE,
        Tiebreak.HEAD_TO_HEAD,
    )

    def __post_init__(self):
        if not self.points_win >= self.points_tie >= self.points_loss >= 0:
            raise ValueError("policy needs points_win >= points_tie >= points_loss >= 0")

    def match_points(self, scored: int, conceded: int) -> int:
        if scored > conceded:
            return self.points_win
        if scored == conceded:
            return self.points_tie
        bonus = self.narrow_loss_points if conceded - scored <= self.narrow_loss_margin else 0
        return self.points_loss + bonus


class UnknownTeamError(KeyError):
    pass


def _is_no_result(match: MatchSummary) -> bool:
    return match.result.strip().lower() in ("no result", "nr", "abandoned")


@dataclass
class _Tally:
    team_id: int
    team_name: str
    played: int = 0
    wins: int = 0
    lost: int = 0
    tied: int = 0
    no_result: int = 0
    points: int = 0
    scored: int = 0
    conceded: int = 0


def compute_standings(
    matches: Iterable[MatchSummary],
    groups: Mapping[int, str],
    policy: StandingsPolicy = StandingsPolicy(),
    team_names: Optional[Mapping[int, str]] = None,
    season: Optional[int] = None,
) -> list[Standing]:
    """Standings table for every team in ``groups``.

    No-result matches count as played and award neither league points nor
    score difference.
    """
    matches = list(matches)
    names = dict(team_names or {})
    for m in matches:
        for ref in (m.team_1, m.team_2):
            names.setdefault(ref.team_id, ref.team_name)
    if season is None:
        season = matches[0].season if matches else 0
    tallies = {tid: _Tally(tid, names.get(tid, str(tid))) for tid in groups}
    for m in matches:
        for ref in (m.team_1, m.team_2):
            if ref.team_id not in tallies:
                raise UnknownTeamError(f"match {m.match_id}: team {ref.team_id} has no group")
        for me, opp in ((m.team_1, m.team_2), (m.team_2, m.team_1)):
            t = tallies[me.team_id]
            t.played += 1
            if _is_no_result(m):
                t.no_result += 1
                continue
            t.scored += me.score
            t.conceded += opp.score
            t.points += policy.match_points(me.score, opp.score)
            if me.score > opp.score:
                t.wins += 1
            elif me.score < opp.score:
                t.lost += 1
            else:
                t.tied += 1

    out = []
    for group in sorted(set(groups.values())):
        members = [tallies[tid] for tid in sorted(groups) if groups[tid] == group]
        ordered = _order_group(members, matches, policy)
        for pos, t in enumerate(ordered, start=1):
            out.append(Standing(
                group=group,
                season=season,
                team_id=t.team_id,
                team_name=t.team_name,
                league_position=pos,
                matches_played=t.played,
                wins=t.wins,
                lost=t.lost,
                tied=t.tied,
                draws=0,
                no_result=t.no_result,
                league_points=t.points,
                score_diff=t.scored - t.conceded,
                qualified=pos <= policy.qualifiers_per_group,
            ))
    return out


def _order_group(members: list[_Tally], matches: list[MatchSummary], policy: StandingsPolicy):
    """Sort by the policy's tiebreak chain, falling back to team_id.

    Head-to-head compares league points earned only in matches among the
    teams still level at that point of the chain.
    """

    def plain_key(t: _Tally, rule: Tiebreak) -> int:
        if rule is Tiebreak.LEAGUE_POINTS:
            return t.points
        if rule is Tiebreak.SCORE_DIFF:
            return t.scored - t.conceded
        return t.scored

    def split(block: list[_Tally], rules: tuple[Tiebreak, ...]) -> list[_Tally]:
        if len(block) <= 1 or not rules:
            return sorted(block, key=lambda t: t.team_id)
        rule, rest = rules[0], rules[1:]
        if rule is Tiebreak.HEAD_TO_HEAD:
            ids = {t.team_id for t in block}
            keys = _mini_league_points(ids, matches, policy)
            key = lambda t: keys[t.team_id]  # noqa: E731
        else:
            key = functools.partial(plain_key, rule=rule)
        ordered = []
        for value in sorted({key(t) for t in block}, reverse=True):
            ordered.extend(split([t for t in block if key(t) == value], rest))
        return ordered

    return split(members, policy.tiebreak_order)


def _mini_league_points(ids: set[int], matches: list[MatchSummary], policy: StandingsPolicy):
    points = dict.fromkeys(ids, 0)
    for m in matches:
        a, b = m.team_1, m.team_2
        if a.team_id in ids and b.team_id in ids and not _is_no_result(m):
            points[a.team_id] += policy.match_points(a.score, b.score)
            points[b.team_id] += policy.match_points(b.score, a.score)
    return points


@dataclass(frozen=True, slots=True)
class ProgressionSeries:
    match_id: int
    points: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for (_, a1, b1), (_, a2, b2) in zip(self.points, self.points[1:]):
            if a2 < a1 or b2 < b1:
                raise ValueError(f"match {self.match_id}: progression totals decrease")

    def __len__(self) -> int:
        return len(self.points)


def compute_point_progression(detail: MatchDetail) -> ProgressionSeries:
    scores = reconstruct_score(detail.events, teams=detail.summary.team_ids)
    return ProgressionSeries(
        match_id=detail.match_id,
        points=tuple(
            (e.event_no, s.team_1_total, s.team_2_total) for e, s in zip(detail.events, scores)
        ),
    )


class MixedRaidStreamError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class RaidSample:
    """One raid attributed to a (player, season), as derive_rvd consumes it."""

    season: int
    player_id: int
    event: Event


def derive_rvd(
    raids: Sequence[RaidSample],
    raider_name: str = "",
    team_id: int = 0,
    team_name: str = "",
) -> list[RvdRow]:
    """Bucket a raider's season by defenders on the mat.

    Raids against zero defenders cannot happen in a legal raid and are
    skipped. Rows are ordered by ``number_of_defenders``.
    """
    keys = {(r.player_id, r.season) for r in raids}
    if len(keys) > 1:
        raise MixedRaidStreamError(f"raids span several (player, season) pairs: {sorted(keys)}")
    if not keys:
        return []
    player_id, season = keys.pop()
    buckets: dict[int, list[Event]] = defaultdict(list)
    for r in raids:
        if not r.event.is_raid:
            raise MixedRaidStreamError(f"event {r.event.event_no} is not a raid")
        if r.event.defenders >= 1:
            buckets[r.event.defenders].append(r.event)
    total = sum(len(v) for v in buckets.values())
    rows = []
    for defenders in sorted(buckets):
        bucket = buckets[defenders]
        n = len(bucket)
        rows.append(RvdRow(
            season=season,
            player_id=player_id,
            raider_name=raider_name,
            team_id=team_id,
            team_name=team_name,
            number_of_defenders=defenders,
            total_raids=n,
            percentage_of_raids=percent(n, total),
            empty_raids_percentage=percent(
                sum(e.kind is EventType.EMPTY_RAID for e in bucket), n),
            successful_raids_percentage=percent(
                sum(e.kind is EventType.SUCCESSFUL_RAID for e in bucket), n),
        ))
    return rows


@dataclass(frozen=True, slots=True)
class PlayerMatchFlags:
    raid_points_total: int = 0
    tackle_points_total: int = 0
    super_ten: bool = False
    high_five: bool = False


def derive_player_match_flags(events: Iterable[Event]) -> dict[int, PlayerMatchFlags]:
    raid: dict[int, int] = defaultdict(int)
    tackle: dict[int, int] = defaultdict(int)
    for e in events:
        if not e.is_raid:
            continue
        if e.raider_id is not None:
            raid[e.raider_id] += player_raid_points(e)
        if e.defender_id is not None:
            tackle[e.defender_id] += e.defending_capture_points
    out = {}
    for pid in sorted(set(raid) | set(tackle)):
        r, t = raid.get(pid, 0), tackle.get(pid, 0)
        out[pid] = PlayerMatchFlags(r, t, r >= SUPER_TEN_POINTS, t >= HIGH_FIVE_POINTS)
    return out


@dataclass
class _TeamCounts:
    raids: int = 0
    successful_raids: int = 0
    super_raids: int = 0
    dod_raid_points: int = 0
    touch: int = 0
    bonus: int = 0
    raid_points: int = 0
    tackle_attempts: int = 0
    successful_tackles: int = 0
    tackle_points: int = 0
    super_tackles: int = 0
    scored: int = 0
    conceded: int = 0
    all_outs_inflicted: int = 0
    all_outs_conceded: int = 0
    warnings: list = field(default_factory=list)


def compute_team_metrics(
    matches: Sequence[MatchDetail],
    team_id: int,
    team_name: Optional[str] = None,
    season: Optional[int] = None,
) -> TeamSeasonStats:
    """Season metric values and per-match figures for one team. Ranks are
    left unset; ``rank_metrics`` fills them across a season."""
    c = _TeamCounts()
    for detail in matches:
        s = detail.summary
        if team_id not in s.team_ids:
            raise ValueError(f"match {s.match_id} does not involve team {team_id}")
        if team_name is None:
            team_name = s.team_1.team_name if s.team_1.team_id == team_id else s.team_2.team_name
        if season is None:
            season = s.season
        for e in detail.events:
            _count_event(c, e, team_id)

    played = len(matches)
    if c.raids == 0:
        log.warning("team %s: no raids; successful-raid-percent set to 0", team_id)
    if c.tackle_attempts == 0:
        log.warning("team %s: no tackle attempts; successful-tackle-percent set to 0", team_id)
    values = {
        "all-outs-conceded": c.all_outs_conceded,
        "successful-tackle-percent": percent(c.successful_tackles, c.tackle_attempts),
        "super-raid": c.super_raids,
        "successful-raid-percent": percent(c.successful_raids, c.raids),
        "dod-raid-points": c.dod_raid_points,
        "super-tackles": c.super_tackles,
        "total-touch-points": c.touch,
        "total-bonus-points": c.bonus,
        "raid-points": c.raid_points,
        "successful-raids": c.successful_raids,
        "total-points-conceded": c.conceded,
        "tackle-points": c.tackle_points,
        "total-points": c.scored,
        "successful-tackles": c.successful_tackles,
        "successful-tackles-per-match": _ratio(c.successful_tackles, played),
        "all-outs-inflicted": c.all_outs_inflicted,
        "average-raid-points": _ratio(c.raid_points, played),
        "avg-points-scored": _ratio(c.scored, played),
        "average-tackle-points": _ratio(c.tackle_points, played),
    }
    metrics = {}
    for key in METRIC_KEYS:
        value = Decimal(values[key])
        per_match = _ratio(value, played) if METRICS[key].per_match else None
        metrics[key] = MetricValue(value=value, per_match=per_match)
    return TeamSeasonStats(
        season=season or 0,
        team_id=team_id,
        team_name=team_name or "",
        matches_played=played,
        metrics=metrics,
    )


def _ratio(value, played: int) -> Decimal:
    if played == 0:
        return round_pct(0)
    return round_pct(Decimal(value) / played)


def _count_event(c: _TeamCounts, e: Event, team_id: int) -> None:
    attacking = e.raiding_team_id == team_id
    defending = e.defending_team_id == team_id
    if attacking:
        c.scored += e.raid_points
        c.conceded += e.defending_points
        if e.raid_all_out_points:
            c.all_outs_inflicted += 1
        if e.defending_all_out_points:
            c.all_outs_conceded += 1
    elif defending:
        c.scored += e.defending_points
        c.conceded += e.raid_points
        if e.defending_all_out_points:
            c.all_outs_inflicted += 1
        if e.raid_all_out_points:
            c.all_outs_conceded += 1
    if not e.is_raid:
        return
    if attacking:
        c.raids += 1
        c.successful_raids += e.kind is EventType.SUCCESSFUL_RAID
        c.super_raids += e.super_raid
        c.touch += e.raid_touch_points
        c.bonus += e.raid_bonus_points
        c.raid_points += e.raid_points
        if e.do_or_die:
            c.dod_raid_points += e.raid_points
    elif defending:
        if e.kind is not EventType.EMPTY_RAID:
            c.tackle_attempts += 1
        if e.kind is EventType.UNSUCCESSFUL_RAID and e.defending_capture_points > 0:
            c.successful_tackles += 1
        c.tackle_points += e.defending_capture_points
        c.super_tackles += e.super_tackle


def competition_ranks(values: Sequence, higher_is_better: bool = True) -> list[int]:
    """1 + number of strictly better values ("1224" ranking)."""
    if higher_is_better:
        return [1 + sum(other > v for other in values) for v in values]
    return [1 + sum(other < v for other in values) for v in values]


def rank_metrics(all_teams: Sequence[TeamSeasonStats]) -> list[TeamSeasonStats]:
    ranked = {}
    for key in METRIC_KEYS:
        present = [t for t in all_teams if key in t.metrics]
        ranks = competition_ranks(
            [t.metrics[key].value for t in present], METRICS[key].higher_is_better
        )
        for t, r in zip(present, ranks):
            ranked[(t.team_id, key)] = r
    out = []
    for t in all_teams:
        metrics = {
            key: replace(mv, rank=ranked[(t.team_id, key)]) for key, mv in t.metrics.items()
        }
        out.append(replace(t, metrics=metrics))
    return out

"""Independent reference implementations used as test oracles.

These deliberately avoid the package's own helpers: tallies walk the match
list once per team, and ordering uses a closed-form key instead of the
recursive tiebreak partition.
"""

from __future__ import annotations

import random
from datetime import date, timedelta

from kabaddi.model import LeagueStage, MatchSummary, TeamRef


def _points(policy, mine: int, theirs: int) -> int:
    if mine > theirs:
        return policy.points_win
    if mine == theirs:
        return policy.points_tie
    if theirs - mine <= policy.narrow_loss_margin:
        return policy.points_loss + policy.narrow_loss_points
    return policy.points_loss


def _no_result(m: MatchSummary) -> bool:
    return m.result.strip().lower() in ("no result", "nr", "abandoned")


def brute_force_standings(matches, groups, policy):
    """Rows of (group, team, W, L, T, points, diff, position)."""
    tally = {}
    for team in groups:
        w = l = t = pts = scored = conceded = 0
        for m in matches:
            if _no_result(m):
                continue
            if m.team_1.team_id == team:
                mine, theirs = m.team_1.score, m.team_2.score
            elif m.team_2.team_id == team:
                mine, theirs = m.team_2.score, m.team_1.score
            else:
                continue
            w += mine > theirs
            l += mine < theirs
            t += mine == theirs
            pts += _points(policy, mine, theirs)
            scored += mine
            conceded += theirs
        tally[team] = (w, l, t, pts, scored - conceded, scored)

    def h2h(team, tied):
        total = 0
        for m in matches:
            ids = {m.team_1.team_id, m.team_2.team_id}
            if team in ids and ids <= tied and len(ids) == 2 and not _no_result(m):
                if m.team_1.team_id == team:
                    total += _points(policy, m.team_1.score, m.team_2.score)
                else:
                    total += _points(policy, m.team_2.score, m.team_1.score)
        return total

    rows = []
    for group in sorted(set(groups.values())):
        members = [t for t in groups if groups[t] == group]

        def key(team):
            w, l, t, pts, diff, scored = tally[team]
            tied = {o for o in members if tally[o][3:] == tally[team][3:]}
            return (-pts, -diff, -scored, -h2h(team, tied), team)

        for pos, team in enumerate(sorted(members, key=key), start=1):
            w, l, t, pts, diff, _ = tally[team]
            rows.append((group, team, w, l, t, pts, diff, pos))
    return rows


def random_season(rng: random.Random, max_teams: int = 8, season: int = 1):
    """Random matches and a group assignment for 2..max_teams teams.

    Scores come from a narrow range so that level points, level score
    difference and head-to-head deciders all occur regularly.
    """
    n = rng.randint(2, max_teams)
    teams = list(range(1, n + 1))
    n_groups = 1 if n < 4 else rng.choice((1, 2))
    groups = {t: "AB"[i % n_groups] for i, t in enumerate(rng.sample(teams, n))}
    lo, hi = rng.choice(((20, 30), (20, 23), (20, 21)))
    matches = []
    mid = 0
    day = date(2024, 1, 1)
    for legs in range(rng.randint(1, 2)):
        for i, a in enumerate(teams):
            for b in teams[i + 1:]:
                if rng.random() < 0.2:
                    continue
                mid += 1
                s1, s2 = rng.randint(lo, hi), rng.randint(lo, hi)
                result = "Result"
                if rng.random() < 0.03:
                    result = "No Result"
                outcome = "Match Tied" if s1 == s2 else "won"
                matches.append(MatchSummary(
                    season, mid, f"Match {mid}", LeagueStage.LEAGUE, 2024, "",
                    day + timedelta(days=mid), day + timedelta(days=mid),
                    TeamRef(a, f"T{a}", s1), TeamRef(b, f"T{b}", s2),
                    outcome, abs(s1 - s2), result,
                ))
    return matches, groups

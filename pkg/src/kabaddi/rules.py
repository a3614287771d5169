"""Law engine: checks event streams against the scoring rules of kabaddi and
rebuilds running scores independently of the recorded ``score`` column."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from kabaddi.model import Event, EventType, MatchDetail, Score
from kabaddi.violations import RULES, Violation

# A defence with this many players or fewer on the mat is shorthanded.
SUPER_TACKLE_MAX_DEFENDERS = 3
BONUS_MIN_DEFENDERS = 6
EMPTY_RAIDS_BEFORE_DO_OR_DIE = 2
ALL_OUT_POINTS = 2
CARD_TECHNICAL_POINTS = 1
RAID_SECONDS = 30
SUPER_RAID_POINTS = 3
SUPER_TEN_POINTS = 10
HIGH_FIVE_POINTS = 5

EVENT_RULES = (
    "E-POINT-SUM",
    "E-DOD-FLAG",
    "E-DOD-PENALTY",
    "E-ALLOUT-TWO",
    "E-CARD-TECH",
    "E-BONUS-SIX",
    "E-SUPERTACKLE",
    "E-EMPTY-POINTS",
    "W-DEF-BONUS",
    "W-SUPER-RAID",
)
MATCH_RULES = (
    "E-TEAM-REF",
    "E-SCORE-TRACK",
    "E-CLOCK-ORDER",
    "E-EVENTNO-ORDER",
    "E-FINAL-SCORE",
    "W-RAID-30S",
    "W-SUPER-TEN",
    "W-HIGH-FIVE",
)


class UnknownTeamError(ValueError):
    def __init__(self, event_no: int, team_id):
        super().__init__(f"event {event_no}: team id {team_id} is not one of the match's teams")
        self.event_no = event_no
        self.team_id = team_id


@dataclass(frozen=True, slots=True)
class RaidContext:
    raiding_team_id: Optional[int]
    consecutive_empty_raids_before: int = 0
    defenders_on_mat: int = 7

    def __post_init__(self):
        if self.consecutive_empty_raids_before < 0:
            raise ValueError("consecutive_empty_raids_before must be non-negative")
        if not 0 <= self.defenders_on_mat <= 7:
            raise ValueError("defenders_on_mat outside [0, 7]")

    @property
    def is_do_or_die(self) -> bool:
        return self.consecutive_empty_raids_before == EMPTY_RAIDS_BEFORE_DO_OR_DIE


@dataclass(frozen=True, slots=True)
class ValidationReport:
    match_id: int
    violations: tuple[Violation, ...]
    checked_rules: tuple[str, ...]
    events_checked: int

    @property
    def errors(self) -> list[Violation]:
        return [v for v in self.violations if v.is_error]

    @property
    def warnings(self) -> list[Violation]:
        return [v for v in self.violations if not v.is_error]

    @property
    def ok(self) -> bool:
        return not self.errors


def _credit(event: Event, team_1_id: int, team_2_id: int) -> tuple[int, int]:
    """Points this event adds to (team_1, team_2)."""
    gained = {team_1_id: 0, team_2_id: 0}
    for team_id, points in (
        (event.raiding_team_id, event.raid_points),
        (event.defending_team_id, event.defending_points),
    ):
        if points == 0 and team_id is None:
            continue
        if team_id not in gained:
            raise UnknownTeamError(event.event_no, team_id)
        gained[team_id] += points
    return gained[team_1_id], gained[team_2_id]


def reconstruct_score(
    events: Sequence[Event],
    initial: Score = Score(0, 0),
    teams: Optional[tuple[int, int]] = None,
) -> list[Score]:
    """Running score after each event, from point columns alone.

    ``teams`` is ``(team_1_id, team_2_id)``; when omitted it is inferred from
    the first event that names both sides, which only works if the caller
    already knows the first raiding team is team 1. Pass it explicitly.
    """
    if teams is None:
        teams = _infer_teams(events)
    scores = []
    current = initial
    for event in events:
        if event.kind in (EventType.SUBSTITUTION, EventType.TIMEOUT):
            scores.append(current)
            continue
        t1, t2 = _credit(event, *teams)
        current = current.add(t1, t2)
        scores.append(current)
    return scores


def _infer_teams(events: Sequence[Event]) -> tuple[int, int]:
    for event in events:
        if event.raiding_team_id is not None and event.defending_team_id is not None:
            return (event.raiding_team_id, event.defending_team_id)
    return (-1, -2)


def check_event(event: Event, ctx: RaidContext, match_id: int = 0) -> list[Violation]:
    """Apply the per-event laws. Never raises; findings are returned."""
    found = []

    def flag(rule_id: str, message: str) -> None:
        found.append(Violation((match_id, event.event_no), rule_id, message))

    if event.raid_points != event.raid_component_sum():
        flag("E-POINT-SUM", f"raid_points {event.raid_points} != components {event.raid_component_sum()}")
    if event.defending_points != event.defending_component_sum():
        flag(
            "E-POINT-SUM",
            f"defending_points {event.defending_points} != components {event.defending_component_sum()}",
        )

    for name in ("raid_all_out_points", "defending_all_out_points"):
        value = getattr(event, name)
        if value and value != ALL_OUT_POINTS:
            flag("E-ALLOUT-TWO", f"{name} is {value}, an all-out concedes exactly {ALL_OUT_POINTS}")

    if event.kind in (EventType.YELLOW_CARD, EventType.RED_CARD):
        awarded = _card_technical_award(event)
        if awarded != CARD_TECHNICAL_POINTS:
            flag(
                "E-CARD-TECH",
                f"{event.kind.value} awarded {awarded} technical point(s) to the opponent, expected 1",
            )

    if event.defending_bonus_points:
        flag("W-DEF-BONUS", f"defending_bonus_points is {event.defending_bonus_points}")

    if not event.is_raid:
        return found

    if event.do_or_die != ctx.is_do_or_die:
        flag(
            "E-DOD-FLAG",
            f"do_or_die={event.do_or_die} after {ctx.consecutive_empty_raids_before} "
            "consecutive empty raid(s)",
        )
    if event.do_or_die and event.raid_points == 0 and event.defending_points == 0:
        flag("E-DOD-PENALTY", "scoreless do-or-die raid conceded no point")
    if event.raid_bonus_points > 0 and ctx.defenders_on_mat < BONUS_MIN_DEFENDERS:
        flag(
            "E-BONUS-SIX",
            f"bonus point with {ctx.defenders_on_mat} defenders (needs {BONUS_MIN_DEFENDERS}+)",
        )
    if event.super_tackle and ctx.defenders_on_mat > SUPER_TACKLE_MAX_DEFENDERS:
        flag(
            "E-SUPERTACKLE",
            f"super tackle with {ctx.defenders_on_mat} defenders "
            f"(max {SUPER_TACKLE_MAX_DEFENDERS})",
        )
    if event.kind is EventType.EMPTY_RAID and (event.raid_points or event.defending_points or
                                                event.raid_component_sum() or
                                                event.defending_component_sum()):
        flag("E-EMPTY-POINTS", "empty raid with nonzero points")
    if event.super_raid != (event.raid_points >= SUPER_RAID_POINTS):
        flag("W-SUPER-RAID", f"super_raid={event.super_raid} with {event.raid_points} raid points")
    return found


def _card_technical_award(event: Event) -> int:
    # team_id names the carded side; the technical point goes to the other side.
    if event.team_id is not None and event.team_id == event.raiding_team_id:
        return event.defending_technical_points
    if event.team_id is not None and event.team_id == event.defending_team_id:
        return event.raid_technical_points
    return event.raid_technical_points + event.defending_technical_points


def raid_contexts(events: Iterable[Event]) -> dict[int, RaidContext]:
    """Context for every raid, keyed by event_no.

    Each team's empty-raid streak grows with empty raids and resets after any
    other raid, and after the do-or-die raid itself whatever its outcome.
    """
    streak: dict[Optional[int], int] = {}
    contexts = {}
    for event in events:
        if not event.is_raid:
            continue
        team = event.raiding_team_id
        before = streak.get(team, 0)
        ctx = RaidContext(team, before, event.defenders)
        contexts[event.event_no] = ctx
        if ctx.is_do_or_die:
            streak[team] = 0
        elif event.kind is EventType.EMPTY_RAID:
            streak[team] = before + 1
        else:
            streak[team] = 0
    return contexts


def validate_match(detail: MatchDetail) -> ValidationReport:
    summary = detail.summary
    events = detail.events
    match_id = summary.match_id
    teams = summary.team_ids
    found: list[Violation] = []

    def flag(event_no: int, rule_id: str, message: str) -> None:
        found.append(Violation((match_id, event_no), rule_id, message))

    prev_no = 0
    prev_half = 1
    prev_clock: Optional[int] = None
    for event in events:
        if event.event_no <= prev_no:
            flag(event.event_no, "E-EVENTNO-ORDER", f"event_no {event.event_no} follows {prev_no}")
        prev_no = max(prev_no, event.event_no)
        if event.event_half < prev_half:
            flag(event.event_no, "E-CLOCK-ORDER", f"half {event.event_half} after half {prev_half}")
        elif event.event_half > prev_half:
            prev_half = event.event_half
            prev_clock = None
        if event.clock is not None:
            if prev_clock is not None and event.event_half == prev_half:
                if event.clock > prev_clock:
                    flag(event.event_no, "E-CLOCK-ORDER",
                         f"clock {event.clock}s rises from {prev_clock}s within half {prev_half}")
                elif event.is_raid and prev_clock - event.clock > RAID_SECONDS:
                    flag(event.event_no, "W-RAID-30S",
                         f"{prev_clock - event.clock}s elapsed since previous event")
            prev_clock = event.clock if prev_clock is None else min(prev_clock, event.clock)

    # score reconstruction, event by event so one bad team id doesn't hide the rest
    current = Score(0, 0)
    for event in events:
        if event.kind not in (EventType.SUBSTITUTION, EventType.TIMEOUT):
            try:
                t1, t2 = _credit(event, *teams)
            except UnknownTeamError as exc:
                flag(event.event_no, "E-TEAM-REF", str(exc))
                t1 = t2 = 0
            current = current.add(t1, t2)
        if event.score is not None and event.score != current:
            flag(event.event_no, "E-SCORE-TRACK",
                 f"recorded {event.score.as_list()} but reconstructed {current.as_list()}")
    final = Score(summary.team_1.score, summary.team_2.score)
    if current != final:
        found.append(Violation(
            (match_id, events[-1].event_no if events else 0), "E-FINAL-SCORE",
            f"reconstructed final {current.as_list()} != summary {final.as_list()}",
        ))

    contexts = raid_contexts(events)
    for event in events:
        ctx = contexts.get(event.event_no) or RaidContext(event.raiding_team_id, 0, event.defenders)
        found.extend(check_event(event, ctx, match_id))

    found.extend(_milestone_warnings(match_id, events))
    found.sort(key=lambda v: v.source[1] if isinstance(v.source, tuple) else 0)
    return ValidationReport(
        match_id=match_id,
        violations=tuple(found),
        checked_rules=EVENT_RULES + MATCH_RULES,
        events_checked=len(events),
    )


def player_raid_points(event: Event) -> int:
    """Raid points credited to the raider personally (all-out and technical
    points belong to the team)."""
    return event.raid_touch_points + event.raid_bonus_points


def _milestone_warnings(match_id: int, events: Sequence[Event]) -> list[Violation]:
    """super_ten/high_five flags should sit on the event where the milestone is reached."""
    out = []
    raid_totals: dict[int, int] = {}
    tackle_totals: dict[int, int] = {}
    for event in events:
        expect_ten = False
        if event.raider_id is not None and event.is_raid:
            before = raid_totals.get(event.raider_id, 0)
            after = before + player_raid_points(event)
            raid_totals[event.raider_id] = after
            expect_ten = before < SUPER_TEN_POINTS <= after
        if event.super_ten != expect_ten:
            out.append(Violation((match_id, event.event_no), "W-SUPER-TEN",
                                 f"super_ten={event.super_ten}, expected {expect_ten}"))
        expect_five = False
        if event.defender_id is not None and event.is_raid:
            before = tackle_totals.get(event.defender_id, 0)
            after = before + event.defending_capture_points
            tackle_totals[event.defender_id] = after
            expect_five = before < HIGH_FIVE_POINTS <= after
        if event.high_five != expect_five:
            out.append(Violation((match_id, event.event_no), "W-HIGH-FIVE",
                                 f"high_five={event.high_five}, expected {expect_five}"))
    return out


assert all(code in RULES for code in EVENT_RULES + MATCH_RULES)

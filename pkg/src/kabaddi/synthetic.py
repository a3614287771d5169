"""Rule-consistent synthetic matches.

``MatchBuilder`` turns a script of raid outcomes into a full event stream:
it tracks players on each mat (outs and revivals), raises all-outs when a
side is emptied, marks do-or-die raids after two empty raids, credits super
tackles, sets the milestone flags and keeps the running score. Used to build
the shipped match fixtures and to generate random valid matches for tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from datetime import date, timedelta
from typing import Optional

from kabaddi.model import (
    Event,
    EventType,
    LeagueStage,
    MatchDetail,
    MatchSummary,
    Score,
    TeamRef,
)
from kabaddi.rules import (
    ALL_OUT_POINTS,
    BONUS_MIN_DEFENDERS,
    EMPTY_RAIDS_BEFORE_DO_OR_DIE,
    HIGH_FIVE_POINTS,
    SUPER_RAID_POINTS,
    SUPER_TACKLE_MAX_DEFENDERS,
    SUPER_TEN_POINTS,
)

SQUAD = 7


@dataclass
class _Side:
    team_id: int
    name: str
    on_mat: int = SQUAD
    empty_streak: int = 0


@dataclass
class MatchBuilder:
    match_id: int
    team_1: tuple[int, str]
    team_2: tuple[int, str]
    season: int = 1
    player_names: dict[int, str] = field(default_factory=dict)
    created_date: str = ""

    def __post_init__(self):
        self._sides = {
            self.team_1[0]: _Side(*self.team_1),
            self.team_2[0]: _Side(*self.team_2),
        }
        self._events: list[Event] = []
        self._score = Score(0, 0)
        self._half = 1
        self._clock = 20 * 60
        self._raid_totals: dict[int, int] = {}
        self._tackle_totals: dict[int, int] = {}

    # -- helpers -----------------------------------------------------------

    def _other(self, team_id: int) -> _Side:
        (other,) = [s for tid, s in self._sides.items() if tid != team_id]
        return other

    def _name(self, player_id: Optional[int]) -> str:
        if player_id is None:
            return ""
        return self.player_names.get(player_id, f"Player {player_id}")

    def _tick(self, clock: Optional[int], step: int) -> int:
        if clock is not None:
            if clock > self._clock:
                raise ValueError(f"clock {clock} runs backwards from {self._clock}")
            self._clock = clock
        else:
            self._clock = max(0, self._clock - step)
        return self._clock

    def _credit(self, raiding: int, raid_points: int, defending_points: int) -> Score:
        if raiding == self.team_1[0]:
            self._score = self._score.add(raid_points, defending_points)
        else:
            self._score = self._score.add(defending_points, raid_points)
        return self._score

    def _append(self, **kw) -> Event:
        event_no = len(self._events) + 1
        kw.setdefault("event_id", self.match_id * 1000 + event_no)
        kw.setdefault("seq_no", event_no)
        kw.setdefault("created_date", self.created_date or None)
        event = Event(event_no=event_no, event_half=self._half, **kw)
        self._events.append(event)
        return event

    # -- script verbs --------------------------------------------------------

    def next_half(self) -> None:
        self._half = 2
        self._clock = 20 * 60

    @property
    def defenders_facing(self) -> dict[int, int]:
        """Players on the mat for each team, keyed by team id."""
        return {tid: s.on_mat for tid, s in self._sides.items()}

    @property
    def score(self) -> Score:
        return self._score

    def streak(self, team_id: int) -> int:
        return self._sides[team_id].empty_streak

    def raid(
        self,
        team_id: int,
        raider_id: int,
        touch: int = 0,
        bonus: int = 0,
        tackled: bool = False,
        defender_id: Optional[int] = None,
        clock: Optional[int] = None,
        step: int = 20,
    ) -> Event:
        """One raid. With no touch, bonus or tackle the raid is empty, or a
        conceded point if it was a do-or-die raid."""
        attack = self._sides[team_id]
        defence = self._other(team_id)
        defenders = defence.on_mat
        do_or_die = attack.empty_streak == EMPTY_RAIDS_BEFORE_DO_OR_DIE
        if bonus and defenders < BONUS_MIN_DEFENDERS:
            raise ValueError(f"bonus with {defenders} defenders on the mat")
        if touch > defenders:
            raise ValueError(f"{touch} touch points against {defenders} defenders")
        if tackled and touch:
            raise ValueError("a tackled raider scores no touch points in this model")
        if do_or_die and not (touch or bonus or tackled):
            tackled = True  # failed do-or-die: raider out, one point to the defence

        raid_all_out = defending_all_out = capture = 0
        super_tackle = False
        if touch or bonus:
            kind = EventType.SUCCESSFUL_RAID
            defence.on_mat -= touch
            attack.on_mat = min(SQUAD, attack.on_mat + touch)
            if defence.on_mat == 0:
                raid_all_out = ALL_OUT_POINTS
                defence.on_mat = SQUAD
        elif tackled:
            kind = EventType.UNSUCCESSFUL_RAID
            super_tackle = defenders <= SUPER_TACKLE_MAX_DEFENDERS
            capture = 2 if super_tackle else 1
            attack.on_mat -= 1
            defence.on_mat = min(SQUAD, defence.on_mat + 1)
            if attack.on_mat == 0:
                defending_all_out = ALL_OUT_POINTS
                attack.on_mat = SQUAD
        else:
            kind = EventType.EMPTY_RAID

        if do_or_die or kind is not EventType.EMPTY_RAID:
            attack.empty_streak = 0
        else:
            attack.empty_streak += 1

        raid_points = touch + bonus + raid_all_out
        defending_points = capture + defending_all_out
        score = self._credit(team_id, raid_points, defending_points)

        before = self._raid_totals.get(raider_id, 0)
        self._raid_totals[raider_id] = before + touch + bonus
        super_ten = before < SUPER_TEN_POINTS <= before + touch + bonus
        high_five = False
        if tackled and defender_id is not None:
            t_before = self._tackle_totals.get(defender_id, 0)
            self._tackle_totals[defender_id] = t_before + capture
            high_five = t_before < HIGH_FIVE_POINTS <= t_before + capture

        name = self._name(raider_id)
        text = {
            EventType.SUCCESSFUL_RAID: f"{name} raids successfully",
            EventType.UNSUCCESSFUL_RAID: f"{name} unsuccessful raid",
            EventType.EMPTY_RAID: f"{name} empty raid",
        }[kind]
        return self._append(
            event=kind.value,
            event_text=text,
            kind=kind,
            clock=self._tick(clock, step),
            raiding_team_id=team_id,
            defending_team_id=defence.team_id,
            raider_id=raider_id,
            defender_id=defender_id if tackled else None,
            raid_points=raid_points,
            raid_touch_points=touch,
            raid_bonus_points=bonus,
            raid_all_out_points=raid_all_out,
            defending_points=defending_points,
            defending_capture_points=capture,
            defending_all_out_points=defending_all_out,
            super_raid=raid_points >= SUPER_RAID_POINTS,
            super_tackle=super_tackle,
            do_or_die=do_or_die,
            super_ten=super_ten,
            high_five=high_five,
            status_id=1,
            score=score,
            defenders=defenders,
        )

    def timeout(self, team_id: int, clock: Optional[int] = None, step: int = 0) -> Event:
        return self._append(
            event=EventType.TIMEOUT.value,
            event_text=None,
            kind=EventType.TIMEOUT,
            clock=self._tick(clock, step),
            team_id=team_id,
            status_id=2,
        )

    def substitution(self, team_id: int, player_out: int, player_in: int,
                     clock: Optional[int] = None, step: int = 4) -> Event:
        clock = self._tick(clock, step)
        from kabaddi.model import format_clock

        return self._append(
            event=EventType.SUBSTITUTION.value,
            event_text=f"{self._name(player_in)} comes in for {self._name(player_out)}",
            kind=EventType.SUBSTITUTION,
            clock=clock,
            player_id=player_out,
            substituted_by=player_in,
            team_id=team_id,
            substitute_time=format_clock(clock),
            status_id=3,
        )

    def card(self, team_id: int, player_id: int, colour: EventType = EventType.YELLOW_CARD,
             clock: Optional[int] = None, step: int = 5) -> Event:
        """Card shown to ``player_id`` of ``team_id``; yellow and red give the
        other side one technical point."""
        other = self._other(team_id)
        tech = 1 if colour in (EventType.YELLOW_CARD, EventType.RED_CARD) else 0
        score = self._credit(other.team_id, tech, 0)
        return self._append(
            event=colour.value,
            event_text=f"{colour.value} for {self._name(player_id)}",
            kind=colour,
            clock=self._tick(clock, step),
            raiding_team_id=other.team_id,
            defending_team_id=team_id,
            raid_points=tech,
            raid_technical_points=tech,
            player_id=player_id,
            team_id=team_id,
            status_id=4,
            score=score,
        )

    def events(self) -> tuple[Event, ...]:
        return tuple(self._events)

    def summary(
        self,
        stage: LeagueStage = LeagueStage.LEAGUE,
        stage_label: str = "",
        match_name: str = "",
        venue: str = "",
        day: date = date(2024, 1, 1),
        year: Optional[int] = None,
    ) -> MatchSummary:
        s1, s2 = self._score.team_1_total, self._score.team_2_total
        n1, n2 = self.team_1[1], self.team_2[1]
        if s1 == s2:
            outcome = "Match Tied"
        else:
            winner = n1 if s1 > s2 else n2
            outcome = f"{winner} won by {abs(s1 - s2)} Pts"
        return MatchSummary(
            season=self.season,
            match_id=self.match_id,
            match_name=match_name or f"{n1} vs {n2}",
            league_stage=stage,
            year=year or day.year,
            venue=venue,
            start_date=day,
            end_date=day,
            team_1=TeamRef(self.team_1[0], n1, s1),
            team_2=TeamRef(self.team_2[0], n2, s2),
            match_outcome=outcome,
            winning_margin=abs(s1 - s2),
            result="Tie" if s1 == s2 else "Result",
            stage_label=stage_label,
        )

    def detail(self, **summary_kw) -> MatchDetail:
        return MatchDetail(self.summary(**summary_kw), self.events())


def random_match(
    rng: random.Random,
    match_id: int = 1,
    team_1: tuple[int, str] = (1, "Team One"),
    team_2: tuple[int, str] = (2, "Team Two"),
    raids_per_half: tuple[int, int] = (30, 45),
    season: int = 1,
    cards: bool = True,
) -> MatchDetail:
    """A random match that passes ``validate_match`` with no errors."""
    roster = {
        team_1[0]: [team_1[0] * 100 + i for i in range(1, 8)],
        team_2[0]: [team_2[0] * 100 + i for i in range(1, 8)],
    }
    b = MatchBuilder(match_id, team_1, team_2, season=season)
    order = [team_1[0], team_2[0]]
    for half in (1, 2):
        if half == 2:
            b.next_half()
            order.reverse()
        n = rng.randint(*raids_per_half)
        budget = 20 * 60 - 30
        step = max(1, budget // (n + 4))
        for i in range(n):
            attack = order[i % 2]
            defence = order[(i + 1) % 2]
            facing = b.defenders_facing[defence]
            raider = rng.choice(roster[attack])
            defender = rng.choice(roster[defence])
            roll = rng.random()
            touch = bonus = 0
            tackled = False
            if roll < 0.35:
                touch = min(facing, rng.choice((1, 1, 1, 2, 2, 3, 4)))
                if facing >= BONUS_MIN_DEFENDERS and rng.random() < 0.3:
                    bonus = 1
            elif roll < 0.45 and facing >= BONUS_MIN_DEFENDERS:
                bonus = 1
            elif roll < 0.75:
                tackled = True
            b.raid(attack, raider, touch=touch, bonus=bonus, tackled=tackled,
                   defender_id=defender, step=rng.randint(1, min(step, 30)))
            extra = rng.random()
            if extra < 0.03:
                b.timeout(rng.choice(order), step=rng.randint(0, 5))
            elif extra < 0.07:
                team = rng.choice(order)
                b.substitution(team, rng.choice(roster[team]), team * 100 + rng.randint(8, 12),
                               step=rng.randint(0, 5))
            elif cards and extra < 0.09:
                team = rng.choice(order)
                colour = rng.choice((EventType.GREEN_CARD, EventType.YELLOW_CARD, EventType.RED_CARD))
                b.card(team, rng.choice(roster[team]), colour, step=rng.randint(0, 5))
    day = date(2024, 1, 1) + timedelta(days=match_id % 300)
    return b.detail(day=day)


# Single-field mutations the law engine must catch. Each returns a mutated
# copy of the match, or None when the match has no event the mutation can
# apply to.

def _swap_event(detail: MatchDetail, index: int, event: Event) -> MatchDetail:
    events = list(detail.events)
    events[index] = event
    return replace(detail, events=tuple(events))


def _pick(rng: random.Random, detail: MatchDetail, pred):
    candidates = [i for i, e in enumerate(detail.events) if pred(e)]
    return rng.choice(candidates) if candidates else None


def mutate_dod_flip(rng, detail):
    i = _pick(rng, detail, lambda e: e.is_raid)
    if i is None:
        return None
    e = detail.events[i]
    return _swap_event(detail, i, replace(e, do_or_die=not e.do_or_die))


def mutate_all_out_value(rng, detail):
    i = _pick(rng, detail, lambda e: e.raid_all_out_points or e.defending_all_out_points)
    if i is None:
        return None
    e = detail.events[i]
    new = rng.choice((1, 3, 4))
    if e.raid_all_out_points:
        delta = new - e.raid_all_out_points
        e = replace(e, raid_all_out_points=new, raid_points=e.raid_points + delta)
    else:
        delta = new - e.defending_all_out_points
        e = replace(e, defending_all_out_points=new, defending_points=e.defending_points + delta)
    return _swap_event(detail, i, e)


def mutate_card_no_tech(rng, detail):
    i = _pick(rng, detail, lambda e: e.kind in (EventType.YELLOW_CARD, EventType.RED_CARD))
    if i is None:
        return None
    e = detail.events[i]
    return _swap_event(detail, i, replace(
        e, raid_technical_points=0, raid_points=e.raid_points - e.raid_technical_points))


def mutate_bonus_short_defence(rng, detail):
    i = _pick(rng, detail, lambda e: e.is_raid)
    if i is None:
        return None
    e = detail.events[i]
    defenders = rng.randint(1, BONUS_MIN_DEFENDERS - 1)
    return _swap_event(detail, i, replace(
        e, raid_bonus_points=e.raid_bonus_points + 1, raid_points=e.raid_points + 1,
        defenders=defenders))


def mutate_super_tackle_full_defence(rng, detail):
    i = _pick(rng, detail, lambda e: e.is_raid and e.defenders > SUPER_TACKLE_MAX_DEFENDERS
              and not e.super_tackle)
    if i is None:
        return None
    return _swap_event(detail, i, replace(detail.events[i], super_tackle=True))


def mutate_empty_with_points(rng, detail):
    i = _pick(rng, detail, lambda e: e.kind is EventType.EMPTY_RAID)
    if i is None:
        return None
    e = detail.events[i]
    return _swap_event(detail, i, replace(e, raid_touch_points=1, raid_points=1))


def mutate_score_pair(rng, detail):
    i = _pick(rng, detail, lambda e: e.score is not None)
    if i is None:
        return None
    e = detail.events[i]
    s = e.score
    bumped = Score(s.team_1_total + 1, s.team_2_total) if rng.random() < 0.5 else \
        Score(s.team_1_total, s.team_2_total + 1)
    return _swap_event(detail, i, replace(e, score=bumped))


def mutate_component_sum(rng, detail):
    i = _pick(rng, detail, lambda e: e.is_raid)
    if i is None:
        return None
    e = detail.events[i]
    field_name = rng.choice(("raid_touch_points", "defending_capture_points"))
    return _swap_event(detail, i, replace(e, **{field_name: getattr(e, field_name) + 1}))


MUTATIONS = {
    "dod-flag-flip": mutate_dod_flip,
    "all-out-not-two": mutate_all_out_value,
    "card-without-tech": mutate_card_no_tech,
    "bonus-under-six": mutate_bonus_short_defence,
    "super-tackle-over-three": mutate_super_tackle_full_defence,
    "empty-raid-points": mutate_empty_with_points,
    "score-perturbation": mutate_score_pair,
    "component-sum-break": mutate_component_sum,
}

"""Validation findings and the closed registry of rule codes.

The codes are a stable public contract: the CLI prints them verbatim and
they never change meaning between releases.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union


class Severity(Enum):
    ERROR = "Error"
    WARNING = "Warning"


RULES: dict[str, tuple[Severity, str]] = {
    # fixture / schema level
    "E-PARSE": (Severity.ERROR, "document is not valid JSON"),
    "E-SCHEMA": (Severity.ERROR, "required field missing, wrong type, or out of range"),
    "E-DUPLICATE-KEY": (Severity.ERROR, "record key already loaded from another record or file"),
    "E-UNREADABLE": (Severity.ERROR, "file listed in manifest could not be read"),
    "E-DIGEST": (Severity.ERROR, "file content does not match the manifest sha256"),
    "E-TEAM-REF": (Severity.ERROR, "event team id is not one of the match's two teams"),
    "E-ORPHAN-EVENTS": (Severity.ERROR, "events file has no matching match summary"),
    "W-UNKNOWN-FIELD": (Severity.WARNING, "unrecognised field ignored"),
    "W-UNKNOWN-ZONE": (Severity.WARNING, "zone name outside the 9-zone court taxonomy"),
    "W-UNKNOWN-SKILL": (Severity.WARNING, "skill name outside the known move tables"),
    "W-UNKNOWN-EVENT": (Severity.WARNING, "event label not recognised; kept as Other"),
    # law engine
    "E-POINT-SUM": (Severity.ERROR, "point components do not add up to the total"),
    "E-DOD-FLAG": (Severity.ERROR, "do_or_die flag disagrees with the two-empty-raids rule"),
    "E-DOD-PENALTY": (Severity.ERROR, "scoreless do-or-die raid did not concede a point"),
    "E-ALLOUT-TWO": (Severity.ERROR, "all-out component is not exactly two points"),
    "E-CARD-TECH": (Severity.ERROR, "yellow/red card did not award one technical point to the opponent"),
    "E-BONUS-SIX": (Severity.ERROR, "bonus point with fewer than six defenders on the mat"),
    "E-SUPERTACKLE": (Severity.ERROR, "super tackle with more defenders than the shorthanded threshold"),
    "E-EMPTY-POINTS": (Severity.ERROR, "empty raid carries points"),
    "E-SCORE-TRACK": (Severity.ERROR, "recorded running score differs from the reconstruction"),
    "E-CLOCK-ORDER": (Severity.ERROR, "half goes backwards or clock increases within a half"),
    "E-EVENTNO-ORDER": (Severity.ERROR, "event numbers are not strictly increasing"),
    "E-FINAL-SCORE": (Severity.ERROR, "reconstructed final score differs from the match summary"),
    "W-RAID-30S": (Severity.WARNING, "more than 30 s of clock elapsed before this raid ended"),
    "W-DEF-BONUS": (Severity.WARNING, "defending bonus points are nonzero"),
    "W-SUPER-RAID": (Severity.WARNING, "super_raid flag disagrees with raid points >= 3"),
    "W-SUPER-TEN": (Severity.WARNING, "super_ten flag disagrees with the raider reaching 10 points"),
    "W-HIGH-FIVE": (Severity.WARNING, "high_five flag disagrees with the defender reaching 5 points"),
}

Source = Union[str, tuple[int, int]]


@dataclass(frozen=True, slots=True)
class Violation:
    """A single finding. ``source`` is a file path or ``(match_id, event_no)``."""

    source: Source
    rule_id: str
    message: str
    severity: Severity = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.rule_id not in RULES:
            raise ValueError(f"unregistered rule id {self.rule_id!r}")
        if self.severity is None:
            object.__setattr__(self, "severity", RULES[self.rule_id][0])

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def source_text(self) -> str:
        if isinstance(self.source, tuple):
            return f"match {self.source[0]} event {self.source[1]}"
        return self.source

    def __str__(self) -> str:
        return f"{self.severity.value.upper():7} {self.rule_id:16} {self.source_text()}: {self.message}"

    def sort_key(self):
        src = self.source
        return (0, "", src[0], src[1]) if isinstance(src, tuple) else (1, src, 0, 0)


def errors(violations) -> list[Violation]:
    return [v for v in violations if v.is_error]

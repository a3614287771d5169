"""Team metric catalogue: key, ranking direction, and value kind.

``higher_is_better`` drives competition ranking. ``per_match`` marks season
totals that also get a per-match figure; percentages and values that are
already averages do not.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class MetricSpec:
    key: str
    higher_is_better: bool = True
    is_percent: bool = False
    per_match: bool = True
    description: str = ""


_SPECS = (
    MetricSpec("all-outs-conceded", higher_is_better=False,
               description="times the team's whole side was put out"),
    MetricSpec("successful-tackle-percent", is_percent=True, per_match=False,
               description="successful tackles / opposition raids that were not empty"),
    MetricSpec("super-raid", description="raids flagged super_raid"),
    MetricSpec("successful-raid-percent", is_percent=True, per_match=False,
               description="successful raids / all raids"),
    MetricSpec("dod-raid-points", description="raid points scored on do-or-die raids"),
    MetricSpec("super-tackles", description="events flagged super_tackle while defending"),
    MetricSpec("total-touch-points", description="sum of raid touch points"),
    MetricSpec("total-bonus-points", description="sum of raid bonus points"),
    MetricSpec("raid-points", description="sum of raid points"),
    MetricSpec("successful-raids", description="count of successful raids"),
    MetricSpec("total-points-conceded", higher_is_better=False,
               description="points scored by opponents"),
    MetricSpec("tackle-points", description="sum of defending capture points"),
    MetricSpec("total-points", description="points scored"),
    MetricSpec("successful-tackles", description="opposition raids ending in a capture"),
    MetricSpec("successful-tackles-per-match", per_match=False,
               description="successful tackles / matches played"),
    MetricSpec("all-outs-inflicted", description="all-outs inflicted on opponents"),
    MetricSpec("average-raid-points", per_match=False,
               description="raid points / matches played"),
    MetricSpec("avg-points-scored", per_match=False,
               description="points scored / matches played"),
    MetricSpec("average-tackle-points", per_match=False,
               description="tackle points / matches played"),
)

METRICS: dict[str, MetricSpec] = {spec.key: spec for spec in _SPECS}
METRIC_KEYS: tuple[str, ...] = tuple(METRICS)

assert len(METRIC_KEYS) == 19

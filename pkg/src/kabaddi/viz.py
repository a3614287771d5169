"""Deterministic SVG figures and RFC-4180 CSV export.

SVG is built as text so the bytes depend only on the inputs: there are no
timestamps, generated ids or float noise (every coordinate is rounded to
two decimals before it is written).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import date
from decimal import Decimal
from enum import Enum
from typing import Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from kabaddi.model import ZoneId, ZoneRecord, ZoneType
from kabaddi.stats import ProgressionSeries
from kabaddi.store import DataUnavailable

GREENS = ("#edf8e9", "#006d2c")
REDS = ("#fee5d9", "#a50f15")
SERIES_COLOURS = ("#1f77b4", "#d62728")
FONT = "DejaVu Sans, Arial, sans-serif"

# Court dimensions in metres. One half is drawn: width across, depth from
# the midline back to the end line. Lobbies sit inside the width.
COURTS = {
    "men": (13.0, 10.0),
    "women": (12.0, 8.0),
}
LOBBY = 1.0
BAULK = 3.75
BONUS = BAULK + 1.0


@dataclass(frozen=True)
class RenderOptions:
    """Figure size and styling.

    For ``render_zone_grid`` width and height are per panel.
    """

    width: int = 640
    height: int = 420
    palette: Optional[tuple[str, ...]] = None
    max_cols: int = 2
    title: Optional[str] = None
    court: str = "men"

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("width and height must be positive")
        if self.max_cols < 1:
            raise ValueError("max_cols must be at least 1")
        if self.court not in COURTS:
            raise ValueError(f"court must be one of {sorted(COURTS)}")
        if self.palette is not None and len(self.palette) < 2:
            raise ValueError("palette needs at least two colours")


def _n(x: float) -> str:
    text = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def _svg_open(width: float, height: float) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_n(width)}" '
        f'height="{_n(height)}" viewBox="0 0 {_n(width)} {_n(height)}" '
        f'font-family={quoteattr(FONT)}>',
    ]


def _text(x, y, body, size=12, anchor="middle", extra="") -> str:
    return (f'<text x="{_n(x)}" y="{_n(y)}" font-size="{size}" text-anchor="{anchor}"'
            f'{extra}>{escape(str(body))}</text>')


def _finish(lines: list[str]) -> str:
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# point progression


def _nice_max(value: int) -> int:
    return max(5, int(math.ceil(value / 5.0)) * 5)


def render_point_progression(
    series: ProgressionSeries,
    team_names: tuple[str, str],
    opts: RenderOptions = RenderOptions(),
) -> str:
    """Cumulative points per team against event index.

    Polyline vertices are written in data units (event index, points) and
    mapped to the viewport by the enclosing transform, so the last vertex of
    each line carries the final score as its y value. The stroke width is
    set in data units to come out near two pixels.
    """
    if not len(series):
        raise ValueError(
            f"match {series.match_id} has no events; check that play-by-play "
            "data is available for it"
        )
    left, right, top, bottom = 56.0, 20.0, 48.0 if opts.title else 28.0, 64.0
    plot_w = opts.width - left - right
    plot_h = opts.height - top - bottom
    if plot_w <= 0 or plot_h <= 0:
        raise ValueError("figure too small for the plot area")
    n = len(series)
    y_max = _nice_max(max(max(a, b) for _, a, b in series.points))
    sx, sy = plot_w / n, plot_h / y_max
    colours = opts.palette or SERIES_COLOURS

    lines = _svg_open(opts.width, opts.height)
    if opts.title:
        lines.append(_text(opts.width / 2, 24, opts.title, size=15))
    base_y = top + plot_h
    lines.append('<g class="axes" stroke="#333" stroke-width="1">')
    lines.append(f'<line x1="{_n(left)}" y1="{_n(base_y)}" x2="{_n(left + plot_w)}" y2="{_n(base_y)}"/>')
    lines.append(f'<line x1="{_n(left)}" y1="{_n(top)}" x2="{_n(left)}" y2="{_n(base_y)}"/>')
    lines.append("</g>")

    lines.append('<g class="ticks" fill="#333">')
    for v in range(0, y_max + 1, 5):
        y = base_y - v * sy
        lines.append(f'<line x1="{_n(left - 4)}" y1="{_n(y)}" x2="{_n(left)}" y2="{_n(y)}" stroke="#333"/>')
        lines.append(_text(left - 8, y + 4, v, size=11, anchor="end"))
    step = max(1, int(math.ceil(n / 10 / 5.0)) * 5)
    for i in range(0, n + 1, step):
        x = left + i * sx
        lines.append(f'<line x1="{_n(x)}" y1="{_n(base_y)}" x2="{_n(x)}" y2="{_n(base_y + 4)}" stroke="#333"/>')
        lines.append(_text(x, base_y + 17, i, size=11))
    lines.append("</g>")
    lines.append(_text(left + plot_w / 2, base_y + 36, "Event", size=12))
    lines.append(_text(16, top + plot_h / 2, "Points", size=12,
                       extra=f' transform="rotate(-90 16 {_n(top + plot_h / 2)})"'))

    lines.append(
        f'<g class="series" transform="translate({_n(left)} {_n(base_y)}) '
        f'scale({sx:.6f} {-sy:.6f})" fill="none" stroke-width="{2 / math.sqrt(sx * sy):.6f}" '
        'stroke-linejoin="round" stroke-linecap="round">'
    )
    for k in (0, 1):
        pts = " ".join(f"{i},{p[1 + k]}" for i, p in enumerate(series.points, start=1))
        lines.append(
            f'<polyline data-team={quoteattr(team_names[k])} stroke="{colours[k]}" '
            f'points="{pts}"/>'
        )
    lines.append("</g>")

    lines.append('<g class="legend">')
    lx = left + 12
    for k in (0, 1):
        y = top + 14 + 18 * k
        final = series.points[-1][1 + k]
        lines.append(f'<line x1="{_n(lx)}" y1="{_n(y - 4)}" x2="{_n(lx + 20)}" y2="{_n(y - 4)}" '
                     f'stroke="{colours[k]}" stroke-width="2"/>')
        lines.append(_text(lx + 26, y, f"{team_names[k]} ({final})", size=12, anchor="start"))
    lines.append("</g>")
    return _finish(lines)


# ---------------------------------------------------------------------------
# zone heatmaps


def zone_rects(court: str = "men") -> dict[ZoneId, tuple[float, float, float, float]]:
    """Zone rectangles (x, y, w, h) in metres for one half of the court.

    x runs across the court, y from the midline (0) to the end line.
    """
    depth, width = COURTS[court][0] / 2, COURTS[court][1]
    inner = width - 2 * LOBBY
    third, half = inner / 3, inner / 2
    return {
        ZoneId.LEFT_LOBBY: (0.0, 0.0, LOBBY, depth),
        ZoneId.RIGHT_LOBBY: (width - LOBBY, 0.0, LOBBY, depth),
        ZoneId.MIDLINE_LEFT: (LOBBY, 0.0, third, BAULK),
        ZoneId.MIDLINE_CENTRE: (LOBBY + third, 0.0, third, BAULK),
        ZoneId.MIDLINE_RIGHT: (LOBBY + 2 * third, 0.0, third, BAULK),
        ZoneId.BAULK_LEFT: (LOBBY, BAULK, half, BONUS - BAULK),
        ZoneId.BAULK_RIGHT: (LOBBY + half, BAULK, half, BONUS - BAULK),
        ZoneId.BONUS_LEFT: (LOBBY, BONUS, half, depth - BONUS),
        ZoneId.BONUS_RIGHT: (LOBBY + half, BONUS, half, depth - BONUS),
    }


def _hex(colour: str) -> tuple[int, int, int]:
    c = colour.lstrip("#")
    return int(c[0:2], 16), int(c[2:4], 16), int(c[4:6], 16)


def shade(t: float, palette: Sequence[str]) -> str:
    """Colour at fraction ``t`` along a piecewise-linear palette ramp."""
    t = min(1.0, max(0.0, t))
    stops = [_hex(c) for c in palette]
    pos = t * (len(stops) - 1)
    i = min(int(pos), len(stops) - 2)
    f = pos - i
    a, b = stops[i], stops[i + 1]
    return "#" + "".join(f"{round(x + (y - x) * f):02x}" for x, y in zip(a, b))


def default_palette(zone_type: ZoneType) -> tuple[str, ...]:
    return GREENS if zone_type is ZoneType.STRONG else REDS


def _check_records(records: Sequence[ZoneRecord], zone_type: ZoneType) -> None:
    subjects = {(r.season, r.subject_kind, r.subject_id) for r in records}
    if len(subjects) > 1:
        raise ValueError("zone records span more than one subject or season")
    wrong = [r for r in records if r.zone_type is not zone_type]
    if wrong:
        raise ValueError(f"expected {zone_type.value} zones, got {wrong[0].zone_type.value}")


def _court_body(records, zone_type, x0, y0, w, h, palette, court) -> list[str]:
    """Court drawing with shaded zones fitted into the box (x0, y0, w, h)."""
    rects = zone_rects(court)
    depth, width = COURTS[court][0] / 2, COURTS[court][1]
    scale = min(w / width, h / depth)
    ox = x0 + (w - width * scale) / 2
    oy = y0 + (h - depth * scale) / 2

    def px(mx, my):
        return ox + mx * scale, oy + my * scale

    drawn = [r for r in records if r.zone_id in rects]
    pts = [r.points for r in drawn]
    lo, hi = (min(pts), max(pts)) if pts else (0, 0)
    out = [f'<g class="court" data-zone-type="{zone_type.value}">']
    out.append(f'<rect x="{_n(ox)}" y="{_n(oy)}" width="{_n(width * scale)}" '
               f'height="{_n(depth * scale)}" fill="#ffffff" stroke="#444" stroke-width="1"/>')
    for rec in sorted(drawn, key=lambda r: list(rects).index(r.zone_id)):
        zx, zy, zw, zh = rects[rec.zone_id]
        x, y = px(zx, zy)
        t = (rec.points - lo) / (hi - lo) if hi > lo else 0.0
        out.append(
            f'<rect class="zone" data-zone={quoteattr(rec.zone_id.value)} '
            f'data-points="{rec.points}" x="{_n(x)}" y="{_n(y)}" width="{_n(zw * scale)}" '
            f'height="{_n(zh * scale)}" fill="{shade(t, palette)}" stroke="#666" '
            f'stroke-width="0.5"><title>{escape(rec.zone_id.value)}: {rec.points}</title></rect>'
        )
        cx, cy = px(zx + zw / 2, zy + zh / 2)
        dark = t > 0.6
        out.append(_text(cx, cy + 4, rec.points, size=12,
                         extra=' class="zone-label" fill="{}"'.format("#ffffff" if dark else "#111111")))
    # court lines over the shading
    for my, name, dash in ((0.0, "midline", ""), (BAULK, "baulk", ""),
                           (BONUS, "bonus", ' stroke-dasharray="4 3"')):
        xa, ya = px(LOBBY, my)
        xb, _ = px(width - LOBBY, my)
        sw = 3 if name == "midline" else 1.5
        out.append(f'<line class="{name}-line" x1="{_n(xa)}" y1="{_n(ya)}" x2="{_n(xb)}" '
                   f'y2="{_n(ya)}" stroke="#222" stroke-width="{sw}"{dash}/>')
    for mx in (LOBBY, width - LOBBY):
        xa, ya = px(mx, 0.0)
        _, yb = px(mx, depth)
        out.append(f'<line class="lobby-line" x1="{_n(xa)}" y1="{_n(ya)}" x2="{_n(xa)}" '
                   f'y2="{_n(yb)}" stroke="#222" stroke-width="1"/>')
    out.append("</g>")
    return out


def render_zone_heatmap(
    records: Sequence[ZoneRecord],
    zone_type: ZoneType,
    opts: RenderOptions = RenderOptions(),
) -> str:
    """Half-court schematic with each zone shaded by its points.

    Shading is linear from the smallest to the largest value in ``records``;
    darker means more points.
    """
    if not records:
        raise DataUnavailable(f"no {zone_type.value} zone data to draw")
    _check_records(records, zone_type)
    palette = opts.palette or default_palette(zone_type)
    top = 36.0 if opts.title else 12.0
    lines = _svg_open(opts.width, opts.height)
    if opts.title:
        lines.append(_text(opts.width / 2, 24, opts.title, size=15))
    lines += _court_body(records, zone_type, 12.0, top, opts.width - 24.0,
                         opts.height - top - 12.0, palette, opts.court)
    return _finish(lines)


@dataclass(frozen=True)
class ZonePanel:
    """One grid cell: ``records`` is None when the player has no zone data."""

    player_id: int
    name: str
    records: Optional[tuple[ZoneRecord, ...]]


def grid_shape(n: int, max_cols: int) -> tuple[int, int]:
    if n < 1:
        raise ValueError("a zone grid needs at least one player")
    cols = min(n, max_cols)
    return math.ceil(n / max_cols), cols


def render_zone_grid(
    panels: Sequence[ZonePanel],
    zone_type: ZoneType,
    opts: RenderOptions = RenderOptions(width=420, height=320),
) -> str:
    """Small multiples of zone heatmaps, filled row by row."""
    rows, cols = grid_shape(len(panels), opts.max_cols)
    palette = opts.palette or default_palette(zone_type)
    head = 36.0 if opts.title else 0.0
    pw, ph = float(opts.width), float(opts.height)
    lines = _svg_open(cols * pw, rows * ph + head)
    if opts.title:
        lines.append(_text(cols * pw / 2, 24, opts.title, size=15))
    for k, panel in enumerate(panels):
        r, c = divmod(k, opts.max_cols)
        x0, y0 = c * pw, head + r * ph
        lines.append(f'<g class="panel" data-player-id="{panel.player_id}" data-row="{r}" '
                     f'data-col="{c}">')
        lines.append(_text(x0 + pw / 2, y0 + 20, f"{panel.name} ({panel.player_id})", size=13))
        box = (x0 + 10, y0 + 30, pw - 20, ph - 40)
        if panel.records:
            _check_records(panel.records, zone_type)
            lines += _court_body(panel.records, zone_type, *box, palette, opts.court)
        else:
            lines.append(f'<rect class="unavailable" x="{_n(box[0])}" y="{_n(box[1])}" '
                         f'width="{_n(box[2])}" height="{_n(box[3])}" fill="#f4f4f4" '
                         'stroke="#999" stroke-dasharray="6 4"/>')
            lines.append(_text(box[0] + box[2] / 2, box[1] + box[3] / 2, "zone data unavailable",
                               size=13, extra=' fill="#666"'))
        lines.append("</g>")
    return _finish(lines)


# ---------------------------------------------------------------------------
# tables


def cell(value) -> str:
    """Text form of one table value, shared by CSV and aligned text output."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, Decimal):
        return str(value)
    return str(value)


def _columns_rows(table) -> tuple[Sequence[str], Sequence[Sequence]]:
    if hasattr(table, "columns") and hasattr(table, "rows"):
        return table.columns, table.rows
    records = list(table)
    if not records:
        raise ValueError("an empty record list has no schema; pass a Table")
    cols = type(records[0]).COLUMNS
    return cols, [tuple(r.as_row()[c] for c in cols) for r in records]


def export_csv(table) -> bytes:
    """RFC-4180 CSV: header row, CRLF line ends, UTF-8, minimal quoting."""
    columns, rows = _columns_rows(table)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([cell(v) for v in row])
    return buf.getvalue().encode("utf-8")


def json_value(value):
    """JSON-ready form of one table value."""
    if isinstance(value, Decimal):
        return int(value) if value == value.to_integral_value() else float(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, date):
        return value.isoformat()
    return value


def table_records(table) -> list[dict]:
    columns, rows = _columns_rows(table)
    return [{c: json_value(v) for c, v in zip(columns, row)} for row in rows]

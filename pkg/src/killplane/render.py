"""Deterministic SVG rendering of the 7x9 plane grid and campaign trajectories.

Technical phases run left to right in ordinal order; human-layer stages run
top to bottom, with the zero-click band drawn beneath them after a small gap.
Output is plain string assembly so identical inputs give identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .campaign import Campaign, plane_occupancy, require_valid
from .chains import (
    CkcPhase,
    HkcStage,
    PlaneCoordinate,
    ZERO_CLICK,
    human_axis_label,
    human_axis_ordinal,
)

DEFAULT_PALETTE = (
    "#ffffff",
    "#dbe9f6",
    "#a8cbe8",
    "#6da3d0",
    "#3f7cb8",
    "#1f5a9e",
)

_ZERO_CLICK_GAP = 12
_LEFT_GUTTER = 190
_TOP_GUTTER = 96


@dataclass(frozen=True)
class RenderSpec:
    """Rendering parameters for the plane grid."""

    cell_size: int = 64
    margin: int = 24
    palette: tuple[str, ...] = DEFAULT_PALETTE
    show_labels: bool = True
    show_counts: bool = True

    def __post_init__(self):
        if self.cell_size < 1:
            raise ValueError(f"cell_size must be positive, got {self.cell_size}")
        if self.margin < 0:
            raise ValueError(f"margin must be non-negative, got {self.margin}")
        if len(self.palette) < 2:
            raise ValueError("palette needs at least an empty and an occupied fill")

    def color_for(self, count: int) -> str:
        return self.palette[min(count, len(self.palette) - 1)]


def _fmt(value: float) -> str:
    return f"{value:g}"


def _cell_origin(spec: RenderSpec, column: int, row: int) -> tuple[float, float]:
    """Top-left pixel of a cell; column 1..7, row 1..9 (9 = zero-click band)."""
    x0 = spec.margin + (_LEFT_GUTTER if spec.show_labels else 0)
    y0 = spec.margin + (_TOP_GUTTER if spec.show_labels else 0)
    x = x0 + (column - 1) * spec.cell_size
    y = y0 + (row - 1) * spec.cell_size
    if row == 9:
        y += _ZERO_CLICK_GAP
    return x, y


def _cell_center(spec: RenderSpec, coordinate: PlaneCoordinate) -> tuple[float, float]:
    x, y = _cell_origin(spec, coordinate.ckc.ordinal, human_axis_ordinal(coordinate.human))
    return x + spec.cell_size / 2, y + spec.cell_size / 2


def render_plane(campaign: Campaign, spec: RenderSpec = RenderSpec()) -> str:
    """Render the full grid with occupancy shading and the event-order trajectory."""
    require_valid(campaign)
    occupancy = plane_occupancy(campaign)

    x0 = spec.margin + (_LEFT_GUTTER if spec.show_labels else 0)
    y0 = spec.margin + (_TOP_GUTTER if spec.show_labels else 0)
    width = x0 + 7 * spec.cell_size + spec.margin
    height = y0 + 9 * spec.cell_size + _ZERO_CLICK_GAP + spec.margin

    parts: list[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    parts.append(f'<rect class="bg" x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')

    for coordinate, stats in occupancy.cells():
        x, y = _cell_origin(
            spec, coordinate.ckc.ordinal, human_axis_ordinal(coordinate.human)
        )
        parts.append(
            f'<rect class="cell" x="{_fmt(x)}" y="{_fmt(y)}" '
            f'width="{spec.cell_size}" height="{spec.cell_size}" '
            f'fill="{spec.color_for(stats.count)}" stroke="#555555" stroke-width="1"/>'
        )
        if spec.show_counts and stats.count > 0:
            tx = x + spec.cell_size - 4
            ty = y + spec.cell_size - 5
            parts.append(
                f'<text class="count" x="{_fmt(tx)}" y="{_fmt(ty)}" '
                f'font-family="sans-serif" font-size="11" text-anchor="end" '
                f'fill="#222222">{stats.count}</text>'
            )

    if len(campaign.events) >= 2:
        points = " ".join(
            f"{_fmt(px)},{_fmt(py)}"
            for px, py in (_cell_center(spec, e.coordinate) for e in campaign.events)
        )
        parts.append(
            f'<polyline class="trajectory" points="{points}" fill="none" '
            f'stroke="#c0392b" stroke-width="2"/>'
        )
    for event in campaign.events:
        cx, cy = _cell_center(spec, event.coordinate)
        parts.append(
            f'<circle class="event-marker" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" '
            f'fill="#c0392b"/>'
        )

    if spec.show_labels:
        parts.append(
            f'<text class="title" x="{spec.margin}" y="{spec.margin + 12}" '
            f'font-family="sans-serif" font-size="13" fill="#000000">'
            f"{escape(campaign.name)}</text>"
        )
        for phase in CkcPhase:
            x, y = _cell_origin(spec, phase.ordinal, 1)
            cx = x + spec.cell_size / 2
            ty = y0 - 8
            parts.append(
                f'<text class="col-label" x="{_fmt(cx)}" y="{ty}" '
                f'font-family="sans-serif" font-size="11" text-anchor="start" '
                f'transform="rotate(-40 {_fmt(cx)} {ty})" fill="#000000">'
                f"{escape(phase.label)}</text>"
            )
        rows: list[tuple[int, str]] = [
            (stage.ordinal, stage.label) for stage in HkcStage
        ]
        rows.append((9, human_axis_label(ZERO_CLICK)))
        for row, label in rows:
            x, y = _cell_origin(spec, 1, row)
            ty = y + spec.cell_size / 2 + 4
            parts.append(
                f'<text class="row-label" x="{x - 8}" y="{_fmt(ty)}" '
                f'font-family="sans-serif" font-size="11" text-anchor="end" '
                f'fill="#000000">{escape(label)}</text>'
            )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"

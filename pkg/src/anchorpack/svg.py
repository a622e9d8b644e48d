"""Static SVG figures of point sets, tilings and packings."""

from __future__ import annotations

from typing import Iterable, Optional

from .geometry import PointSet, Rect, StaircasePolygon

SIZE = 1000
_PALETTE = ("#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5")


def _x(v) -> str:
    return _num(v * SIZE)


def _y(v) -> str:
    return _num((1 - v) * SIZE)


def _num(v) -> str:
    s = f"{float(v):.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _polygon(t: StaircasePolygon) -> list:
    a = t.anchor
    verts = [(a.x, a.y), (a.x, t.steps[0].y)]
    for k, p in enumerate(t.steps):
        verts.append((p.x, p.y))
        if k + 1 < len(t.steps):
            verts.append((p.x, t.steps[k + 1].y))
    verts.append((t.steps[-1].x, a.y))
    return verts


def render_svg(
    points: PointSet,
    rects: Iterable[Rect] = (),
    tiles: Optional[Iterable[StaircasePolygon]] = None,
) -> str:
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" '
        f'width="{SIZE}" height="{SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white" stroke="black" stroke-width="2"/>',
    ]
    for k, r in enumerate(rects):
        if r.is_degenerate():
            continue
        color = _PALETTE[k % len(_PALETTE)]
        out.append(
            f'<rect x="{_x(r.lo.x)}" y="{_y(r.hi.y)}" width="{_num(r.width * SIZE)}" '
            f'height="{_num(r.height * SIZE)}" fill="{color}" fill-opacity="0.8" '
            f'stroke="#555" stroke-width="0.5"/>'
        )
    if tiles is not None:
        for t in tiles:
            pts = " ".join(f"{_x(x)},{_y(y)}" for x, y in _polygon(t))
            out.append(f'<polygon points="{pts}" fill="none" stroke="black" stroke-width="1"/>')
    for p in points:
        out.append(f'<circle cx="{_x(p.x)}" cy="{_y(p.y)}" r="4" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

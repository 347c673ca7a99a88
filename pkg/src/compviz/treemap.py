"""Squarified treemap layout and self-contained SVG rendering.

The layout is the classic greedy row packer: rows are laid along the
shorter side of the remaining rectangle and a row is finalized as soon as
admitting the next value would worsen the row's worst aspect ratio.
Rendering emits one rectangle per layout node, outlined containers for
files or contributors, colored leaves for competency groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

from .aggregate import CompetencyTree
from .core import CompetencyGroup

DEFAULT_CANVAS_WIDTH = 1200
DEFAULT_CANVAS_HEIGHT = 800

DEFAULT_COLORS: dict[CompetencyGroup, str] = {
    CompetencyGroup.AB: "#2ca02c",
    CompetencyGroup.C1_EFFECTIVE: "#9467bd",
    CompetencyGroup.C2_MASTERY: "#d62728",
}

LABEL_STRIP_HEIGHT = 16.0
MIN_LABEL_WIDTH = 60.0
MIN_LABEL_HEIGHT = 16.0

_TITLE_STRIP = 24.0
_LEGEND_STRIP = 28.0


@dataclass(frozen=True)
class Rect:
    x: float
    y: float
    w: float
    h: float

    @property
    def area(self) -> float:
        return self.w * self.h

    def aspect(self) -> float:
        if self.w <= 0 or self.h <= 0:
            return float("inf")
        return max(self.w / self.h, self.h / self.w)


@dataclass(frozen=True)
class LayoutNode:
    label: str
    depth: int
    rect: Rect
    value: float
    group: CompetencyGroup | None = None


def _worst_aspect(row: Sequence[float], side: float) -> float:
    # Aspect ratio formula for a row of areas laid along a side of length
    # `side`: max(side^2 * a / s^2, s^2 / (side^2 * a)) over the row.
    total = sum(row)
    worst = 0.0
    for area in row:
        worst = max(worst, side * side * area / (total * total), total * total / (side * side * area))
    return worst


def squarify(values: Sequence[float], rect: Rect) -> list[Rect]:
    """Tile ``rect`` with one rectangle per value, areas proportional.

    Values must be positive and sorted in non-increasing order; the
    bounding rect must have positive extent. Returned rects are in value
    order and tile the bounding rect exactly.
    """
    if not values:
        return []
    if rect.w <= 0 or rect.h <= 0:
        raise ValueError(f"bounding rect must have positive extent, got {rect}")
    for i, value in enumerate(values):
        if value <= 0:
            raise ValueError(f"values must be positive, got {value} at index {i}")
        if i and value > values[i - 1]:
            raise ValueError("values must be sorted in non-increasing order")

    total = float(sum(values))
    scale = rect.area / total
    areas = [v * scale for v in values]

    rects: list[Rect] = []
    x, y, w, h = rect.x, rect.y, rect.w, rect.h
    start = 0
    while start < len(areas):
        side = h if w > h else w
        end = start + 1
        worst = _worst_aspect(areas[start:end], side)
        while end < len(areas):
            candidate = _worst_aspect(areas[start : end + 1], side)
            if candidate > worst:
                break
            worst = candidate
            end += 1
        row = areas[start:end]
        thickness = sum(row) / side
        if w > h:
            # Vertical strip at the left edge, items stacked top-down.
            offset = y
            for area in row:
                item = area / thickness
                rects.append(Rect(x, offset, thickness, item))
                offset += item
            x += thickness
            w -= thickness
        else:
            # Horizontal strip along the top edge, items left to right.
            offset = x
            for area in row:
                item = area / thickness
                rects.append(Rect(offset, y, item, thickness))
                offset += item
            y += thickness
            h -= thickness
        start = end
    return rects


def _inner_rect(rect: Rect, padding: float, label_height: float) -> Rect:
    return Rect(
        rect.x + padding,
        rect.y + padding + label_height,
        rect.w - 2 * padding,
        rect.h - 2 * padding - label_height,
    )


def layout_tree(
    tree: CompetencyTree,
    canvas_w: float = DEFAULT_CANVAS_WIDTH,
    canvas_h: float = DEFAULT_CANVAS_HEIGHT,
    padding: float = 2.0,
    label_height: float = LABEL_STRIP_HEIGHT,
) -> list[LayoutNode]:
    """Position a two-level competency tree on the canvas.

    Returns depth-1 container nodes followed by their depth-2 group
    leaves, in tree order. Zero-value nodes are dropped; an empty tree
    yields an empty layout.
    """
    if canvas_w <= 0 or canvas_h <= 0:
        raise ValueError("canvas dimensions must be positive")
    children = [child for child in tree.children if child.value > 0]
    if not children:
        return []

    nodes: list[LayoutNode] = []
    child_rects = squarify([c.value for c in children], Rect(0.0, 0.0, float(canvas_w), float(canvas_h)))
    for child, rect in zip(children, child_rects):
        nodes.append(LayoutNode(label=child.label, depth=1, rect=rect, value=child.value))
        groups = [g for g in child.children if g.value > 0]
        if not groups:
            continue
        inner = _inner_rect(rect, padding, label_height)
        if inner.w > 0 and inner.h > 0:
            group_rects = squarify([g.value for g in groups], inner)
        else:
            # Container too small for its interior; keep the nodes with
            # degenerate rects so counts stay consistent.
            group_rects = [Rect(rect.x, rect.y, 0.0, 0.0)] * len(groups)
        for group_node, group_rect in zip(groups, group_rects):
            nodes.append(
                LayoutNode(
                    label=child.label,
                    depth=2,
                    rect=group_rect,
                    value=group_node.value,
                    group=group_node.group,
                )
            )
    return nodes


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _truncate(label: str, width: float) -> str:
    limit = max(int(width // 7), 1)
    if len(label) <= limit:
        return label
    return label[: max(limit - 1, 1)] + "…"


def render_svg(
    nodes: Sequence[LayoutNode],
    width: float = DEFAULT_CANVAS_WIDTH,
    height: float = DEFAULT_CANVAS_HEIGHT,
    colors: Mapping[CompetencyGroup, str] | None = None,
    show_labels: bool = True,
    legend: bool = True,
    title: str | None = None,
) -> str:
    """Render layout nodes as a self-contained SVG 1.1 document.

    One ``<rect>`` per node: containers are outlined with a label strip,
    leaves are filled with their group color and carry a tooltip title.
    Output is byte-deterministic for identical inputs.
    """
    fill = dict(DEFAULT_COLORS)
    if colors:
        fill.update(colors)

    title_h = _TITLE_STRIP if title else 0.0
    legend_h = _LEGEND_STRIP if legend else 0.0
    svg_w = _fmt(width)
    svg_h = _fmt(height + title_h + legend_h)

    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{svg_w}" height="{svg_h}" viewBox="0 0 {svg_w} {svg_h}">'
    )
    out.append(
        f'<rect class="background" x="0" y="0" width="{svg_w}" height="{svg_h}" fill="#ffffff"/>'
    )
    if title:
        out.append(
            f'<text class="title" x="8" y="16" font-family="sans-serif" '
            f'font-size="14" font-weight="bold" fill="#111111">{escape(title)}</text>'
        )

    out.append(f'<g class="nodes" transform="translate(0,{_fmt(title_h)})">')
    for node in nodes:
        r = node.rect
        if node.depth == 1:
            out.append(
                f'<rect class="container" x="{_fmt(r.x)}" y="{_fmt(r.y)}" '
                f'width="{_fmt(r.w)}" height="{_fmt(r.h)}" '
                f'fill="none" stroke="#444444" stroke-width="1"/>'
            )
            if show_labels and r.w >= MIN_LABEL_WIDTH and r.h >= MIN_LABEL_HEIGHT:
                out.append(
                    f'<text class="label" x="{_fmt(r.x + 4)}" y="{_fmt(r.y + 12)}" '
                    f'font-family="sans-serif" font-size="11" fill="#111111">'
                    f"{escape(_truncate(node.label, r.w))}</text>"
                )
        else:
            color = fill[node.group] if node.group is not None else "#999999"
            group_name = node.group.display_name if node.group is not None else "?"
            tooltip = f"{node.label} \u2014 {group_name}: {node.value:g}"
            out.append(
                f'<rect class="leaf" x="{_fmt(r.x)}" y="{_fmt(r.y)}" '
                f'width="{_fmt(r.w)}" height="{_fmt(r.h)}" '
                f'fill={quoteattr(color)} stroke="#ffffff" stroke-width="0.5">'
                f"<title>{escape(tooltip)}</title></rect>"
            )
    out.append("</g>")

    if legend:
        ly = height + title_h + 7
        lx = 8.0
        for group in CompetencyGroup:
            out.append(
                f'<rect class="legend-swatch" x="{_fmt(lx)}" y="{_fmt(ly)}" '
                f'width="14" height="14" fill={quoteattr(fill[group])}/>'
            )
            out.append(
                f'<text class="legend-label" x="{_fmt(lx + 20)}" y="{_fmt(ly + 11)}" '
                f'font-family="sans-serif" font-size="12" fill="#111111">'
                f"{escape(group.display_name)}</text>"
            )
            lx += 24 + 8 * len(group.display_name) + 24
    out.append("</svg>")
    return "\n".join(out) + "\n"

"""Deterministic SVG rendering of a positioning."""

from __future__ import annotations

from fractions import Fraction

from .model import Positioning, decimal_str

_FILLS = ("#8ecae6", "#ffb703", "#90be6d", "#f28482", "#cdb4db", "#f6bd60")


def _num(v: Fraction) -> str:
    return decimal_str(v, 10)


def render_svg(pos: Positioning, size: int = 512) -> str:
    """One ``<rect>`` per rectangle plus a dashed bounding box.

    The viewBox is the bounding box with a 5% margin on each side; y is
    flipped so the drawing matches the usual upward y-axis.
    """
    x0, y0, x1, y1 = pos.bounds()
    p, q = x1 - x0, y1 - y0
    mx, my = p / 20, q / 20
    vb = (x0 - mx, -(y1 + my), p + 2 * mx, q + 2 * my)
    aspect = (q + 2 * my) / (p + 2 * mx)
    width = size
    height = max(1, round(size * aspect))
    stroke = _num(min(p, q) / 200)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" '
        f'viewBox="{" ".join(_num(v) for v in vb)}">',
    ]
    for i, (bx0, by0, bx1, by1) in enumerate(pos.boxes()):
        lines.append(
            f'  <rect id="r{i}" x="{_num(bx0)}" y="{_num(-by1)}" '
            f'width="{_num(bx1 - bx0)}" height="{_num(by1 - by0)}" '
            f'fill="{_FILLS[i % len(_FILLS)]}" stroke="#222" stroke-width="{stroke}"/>'
        )
    lines.append(
        f'  <rect id="bbox" x="{_num(x0)}" y="{_num(-y1)}" width="{_num(p)}" '
        f'height="{_num(q)}" fill="none" stroke="#d00" stroke-width="{stroke}" '
        f'stroke-dasharray="{_num(min(p, q) / 25)}"/>'
    )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

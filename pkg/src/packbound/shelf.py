"""Column (transposed shelf) packing into a horizontal strip of fixed height.

Rectangles are sorted by non-increasing width and stacked bottom-up into
columns of height at most ``a``; a column is as wide as its first member and
columns abut left to right.  This is next-fit decreasing height with the axes
swapped, so the strip width obeys ``b <= 2*S/a + w_max``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import DomainError, Positioning, PreconditionError, RectSet, measures, scalar


@dataclass(frozen=True)
class ShelfPacking:
    positioning: Positioning
    strip_height: Fraction
    achieved_width: Fraction

    def width_bound(self) -> Fraction:
        """The guaranteed ceiling 2*S/a + max width (0 for an empty batch)."""
        rects = self.positioning.rects
        if len(rects) == 0:
            return Fraction(0)
        s = sum((r.w * r.l for r in rects), Fraction(0))
        return 2 * s / self.strip_height + max(r.w for r in rects)


def pack_strip(rects: RectSet, a: Fraction) -> ShelfPacking:
    a = scalar(a)
    if a <= 0:
        raise DomainError(f"strip height must be positive, got {a}")
    for i, r in enumerate(rects):
        if r.l > a:
            raise PreconditionError(f"rectangle {i} of height {r.l} exceeds strip height {a}")
    order = sorted(range(len(rects)), key=lambda i: (-rects[i].w, i))
    origins: list = [None] * len(rects)
    col_x = Fraction(0)
    col_w = None
    col_h = Fraction(0)
    for i in order:
        r = rects[i]
        if col_w is None:
            col_w = r.w
        elif col_h + r.l > a:
            col_x += col_w
            col_w, col_h = r.w, Fraction(0)
        origins[i] = (col_x, col_h)
        col_h += r.l
    width = col_x + col_w if col_w is not None else Fraction(0)
    return ShelfPacking(Positioning(rects, tuple(origins)), a, width)


def append_right(base: Positioning, batch: ShelfPacking) -> Positioning:
    """Place ``batch`` flush against the right edge of ``base``, bottoms aligned."""
    x0, y0, x1, y1 = base.bounds()
    if batch.strip_height > y1 - y0:
        raise PreconditionError(
            f"strip height {batch.strip_height} exceeds base height {y1 - y0}"
        )
    if len(batch.positioning) == 0:
        return base
    rects = RectSet(base.rects.rects + batch.positioning.rects.rects)
    moved = tuple((x + x1, y + y0) for x, y in batch.positioning.origins)
    return Positioning(rects, base.origins + moved)


def composed_area(base: Positioning, batch: ShelfPacking) -> Fraction:
    """T of the composition, (p(base) + b) * q(base)."""
    m = measures(base)
    return (m.p + batch.achieved_width) * m.q

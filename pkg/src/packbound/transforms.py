"""Constructive edits of positionings: retraction, extension, squeeze, tail removal, scaling.

All functions return new objects; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, overload

from .model import DomainError, Positioning, Rect, RectSet, scalar


@dataclass(frozen=True)
class Perturbation:
    """Per-rectangle side changes (dw, dl) applied to a rectangle set."""

    deltas: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "deltas", tuple((scalar(a), scalar(b)) for a, b in self.deltas)
        )

    @classmethod
    def zero(cls, n: int) -> "Perturbation":
        return cls(tuple((Fraction(0), Fraction(0)) for _ in range(n)))

    def check(self, rects: RectSet) -> None:
        """Raise unless every perturbed side stays positive."""
        if len(self.deltas) != len(rects):
            raise DomainError(
                f"perturbation has {len(self.deltas)} entries for {len(rects)} rectangles"
            )
        for i, (r, (dw, dl)) in enumerate(zip(rects, self.deltas)):
            if r.w + dw <= 0 or r.l + dl <= 0:
                raise DomainError(f"perturbed rectangle {i} has a nonpositive side")

    def apply(self, rects: RectSet) -> RectSet:
        self.check(rects)
        return RectSet(tuple(Rect(r.w + dw, r.l + dl) for r, (dw, dl) in zip(rects, self.deltas)))

    def scaled(self, c: Fraction) -> "Perturbation":
        return Perturbation(tuple((dw * c, dl * c) for dw, dl in self.deltas))

    @property
    def abs_dw(self) -> Fraction:
        return sum((abs(dw) for dw, _ in self.deltas), Fraction(0))

    @property
    def abs_dl(self) -> Fraction:
        return sum((abs(dl) for _, dl in self.deltas), Fraction(0))


def _check_index(pos: Positioning, i: int) -> None:
    if not 0 <= i < len(pos):
        raise DomainError(f"rectangle index {i} out of range")


def _resize(rects: RectSet, i: int, w: Fraction, l: Fraction) -> RectSet:
    rs = list(rects.rects)
    rs[i] = Rect(w, l)
    return RectSet(tuple(rs))


def retract_x(pos: Positioning, i: int, dx: Fraction) -> Positioning:
    """Shrink rectangle ``i`` by ``dx`` along x, keeping its lower-left corner."""
    _check_index(pos, i)
    dx = scalar(dx)
    r = pos.rects[i]
    if not 0 < dx < r.w:
        raise DomainError(f"retraction needs 0 < dx < {r.w}, got {dx}")
    return Positioning(_resize(pos.rects, i, r.w - dx, r.l), pos.origins)


def retract_y(pos: Positioning, i: int, dy: Fraction) -> Positioning:
    _check_index(pos, i)
    dy = scalar(dy)
    r = pos.rects[i]
    if not 0 < dy < r.l:
        raise DomainError(f"retraction needs 0 < dy < {r.l}, got {dy}")
    return Positioning(_resize(pos.rects, i, r.w, r.l - dy), pos.origins)


def extend_x(pos: Positioning, i: int, dx: Fraction) -> Positioning:
    """Grow rectangle ``i`` by ``dx`` along x.

    Every other rectangle whose left edge is at or beyond the old right edge
    of ``i`` moves right by ``dx``; the rest stay put.
    """
    _check_index(pos, i)
    dx = scalar(dx)
    if dx <= 0:
        raise DomainError(f"extension needs dx > 0, got {dx}")
    r = pos.rects[i]
    edge = pos.origins[i][0] + r.w
    origins = tuple(
        (x + dx, y) if k != i and x >= edge else (x, y)
        for k, (x, y) in enumerate(pos.origins)
    )
    return Positioning(_resize(pos.rects, i, r.w + dx, r.l), origins)


def extend_y(pos: Positioning, i: int, dy: Fraction) -> Positioning:
    _check_index(pos, i)
    dy = scalar(dy)
    if dy <= 0:
        raise DomainError(f"extension needs dy > 0, got {dy}")
    r = pos.rects[i]
    edge = pos.origins[i][1] + r.l
    origins = tuple(
        (x, y + dy) if k != i and y >= edge else (x, y)
        for k, (x, y) in enumerate(pos.origins)
    )
    return Positioning(_resize(pos.rects, i, r.w, r.l + dy), origins)


def extend_xy(pos: Positioning, i: int, dx: Fraction, dy: Fraction) -> Positioning:
    """Extension along x followed by extension of the same rectangle along y."""
    return extend_y(extend_x(pos, i, dx), i, dy)


def _gap_shifts(intervals: Sequence[tuple[Fraction, Fraction]]) -> list[Fraction]:
    """Leftward shift for each interval that closes every gap in their union."""
    order = sorted(range(len(intervals)), key=lambda k: (intervals[k][0], k))
    shifts = [Fraction(0)] * len(intervals)
    removed = Fraction(0)
    reach = None
    for k in order:
        lo, hi = intervals[k]
        if reach is not None and lo > reach:
            removed += lo - reach
        shifts[k] = removed
        reach = hi if reach is None else max(reach, hi)
    return shifts


def squeeze_x(pos: Positioning) -> Positioning:
    """Remove the gaps of the x-projection, sliding right-hand parts leftwards."""
    if len(pos) == 0:
        return pos
    boxes = pos.boxes()
    shifts = _gap_shifts([(b[0], b[2]) for b in boxes])
    return Positioning(
        pos.rects, tuple((x - s, y) for (x, y), s in zip(pos.origins, shifts))
    )


def squeeze_y(pos: Positioning) -> Positioning:
    if len(pos) == 0:
        return pos
    boxes = pos.boxes()
    shifts = _gap_shifts([(b[1], b[3]) for b in boxes])
    return Positioning(
        pos.rects, tuple((x, y - s) for (x, y), s in zip(pos.origins, shifts))
    )


def remove_tail(pos: Positioning, n: int) -> Positioning:
    """Keep only the first ``n`` rectangles, at their current coordinates."""
    if not 1 <= n <= len(pos):
        raise DomainError(f"prefix length {n} outside 1..{len(pos)}")
    return Positioning(pos.rects.prefix(n), pos.origins[:n])


@overload
def scale(obj: RectSet, c: Fraction) -> RectSet: ...
@overload
def scale(obj: Positioning, c: Fraction) -> Positioning: ...


def scale(obj, c):
    """Multiply every side (and coordinate) by ``c`` > 0."""
    c = scalar(c)
    if c <= 0:
        raise DomainError(f"scale factor must be positive, got {c}")
    if isinstance(obj, RectSet):
        return RectSet(tuple(Rect(r.w * c, r.l * c) for r in obj))
    if isinstance(obj, Positioning):
        return Positioning(
            scale(obj.rects, c), tuple((x * c, y * c) for x, y in obj.origins)
        )
    raise DomainError(f"cannot scale {type(obj).__name__}")

"""Exact-rational rectangles, rectangle sets, positionings and their measures.

Every quantity is a :class:`fractions.Fraction`; comparisons are exact.
Orientation is fixed: side ``w`` always runs along the x-axis, ``l`` along y.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Fraction
ScalarLike = Union[Fraction, int, str]


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(ValueError):
    """A documented precondition of an operation does not hold."""


class UnavailableError(RuntimeError):
    """A result that needs a proven optimum was requested without one."""


def scalar(value: ScalarLike) -> Fraction:
    """Parse an int, Fraction, ``"p/q"`` or decimal string into a Fraction.

    Floats are rejected: they cannot carry the exactness the bounds rely on.
    """
    if isinstance(value, bool):
        raise DomainError("booleans are not scalars")
    if isinstance(value, float):
        raise DomainError(f"float {value!r} is not an exact scalar; pass a string")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse scalar {value!r}") from exc
    raise DomainError(f"unsupported scalar type {type(value).__name__}")


def fmt(value: Fraction) -> str:
    """Canonical exact string: ``"3"`` or ``"5/6"``."""
    return str(value)


def decimal_str(value: Fraction, digits: int = 12) -> str:
    """Decimal echo of an exact value with ``digits`` significant digits.

    Computed from the exact numerator and denominator; no float round trip.
    """
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    v = abs(value)
    # exponent e with 10**e <= v < 10**(e+1)
    e = len(str(v.numerator)) - len(str(v.denominator))
    if Fraction(10) ** e > v:
        e -= 1
    shift = digits - 1 - e
    scaled = v * Fraction(10) ** shift
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r >= scaled.denominator:
        q += 1
    if len(str(q)) > digits:  # rounding carried into a new digit
        q //= 10
        shift -= 1
    s = str(q)
    if shift <= 0:
        return sign + s + "0" * (-shift)
    if shift >= len(s):
        s = "0" * (shift - len(s) + 1) + s
    head, tail = s[: len(s) - shift], s[len(s) - shift :]
    tail = tail.rstrip("0")
    return sign + head + ("." + tail if tail else "")


@dataclass(frozen=True)
class Rect:
    w: Fraction
    l: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "w", scalar(self.w))
        object.__setattr__(self, "l", scalar(self.l))
        if self.w <= 0 or self.l <= 0:
            raise DomainError(f"rectangle sides must be positive, got {self.w} x {self.l}")

    @property
    def area(self) -> Fraction:
        return self.w * self.l


@dataclass(frozen=True)
class RectSet:
    rects: tuple[Rect, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rects", tuple(self.rects))

    @classmethod
    def of(cls, pairs: Iterable[tuple[ScalarLike, ScalarLike]]) -> "RectSet":
        return cls(tuple(Rect(scalar(w), scalar(l)) for w, l in pairs))

    def __len__(self) -> int:
        return len(self.rects)

    def __iter__(self):
        return iter(self.rects)

    def __getitem__(self, i: int) -> Rect:
        return self.rects[i]

    @property
    def widths(self) -> list[Fraction]:
        return [r.w for r in self.rects]

    @property
    def heights(self) -> list[Fraction]:
        return [r.l for r in self.rects]

    def prefix(self, n: int) -> "RectSet":
        return RectSet(self.rects[:n])


def total_area(rects: RectSet) -> Fraction:
    """S(A): the summed area of all rectangles."""
    if len(rects) == 0:
        raise DomainError("total area of an empty rectangle set")
    return sum((r.w * r.l for r in rects), Fraction(0))


@dataclass(frozen=True)
class Positioning:
    """Lower-left corners for each rectangle of ``rects``, by index."""

    rects: RectSet
    origins: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        origins = tuple((scalar(x), scalar(y)) for x, y in self.origins)
        object.__setattr__(self, "origins", origins)
        if len(origins) != len(self.rects):
            raise DomainError(
                f"{len(origins)} origins for {len(self.rects)} rectangles"
            )

    def __len__(self) -> int:
        return len(self.rects)

    def box(self, i: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """(x-, y-, x+, y+) of rectangle ``i``."""
        x, y = self.origins[i]
        r = self.rects[i]
        return x, y, x + r.w, y + r.l

    def boxes(self) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
        return [self.box(i) for i in range(len(self))]

    def bounds(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        bs = self.boxes()
        if not bs:
            raise DomainError("empty positioning has no bounding box")
        return (
            min(b[0] for b in bs),
            min(b[1] for b in bs),
            max(b[2] for b in bs),
            max(b[3] for b in bs),
        )

    def translated(self, dx: Fraction, dy: Fraction) -> "Positioning":
        return Positioning(self.rects, tuple((x + dx, y + dy) for x, y in self.origins))

    def normalized(self) -> "Positioning":
        """Translate so the bounding box's lower-left corner is the origin."""
        x0, y0, _, _ = self.bounds()
        return self.translated(-x0, -y0)


@dataclass(frozen=True)
class Measures:
    p: Fraction
    q: Fraction
    T: Fraction
    eta: Fraction


def measures(pos: Positioning) -> Measures:
    """Width p, height q, bounding area T = p*q and efficiency S/T."""
    x0, y0, x1, y1 = pos.bounds()
    p, q = x1 - x0, y1 - y0
    t = p * q
    return Measures(p, q, t, total_area(pos.rects) / t)


def _open_overlap(a0: Fraction, a1: Fraction, b0: Fraction, b1: Fraction) -> bool:
    return a0 < b1 and b0 < a1


def validate(pos: Positioning) -> list[str]:
    """Return every violation of the positioning rules; empty means valid.

    Touching edges are legal, only open interiors may not intersect.
    """
    problems: list[str] = []
    for i, r in enumerate(pos.rects):
        if r.w <= 0 or r.l <= 0:
            problems.append(f"nonpositive({i})")
    boxes = pos.boxes()
    for i in range(len(boxes)):
        xi0, yi0, xi1, yi1 = boxes[i]
        for j in range(i + 1, len(boxes)):
            xj0, yj0, xj1, yj1 = boxes[j]
            if _open_overlap(xi0, xi1, xj0, xj1) and _open_overlap(yi0, yi1, yj0, yj1):
                problems.append(f"overlap({i},{j})")
    return problems


def is_valid(pos: Positioning) -> bool:
    return not validate(pos)


# JSON wire formats; scalars travel as exact strings.

def rectset_to_json(rects: RectSet) -> dict:
    return {"rects": [{"w": fmt(r.w), "l": fmt(r.l)} for r in rects]}


def rectset_from_json(doc: dict) -> RectSet:
    try:
        items = doc["rects"]
        return RectSet(tuple(Rect(scalar(it["w"]), scalar(it["l"])) for it in items))
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed rectangle-set document: {exc}") from exc


def positioning_to_json(pos: Positioning) -> dict:
    doc = rectset_to_json(pos.rects)
    doc["origins"] = [{"x": fmt(x), "y": fmt(y)} for x, y in pos.origins]
    return doc


def positioning_from_json(doc: dict) -> Positioning:
    rects = rectset_from_json(doc)
    try:
        origins = tuple((scalar(o["x"]), scalar(o["y"])) for o in doc["origins"])
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed positioning document: {exc}") from exc
    return Positioning(rects, origins)


def row_positioning(rects: RectSet | Sequence[Rect]) -> Positioning:
    """All rectangles side by side along the x-axis, bottoms aligned."""
    rs = rects if isinstance(rects, RectSet) else RectSet(tuple(rects))
    x = Fraction(0)
    origins = []
    for r in rs:
        origins.append((x, Fraction(0)))
        x += r.w
    return Positioning(rs, tuple(origins))

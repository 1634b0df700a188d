"""Infinite (and finite) rectangle families with directional rational enclosures.

Irrational sides are never floats here: each is a pair ``lo <= exact <= hi`` of
rationals whose gap shrinks like ``2**-precision_bits``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .model import DomainError, Rect, RectSet, fmt, scalar

DEFAULT_PRECISION_BITS = 64


class ProfileError(ValueError):
    """The family violates the regularity conditions (C1/C2) the bounds need."""


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of a nonnegative integer."""
    if n < 0 or k < 1:
        raise DomainError("iroot needs n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def root_enclosure(value: Fraction, k: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= value**(1/k) <= hi``, equal when the root is exact."""
    value = Fraction(value)
    if value < 0:
        raise DomainError("root of a negative value")
    a, b = value.numerator, value.denominator
    # value**(1/k) = (a * b**(k-1))**(1/k) / b
    m = a * b ** (k - 1) << (k * bits)
    r = iroot(m, k)
    scale = b << bits
    lo = Fraction(r, scale)
    hi = lo if r ** k == m else Fraction(r + 1, scale)
    return lo, hi


def power_enclosure(base: int, t: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Enclose ``base**t`` for a positive integer base and rational exponent."""
    t = Fraction(t)
    if base <= 0:
        raise DomainError("power enclosure needs a positive integer base")
    p, q = abs(t.numerator), t.denominator
    lo, hi = root_enclosure(Fraction(base) ** p, q, bits)
    if t < 0:
        return 1 / hi, 1 / lo
    return lo, hi


@dataclass(frozen=True)
class ProfileReport:
    c1: bool
    c2: bool
    details: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.c1 and self.c2

    def to_json(self) -> dict:
        return {"C1": self.c1, "C2": self.c2, "details": list(self.details)}


class Family:
    """Base class: rectangle ``i`` (1-based) is enclosed by ``rect_lo(i)``/``rect_hi(i)``."""

    kind = "abstract"
    length: Optional[int] = None  # None means infinite

    def rect_lo(self, i: int) -> Rect:
        raise NotImplementedError

    def rect_hi(self, i: int) -> Rect:
        raise NotImplementedError

    @property
    def exact(self) -> bool:
        return False

    def _check_n(self, n: int) -> None:
        if n < 1:
            raise DomainError("prefix length must be at least 1")
        if self.length is not None and n > self.length:
            raise DomainError(f"prefix {n} longer than the family ({self.length})")

    def prefix_lo(self, n: int) -> RectSet:
        self._check_n(n)
        return RectSet(tuple(self.rect_lo(i) for i in range(1, n + 1)))

    def prefix_hi(self, n: int) -> RectSet:
        self._check_n(n)
        return RectSet(tuple(self.rect_hi(i) for i in range(1, n + 1)))

    def prefix_area(self, n: int) -> tuple[Fraction, Fraction]:
        lo = sum((r.area for r in self.prefix_lo(n)), Fraction(0))
        hi = sum((r.area for r in self.prefix_hi(n)), Fraction(0))
        return lo, hi

    def tail_area(self, n: int) -> tuple[Fraction, Fraction]:
        """Bounds on the area of rectangles n+1, n+2, ..."""
        raise NotImplementedError

    def tail_sq(self, n: int) -> tuple[Fraction, Fraction]:
        """Bounds on the sum of squared long sides l_k**2 over k > n."""
        raise NotImplementedError

    def tail_wmax_hi(self, n: int) -> Fraction:
        """Upper bound on every tail width; w_k <= l_k <= l_{n+1} under C2."""
        return self.rect_hi(n + 1).l

    def total_area(self, n: int) -> tuple[Fraction, Fraction]:
        plo, phi = self.prefix_area(n)
        tlo, thi = self.tail_area(n)
        return plo + tlo, phi + thi

    def has_tail(self, n: int) -> bool:
        return self.length is None or n < self.length

    def c1_certified(self) -> bool:
        raise NotImplementedError

    def c2_certified(self) -> bool:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


class Harmonic(Family):
    """Rectangle i is 1/(i+1) wide and 1/i tall; total area telescopes to 1."""

    kind = "harmonic"

    @property
    def exact(self) -> bool:
        return True

    def rect_lo(self, i: int) -> Rect:
        return Rect(Fraction(1, i + 1), Fraction(1, i))

    rect_hi = rect_lo

    def tail_area(self, n: int) -> tuple[Fraction, Fraction]:
        s = Fraction(1, n + 1)
        return s, s

    def tail_sq(self, n: int) -> tuple[Fraction, Fraction]:
        # integral test: 1/(n+1) < sum_{k>n} 1/k^2 < 1/n
        return Fraction(1, n + 1), Fraction(1, n)

    def tail_wmax_hi(self, n: int) -> Fraction:
        return Fraction(1, n + 2)

    def c1_certified(self) -> bool:
        return True

    def c2_certified(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"family": "harmonic"}


class PowerSquares(Family):
    """Squares of side i**-t."""

    kind = "power_squares"

    def __init__(self, t: Fraction, precision_bits: int = DEFAULT_PRECISION_BITS):
        self.t = scalar(t)
        if self.t <= 0:
            raise DomainError(f"exponent must be positive, got {self.t}")
        if precision_bits < 1:
            raise DomainError("precision_bits must be positive")
        self.bits = precision_bits
        self._cache: dict[int, tuple[Fraction, Fraction]] = {}

    def side(self, i: int) -> tuple[Fraction, Fraction]:
        if i < 1:
            raise DomainError("family index starts at 1")
        if i not in self._cache:
            self._cache[i] = power_enclosure(i, -self.t, self.bits)
        return self._cache[i]

    def rect_lo(self, i: int) -> Rect:
        s = self.side(i)[0]
        return Rect(s, s)

    def rect_hi(self, i: int) -> Rect:
        s = self.side(i)[1]
        return Rect(s, s)

    def tail_area(self, n: int) -> tuple[Fraction, Fraction]:
        if not self.c1_certified():
            raise ProfileError(f"C1 fails for t = {self.t}: sum of squared sides diverges")
        # integral test for sum_{k>n} k^(-2t), decreasing summand
        e = 1 - 2 * self.t
        c = 2 * self.t - 1
        lo = power_enclosure(n + 1, e, self.bits)[0] / c
        hi = power_enclosure(n, e, self.bits)[1] / c
        return lo, hi

    tail_sq = tail_area

    def c1_certified(self) -> bool:
        return self.t > Fraction(1, 2)

    def c2_certified(self) -> bool:
        # squares, and i**-t decreases for t > 0
        return True

    def to_json(self) -> dict:
        return {"family": "power_squares", "t": fmt(self.t), "precision_bits": self.bits}


class Custom(Family):
    """A finite, explicitly listed family (exact sides)."""

    kind = "custom"

    def __init__(self, rects: RectSet | Sequence[Rect]):
        rs = rects if isinstance(rects, RectSet) else RectSet(tuple(rects))
        if len(rs) == 0:
            raise DomainError("custom family needs at least one rectangle")
        self.rects = rs
        self.length = len(rs)

    @property
    def exact(self) -> bool:
        return True

    def rect_lo(self, i: int) -> Rect:
        return self.rects[i - 1]

    rect_hi = rect_lo

    def tail_area(self, n: int) -> tuple[Fraction, Fraction]:
        s = sum((r.area for r in self.rects.rects[n:]), Fraction(0))
        return s, s

    def tail_sq(self, n: int) -> tuple[Fraction, Fraction]:
        s = sum((r.l * r.l for r in self.rects.rects[n:]), Fraction(0))
        return s, s

    def tail_wmax_hi(self, n: int) -> Fraction:
        return max(r.w for r in self.rects.rects[n:])

    def c1_certified(self) -> bool:
        return True

    def c2_certified(self) -> bool:
        return not _c2_violations(self.rects)

    def to_json(self) -> dict:
        return {
            "family": "custom",
            "rects": [{"w": fmt(r.w), "l": fmt(r.l)} for r in self.rects],
        }


def harmonic(n: int) -> RectSet:
    """First ``n`` rectangles 1/(i+1) x 1/i of the harmonic family."""
    if n < 1:
        raise DomainError("n must be at least 1")
    return Harmonic().prefix_lo(n)


def power_squares(
    t: Fraction, n: int, precision_bits: int = DEFAULT_PRECISION_BITS
) -> tuple[RectSet, RectSet]:
    """Inner and outer rational enclosures of the first ``n`` squares of side i**-t."""
    t = scalar(t)
    if t <= Fraction(1, 2):
        raise ProfileError(f"C1 fails for t = {t}: need t > 1/2")
    if t > Fraction(3, 5):
        warnings.warn(f"t = {t} lies outside (1/2, 3/5]", stacklevel=2)
    fam = PowerSquares(t, precision_bits)
    return fam.prefix_lo(n), fam.prefix_hi(n)


def _c2_violations(rects: RectSet) -> list[str]:
    out = []
    for i, r in enumerate(rects):
        if r.w > r.l:
            out.append(f"C2: rectangle {i + 1} has w > l ({r.w} > {r.l})")
        if i > 0 and r.l > rects[i - 1].l:
            out.append(f"C2: l increases at rectangle {i + 1}")
    return out


def validate_profile(obj: RectSet | Family, check_n: int = 32) -> ProfileReport:
    """Check C1 (finite sum of l^2) and C2 (w <= l, l nonincreasing)."""
    if isinstance(obj, RectSet):
        problems = _c2_violations(obj)
        return ProfileReport(True, not problems, tuple(problems))
    details: list[str] = []
    c1 = obj.c1_certified()
    if c1:
        total_sq = obj.rect_hi(1).l ** 2 + obj.tail_sq(1)[1]
        details.append(f"C1: sum of l^2 <= {fmt(total_sq)}")
    else:
        details.append("C1: sum of l^2 diverges")
    c2 = obj.c2_certified()
    if isinstance(obj, Custom):
        details.extend(_c2_violations(obj.rects))
    elif c2:
        limit = check_n if obj.length is None else min(check_n, obj.length)
        for i in range(1, limit + 1):
            lo, hi = obj.rect_lo(i), obj.rect_hi(i)
            if hi.w > hi.l and lo.w > lo.l:
                c2 = False
                details.append(f"C2: rectangle {i} has w > l")
            if i > 1 and lo.l > obj.rect_hi(i - 1).l:
                c2 = False
                details.append(f"C2: l increases at rectangle {i}")
    if c2:
        details.append("C2: w <= l and l nonincreasing")
    return ProfileReport(c1, c2, tuple(details))


def family_from_json(doc: dict) -> Family:
    kind = doc.get("family")
    if kind == "harmonic":
        return Harmonic()
    if kind == "power_squares":
        return PowerSquares(
            scalar(doc["t"]), int(doc.get("precision_bits", DEFAULT_PRECISION_BITS))
        )
    if kind == "custom":
        return Custom(RectSet(tuple(Rect(scalar(r["w"]), scalar(r["l"])) for r in doc["rects"])))
    raise DomainError(f"unknown family {kind!r}")

"""Explicit error terms for best packing efficiency, and the intervals built from them.

Every function returns exact rationals.  Where a bound is evaluated at an
irrational point (a square root), a rational point on the safe side is used
instead; the inequalities involved hold at every admissible point, so this
costs tightness, never soundness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional

from .families import DEFAULT_PRECISION_BITS, Family, ProfileError, root_enclosure, validate_profile
from .model import (
    PreconditionError,
    RectSet,
    UnavailableError,
    decimal_str,
    fmt,
    measures,
    total_area,
)
from .shelf import append_right, pack_strip
from .solver import Budget, SolveResult, canonical_best, min_bounding_area
from .transforms import Perturbation

Mode = Literal["analytic", "constructive"]
MODES = ("analytic", "constructive")


@dataclass(frozen=True)
class BoundReport:
    kind: str
    bound: Optional[Fraction]
    inputs: dict
    preconditions: tuple[str, ...] = ()

    def to_json(self, digits: int = 12) -> dict:
        doc = {
            "kind": self.kind,
            "bound": None if self.bound is None else fmt(self.bound),
            "inputs": self.inputs,
            "preconditions": list(self.preconditions),
        }
        if self.bound is not None:
            doc["bound_decimal"] = decimal_str(self.bound, digits)
        return doc


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    verified: tuple[str, ...] = ()
    widened: bool = False

    def __post_init__(self) -> None:
        if not 0 < self.lo <= self.hi:
            raise ValueError(f"ill-formed interval [{self.lo}, {self.hi}]")

    def intersects(self, other: "Interval") -> bool:
        return max(self.lo, other.lo) <= min(self.hi, other.hi)

    def __contains__(self, value: Fraction) -> bool:
        return self.lo <= value <= self.hi

    def to_json(self, digits: int = 12) -> dict:
        return {
            "lo": fmt(self.lo),
            "hi": fmt(self.hi),
            "lo_decimal": decimal_str(self.lo, digits),
            "hi_decimal": decimal_str(self.hi, digits),
            "verified": list(self.verified),
            "widened": self.widened,
        }


def lemma2_p_bound(rects: RectSet, d: Perturbation) -> Fraction:
    """Ceiling on the width of any optimal positioning of the perturbed set."""
    d.check(rects)
    return sum(rects.widths, Fraction(0)) + d.abs_dw


def lemma2_q_bound(rects: RectSet, d: Perturbation) -> Fraction:
    d.check(rects)
    return sum(rects.heights, Fraction(0)) + d.abs_dl


def lemma3_bound(rects: RectSet, d: Perturbation) -> Fraction:
    """Ceiling on |T0(A + d) - T0(A)|, valid for every admissible perturbation."""
    d.check(rects)
    sw = sum(rects.widths, Fraction(0))
    sl = sum(rects.heights, Fraction(0))
    dw, dl = d.abs_dw, d.abs_dl
    return (sl + dl) * dw + (sw + dw) * dl + dw * dl


def eta_modulus(
    rects: RectSet,
    d: Perturbation,
    t0: Fraction | None = None,
    budget: Budget | None = None,
) -> Optional[Fraction]:
    """Certified ceiling on |eta0(A + d) - eta0(A)|.

    Uses S'/T' - S/T = ((S' - S) T - S (T' - T)) / (T T') with |T' - T|
    replaced by :func:`lemma3_bound` and T' by its lower bound
    max(S', T - that bound).  ``None`` signals that no finite bound results.
    """
    d.check(rects)
    if t0 is None:
        res = min_bounding_area(rects, budget)
        if not res.proven_optimal:
            raise UnavailableError("T0 of the base set is not proven")
        t0 = res.t0
    s = total_area(rects)
    s2 = total_area(d.apply(rects))
    dt = lemma3_bound(rects, d)
    t_lo = max(s2, t0 - dt)
    if t_lo <= 0:
        return None
    return (abs(s2 - s) * t0 + s * dt) / (t0 * t_lo)


@dataclass(frozen=True)
class TailData:
    """Inputs of the tail estimate for the rectangles beyond a prefix of length n.

    ``s_tail`` and ``r_n`` are upper bounds on the tail area and on the tail's
    sum of squared long sides; ``q_prefix``/``t0_prefix`` describe the prefix
    positioning the tail box is appended to.
    """

    n: int
    s_tail: Fraction
    r_n: Fraction
    l_next: Fraction
    w1: Fraction
    q_prefix: Fraction
    t0_prefix: Fraction
    w_max_tail: Optional[Fraction] = None

    def __post_init__(self) -> None:
        for name in ("s_tail", "r_n", "l_next", "w1", "q_prefix", "t0_prefix"):
            if getattr(self, name) <= 0:
                raise PreconditionError(f"tail data field {name} must be positive")
        if self.r_n < self.l_next ** 2:
            raise PreconditionError("r_n must dominate l_next**2")

    def to_json(self) -> dict:
        doc = {
            "n": self.n,
            "s_tail": fmt(self.s_tail),
            "r_n": fmt(self.r_n),
            "l_next": fmt(self.l_next),
            "w1": fmt(self.w1),
            "q_prefix": fmt(self.q_prefix),
            "t0_prefix": fmt(self.t0_prefix),
        }
        if self.w_max_tail is not None:
            doc["w_max_tail"] = fmt(self.w_max_tail)
        return doc


def _check_admissible(td: TailData) -> None:
    if td.l_next > td.q_prefix:
        raise PreconditionError(
            f"n not sufficiently large: no strip height a with l_next={td.l_next} "
            f"<= a <= q_prefix={td.q_prefix}"
        )


def strip_height(td: TailData, mode: Mode = "analytic", bits: int = DEFAULT_PRECISION_BITS) -> Fraction:
    """Rational strip height at which the tail bound is evaluated."""
    _check_admissible(td)
    if mode == "constructive":
        # 2S/a + w_max decreases in a
        return td.q_prefix
    if mode != "analytic":
        raise ValueError(f"unknown mode {mode!r}")
    # (2S + a^2/8)/a is least at a = 4 sqrt(S); take a rational at or above it
    a = root_enclosure(16 * td.s_tail, 2, bits)[1]
    return min(max(a, td.l_next), td.q_prefix)


def tail_bound_at(td: TailData, a: Fraction, mode: Mode = "analytic") -> Fraction:
    """The tail estimate at a given admissible strip height ``a``."""
    _check_admissible(td)
    if not td.l_next <= a <= td.q_prefix:
        raise PreconditionError(f"strip height {a} outside [{td.l_next}, {td.q_prefix}]")
    if mode == "analytic":
        return td.q_prefix * (2 * td.s_tail + a * a / 8) / a
    if mode == "constructive":
        if td.w_max_tail is None:
            raise PreconditionError("constructive mode needs w_max_tail")
        return td.q_prefix * (2 * td.s_tail / a + td.w_max_tail)
    raise ValueError(f"unknown mode {mode!r}")


def tail_bound(td: TailData, mode: Mode = "analytic", bits: int = DEFAULT_PRECISION_BITS) -> Fraction:
    """Upper bound on T0(A) - T0(A^n), i.e. the extra area the tail can cost.

    ``analytic`` uses the (2S + a^2/8)/a strip width guarantee for the tail box;
    ``constructive`` uses 2S/a + w_max, which :func:`pack_strip` actually attains.
    """
    return tail_bound_at(td, strip_height(td, mode, bits), mode)


def sqrt_tail_estimate(td: TailData, bits: int = DEFAULT_PRECISION_BITS) -> Fraction:
    """Rational ceiling of T0(A^n) * sqrt(R_n) / w1, the coarser closed form."""
    return td.t0_prefix * root_enclosure(td.r_n, 2, bits)[1] / td.w1


def tail_data_for_batch(prefix: SolveResult, batch: RectSet) -> TailData:
    """Tail inputs for a finite batch appended to a solved prefix."""
    q = measures(prefix.best).q
    rs = prefix.best.rects
    return TailData(
        n=len(rs),
        s_tail=total_area(batch),
        r_n=sum((r.l * r.l for r in batch), Fraction(0)),
        l_next=max(r.l for r in batch),
        w1=rs[0].w,
        q_prefix=q,
        t0_prefix=prefix.t0,
        w_max_tail=max(r.w for r in batch),
    )


@dataclass(frozen=True)
class ChainCheck:
    n: int
    m: int
    t0_n: Fraction
    t0_m_lo: Fraction
    t0_m_hi: Fraction
    bound: Fraction
    proven_n: bool
    proven_m: bool

    @property
    def holds(self) -> bool:
        return self.t0_n <= self.t0_m_hi and self.t0_m_hi <= self.t0_n + self.bound


def prefix_chain(rects: RectSet, n: int, m: int, budget: Budget | None = None) -> ChainCheck:
    """Check T0(A^n) <= T0(A^m) <= T0(A^n) + constructive tail bound for n < m.

    The m-prefix search is seeded with the composition it is compared against,
    so even a budget-limited solve reports an upper bound inside the chain.
    """
    if not 1 <= n < m <= len(rects):
        raise PreconditionError(f"need 1 <= n < m <= {len(rects)}")
    pre = min_bounding_area(rects.prefix(n), budget)
    batch = RectSet(rects.rects[n:m])
    td = tail_data_for_batch(pre, batch)
    bound = tail_bound(td, "constructive")
    packed = pack_strip(batch, strip_height(td, "constructive"))
    composed = append_right(pre.best, packed)
    full = min_bounding_area(rects.prefix(m), budget, hints=[composed])
    t0_m_lo = max(full.lower_bound, pre.lower_bound)
    return ChainCheck(n, m, pre.t0, t0_m_lo, full.t0, bound, pre.proven_optimal, full.proven_optimal)


def eta_interval(
    family: Family,
    n: int,
    mode: Mode = "analytic",
    budget: Budget | None = None,
    bits: int = DEFAULT_PRECISION_BITS,
) -> Interval:
    """Two-sided enclosure of eta0 of the whole family from its n-prefix.

    Upper end: T0(A) >= T0(A^n) >= T0(rounded-down prefix), so
    eta0 <= S_up / T0_lo.  Lower end: the rounded-up prefix's best packing plus
    a tail box on its right gives T0(A) <= T0_up + tail bound.
    """
    report = validate_profile(family)
    if not report.ok:
        raise ProfileError("; ".join(report.details) or "C1/C2 not satisfied")
    verified = list(report.details)

    lo_set, hi_set = family.prefix_lo(n), family.prefix_hi(n)
    res_lo = min_bounding_area(lo_set, budget)
    res_hi = res_lo if family.exact else min_bounding_area(hi_set, budget)
    widened = not (res_lo.proven_optimal and res_hi.proven_optimal)
    t0_lo = res_lo.lower_bound
    t0_up = res_hi.t0
    verified.append(
        f"prefix {n}: T0 in [{fmt(t0_lo)}, {fmt(t0_up)}]"
        + ("" if not widened else " (solver budget-limited; certified bounds used)")
    )

    s_lo, s_hi = family.total_area(n) if family.has_tail(n) else family.prefix_area(n)
    hi = min(Fraction(1), s_hi / t0_lo)
    if not family.has_tail(n):
        lo = s_lo / t0_up
        verified.append("no tail: family is finite and fully solved")
        return Interval(lo, hi, tuple(verified), widened)

    m_hi = measures(res_hi.best)
    _, thi = family.tail_area(n)
    _, rhi = family.tail_sq(n)
    td = TailData(
        n=n,
        s_tail=thi,
        r_n=max(rhi, family.rect_hi(n + 1).l ** 2),
        l_next=family.rect_hi(n + 1).l,
        w1=family.rect_lo(1).w,
        q_prefix=m_hi.q,
        t0_prefix=t0_up,
        w_max_tail=family.tail_wmax_hi(n),
    )
    tb = tail_bound(td, mode, bits)
    a = strip_height(td, mode, bits)
    verified.append(
        f"tail admissible: l_next={fmt(td.l_next)} <= a={fmt(a)} <= q_prefix={fmt(td.q_prefix)}"
    )
    verified.append(f"tail bound ({mode}): {fmt(tb)}")
    lo = s_lo / (t0_up + tb)
    return Interval(lo, hi, tuple(verified), widened)


@dataclass(frozen=True)
class Verdict:
    verdict: Literal["refuted", "inconclusive"]
    interval: Interval

    def to_json(self, digits: int = 12) -> dict:
        doc = self.interval.to_json(digits)
        doc["verdict"] = self.verdict
        return doc


def refute_perfect(
    family: Family,
    n: int,
    mode: Mode = "analytic",
    budget: Budget | None = None,
    bits: int = DEFAULT_PRECISION_BITS,
) -> Verdict:
    """``refuted`` when the certified upper end of eta0 is strictly below 1."""
    iv = eta_interval(family, n, mode, budget, bits)
    return Verdict("refuted" if iv.hi < 1 else "inconclusive", iv)


def expansion_floor(rects: RectSet, i: int = 0, budget: Budget | None = None) -> Fraction:
    """l_i / q(A0) for the canonical optimum A0.

    Widening rectangle ``i`` by any dx > 0 keeps eta0 at or above
    min(eta0(A), this value): extending A0 gives efficiency
    (S + l_i dx) / (T0 + q dx), a mediant of S/T0 and l_i/q.
    """
    a0 = canonical_best(rects, budget)
    return rects[i].l / measures(a0).q

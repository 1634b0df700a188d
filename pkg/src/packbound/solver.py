"""Exact minimum bounding-area packing over sequence pairs.

A sequence pair ``(xs, ys)`` says that ``i`` is left of ``j`` when ``i``
precedes ``j`` in both sequences, and that ``i`` is below ``j`` when ``i``
follows ``j`` in ``xs`` but precedes it in ``ys``.  :func:`decode` places every
rectangle at the smallest coordinates those relations allow.

The branch-and-bound builds a pair by appending rectangles in ``ys`` order and
inserting each into the partial ``xs`` order.  Coordinates never change once
assigned, and the region still open to later rectangles is a union of
quadrants whose corners form a staircase.  Everything under the staircase that
is not covered is lost for good, which yields the wasted-area bound used for
pruning.  Two partial pairs with the same staircase and the same remaining
rectangles have identical completions, so the staircase doubles as a memo key.
"""

from __future__ import annotations

import itertools
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .model import (
    DomainError,
    Positioning,
    RectSet,
    UnavailableError,
    fmt,
    decimal_str,
    measures,
    positioning_to_json,
    row_positioning,
    total_area,
)

DEFAULT_MAX_N = 10
ORACLE_MAX_N = 5
_PROBE_NODES = 2000


@dataclass(frozen=True)
class SequencePair:
    xs: tuple[int, ...]
    ys: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "xs", tuple(self.xs))
        object.__setattr__(self, "ys", tuple(self.ys))
        n = len(self.xs)
        if sorted(self.xs) != list(range(n)) or sorted(self.ys) != list(range(n)):
            raise DomainError("sequence pair entries must both be permutations of 0..n-1")


def decode(sp: SequencePair, rects: RectSet) -> Positioning:
    """Smallest-coordinate placement consistent with the pair's relations."""
    n = len(rects)
    if len(sp.xs) != n:
        raise DomainError(f"sequence pair of size {len(sp.xs)} for {n} rectangles")
    xpos = {v: k for k, v in enumerate(sp.xs)}
    xs = [Fraction(0)] * n
    ys = [Fraction(0)] * n
    done: list[int] = []
    for j in sp.ys:
        for i in done:
            if xpos[i] < xpos[j]:
                xs[j] = max(xs[j], xs[i] + rects[i].w)
            else:
                ys[j] = max(ys[j], ys[i] + rects[i].l)
        done.append(j)
    return Positioning(rects, tuple(zip(xs, ys)))


def sequence_pair_of(pos: Positioning) -> SequencePair:
    """A sequence pair whose decoding fits inside ``pos``'s bounding box.

    Found by depth-first search in which every rectangle must land at or below
    and left of its position in ``pos``.  Raises if no such pair exists, which
    would contradict completeness of the representation.
    """
    pos = pos.normalized()
    n = len(pos)
    ws = [r.w for r in pos.rects]
    hs = [r.l for r in pos.rects]
    tx = [o[0] for o in pos.origins]
    ty = [o[1] for o in pos.origins]
    dead: set = set()

    def go(mask, xorder, R, U, yorder):
        if mask == 0:
            return list(xorder), list(yorder)
        key = (mask, tuple(R), tuple(U))
        if key in dead:
            return None
        for j in sorted(range(n), key=lambda j: (tx[j] + ty[j], j)):
            if not mask >> j & 1:
                continue
            for k in range(len(R)):
                if R[k] <= tx[j] and U[k] <= ty[j]:
                    x, y = R[k], U[k]
                    nR = R[: k + 1] + [max(r, x + ws[j]) for r in R[k:]]
                    nU = [max(u, y + hs[j]) for u in U[: k + 1]] + U[k:]
                    got = go(
                        mask & ~(1 << j),
                        xorder[:k] + [j] + xorder[k:],
                        nR,
                        nU,
                        yorder + [j],
                    )
                    if got is not None:
                        return got
        dead.add(key)
        return None

    found = go((1 << n) - 1, [], [Fraction(0)], [Fraction(0)], [])
    if found is None:
        raise RuntimeError("no dominating sequence pair found")
    return SequencePair(tuple(found[0]), tuple(found[1]))


@dataclass(frozen=True)
class Budget:
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None
    max_n: int = DEFAULT_MAX_N


@dataclass(frozen=True)
class SolveResult:
    t0: Fraction
    eta0: Fraction
    best: Positioning
    nodes_explored: int
    proven_optimal: bool
    lower_bound: Fraction

    @property
    def upper_bound(self) -> Fraction:
        return self.t0

    def to_json(self, digits: int = 12) -> dict:
        m = measures(self.best)
        return {
            "t0": fmt(self.t0),
            "t0_decimal": decimal_str(self.t0, digits),
            "eta0": fmt(self.eta0),
            "eta0_decimal": decimal_str(self.eta0, digits),
            "lower_bound": fmt(self.lower_bound),
            "upper_bound": fmt(self.t0),
            "p": fmt(m.p),
            "q": fmt(m.q),
            "proven_optimal": self.proven_optimal,
            "nodes_explored": self.nodes_explored,
            "positioning": positioning_to_json(self.best),
        }


class _BudgetExceeded(Exception):
    pass


def _scale_to_int(rects: RectSet) -> tuple[int, list[int], list[int]]:
    den = 1
    for r in rects:
        den = math.lcm(den, r.w.denominator, r.l.denominator)
    ws = [int(r.w * den) for r in rects]
    hs = [int(r.l * den) for r in rects]
    return den, ws, hs


def _dedup(R: list[int], U: list[int]) -> tuple[list[int], list[int]]:
    nR, nU = [R[0]], [U[0]]
    for r, u in zip(R[1:], U[1:]):
        if r != nR[-1] or u != nU[-1]:
            nR.append(r)
            nU.append(u)
    return nR, nU


class _Search:
    """Depth-first branch and bound on an integer-scaled instance.

    Keys are ``(T, q, origins)`` with origins listed by rectangle index, so the
    minimum key is the canonical optimum among all decoded sequence pairs.
    """

    def __init__(self, ws, hs, bound_t, best_key, max_nodes, deadline):
        self.ws = ws
        self.hs = hs
        self.n = len(ws)
        self.area = sum(w * h for w, h in zip(ws, hs))
        self.bound_t = bound_t  # prune only nodes whose bound strictly exceeds this
        self.best_key = best_key
        self.max_nodes = max_nodes
        self.deadline = deadline
        self.nodes = 0
        self.memo: dict = {}

    def _tick(self):
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise _BudgetExceeded
        if self.deadline is not None and self.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _BudgetExceeded

    def _worse_than_best(self, lb: int, q_lb: int) -> bool:
        if lb > self.bound_t:
            return True
        if self.best_key is None:
            return False
        bt, bq = self.best_key[0], self.best_key[1]
        return lb > bt or (lb == bt and q_lb > bq)

    def _record(self, origins):
        P = max(origins[i][0] + self.ws[i] for i in range(self.n))
        Q = max(origins[i][1] + self.hs[i] for i in range(self.n))
        key = (P * Q, Q, tuple(origins))
        if self.best_key is None or key < self.best_key:
            self.best_key = key
            self.bound_t = min(self.bound_t, key[0])

    def run(self, mask, R, U, placed_area, origins):
        self._tick()
        n = self.n
        if mask == 0:
            self._record(origins)
            return
        full = (1 << n) - 1
        placed = full & ~mask
        memo_key = (mask, tuple(R), tuple(U))
        sub = tuple(origins[i] for i in range(n) if placed >> i & 1)
        seen = self.memo.get(memo_key)
        if seen is not None and seen <= sub:
            return
        self.memo[memo_key] = sub

        ws, hs = self.ws, self.hs
        m = len(R)
        P, Q = R[-1], U[0]
        stair = 0
        for t in range(m - 1):
            stair += (R[t + 1] - R[t]) * U[t]
        lb = self.area + stair - placed_area
        p_lb, q_lb = P, Q
        children = []
        for j in range(n):
            if not mask >> j & 1:
                continue
            w, h = ws[j], hs[j]
            best_j = None
            min_r = None
            min_u = None
            for t in range(m):
                x, y = R[t], U[t]
                a = max(P, x + w) * max(Q, y + h)
                if best_j is None or a < best_j:
                    best_j = a
                if min_r is None or x + w < min_r:
                    min_r = x + w
                if min_u is None or y + h < min_u:
                    min_u = y + h
            lb = max(lb, best_j)
            p_lb = max(p_lb, min_r)
            q_lb = max(q_lb, min_u)
        lb = max(lb, p_lb * q_lb)
        if self._worse_than_best(lb, q_lb):
            return

        for j in range(n):
            if not mask >> j & 1:
                continue
            w, h = ws[j], hs[j]
            for t in range(m):
                x, y = R[t], U[t]
                a = max(P, x + w) * max(Q, y + h)
                children.append((a, j, t))
        children.sort()
        for a, j, t in children:
            if self._worse_than_best(max(a, lb), max(q_lb, U[t] + hs[j])):
                continue
            x, y = R[t], U[t]
            w, h = ws[j], hs[j]
            nR = R[: t + 1] + [r if r > x + w else x + w for r in R[t:]]
            nU = [u if u > y + h else y + h for u in U[: t + 1]] + U[t:]
            nR, nU = _dedup(nR, nU)
            origins[j] = (x, y)
            self.run(mask & ~(1 << j), nR, nU, placed_area + w * h, origins)
            origins[j] = None


def _greedy(ws, hs, order) -> list[tuple[int, int]]:
    """Insert rectangles one by one at the corner that least enlarges the box."""
    R, U = [0], [0]
    origins: list = [None] * len(ws)
    for j in order:
        P, Q = R[-1], U[0]
        w, h = ws[j], hs[j]
        best = None
        for t in range(len(R)):
            a = max(P, R[t] + w) * max(Q, U[t] + h)
            cand = (a, max(Q, U[t] + h), t)
            if best is None or cand < best:
                best = cand
        t = best[2]
        x, y = R[t], U[t]
        nR = R[: t + 1] + [max(r, x + w) for r in R[t:]]
        nU = [max(u, y + h) for u in U[: t + 1]] + U[t:]
        R, U = _dedup(nR, nU)
        origins[j] = (x, y)
    return origins


def _key_of(ws, hs, origins):
    P = max(o[0] + w for o, w in zip(origins, ws))
    Q = max(o[1] + h for o, h in zip(origins, hs))
    return (P * Q, Q, tuple(origins))


def _initial_key(ws, hs):
    n = len(ws)
    idx = range(n)
    orders = [
        sorted(idx, key=lambda j: (-ws[j] * hs[j], j)),
        sorted(idx, key=lambda j: (-hs[j], -ws[j], j)),
        sorted(idx, key=lambda j: (-ws[j], -hs[j], j)),
        sorted(idx, key=lambda j: (-max(ws[j], hs[j]), j)),
        list(idx),
    ]
    best = None
    for order in orders:
        key = _key_of(ws, hs, _greedy(ws, hs, order))
        if best is None or key < best:
            best = key
    return best


def _task(args):
    ws, hs, first, bound_t, best_key, max_nodes, deadline = args
    s = _Search(ws, hs, bound_t, best_key, max_nodes, deadline)
    origins: list = [None] * len(ws)
    origins[first] = (0, 0)
    complete = True
    try:
        s.run(
            ((1 << len(ws)) - 1) & ~(1 << first),
            *_dedup([0, ws[first]], [hs[first], 0]),
            ws[first] * hs[first],
            origins,
        )
    except _BudgetExceeded:
        complete = False
    return s.best_key, s.nodes, complete


def _threads() -> int:
    raw = os.environ.get("PACKBOUND_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def min_bounding_area(
    rects: RectSet,
    budget: Budget | None = None,
    hints: Iterable[Positioning] = (),
    threads: int | None = None,
) -> SolveResult:
    """Minimum bounding area T0 and the canonical positioning attaining it.

    ``hints`` are valid positionings of ``rects`` used only as upper bounds;
    when the budget runs out the best of them may be returned as ``best``.
    The outcome (including ``nodes_explored``) does not depend on ``threads``:
    the top-level subtrees are searched independently in every mode.
    """
    budget = budget or Budget()
    n = len(rects)
    if n == 0:
        raise DomainError("cannot solve an empty rectangle set")
    if n > budget.max_n:
        raise DomainError(f"{n} rectangles exceed the solver limit of {budget.max_n}")
    threads = threads or _threads()
    den, ws, hs = _scale_to_int(rects)
    area = sum(w * h for w, h in zip(ws, hs))
    deadline = (
        time.monotonic() + budget.max_seconds if budget.max_seconds is not None else None
    )

    best_key = _initial_key(ws, hs)
    bound_t = best_key[0]
    hint_best: Positioning | None = None
    for h in hints:
        t = measures(h).T * den * den
        if t.denominator == 1 and int(t) < bound_t:
            bound_t = int(t)
            hint_best = h

    nodes = 0
    complete = True
    firsts: list[int] = []
    if n == 1:
        best_key = (area, hs[0], ((0, 0),))
    else:
        # short sequential probe: sharpens the starting bound shared by all subtrees
        probe_cap = _PROBE_NODES if budget.max_nodes is None else min(_PROBE_NODES, budget.max_nodes)
        s = _Search(ws, hs, bound_t, best_key, probe_cap, deadline)
        try:
            s.run((1 << n) - 1, [0], [0], 0, [None] * n)
        except _BudgetExceeded:
            firsts = list(range(n))
        nodes += s.nodes
        best_key, bound_t = s.best_key, s.bound_t
    per_task = None
    if firsts and budget.max_nodes is not None:
        left = budget.max_nodes - s.nodes
        if left <= 0:
            complete, firsts = False, []
        else:
            per_task = -(-left // len(firsts))
    if firsts:
        jobs = [(ws, hs, j, bound_t, best_key, per_task, deadline) for j in firsts]
        if threads > 1:
            with ProcessPoolExecutor(max_workers=min(threads, len(jobs))) as ex:
                outcomes = list(ex.map(_task, jobs))
        else:
            outcomes = [_task(job) for job in jobs]
        for key, cnt, done in outcomes:
            nodes += cnt
            complete = complete and done
            if key < best_key:
                best_key = key

    positioning = Positioning(
        rects, tuple((Fraction(x, den), Fraction(y, den)) for x, y in best_key[2])
    )
    t_best = Fraction(best_key[0], den * den)
    if hint_best is not None and measures(hint_best).T < t_best:
        positioning = hint_best.normalized()
        t_best = measures(hint_best).T
    s_total = total_area(rects)
    if complete:
        lower = t_best
    else:
        lower = max(s_total, max(r.w * r.l for r in rects))
    return SolveResult(
        t0=t_best,
        eta0=s_total / t_best,
        best=positioning,
        nodes_explored=nodes,
        proven_optimal=complete,
        lower_bound=lower,
    )


def oracle_min_area(rects: RectSet) -> Fraction:
    """Exhaustive minimum over all (n!)^2 sequence pairs; no pruning."""
    n = len(rects)
    if n == 0:
        raise DomainError("cannot solve an empty rectangle set")
    if n > ORACLE_MAX_N:
        raise DomainError(f"oracle limited to {ORACLE_MAX_N} rectangles, got {n}")
    best = None
    perms = list(itertools.permutations(range(n)))
    for xs in perms:
        for ys in perms:
            t = measures(decode(SequencePair(xs, ys), rects)).T
            if best is None or t < best:
                best = t
    return best


def oracle_canonical(rects: RectSet) -> Positioning:
    """Canonical optimum by brute force: least (T, q, origins) over all pairs."""
    n = len(rects)
    if n > ORACLE_MAX_N:
        raise DomainError(f"oracle limited to {ORACLE_MAX_N} rectangles, got {n}")
    best = None
    for xs in itertools.permutations(range(n)):
        for ys in itertools.permutations(range(n)):
            pos = decode(SequencePair(xs, ys), rects)
            m = measures(pos)
            key = (m.T, m.q, pos.origins)
            if best is None or key < best[0]:
                best = (key, pos)
    return best[1]


def canonical_best(rects: RectSet, budget: Budget | None = None) -> Positioning:
    """The fixed optimal positioning A0: least (T, q, origin vector).

    Preferring the flattest optimum makes l_i / q(A0) as large as the optima allow.
    """
    res = min_bounding_area(rects, budget)
    if not res.proven_optimal:
        raise UnavailableError("optimality not proven within the budget")
    return res.best


def row_upper_bound(rects: RectSet) -> Fraction:
    """(sum of widths) * (max height): area of the single-row packing."""
    return measures(row_positioning(rects)).T

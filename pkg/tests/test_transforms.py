import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from packbound.model import DomainError, Positioning, RectSet, measures, total_area, validate
from packbound.transforms import (
    Perturbation,
    extend_x,
    extend_xy,
    extend_y,
    remove_tail,
    retract_x,
    retract_y,
    scale,
    squeeze_x,
    squeeze_y,
)

from conftest import positionings, random_positioning


def squares(*origins):
    return Positioning(RectSet.of([(1, 1)] * len(origins)), origins)


class TestRetract:
    def test_single(self):
        pos = Positioning(RectSet.of([(2, 1)]), ((0, 0),))
        out = retract_x(pos, 0, F(1, 2))
        assert out.rects[0].w == F(3, 2)
        assert measures(pos).T == 2 and measures(out).T == F(3, 2)

    def test_box_held_by_neighbour(self):
        out = retract_x(squares((0, 0), (1, 0)), 0, F(1, 2))
        assert measures(out).T == 2

    @pytest.mark.parametrize("dx", [0, 1, 2, F(-1, 2)])
    def test_out_of_range(self, dx):
        with pytest.raises(DomainError):
            retract_x(squares((0, 0)), 0, dx)

    @given(positionings(max_n=8), st.data())
    @settings(max_examples=150, deadline=None)
    def test_area_never_grows(self, pos, data):
        i = data.draw(st.integers(0, len(pos) - 1))
        w = pos.rects[i].w
        dx = w * F(data.draw(st.integers(1, 99)), 100)
        out = retract_x(pos, i, dx)
        assert validate(out) == []
        assert measures(out).T <= measures(pos).T
        out_y = retract_y(pos, i, pos.rects[i].l * F(1, 3))
        assert validate(out_y) == [] and measures(out_y).T <= measures(pos).T


class TestExtend:
    def test_single_tight(self):
        out = extend_x(squares((0, 0)), 0, 1)
        assert (out.rects[0].w, measures(out).T) == (2, 2)

    def test_shifts_right_neighbour(self):
        out = extend_x(squares((0, 0), (1, 0)), 0, F(1, 2))
        assert out.origins[1] == (F(3, 2), 0)
        assert measures(out).T == F(5, 2) <= 2 + 1 * F(1, 2)

    def test_nonpositive(self):
        with pytest.raises(DomainError):
            extend_x(squares((0, 0)), 0, 0)

    def test_xy_single_tight(self):
        out = extend_xy(squares((0, 0)), 0, 1, 1)
        assert measures(out).T == 4 == 1 + 1 + 1 + 1

    def test_xy_stacked(self):
        pos = squares((0, 0), (0, 1))
        m = measures(pos)
        out = extend_xy(pos, 0, F(1, 2), F(1, 2))
        # rectangle 0 becomes 3/2 x 3/2; rectangle 1 (above it) moves up by 1/2
        assert out.origins == ((0, 0), (0, F(3, 2)))
        assert measures(out).T == F(3, 2) * F(5, 2)
        assert measures(out).T <= m.T + m.q * F(1, 2) + m.p * F(1, 2) + F(1, 4)

    @given(positionings(max_n=8), st.data())
    @settings(max_examples=150, deadline=None)
    def test_inequalities(self, pos, data):
        i = data.draw(st.integers(0, len(pos) - 1))
        dx = F(data.draw(st.integers(1, 40)), data.draw(st.integers(1, 8)))
        dy = F(data.draw(st.integers(1, 40)), data.draw(st.integers(1, 8)))
        m = measures(pos)
        w = extend_x(pos, i, dx)
        assert validate(w) == []
        assert measures(w).T <= m.T + m.q * dx
        v = extend_xy(pos, i, dx, dy)
        assert validate(v) == []
        assert measures(v).T <= m.T + m.q * dx + m.p * dy + dx * dy
        u = extend_y(pos, i, dy)
        assert validate(u) == [] and measures(u).T <= m.T + m.p * dy


class TestSqueeze:
    def test_closes_gap(self):
        out = squeeze_x(squares((0, 0), (2, 0)))
        assert out.origins == ((0, 0), (1, 0))
        assert measures(out).p == 2

    def test_gap_free_identity(self):
        pos = squares((0, 0), (1, 0), (0, 1))
        assert squeeze_x(pos) == pos

    def test_overlapping_projections_move_together(self):
        pos = Positioning(RectSet.of([(2, 1), (1, 1), (1, 1)]), ((0, 0), (1, 1), (5, 0)))
        out = squeeze_x(pos)
        assert out.origins == ((0, 0), (1, 1), (2, 0))

    @given(positionings(max_n=8))
    @settings(max_examples=150, deadline=None)
    def test_properties(self, pos):
        out = squeeze_x(pos)
        assert validate(out) == []
        before, after = measures(pos), measures(out)
        assert after.q == before.q
        assert after.p <= sum(pos.rects.widths)
        assert after.T <= before.T
        assert [o[1] for o in out.origins] == [o[1] for o in pos.origins]
        out_y = squeeze_y(pos)
        assert validate(out_y) == [] and measures(out_y).q <= sum(pos.rects.heights)


class TestRemoveTail:
    def test_full(self):
        pos = squares((0, 0), (3, 3))
        assert remove_tail(pos, 2) == pos

    def test_drop_one(self):
        out = remove_tail(squares((0, 0), (3, 3)), 1)
        assert len(out) == 1 and measures(out).T == 1

    @pytest.mark.parametrize("n", [0, 3])
    def test_range(self, n):
        with pytest.raises(DomainError):
            remove_tail(squares((0, 0), (1, 0)), n)

    @given(positionings(max_n=8), st.data())
    @settings(max_examples=100, deadline=None)
    def test_area_never_grows(self, pos, data):
        n = data.draw(st.integers(1, len(pos)))
        out = remove_tail(pos, n)
        assert out.origins == pos.origins[:n]
        assert measures(out).T <= measures(pos).T


class TestScale:
    def test_identity(self):
        pos = squares((0, 0), (1, 0))
        assert scale(pos, 1) == pos

    def test_unit_square(self):
        m = measures(scale(squares((0, 0)), 3))
        assert (m.T, m.eta) == (9, 1)

    def test_rectset(self):
        assert scale(RectSet.of([(1, 2)]), F(1, 2)) == RectSet.of([(F(1, 2), 1)])

    @pytest.mark.parametrize("c", [0, -1])
    def test_rejects(self, c):
        with pytest.raises(DomainError):
            scale(squares((0, 0)), c)

    @given(positionings(), st.fractions(min_value=F(1, 50), max_value=50))
    @settings(max_examples=100, deadline=None)
    def test_eta_exactly_invariant(self, pos, c):
        if c <= 0:
            return
        out = scale(pos, c)
        assert measures(out).eta == measures(pos).eta
        assert measures(out).T == c * c * measures(pos).T


class TestPerturbation:
    def test_apply(self):
        rs = RectSet.of([(1, 1), (2, 3)])
        d = Perturbation(((F(1, 2), 0), (-1, F(1, 3))))
        assert d.apply(rs) == RectSet.of([(F(3, 2), 1), (1, F(10, 3))])
        assert (d.abs_dw, d.abs_dl) == (F(3, 2), F(1, 3))

    def test_positivity(self):
        with pytest.raises(DomainError):
            Perturbation(((-1, 0),)).check(RectSet.of([(1, 1)]))

    def test_length(self):
        with pytest.raises(DomainError):
            Perturbation.zero(2).check(RectSet.of([(1, 1)]))


def test_random_positioning_helper_is_valid():
    rng = random.Random(3)
    for _ in range(200):
        pos = random_positioning(rng, rng.randint(1, 8))
        assert validate(pos) == []
        assert total_area(pos.rects) <= measures(pos).T

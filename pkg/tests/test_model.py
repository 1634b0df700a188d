from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from packbound.model import (
    DomainError,
    Positioning,
    Rect,
    RectSet,
    decimal_str,
    measures,
    positioning_from_json,
    positioning_to_json,
    rectset_from_json,
    rectset_to_json,
    scalar,
    total_area,
    validate,
)
from packbound.families import harmonic

from conftest import positionings


def unit_squares(*origins):
    rs = RectSet.of([(1, 1)] * len(origins))
    return Positioning(rs, origins)


class TestScalar:
    @pytest.mark.parametrize("raw, expected", [
        ("1/2", F(1, 2)), ("0.25", F(1, 4)), (" 3 ", F(3)), (7, F(7)), (F(2, 6), F(1, 3)),
    ])
    def test_parse(self, raw, expected):
        assert scalar(raw) == expected

    @pytest.mark.parametrize("raw", [0.5, "abc", "1/0", None, True])
    def test_rejects(self, raw):
        with pytest.raises(DomainError):
            scalar(raw)

    def test_reduced_form_is_canonical(self):
        assert scalar("2/4") == scalar("1/2")
        assert str(scalar("2/4")) == "1/2"

    @pytest.mark.parametrize("value, digits, text", [
        (F(1, 3), 5, "0.33333"),
        (F(2, 3), 4, "0.6667"),
        (F(5, 6), 12, "0.833333333333"),
        (F(123456), 3, "123000"),
        (F(-1, 8), 12, "-0.125"),
        (F(999, 1000), 2, "1"),
        (F(0), 6, "0"),
        (F(1, 1000), 3, "0.001"),
    ])
    def test_decimal_echo(self, value, digits, text):
        assert decimal_str(value, digits) == text


def test_rect_rejects_nonpositive():
    with pytest.raises(DomainError):
        Rect(F(0), F(1))
    with pytest.raises(DomainError):
        Rect(F(1), F(-2))


class TestTotalArea:
    def test_unit_square(self):
        assert total_area(RectSet.of([(1, 1)])) == 1

    def test_pair(self):
        assert total_area(RectSet.of([("1/2", 1), ("1/3", "1/2")])) == F(2, 3)

    def test_harmonic_prefix(self):
        # direct summation of 1/(k(k+1)) telescopes to 1 - 1/7
        direct = sum(F(1, k * (k + 1)) for k in range(1, 7))
        assert direct == F(6, 7)
        assert total_area(harmonic(6)) == direct

    def test_empty(self):
        with pytest.raises(DomainError):
            total_area(RectSet(()))


class TestMeasures:
    def test_single(self):
        pos = Positioning(RectSet.of([(2, 3)]), ((0, 0),))
        m = measures(pos)
        assert (m.p, m.q, m.T, m.eta) == (2, 3, 6, 1)

    def test_side_by_side(self):
        m = measures(unit_squares((0, 0), (1, 0)))
        assert (m.p, m.q, m.T, m.eta) == (2, 1, 2, 1)

    def test_gap(self):
        m = measures(unit_squares((0, 0), (2, 0)))
        assert (m.p, m.q, m.T, m.eta) == (3, 1, 3, F(2, 3))

    @given(positionings())
    @settings(max_examples=100, deadline=None)
    def test_area_never_exceeds_box(self, pos):
        assert not validate(pos)
        m = measures(pos)
        assert total_area(pos.rects) <= m.T
        assert 0 < m.eta <= 1

    @given(positionings())
    @settings(max_examples=50, deadline=None)
    def test_translation_invariant(self, pos):
        assert measures(pos.translated(F(7, 3), F(-2))) == measures(pos)


class TestValidate:
    def test_edge_contact(self):
        assert validate(unit_squares((0, 0), (1, 0))) == []

    def test_overlap(self):
        assert validate(unit_squares((0, 0), (F(1, 2), 0))) == ["overlap(0,1)"]

    def test_vertical_stack(self):
        assert validate(unit_squares((0, 0), (0, 1))) == []

    def test_corner_contact(self):
        assert validate(unit_squares((0, 0), (1, 1))) == []

    def test_reports_every_pair(self):
        assert validate(unit_squares((0, 0), (0, 0), (0, 0))) == [
            "overlap(0,1)", "overlap(0,2)", "overlap(1,2)"
        ]


def test_json_round_trip():
    pos = Positioning(RectSet.of([("1/2", 1), (F(1, 3), "0.5")]), ((0, 0), (F(1, 2), F(1, 7))))
    doc = positioning_to_json(pos)
    assert doc["rects"][1] == {"w": "1/3", "l": "1/2"}
    assert positioning_from_json(doc) == pos
    assert rectset_from_json(rectset_to_json(pos.rects)) == pos.rects


def test_json_malformed():
    with pytest.raises(DomainError):
        rectset_from_json({"rect": []})
    with pytest.raises(DomainError):
        positioning_from_json({"rects": [{"w": "1", "l": "1"}]})

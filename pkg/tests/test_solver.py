import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from packbound.families import harmonic
from packbound.model import (
    DomainError,
    Rect,
    RectSet,
    UnavailableError,
    measures,
    total_area,
    validate,
)
from packbound.solver import (
    Budget,
    SequencePair,
    canonical_best,
    decode,
    min_bounding_area,
    oracle_canonical,
    oracle_min_area,
    row_upper_bound,
    sequence_pair_of,
)

from conftest import positionings, random_rects


class TestDecode:
    def test_single(self):
        pos = decode(SequencePair((0,), (0,)), RectSet.of([(2, 3)]))
        assert pos.origins == ((0, 0),)

    def test_side_by_side(self):
        pos = decode(SequencePair((0, 1), (0, 1)), RectSet.of([(1, 1), (1, 1)]))
        m = measures(pos)
        assert (m.p, m.q) == (2, 1)

    def test_stacked(self):
        # 0 after 1 in xs, before 1 in ys: 0 below 1
        pos = decode(SequencePair((1, 0), (0, 1)), RectSet.of([(1, 1), (1, 1)]))
        assert pos.origins == ((0, 0), (0, 1))

    def test_bad_permutation(self):
        with pytest.raises(DomainError):
            SequencePair((0, 0), (0, 1))

    def test_size_mismatch(self):
        with pytest.raises(DomainError):
            decode(SequencePair((0,), (0,)), RectSet.of([(1, 1), (1, 1)]))

    @given(positionings(max_n=7))
    @settings(max_examples=150, deadline=None)
    def test_reencode_completeness(self, pos):
        sp = sequence_pair_of(pos)
        out = decode(sp, pos.rects)
        assert validate(out) == []
        before, after = measures(pos), measures(out)
        assert after.p <= before.p and after.q <= before.q


class TestSolve:
    def test_single(self):
        res = min_bounding_area(RectSet.of([(F(2, 3), 5)]))
        assert res.proven_optimal
        assert (res.t0, res.eta0) == (F(10, 3), 1)
        assert res.best.origins == ((0, 0),)

    def test_two_squares(self):
        res = min_bounding_area(RectSet.of([(1, 1), (1, 1)]))
        assert (res.t0, res.eta0) == (2, 1)

    def test_mixed_fixed_orientation(self):
        rs = RectSet.of([(1, 2), (2, 1), (1, 1)])
        expected = oracle_min_area(rs)
        assert expected == 6
        assert min_bounding_area(rs).t0 == expected

    def test_empty(self):
        with pytest.raises(DomainError):
            min_bounding_area(RectSet(()))

    def test_size_limit(self):
        with pytest.raises(DomainError):
            min_bounding_area(RectSet.of([(1, 1)] * 11))
        with pytest.raises(DomainError):
            oracle_min_area(RectSet.of([(1, 1)] * 6))

    def test_node_budget(self):
        rs = RectSet.of([(1, 2), (2, 1), (1, 1), (3, 1)])
        res = min_bounding_area(rs, Budget(max_nodes=1))
        assert not res.proven_optimal
        assert validate(res.best) == []
        assert res.lower_bound == max(total_area(rs), max(r.area for r in rs))
        assert res.lower_bound <= oracle_min_area(rs) <= res.t0

    def test_hint_used_when_budget_exhausted(self):
        rs = harmonic(7)
        full = min_bounding_area(rs)
        res = min_bounding_area(rs, Budget(max_nodes=1), hints=[full.best])
        assert not res.proven_optimal and res.t0 == full.t0

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_unit_square_multisets(self, n):
        rs = RectSet.of([(1, 1)] * n)
        assert min_bounding_area(rs).t0 == oracle_min_area(rs) == n

    def test_random_against_oracle(self, rng):
        for _ in range(40):
            rs = random_rects(rng, rng.randint(1, 4), hi=5, den=2)
            res = min_bounding_area(rs)
            assert res.proven_optimal
            assert res.t0 == oracle_min_area(rs)
            assert measures(res.best).T == res.t0
            assert validate(res.best) == []

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_five_rectangles_against_oracle(self, seed):
        rs = random_rects(random.Random(seed), 5, hi=4, den=3)
        assert min_bounding_area(rs).t0 == oracle_min_area(rs)

    def test_area_sandwich(self, rng):
        for _ in range(30):
            rs = random_rects(rng, rng.randint(1, 6), hi=6, den=2)
            t0 = min_bounding_area(rs).t0
            s = total_area(rs)
            assert s <= t0 <= row_upper_bound(rs)
            assert 0 < s / t0 <= 1

    def test_perfect_iff_eta_one(self):
        assert min_bounding_area(RectSet.of([(2, 1), (1, 1), (1, 1)])).eta0 == 1
        assert min_bounding_area(RectSet.of([(2, 2), (1, 1)])).eta0 == F(5, 6)

    def test_monotone_under_enlargement(self, rng):
        for _ in range(25):
            rs = random_rects(rng, rng.randint(1, 3), hi=4, den=2)
            i = rng.randrange(len(rs))
            grown = list(rs.rects)
            grown[i] = Rect(rs[i].w + F(rng.randint(0, 3), 2), rs[i].l + F(rng.randint(1, 3), 4))
            assert oracle_min_area(rs) <= oracle_min_area(RectSet(tuple(grown)))
            assert min_bounding_area(rs).t0 <= min_bounding_area(RectSet(tuple(grown))).t0

    def test_harmonic_prefixes_nondecreasing(self):
        t0s = [min_bounding_area(harmonic(n)).t0 for n in range(1, 8)]
        assert t0s == sorted(t0s)
        assert t0s[:3] == [F(1, 2), F(3, 4), F(5, 6)]


class TestCanonical:
    def test_single_at_origin(self):
        assert canonical_best(RectSet.of([(3, 1)])).origins == ((0, 0),)

    def test_two_squares(self):
        rs = RectSet.of([(1, 1), (1, 1)])
        expected = oracle_canonical(rs)
        assert expected.origins == ((0, 0), (1, 0))
        assert canonical_best(rs) == expected

    def test_matches_brute_force_tie_break(self, rng):
        for _ in range(30):
            rs = random_rects(rng, rng.randint(2, 4), hi=3)
            assert canonical_best(rs) == oracle_canonical(rs)

    def test_deterministic(self):
        rs = harmonic(5)
        assert canonical_best(rs) == canonical_best(rs)

    def test_threads_do_not_change_result(self, monkeypatch):
        rs = harmonic(6)
        runs = []
        for threads in ("1", "4"):
            monkeypatch.setenv("PACKBOUND_THREADS", threads)
            res = min_bounding_area(rs)
            runs.append((res.t0, res.best, res.nodes_explored))
        assert runs[0] == runs[1]

    def test_unavailable_without_proof(self):
        with pytest.raises(UnavailableError):
            canonical_best(RectSet.of([(1, 2), (2, 1), (1, 1), (3, 1)]), Budget(max_nodes=1))


def test_solve_result_json():
    res = min_bounding_area(RectSet.of([(2, 2), (1, 1)]))
    doc = res.to_json(6)
    assert doc["t0"] == "6" and doc["eta0"] == "5/6"
    assert doc["eta0_decimal"] == "0.833333"
    assert doc["proven_optimal"] is True
    assert len(doc["positioning"]["origins"]) == 2

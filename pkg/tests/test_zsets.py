import numpy as np
import pandas as pd
import pytest

from src.errors import ConfigError, EmptyWindow, WindowMismatch
from src.zsets import (
    WindowSet,
    classify,
    intersect,
    is_piecewise_syndetic_at,
    is_syndetic_at,
    is_thick_at,
    is_thickly_syndetic_at,
    longest_run,
    max_gap,
    run_start_gap,
    run_starts,
    union,
)
from utils.seeder import block_set


def evens(lo=0, hi=100):
    return WindowSet.from_predicate(lo, hi, lambda n: n % 2 == 0)


def smallest_thick_syndetic_gap(S, L, limit=400):
    for G in range(1, limit):
        if is_thickly_syndetic_at(S, L, G):
            return G
    return None


class TestWindowSet:
    def test_members_stay_in_window(self):
        with pytest.raises(WindowMismatch):
            WindowSet.from_members(0, 10, [3, 11])

    def test_empty_window(self):
        with pytest.raises(EmptyWindow):
            WindowSet(5, 4, [])

    def test_mask_length_must_match(self):
        with pytest.raises(WindowMismatch):
            WindowSet(0, 10, np.ones(5, dtype=bool))

    def test_members_are_read_only(self):
        S = evens()
        with pytest.raises(ValueError):
            S.members[0] = False

    def test_undecided_excludes_members(self):
        S = WindowSet(0, 3, [True, False, False, True], [True, True, False, False])
        assert list(S.undecided) == [False, True, False, False]
        assert list(S.covered) == [True, True, False, True]

    def test_frame_round_trip(self):
        S = WindowSet.from_members(-3, 7, [-3, 0, 4])
        df = S.to_frame()
        assert list(df.columns) == ['n', 'member']
        assert df['n'].iloc[0] == -3
        assert WindowSet.from_frame(df) == S

    def test_frame_needs_contiguous_rows(self):
        with pytest.raises(WindowMismatch):
            WindowSet.from_frame(pd.DataFrame({'n': [0, 1, 3], 'member': [1, 0, 1]}))
        with pytest.raises(ConfigError):
            WindowSet.from_frame(pd.DataFrame({'x': [0], 'member': [1]}))

    def test_containment(self):
        S = WindowSet.from_members(0, 10, [2, 5])
        assert 5 in S and 4 not in S and 50 not in S
        assert list(S.elements()) == [2, 5]


class TestSyndetic:
    def test_evens(self):
        assert is_syndetic_at(evens(), 2)

    def test_singleton(self):
        v = is_syndetic_at(WindowSet.from_members(0, 100, [0]), 5)
        assert not v
        assert v.witness > 5

    def test_full(self):
        assert is_syndetic_at(WindowSet.full(0, 100), 1)

    def test_margins_too_wide(self):
        with pytest.raises(EmptyWindow):
            is_syndetic_at(evens(0, 10), 6)

    def test_monotone_in_gap(self):
        S = WindowSet.from_predicate(0, 1000, lambda n: n % 7 in (0, 1))
        results = [bool(is_syndetic_at(S, G)) for G in range(1, 30)]
        first = results.index(True)
        assert all(results[first:])
        assert first + 1 == 6

    def test_undecided_counts_as_covered(self):
        members = np.zeros(101, dtype=bool)
        members[::2] = True
        undecided = np.zeros(101, dtype=bool)
        undecided[40:60] = True
        members[40:60] = False
        S = WindowSet(0, 100, members, undecided)
        assert is_syndetic_at(S, 2)
        assert max_gap(S) == 2

    def test_rejects_non_positive_gap(self):
        with pytest.raises(ConfigError):
            is_syndetic_at(evens(), 0)


class TestThick:
    def test_block_and_point(self):
        S = WindowSet.from_members(0, 100, list(range(10, 21)) + [30])
        assert is_thick_at(S, 10)
        assert longest_run(S) == 11

    def test_evens(self):
        v = is_thick_at(evens(), 2)
        assert not v and v.witness == 1

    def test_full(self):
        assert all(is_thick_at(WindowSet.full(0, 100), L) for L in (1, 50, 101))

    def test_monotone_in_run(self):
        S = WindowSet.from_members(0, 100, list(range(10, 21)))
        assert all(is_thick_at(S, L) for L in range(1, 12))
        assert not is_thick_at(S, 12)

    def test_undecided_never_joins_runs(self):
        S = WindowSet(0, 5, [True, True, False, True, True, False], [False, False, True, False, False, False])
        assert longest_run(S) == 2


class TestThicklySyndetic:
    def test_full(self):
        assert is_thickly_syndetic_at(WindowSet.full(0, 1000), 5, 3)

    def test_evens(self):
        assert not is_thickly_syndetic_at(evens(0, 1000), 2, 50)

    def test_blocks(self):
        S = WindowSet.from_predicate(0, 999, lambda n: n % 10 < 5)
        assert is_thickly_syndetic_at(S, 3, 10)
        starts = run_starts(S, 3)
        assert list(starts.elements()[:6]) == [0, 1, 2, 10, 11, 12]
        assert run_start_gap(S, 3) == 8

    def test_no_runs(self):
        assert run_start_gap(evens(), 2) is None

    def test_filter_property_on_block_sets(self):
        rng = np.random.default_rng(5)
        L = 3
        for _ in range(100):
            holes = [int(h) for h in rng.integers(1, 6, size=2)]
            sets = [block_set(rng, 0, 4000, h, 2 * h + 3 * L + 1, 2 * h + 3 * L + 20) for h in holes]
            gaps = [smallest_thick_syndetic_gap(S, L) for S in sets]
            assert None not in gaps
            G = max(gaps)
            assert is_thickly_syndetic_at(intersect(*sets), L, 2 * G + 2 * L)

    def test_containment_chain(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            S = block_set(rng, 0, 3000, 4, 10, 30)
            L = 3
            G = smallest_thick_syndetic_gap(S, L)
            assert is_syndetic_at(S, G + L)
            margin = max(G, L)
            assert is_piecewise_syndetic_at(S, G + L, len(S) - 2 * margin)


class TestPiecewiseSyndetic:
    def test_evens_on_a_prefix(self):
        S = WindowSet.from_predicate(0, 10000, lambda n: n <= 50 and n % 2 == 0)
        v = is_piecewise_syndetic_at(S, 2, 40)
        assert v and v.witness == 51

    def test_powers_of_two(self):
        S = WindowSet.from_members(0, 10000, [2 ** k for k in range(14)])
        assert not is_piecewise_syndetic_at(S, 3, 20)

    def test_full(self):
        assert is_piecewise_syndetic_at(WindowSet.full(0, 100), 1, 101)

    def test_span_longer_than_window(self):
        with pytest.raises(EmptyWindow):
            is_piecewise_syndetic_at(evens(0, 10), 2, 20)


class TestSetOperations:
    def test_intersect_with_full(self):
        S = evens()
        assert intersect(S, WindowSet.full(0, 100)) == S

    def test_evens_and_threes(self):
        threes = WindowSet.from_predicate(0, 100, lambda n: n % 3 == 0)
        assert intersect(evens(), threes) == WindowSet.from_predicate(0, 100, lambda n: n % 6 == 0)

    def test_union(self):
        odds = WindowSet.from_predicate(0, 100, lambda n: n % 2 == 1)
        assert union(evens(), odds) == WindowSet.full(0, 100)

    def test_window_mismatch(self):
        with pytest.raises(WindowMismatch):
            intersect(evens(0, 100), evens(0, 99))


class TestClassify:
    def test_report(self):
        S = WindowSet.from_predicate(0, 999, lambda n: n % 10 < 5)
        report = classify(S, runs=[3], gaps=[10, 50])
        assert report.max_gap == 6
        assert report.longest_run == 5
        assert report.run_start_gaps == {3: 8}
        assert report.verdict('syndetic', gap=10).holds
        assert report.verdict('thick', run=3).holds
        assert report.verdict('thickly_syndetic', run=3, gap=10).holds
        assert report.verdict('piecewise_syndetic', gap=10).witness == 995

    def test_witnesses_are_recomputable(self):
        S = WindowSet.from_predicate(0, 500, lambda n: n % 13 in (0, 1, 2, 3))
        report = classify(S, runs=[2, 4], gaps=[20])
        for v in report.verdicts:
            if v.family == 'syndetic':
                assert v.witness == is_syndetic_at(S, v.gap).witness
            elif v.family == 'thick':
                assert v.witness == is_thick_at(S, v.run).witness
            elif v.family == 'thickly_syndetic':
                assert v.witness == is_thickly_syndetic_at(S, v.run, v.gap).witness

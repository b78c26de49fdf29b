"""Windowed classification of subsets of Z.

A ``WindowSet`` is a membership bitmask over ``[lo, hi]`` plus an optional mask of
undecided positions (points a truncated scan could not settle).  Undecided
positions never count as members of runs, but they do count as covered when gaps
are measured, so truncation cannot manufacture gaps.

Gap convention: a set is syndetic at G on a region when every length-G subinterval
of the region meets it, i.e. the longest run of uncovered positions is at most
G - 1.  The reported gap is that run length plus one.
"""
import logging
from typing import NamedTuple

import numpy as np
import pandas as pd

from src.errors import ConfigError, EmptyWindow, WindowMismatch
from src.reports import ClassificationReport, VerdictEntry

logger = logging.getLogger(__name__)


class Verdict(NamedTuple):
    holds: bool
    witness: int

    def __bool__(self):
        return bool(self.holds)


def _readonly(mask):
    mask = np.array(mask, dtype=bool)
    mask.setflags(write=False)
    return mask


class WindowSet:

    def __init__(self, lo, hi, members, undecided=None):
        lo, hi = int(lo), int(hi)
        if lo > hi:
            raise EmptyWindow(f"window [{lo}, {hi}] is empty")
        members = np.asarray(members, dtype=bool)
        if members.shape != (hi - lo + 1,):
            raise WindowMismatch(f"mask of length {members.shape} does not fit window [{lo}, {hi}]")
        if undecided is None:
            undecided = np.zeros_like(members)
        undecided = np.asarray(undecided, dtype=bool)
        if undecided.shape != members.shape:
            raise WindowMismatch("undecided mask does not match the window")
        self.lo = lo
        self.hi = hi
        self.members = _readonly(members)
        self.undecided = _readonly(undecided & ~members)

    @classmethod
    def from_members(cls, lo, hi, elements):
        mask = np.zeros(hi - lo + 1, dtype=bool)
        for n in elements:
            if not lo <= n <= hi:
                raise WindowMismatch(f"{n} lies outside the window [{lo}, {hi}]")
            mask[n - lo] = True
        return cls(lo, hi, mask)

    @classmethod
    def from_predicate(cls, lo, hi, predicate):
        return cls(lo, hi, [bool(predicate(n)) for n in range(lo, hi + 1)])

    @classmethod
    def full(cls, lo, hi):
        return cls(lo, hi, np.ones(hi - lo + 1, dtype=bool))

    @classmethod
    def from_frame(cls, df):
        """Read a frame with columns n, member covering a contiguous window"""
        if not {'n', 'member'} <= set(df.columns):
            raise ConfigError("membership table needs columns 'n' and 'member'")
        df = df.sort_values('n')
        n = df['n'].to_numpy(dtype=np.int64)
        if len(n) == 0:
            raise EmptyWindow("membership table has no rows")
        if not np.array_equal(n, np.arange(n[0], n[0] + len(n))):
            raise WindowMismatch("membership rows must cover a contiguous window")
        return cls(int(n[0]), int(n[-1]), df['member'].to_numpy().astype(int) != 0)

    def to_frame(self):
        return pd.DataFrame({
            'n': np.arange(self.lo, self.hi + 1, dtype=np.int64),
            'member': self.members.astype(int),
        })

    def __len__(self):
        return self.hi - self.lo + 1

    def __contains__(self, n):
        return self.lo <= n <= self.hi and bool(self.members[n - self.lo])

    def __eq__(self, other):
        if not isinstance(other, WindowSet):
            return NotImplemented
        return (self.lo, self.hi) == (other.lo, other.hi) \
            and np.array_equal(self.members, other.members) \
            and np.array_equal(self.undecided, other.undecided)

    def __repr__(self):
        return f"WindowSet([{self.lo}, {self.hi}], members={self.count}, undecided={int(self.undecided.sum())})"

    @property
    def count(self):
        return int(self.members.sum())

    @property
    def covered(self):
        return self.members | self.undecided

    def elements(self):
        return np.flatnonzero(self.members) + self.lo


def _longest_false_run(mask):
    if mask.size == 0:
        return 0
    idx = np.flatnonzero(np.concatenate(([True], mask, [True])))
    return int(np.max(np.diff(idx)) - 1)


def _longest_true_run(mask):
    return _longest_false_run(~mask)


def _check_positive(**params):
    for name, value in params.items():
        if value is None or value < 1:
            raise ConfigError(f"{name} must be a positive integer, got {value}")


def _region_gap(mask, lo_offset, hi_offset):
    """Gap of the covered mask restricted to index range [lo_offset, hi_offset]"""
    if lo_offset > hi_offset:
        raise EmptyWindow(f"margins leave no room in a window of length {mask.size}")
    return _longest_false_run(mask[lo_offset:hi_offset + 1]) + 1


def max_gap(S):
    """Gap of S over the whole window, margins included"""
    return _longest_false_run(S.covered) + 1


def longest_run(S):
    return _longest_true_run(S.members)


def is_syndetic_at(S, G, margin=None):
    _check_positive(G=G)
    margin = G if margin is None else margin
    gap = _region_gap(S.covered, margin, len(S) - 1 - margin)
    return Verdict(gap <= G, gap)


def is_thick_at(S, L):
    _check_positive(L=L)
    run = longest_run(S)
    return Verdict(run >= L, run)


def run_starts(S, L):
    """{n : n, ..., n+L-1 in S} as a WindowSet on the same window"""
    _check_positive(L=L)
    size = len(S)
    starts = np.zeros(size, dtype=bool)
    maybe = np.zeros(size, dtype=bool)
    if L <= size:
        sums = np.concatenate(([0], np.cumsum(S.members, dtype=np.int64)))
        cover = np.concatenate(([0], np.cumsum(S.covered, dtype=np.int64)))
        starts[:size - L + 1] = (sums[L:] - sums[:-L]) == L
        maybe[:size - L + 1] = (cover[L:] - cover[:-L]) == L
    return WindowSet(S.lo, S.hi, starts, maybe & ~starts)


def run_start_gap(S, L):
    """Gap of the L-run start set over the whole window; None if there are no starts"""
    starts = run_starts(S, L)
    if not starts.covered.any():
        return None
    return max_gap(starts)


def is_thickly_syndetic_at(S, L, G):
    _check_positive(L=L, G=G)
    return is_syndetic_at(run_starts(S, L), G, margin=max(G, L))


def is_piecewise_syndetic_at(S, G, L):
    """Some chain of covered points with consecutive distance <= G spans at least L"""
    _check_positive(G=G, L=L)
    if len(S) < L:
        raise EmptyWindow(f"window of length {len(S)} cannot hold a span of {L}")
    positions = np.flatnonzero(S.covered)
    if positions.size == 0:
        return Verdict(False, 0)
    breaks = np.flatnonzero(np.diff(positions) > G)
    firsts = np.concatenate(([0], breaks + 1))
    lasts = np.concatenate((breaks, [positions.size - 1]))
    span = int(np.max(positions[lasts] - positions[firsts] + 1))
    return Verdict(span >= L, span)


def _same_window(S1, S2):
    if (S1.lo, S1.hi) != (S2.lo, S2.hi):
        raise WindowMismatch(f"windows [{S1.lo}, {S1.hi}] and [{S2.lo}, {S2.hi}] differ")


def intersect(S1, S2):
    _same_window(S1, S2)
    members = S1.members & S2.members
    undecided = S1.covered & S2.covered & ~members
    return WindowSet(S1.lo, S1.hi, members, undecided)


def union(S1, S2):
    _same_window(S1, S2)
    members = S1.members | S2.members
    return WindowSet(S1.lo, S1.hi, members, (S1.undecided | S2.undecided) & ~members)


def classify(S, runs=(), gaps=(), span=None):
    """Measure S and give verdicts for every requested run length and gap bound"""
    runs = sorted(set(runs))
    gaps = sorted(set(gaps))
    span = span or max(1, len(S) // 2)
    verdicts = []
    for G in gaps:
        try:
            v = is_syndetic_at(S, G)
            verdicts.append(VerdictEntry(family='syndetic', gap=G, holds=v.holds, witness=v.witness))
        except EmptyWindow:
            logger.warning(f"window too short for a syndetic verdict at G={G}")
    for L in runs:
        v = is_thick_at(S, L)
        verdicts.append(VerdictEntry(family='thick', run=L, holds=v.holds, witness=v.witness))
        for G in gaps:
            try:
                v = is_thickly_syndetic_at(S, L, G)
                verdicts.append(VerdictEntry(family='thickly_syndetic', run=L, gap=G, holds=v.holds, witness=v.witness))
            except EmptyWindow:
                logger.warning(f"window too short for a thickly syndetic verdict at L={L}, G={G}")
    for G in gaps:
        if span <= len(S):
            v = is_piecewise_syndetic_at(S, G, span)
            verdicts.append(VerdictEntry(family='piecewise_syndetic', gap=G, span=span, holds=v.holds, witness=v.witness))
    return ClassificationReport(
        lo=S.lo,
        hi=S.hi,
        members=S.count,
        undecided=int(S.undecided.sum()),
        max_gap=max_gap(S),
        longest_run=longest_run(S),
        run_start_gaps={L: run_start_gap(S, L) for L in runs},
        verdicts=verdicts,
    )

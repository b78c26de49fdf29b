import itertools
import logging

import pandas as pd

from src.dynsys import admissible_words, recurrence_gaps, return_set
from src.errors import EmptyWindow
from src.gpoly import IntegralPolynomial
from src.zsets import is_syndetic_at, is_thickly_syndetic_at

logger = logging.getLogger(__name__)


def smallest_gap(check, limit):
    """First G in 1..limit for which check(G) holds, else None"""
    for G in range(1, limit + 1):
        try:
            if check(G).holds:
                return G
        except EmptyWindow:
            return None
    return None


class MinimalityProbe:
    def __init__(self, sys):
        self.sys = sys

    def recurrence_table(self, w, length=None):
        """Largest recurrence gap of every admissible w-word"""
        gaps = recurrence_gaps(self.sys, w, length)
        return pd.DataFrame({'word': list(gaps), 'max_gap': list(gaps.values())})

    def stability(self, w, short, long):
        """Compare admissible words and their gaps between two prefix lengths"""
        short_words = admissible_words(self.sys, w, short)
        long_words = admissible_words(self.sys, w, long)
        short_gaps = recurrence_gaps(self.sys, w, short)
        long_gaps = recurrence_gaps(self.sys, w, long)
        return {
            'words_short': short_words,
            'words_long': long_words,
            'stable': short_words == long_words,
            'max_gap_short': max(short_gaps.values()),
            'max_gap_long': max(long_gaps.values()),
        }


class ReturnFamilyProbe:
    def __init__(self, sys):
        self.sys = sys

    def cylinders(self, w):
        return [self.sys.cylinder(word) for word in admissible_words(self.sys, w)]

    def pair_gaps(self, w, window, run, limit=500):
        """Smallest thickly syndetic gap of N(U, V) for every pair of admissible w-word cylinders"""
        rows = []
        linear = IntegralPolynomial.linear()
        for U, V in itertools.product(self.cylinders(w), repeat=2):
            S = return_set(self.sys, U, [(linear, V)], window)
            G = smallest_gap(lambda g: is_thickly_syndetic_at(S, run, g), limit)
            rows.append({'U': U.pattern, 'V': V.pattern, 'members': S.count, 'gap': G})
        table = pd.DataFrame(rows)
        logger.info(f"N(U,V) over {len(rows)} pairs of {w}-words: worst gap {table['gap'].max()}")
        return table

    def multiple_recurrence_gaps(self, polys, w, window, limit=2000):
        """Smallest syndetic gap of {n : U ∩ T^-p_1(n) V_1 ∩ ... non-empty} over all cylinder choices"""
        rows = []
        cylinders = self.cylinders(w)
        for U, *Vs in itertools.product(cylinders, repeat=len(polys) + 1):
            S = return_set(self.sys, U, list(zip(polys, Vs)), window)
            G = smallest_gap(lambda g: is_syndetic_at(S, g), limit)
            rows.append({
                'U': U.pattern,
                'V': ','.join(V.pattern for V in Vs),
                'members': S.count,
                'gap': G,
            })
        return pd.DataFrame(rows)

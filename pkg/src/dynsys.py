"""Finite approximations of substitution subshifts and their return-time sets.

The system is the orbit closure of the one-sided fixed point ``x`` of a
substitution, approximated by a long prefix ``word`` of ``x``.  The point
``T^m x`` is identified with the position ``m``; a cylinder ``[pattern]@anchor``
contains ``T^m x`` when ``word[m + anchor : m + anchor + len(pattern)]`` equals
the pattern.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from src.config import config
from src.errors import (
    ConfigError,
    ConstructionError,
    EmptyWindow,
    InadmissiblePattern,
    NonDegenerate,
    WindowExhausted,
)
from src.gpoly import IntegralPolynomial
from src.reports import BaseCoverage, CoverageReport
from src.zsets import WindowSet, classify, intersect

logger = logging.getLogger(__name__)

CHACON = {
    'alphabet': ['0', '1'],
    'rules': {'0': '0010', '1': '1'},
    'seed': '0',
}


@dataclass(frozen=True)
class Cylinder:
    pattern: str
    anchor: int = 0

    def __len__(self):
        return len(self.pattern)

    def __str__(self):
        return self.pattern if self.anchor == 0 else f"{self.pattern}@{self.anchor}"


class SubstitutionSystem:

    def __init__(self, alphabet, rules, seed, min_length=None):
        self.alphabet = [str(a) for a in alphabet]
        self.rules = {str(k): str(v) for k, v in rules.items()}
        self.seed = str(seed)
        self.min_length = int(min_length or config.get('dynamics', 'min_length'))
        self._validate()

        self._codes = {a: i for i, a in enumerate(self.alphabet)}
        width = max(len(v) for v in self.rules.values())
        self._lengths = np.array([len(self.rules[a]) for a in self.alphabet], dtype=np.int64)
        self._table = np.zeros((len(self.alphabet), width), dtype=np.uint8)
        for a, image in self.rules.items():
            self._table[self._codes[a], :len(image)] = self.encode(image)

        word = self.encode(self.seed)
        self.iterations = 0
        while len(word) < self.min_length:
            word = self._apply(word)
            self.iterations += 1
        self._check_prefix(word)
        word.setflags(write=False)
        self.word = word
        self._matches = {}
        self._visits = {}
        logger.info(f"Substitution word of length {len(word)} after {self.iterations} iterations")

    def _validate(self):
        for a in self.alphabet:
            if len(a) != 1:
                raise ConfigError(f"alphabet symbols must be single characters, got '{a}'")
        if set(self.rules) != set(self.alphabet):
            raise ConfigError("rules must give an image for every alphabet symbol")
        for a, image in self.rules.items():
            if not image or any(c not in self.alphabet for c in image):
                raise ConfigError(f"image of '{a}' must be a non-empty word over the alphabet")
        if self.seed not in self.alphabet:
            raise ConfigError(f"seed '{self.seed}' is not in the alphabet")
        image = self.rules[self.seed]
        if not image.startswith(self.seed) or len(image) < 2:
            raise ConfigError(f"image of the seed must start with it and be longer than one symbol, got '{image}'")

    def _apply(self, word):
        lengths = self._lengths[word]
        total = int(lengths.sum())
        source = np.repeat(np.arange(len(word), dtype=np.int64), lengths)
        offsets = np.cumsum(lengths) - lengths
        return self._table[word[source], np.arange(total, dtype=np.int64) - offsets[source]]

    def _check_prefix(self, word):
        # one more application to a long enough prefix must reproduce the word
        needed = int(np.searchsorted(np.cumsum(self._lengths[word]), len(word))) + 1
        again = self._apply(word[:needed])
        if len(again) < len(word) or not np.array_equal(again[:len(word)], word):
            raise ConfigError("generated word is not a prefix of its own image")

    @property
    def length(self):
        return len(self.word)

    def encode(self, pattern):
        try:
            return np.array([self._codes[c] for c in pattern], dtype=np.uint8)
        except KeyError as e:
            raise InadmissiblePattern(f"symbol {e} of '{pattern}' is not in the alphabet")

    def text(self, start, stop):
        return ''.join(self.alphabet[c] for c in self.word[start:stop])

    def iterate_symbol(self, symbol, times):
        """The word obtained by applying the rules `times` times to one symbol"""
        out = symbol
        for _ in range(times):
            out = ''.join(self.rules[c] for c in out)
        return out

    def symbol_frequencies(self, length=None):
        counts = np.bincount(self.word[:length], minlength=len(self.alphabet))
        return {a: counts[i] / counts.sum() for i, a in enumerate(self.alphabet)}

    def match(self, pattern, length=None):
        """Start positions where the pattern occurs, as a mask over [0, length - len(pattern)]"""
        key = (pattern, length)
        if key not in self._matches:
            codes = self.encode(pattern)
            word = self.word[:length]
            size = len(word) - len(codes) + 1
            mask = np.zeros(max(size, 0), dtype=bool)
            if size > 0 and len(codes):
                candidates = np.flatnonzero(word[:size] == codes[0])
                for i in range(1, len(codes)):
                    candidates = candidates[word[candidates + i] == codes[i]]
                mask[candidates] = True
            self._matches[key] = mask
        return self._matches[key]

    def cylinder(self, pattern, anchor=0):
        if not pattern:
            raise InadmissiblePattern("empty pattern")
        if not self.match(pattern).any():
            raise InadmissiblePattern(f"pattern '{pattern}' does not occur in the generated word")
        return Cylinder(pattern, anchor)

    def visits(self, c):
        """Mask over m in [0, N): T^m x lies in the cylinder"""
        if c not in self._visits:
            starts = self.match(c.pattern)
            mask = np.zeros(self.length, dtype=bool)
            lo = max(0, -c.anchor)
            hi = min(self.length, len(starts) - c.anchor)
            if lo < hi:
                mask[lo:hi] = starts[lo + c.anchor:hi + c.anchor]
            self._visits[c] = mask
        return self._visits[c]


def load_substitution(definition):
    """SubstitutionSystem from a definition {alphabet, rules, seed, min_length}"""
    missing = {'alphabet', 'rules', 'seed'} - set(definition)
    if missing:
        raise ConfigError(f"substitution definition lacks {sorted(missing)}")
    return SubstitutionSystem(
        definition['alphabet'],
        definition['rules'],
        definition['seed'],
        definition.get('min_length'),
    )


@lru_cache(maxsize=4)
def chacon(min_length=None):
    return SubstitutionSystem(CHACON['alphabet'], CHACON['rules'], CHACON['seed'], min_length)


def _window(window):
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise EmptyWindow(f"window [{lo}, {hi}] is empty")
    return lo, hi


def _values(p, lo, hi):
    return [p.evaluate(n) for n in range(lo, hi + 1)]


def _admissible(sys, c):
    if not sys.visits(c).any():
        raise InadmissiblePattern(f"cylinder {c} is empty in the generated word")


def occurrences(sys, c):
    _admissible(sys, c)
    starts = sys.match(c.pattern)
    return WindowSet(0, len(starts) - 1, starts)


def return_set(sys, U, pairs, window, chunk=None):
    """{n : U ∩ T^-p_1(n) V_1 ∩ ... ∩ T^-p_k(n) V_k is non-empty} on the word

    n is undecided when no base position keeps every displaced point inside the word, and
    also when no witness turned up among fewer than `base_fraction` of the word's positions
    (or fewer than the longest stretch without a visit to U): the next occurrence may lie
    past the end of the word.
    """
    lo, hi = _window(window)
    chunk = chunk or config.get('dynamics', 'chunk')
    _admissible(sys, U)
    for _, V in pairs:
        _admissible(sys, V)
    N = sys.length
    base = np.flatnonzero(sys.visits(U))
    gaps = np.diff(np.concatenate(([0], base, [N])))
    usable = max(int(N * config.get('dynamics', 'base_fraction')), int(gaps.max()))
    targets = [sys.visits(V) for _, V in pairs]
    values = [_values(p, lo, hi) for p, _ in pairs]

    members = np.zeros(hi - lo + 1, dtype=bool)
    undecided = np.zeros(hi - lo + 1, dtype=bool)
    for idx in range(hi - lo + 1):
        shifts = [v[idx] for v in values]
        a = max([0] + [-s for s in shifts])
        b = min([N] + [N - s for s in shifts])
        if a >= b:
            undecided[idx] = True
            continue
        i0, i1 = np.searchsorted(base, a), np.searchsorted(base, b)
        for start in range(i0, i1, chunk):
            m = base[start:min(start + chunk, i1)]
            ok = np.ones(len(m), dtype=bool)
            for target, s in zip(targets, shifts):
                ok &= target[m + s]
            if ok.any():
                members[idx] = True
                break
        if not members[idx] and b - a < usable:
            undecided[idx] = True
    if undecided.any():
        logger.warning(f"return set on [{lo}, {hi}]: {int(undecided.sum())} undecided n (word too short)")
    return WindowSet(lo, hi, members, undecided)


def visit_set(sys, x, p, U, window):
    """N(x, U) = {n : T^{p(n)} x in U} for the base position x"""
    lo, hi = _window(window)
    _admissible(sys, U)
    mask = sys.visits(U)
    members = np.zeros(hi - lo + 1, dtype=bool)
    undecided = np.zeros(hi - lo + 1, dtype=bool)
    for idx, v in enumerate(_values(p, lo, hi)):
        pos = x + v
        if 0 <= pos < sys.length:
            members[idx] = mask[pos]
        else:
            undecided[idx] = True
    return WindowSet(lo, hi, members, undecided)


def product_return_set(sys, triples, window):
    """Intersection over i of {n : U_i ∩ T^-p_i(n) V_i is non-empty}"""
    result = None
    for p, U, V in triples:
        S = return_set(sys, U, [(p, V)], window)
        result = S if result is None else intersect(result, S)
    if result is None:
        raise EmptyWindow("product_return_set needs at least one (p, U, V) triple")
    return result


def admissible_words(sys, w, length=None):
    """Sorted distinct w-words of the prefix of given length"""
    codes, _ = _word_codes(sys, w, length)
    base = len(sys.alphabet)
    words = []
    for code in np.unique(codes):
        digits = []
        for _ in range(w):
            digits.append(sys.alphabet[int(code % base)])
            code //= base
        words.append(''.join(reversed(digits)))
    return words


def recurrence_gaps(sys, w, length=None):
    """For every admissible w-word, the largest distance between consecutive occurrences"""
    gaps = {}
    for word in admissible_words(sys, w, length):
        pos = np.flatnonzero(sys.match(word, length))
        steps = np.diff(pos)
        gaps[word] = int(max(pos[0], steps.max() if steps.size else 0))
    return gaps


def cover_number(sys, U):
    """Least l with every position before the last visit covered by T^0 U, ..., T^l U"""
    _admissible(sys, U)
    pos = np.flatnonzero(sys.visits(U))
    steps = np.diff(pos)
    return int(max(pos[0], steps.max() - 1 if steps.size else 0))


def _word_codes(sys, w, length=None):
    word = sys.word[:length].astype(np.int64)
    size = len(word) - w + 1
    if size <= 0:
        raise WindowExhausted(f"word of length {len(word)} is shorter than {w}")
    base = len(sys.alphabet)
    codes = np.zeros(size, dtype=np.int64)
    for i in range(w):
        codes = codes * base + word[i:i + size]
    return codes, size


def _check_nondegenerate(polys):
    for p in polys:
        if p.is_zero or p.evaluate(0) != 0:
            raise NonDegenerate(f"polynomial {p} must vanish at 0 and be non-zero")
    for i, p in enumerate(polys):
        for q in polys[i + 1:]:
            if (p - q).degree < 1:
                raise NonDegenerate(f"polynomials {p} and {q} differ by a constant")


def density_experiment(sys, polys, w, window, samples, seed=0):
    """Coverage of the product of admissible w-words by (x + p_1(n), ..., x + p_k(n))"""
    lo, hi = _window(window)
    polys = list(polys)
    _check_nondegenerate(polys)
    codes, size = _word_codes(sys, w)
    admissible = np.unique(codes)
    K = len(admissible)
    cells = K ** len(polys)

    values = [np.array(_values(p, lo, hi), dtype=object) for p in polys]
    reach_lo = min(int(v.min()) for v in values)
    reach_hi = max(int(v.max()) for v in values)
    limit = int(sys.length * config.get('dynamics', 'base_fraction'))
    rng = np.random.default_rng(seed)
    bases = sorted(int(b) for b in rng.integers(0, limit, size=samples))
    if bases[0] + reach_lo < 0 or bases[-1] + reach_hi >= size:
        raise WindowExhausted(
            f"displacements in [{reach_lo}, {reach_hi}] leave the word of length {sys.length}"
        )
    shifts = [v.astype(np.int64) for v in values]
    ns = np.arange(lo, hi + 1)

    rows = []
    for x in bases:
        combined = np.zeros(hi - lo + 1, dtype=np.int64)
        for s in reversed(shifts):
            combined = combined * K + np.searchsorted(admissible, codes[x + s])
        hits, first = np.unique(combined, return_index=True)
        full = len(hits) == cells
        rows.append(BaseCoverage(
            base=x,
            hits=[int(h) for h in hits],
            coverage=len(hits) / cells,
            first_full_n=int(ns[first.max()]) if full else None,
        ))
    coverage = float(np.mean([r.coverage for r in rows]))
    full_fraction = float(np.mean([r.first_full_n is not None for r in rows]))
    logger.info(f"density experiment: mean coverage {coverage:.4f}, full coverage at {full_fraction:.2%} of bases")
    return CoverageReport(
        polynomials=[str(p) for p in polys],
        word_length=w,
        lo=lo,
        hi=hi,
        alphabet_words=admissible_words(sys, w),
        cells=cells,
        bases=rows,
        coverage_fraction=coverage,
        full_coverage_fraction=full_fraction,
    )


def weak_mixing_probe(sys, U, V, window, runs=None, gaps=None):
    """Classify N(U, V) = {n : U ∩ T^-n V is non-empty}"""
    runs = runs or (config.get('classification', 'run'),)
    gaps = gaps or (config.get('classification', 'gap'),)
    S = return_set(sys, U, [(IntegralPolynomial.linear(), V)], window)
    return classify(S, runs=runs, gaps=gaps)


@dataclass
class NestedConstruction:
    polys: list
    cylinders: list
    shifts: list = field(default_factory=list)
    chains: list = field(default_factory=list)

    def offset(self, i, j):
        """Displacement p_i(k_j) - j of the j-th containment"""
        return self.polys[i].evaluate(self.shifts[j]) - j

    def verify(self, sys=None):
        """Re-check nesting and every containment by direct pattern comparison"""
        for i, chain in enumerate(self.chains):
            for outer, inner in zip(chain, chain[1:]):
                if not _contains_at(inner, outer, 0):
                    return False
            final = chain[-1]
            for j in range(len(self.shifts)):
                if not _contains_at(final, self.cylinders[i], self.offset(i, j)):
                    return False
            if sys is not None and not sys.match(final.pattern).any():
                return False
        return True


def _contains_at(inner, outer, s):
    """inner ⊆ T^-s outer, read off the patterns"""
    off = s + outer.anchor - inner.anchor
    if off < 0 or off + len(outer) > len(inner):
        return False
    return inner.pattern[off:off + len(outer)] == outer.pattern


def _refine(sys, prev, V, s):
    """A cylinder inside prev ∩ T^-s V witnessed in the word, or None"""
    N = sys.length
    a, b = max(0, -s), min(N, N - s)
    if a >= b:
        return None
    hits = np.flatnonzero(sys.visits(prev)[a:b] & sys.visits(V)[a + s:b + s])
    if hits.size == 0:
        return None
    m = a + int(hits[0])
    c_lo = min(prev.anchor, s + V.anchor)
    c_hi = max(prev.anchor + len(prev), s + V.anchor + len(V))
    return Cylinder(sys.text(m + c_lo, m + c_hi), c_lo)


def nested_return_construction(sys, polys, cylinders, r, ell, bound=None):
    """Integers k_0 < ... < k_ell with k_0 > r(0), k_n > k_{n-1} + r(k_{n-1}), and nested
    refinements V_i^(n) of V_i with T^{p_i(k_j) - j} V_i^(n) ⊆ V_i for j <= n."""
    if len(polys) != len(cylinders):
        raise ConfigError("need one cylinder per polynomial")
    for V in cylinders:
        _admissible(sys, V)
    bound = bound or config.get('search', 'max_shift')
    N = sys.length
    result = NestedConstruction(list(polys), list(cylinders), [], [[V] for V in cylinders])

    previous = None
    for step in range(ell + 1):
        threshold = r(0) if previous is None else abs(previous) + r(abs(previous))
        k = threshold + 1
        while True:
            if k - threshold > bound:
                raise WindowExhausted(f"no k in ({threshold}, {threshold + bound}] refines the cylinders")
            offsets = [p.evaluate(k) - step for p in polys]
            if all(abs(s) >= N for s in offsets):
                raise WindowExhausted(f"displacements {offsets} at k={k} exceed the word length {N}")
            refined = []
            for i, s in enumerate(offsets):
                cyl = _refine(sys, result.chains[i][-1], cylinders[i], s)
                if cyl is None:
                    break
                refined.append(cyl)
            if len(refined) == len(polys):
                break
            k += 1
        result.shifts.append(k)
        for chain, cyl in zip(result.chains, refined):
            chain.append(cyl)
        logger.debug(f"nested construction: k_{step} = {k}")
        previous = k

    if not result.verify(sys):
        logger.error(f"nested construction failed its own containment check: {result.shifts}")
        raise ConstructionError(f"chains built along k = {result.shifts} are not nested returns")
    return result

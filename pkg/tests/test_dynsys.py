import numpy as np
import pytest

from src.analytics.probes import smallest_gap
from src.dynsys import (
    Cylinder,
    NestedConstruction,
    admissible_words,
    cover_number,
    density_experiment,
    load_substitution,
    nested_return_construction,
    occurrences,
    product_return_set,
    return_set,
    visit_set,
    weak_mixing_probe,
)
from src.errors import ConfigError, ConstructionError, InadmissiblePattern, NonDegenerate, WindowExhausted
from src.gpoly import IntegralPolynomial
from src.notation import parse_poly
from src.zsets import intersect, is_piecewise_syndetic_at, is_syndetic_at

n = IntegralPolynomial.linear()


def constant(c):
    return lambda x: c


class TestChacon:
    def test_rule_iterations(self, word):
        assert word.iterate_symbol('0', 1) == "0010"
        assert word.iterate_symbol('0', 2) == "0010001010010"
        assert word.text(0, 13) == "0010001010010"

    def test_length(self, word, long_word):
        assert word.length == 265720
        assert long_word.length >= 10 ** 6

    def test_symbol_frequencies(self, long_word):
        freq = long_word.symbol_frequencies(10 ** 6)
        assert 0 < freq['1'] < 0.5

    def test_admissible_two_words(self, word):
        assert admissible_words(word, 2) == ['00', '01', '10']


class TestSubstitutionFiles:
    def test_missing_keys(self):
        with pytest.raises(ConfigError):
            load_substitution({'alphabet': ['0', '1'], 'rules': {'0': '01', '1': '1'}})

    def test_seed_image_must_start_with_seed(self):
        with pytest.raises(ConfigError):
            load_substitution({'alphabet': ['a', 'b'], 'rules': {'a': 'ba', 'b': 'a'}, 'seed': 'a'})

    def test_other_alphabets(self):
        fib = load_substitution({'alphabet': ['a', 'b'], 'rules': {'a': 'ab', 'b': 'a'}, 'seed': 'a', 'min_length': 1000})
        assert fib.text(0, 8) == "abaababa"
        assert fib.length >= 1000


class TestOccurrences:
    def test_single_symbol(self, word):
        assert 0 in occurrences(word, word.cylinder('0'))

    def test_inadmissible(self, word):
        with pytest.raises(InadmissiblePattern):
            word.cylinder('11')
        with pytest.raises(InadmissiblePattern):
            occurrences(word, Cylinder('11'))
        with pytest.raises(InadmissiblePattern):
            word.cylinder('2')

    def test_self_occurrence(self, word):
        pattern = word.text(5, 8)
        assert 5 in occurrences(word, word.cylinder(pattern))

    def test_shifted_anchor(self, word):
        pattern = word.text(10, 14)
        starts = word.match(pattern)
        shifted = word.visits(Cylinder(pattern, 1))
        m = np.arange(1, len(starts))
        assert np.array_equal(shifted[m - 1], starts[m])

    def test_cover_number(self, word):
        assert cover_number(word, word.cylinder('0')) == 1


class TestReturnSets:
    def test_constant_polynomial(self, word):
        U = word.cylinder('01')
        S = return_set(word, U, [(IntegralPolynomial.zero(), U)], (0, 50))
        assert S.count == 51

    def test_linear_return_at_one(self, word):
        U = word.cylinder('0')
        S = return_set(word, U, [(n, U)], (0, 100))
        assert 1 in S and 0 in S

    def test_matches_difference_set(self, word):
        U = word.cylinder('01')
        S = return_set(word, U, [(n, U)], (0, 2000))
        starts = word.visits(U)
        expected = [starts.any()] + [bool((starts[:-d] & starts[d:]).any()) for d in range(1, 2001)]
        assert list(S.members) == expected

    def test_two_polynomials_are_syndetic(self, word):
        S = return_set(word, word.cylinder('00'), [(n, word.cylinder('01')), (2 * n, word.cylinder('10'))], (0, 10000))
        assert smallest_gap(lambda G: is_syndetic_at(S, G), 2000) is not None

    def test_word_too_short_is_undecided(self, word):
        U = word.cylinder('0')
        S = return_set(word, U, [(parse_poly("n^2"), U)], (0, 600))
        assert S.undecided[600]
        assert not S.undecided[10]

    def test_short_word_never_reports_false_gaps(self, word, long_word):
        pattern = word.text(1000, 1012)
        square = parse_poly("n^2")
        U, U_long = word.cylinder(pattern), long_word.cylinder(pattern)
        short = return_set(word, U, [(square, U)], (0, 515))
        full = return_set(long_word, U_long, [(square, U_long)], (0, 515))
        assert not full.undecided.any()
        decided = ~short.undecided
        assert np.array_equal(short.members[decided], full.members[decided])
        assert not (short.members & ~full.members).any()
        assert 366 in full
        assert short.undecided[366] or 366 in short

    def test_product_return_set(self, word):
        U, V = word.cylinder('0'), word.cylinder('10')
        window = (0, 500)
        S = product_return_set(word, [(n, U, V), (2 * n, V, U)], window)
        expected = intersect(return_set(word, U, [(n, V)], window), return_set(word, V, [(2 * n, U)], window))
        assert S == expected

    def test_visit_set(self, word):
        U = word.cylinder('0')
        S = visit_set(word, 0, n, U, (0, 5000))
        assert list(S.elements()[:5]) == [0, 1, 3, 4, 5]
        assert is_piecewise_syndetic_at(S, 3, 4000)


class TestDensity:
    def test_single_linear_polynomial(self, word):
        report = density_experiment(word, [n], 3, (0, 10000), samples=10)
        assert report.coverage_fraction == 1.0
        assert report.cells == len(admissible_words(word, 3))

    def test_pair_covers_product(self, long_word):
        report = density_experiment(long_word, [n, 2 * n], 2, (0, 10000), samples=50)
        assert report.cells == 9
        assert 0 < report.coverage_fraction <= 1
        assert report.full_coverage_fraction >= 0.9

    def test_reproducible(self, word):
        a = density_experiment(word, [n, 2 * n], 2, (0, 2000), samples=5, seed=4)
        b = density_experiment(word, [n, 2 * n], 2, (0, 2000), samples=5, seed=4)
        assert a == b

    def test_degenerate(self, word):
        with pytest.raises(NonDegenerate):
            density_experiment(word, [n, n + IntegralPolynomial.zero()], 2, (0, 100), samples=2)
        with pytest.raises(NonDegenerate):
            density_experiment(word, [parse_poly("n+1")], 2, (0, 100), samples=2)

    def test_window_exhausted(self, word):
        with pytest.raises(WindowExhausted):
            density_experiment(word, [parse_poly("n^2")], 2, (0, 1000), samples=2)


class TestWeakMixingProbe:
    def test_single_symbol_cylinder(self, word):
        U = word.cylinder('0')
        report = weak_mixing_probe(word, U, U, (0, 10000), runs=(3,), gaps=(50,))
        assert report.verdict('thickly_syndetic', run=3, gap=50).holds

    def test_syndetic_with_unit_runs(self, word):
        U = word.cylinder('010')
        report = weak_mixing_probe(word, U, U, (0, 3000), runs=(1,), gaps=(50,))
        assert report.verdict('syndetic', gap=50).holds

    def test_zero_is_a_return(self, word):
        U = word.cylinder('1001')
        S = return_set(word, U, [(n, U)], (0, 10))
        assert 0 in S


class TestNestedConstruction:
    def test_first_shift(self, word):
        result = nested_return_construction(word, [n], [word.cylinder('0')], constant(1), 0)
        assert result.shifts == [2]
        assert result.chains[0][-1] == Cylinder('010', 0)
        assert result.verify(word)

    def test_two_shifts(self, word):
        result = nested_return_construction(word, [n], [word.cylinder('0')], constant(1), 1)
        k0, k1 = result.shifts
        assert 1 < k0 < k1 and k1 > k0 + 1
        assert result.verify(word)

    def test_several_polynomials(self, word):
        polys = [n, parse_poly("n^2")]
        result = nested_return_construction(word, polys, [word.cylinder('0'), word.cylinder('01')], constant(2), 1)
        assert len(result.chains) == 2
        assert all(len(chain) == 3 for chain in result.chains)
        assert result.verify(word)

    def test_growth_beyond_word(self, word):
        with pytest.raises(WindowExhausted):
            nested_return_construction(word, [n], [word.cylinder('0')], constant(10 ** 7), 0)

    def test_failed_containment_check_raises(self, word, monkeypatch):
        monkeypatch.setattr(NestedConstruction, 'verify', lambda self, sys: False)
        with pytest.raises(ConstructionError) as excinfo:
            nested_return_construction(word, [n], [word.cylinder('0')], constant(1), 0)
        assert excinfo.value.exit_code == 3

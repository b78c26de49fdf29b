import numpy as np
import pytest

from src.errors import DimensionMismatch, InvalidModel, NoRepresentation, ParseError
from src.nilgroup import GroupModel, abelian, binom_int, builtin, from_definition


class TestBinomial:
    def test_matches_pascal_for_non_negative_n(self):
        assert [binom_int(6, k) for k in range(8)] == [1, 6, 15, 20, 15, 6, 1, 0]

    def test_negative_upper_index(self):
        # C(-1, k) = (-1)^k, C(-2, 2) = 3
        assert [binom_int(-1, k) for k in range(5)] == [1, -1, 1, -1, 1]
        assert binom_int(-2, 2) == 3

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            binom_int(3, -1)


class TestIdentity:
    def test_identity_vectors(self, heis, z2, ut):
        assert heis.identity() == (0, 0, 0)
        assert z2.identity() == (0, 0)
        assert ut.identity() == (0,) * 6

    def test_basis_element(self, heis):
        assert heis.basis_element(2) == (0, 1, 0)
        with pytest.raises(DimensionMismatch):
            heis.basis_element(4)


class TestMultiply:
    def test_abelian_is_addition(self, z2):
        assert z2.multiply((1, 2), (3, 4)) == (4, 6)

    def test_heisenberg_products(self, heis):
        assert heis.multiply((0, 0, 1), (0, 1, 0)) == (1, 1, 1)
        assert heis.multiply((0, 1, 0), (0, 0, 1)) == (0, 1, 1)

    def test_heisenberg_agrees_with_matrices(self, heis):
        a, b = (0, 0, 1), (0, 1, 0)
        assert np.array_equal(heis.to_matrix(heis.multiply(a, b)), heis.to_matrix(a).dot(heis.to_matrix(b)))

    def test_dimension_mismatch(self, heis):
        with pytest.raises(DimensionMismatch):
            heis.multiply((1, 2), (0, 0, 1))


class TestInverseAndPower:
    def test_abelian_inverse(self, z2):
        assert z2.inverse((3, -5)) == (-3, 5)

    def test_heisenberg_inverse(self, heis):
        assert heis.inverse((0, 1, 1)) == (1, -1, -1)
        assert heis.multiply((0, 1, 1), (1, -1, -1)) == heis.identity()
        assert heis.inverse(heis.identity()) == heis.identity()

    def test_powers(self, heis, z2):
        assert heis.power((0, 1, 1), 2) == (1, 2, 2)
        assert heis.power((4, -2, 7), 0) == heis.identity()
        assert heis.power((4, -2, 7), -1) == heis.inverse((4, -2, 7))
        assert z2.power((2, 3), 5) == (10, 15)


class TestCommutator:
    def test_abelian_commutators_vanish(self, z2):
        assert z2.commutator((1, 2), (-3, 5)) == (0, 0)

    def test_heisenberg_convention(self, heis):
        assert heis.commutator((0, 0, 1), (0, 1, 0)) == (1, 0, 0)

    def test_self_commutator(self, ut):
        a = (1, -2, 3, 4, -5, 6)
        assert ut.commutator(a, a) == ut.identity()

    @pytest.mark.parametrize('name', ['heisenberg', 'ut4', 'Z3'])
    def test_malcev_condition(self, name):
        model = builtin(name)
        for i in range(1, model.s + 1):
            for j in range(i + 1, model.s + 1):
                c = model.commutator(model.basis_element(i), model.basis_element(j))
                assert not any(c[i - 1:])


class TestMatrix:
    def test_heisenberg_embeddings(self, heis):
        assert np.array_equal(heis.to_matrix((0, 0, 0)), np.identity(3, dtype=int))
        x = heis.to_matrix((0, 0, 1))
        assert x[0, 1] == 1 and x[0, 2] == 0 and x[1, 2] == 0
        z = heis.to_matrix((1, 0, 0))
        assert z[0, 2] == 1 and z[0, 1] == 0 and z[1, 2] == 0

    def test_missing_representation(self):
        model = GroupModel('plain', 1, ['a1 + b1'], ['n*a1'])
        with pytest.raises(NoRepresentation):
            model.to_matrix((1,))


class TestGroupLaws:
    @pytest.mark.parametrize('name,samples', [
        ('Z2', 10000),
        ('heisenberg', 10000),
        pytest.param('ut4', 10000, marks=pytest.mark.slow),
    ])
    def test_random_samples(self, name, samples):
        report = builtin(name).check_group_laws(samples=samples, seed=7)
        assert report['violations'] == 0
        assert report['checks']['associativity'] == samples
        if builtin(name).matrix_rep is not None:
            assert report['checks']['oracle'] == samples
        s = builtin(name).s
        assert report['checks']['malcev'] == s * (s - 1) // 2

    def test_malcev_order_is_checked(self):
        reversed_heisenberg = GroupModel(
            'reversed', 3,
            ['a1 + b1', 'a2 + b2', 'a3 + b3 + a1*b2'],
            ['n*a1', 'n*a2', 'n*a3 + n*(n-1)/2*a1*a2'],
            validate=False,
        )
        report = reversed_heisenberg.check_group_laws(samples=20)
        assert report['violations'] == 1
        assert report['failures'][0][:3] == ['malcev', 'S1', 'S2']

    def test_power_matches_repeated_multiplication(self, ut, rng):
        for _ in range(1000):
            a = tuple(int(v) for v in rng.integers(-50, 51, size=6))
            up, down = ut.identity(), ut.identity()
            a_inv = ut.inverse(a)
            for n in range(0, 11):
                assert ut.power(a, n) == up
                assert ut.power(a, -n) == down
                up = ut.multiply(up, a)
                down = ut.multiply(down, a_inv)

    def test_matrix_injective_on_sample(self, heis, rng):
        seen = {}
        for _ in range(500):
            a = tuple(int(v) for v in rng.integers(-50, 51, size=3))
            key = tuple(heis.to_matrix(a).ravel())
            assert seen.setdefault(key, a) == a

    def test_report_is_deterministic(self, heis):
        assert heis.check_group_laws(samples=50, seed=3) == heis.check_group_laws(samples=50, seed=3)

    def test_require_passes_for_builtin(self, ut):
        assert ut.require_group_laws(samples=100)['violations'] == 0


class TestModelValidation:
    def test_rejects_broken_identity_law(self):
        with pytest.raises(InvalidModel):
            GroupModel('bad', 1, ['a1 + b1 + 1'], ['n*a1'])

    def test_rejects_non_integral_map(self):
        with pytest.raises(InvalidModel):
            GroupModel('half', 2, ['a1 + b1 + a2*b2/2', 'a2 + b2'], ['n*a1 + n^2*a2^2/4 - n*a2^2/4', 'n*a2'])

    def test_rejects_malcev_violation(self):
        # Heisenberg with the central element listed last
        with pytest.raises(InvalidModel):
            GroupModel('wrong-order', 3, ['a1 + b1', 'a2 + b2', 'a3 + b3 + a1*b2'], ['n*a1', 'n*a2', 'n*a3 + n*(n-1)/2*a1*a2'])

    def test_rejects_wrong_expression_count(self):
        with pytest.raises(InvalidModel):
            GroupModel('short', 2, ['a1 + b1'], ['n*a1', 'n*a2'])

    def test_bad_expression_is_a_parse_error(self):
        with pytest.raises(ParseError):
            GroupModel('typo', 1, ['a1 + + b1'], ['n*a1'])

    def test_rejects_non_unitriangular_image(self):
        with pytest.raises(InvalidModel):
            from_definition({
                'name': 'diag', 's': 1, 'mul': ['a1 + b1'], 'pow': ['n*a1'],
                'matrix': {'dim': 2, 'images': [[[2, 1], [0, 1]]]},
            })

    def test_builtin_names(self):
        assert builtin('Z4') is abelian(4)
        assert builtin('Heisenberg').s == 3
        assert builtin('Z0') is None
        assert builtin('no-such-model') is None

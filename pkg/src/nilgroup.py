"""Exact arithmetic in finitely generated torsion-free nilpotent groups.

Group elements are Malcev coordinate vectors ``(r_1, ..., r_s)`` in a fixed
ordered basis ``S_1, ..., S_s``: the element is ``S_1^r_1 ... S_s^r_s``.  A
``GroupModel`` stores the coordinate multiplication rule ``R`` and power rule
``R'`` as exact polynomials with rational coefficients, plus an optional
faithful unitriangular integer-matrix representation used as an oracle.
"""
import itertools
import logging
from functools import lru_cache
from math import lcm

import numpy as np
import sympy

from src.config import config
from src.errors import (
    DimensionMismatch,
    GroupLawViolation,
    InternalNotIntegral,
    InvalidModel,
    NoRepresentation,
)
from src.expressions import parse_map_expression

logger = logging.getLogger(__name__)


def binom_int(n, k):
    """Integer binomial coefficient C(n, k), falling-factorial definition for negative n."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return 1
    if n < 0:
        return ((-1) ** k) * binom_int(k - n - 1, k)
    if k > n:
        return 0
    result = 1
    for i in range(1, k + 1):
        result = result * (n - i + 1) // i
    return result


class CoordinateMap:
    """A list of exact polynomials over QQ in a fixed tuple of generators."""

    def __init__(self, exprs, gens):
        self.gens = tuple(gens)
        self.exprs = [sympy.expand(e) for e in exprs]
        self.polys = [sympy.Poly(e, *self.gens, domain='QQ') for e in self.exprs]
        self._compiled = [self._compile(p) for p in self.polys]

    @staticmethod
    def _compile(poly):
        terms = poly.terms()
        if not terms or poly.is_zero:
            return 1, []
        den = lcm(*[int(c.q) for _, c in terms])
        return den, [(int(c.p) * (den // int(c.q)), monom) for monom, c in terms]

    def evaluate(self, values):
        """Exact value at an integer point; the result must be integral"""
        out = []
        for den, terms in self._compiled:
            total = 0
            for num, monom in terms:
                value = num
                for v, e in zip(values, monom):
                    if e:
                        value *= v ** e
                total += value
            if total % den:
                raise InternalNotIntegral(
                    f"coordinate map is not integral at {tuple(values)}: {total}/{den}"
                )
            out.append(total // den)
        return tuple(out)

    def compose(self, args):
        """Substitute univariate polynomials (sympy Poly over QQ) for the generators"""
        gen = args[0].gen
        powers = {}

        def power(i, e):
            if (i, e) not in powers:
                powers[(i, e)] = args[i] ** e
            return powers[(i, e)]

        out = []
        for poly in self.polys:
            total = sympy.Poly(0, gen, domain='QQ')
            for monom, coeff in poly.terms():
                term = sympy.Poly(coeff, gen, domain='QQ')
                for i, e in enumerate(monom):
                    if e:
                        term = term * power(i, e)
                total = total + term
            out.append(total)
        return out


class MatrixRepresentation:
    """Faithful representation by upper unitriangular integer matrices."""

    def __init__(self, dim, images):
        self.dim = int(dim)
        self.images = []
        for j, image in enumerate(images, start=1):
            m = np.array([[int(x) for x in row] for row in image], dtype=object)
            if m.shape != (self.dim, self.dim):
                raise InvalidModel(f"image of S{j} has shape {m.shape}, expected {(self.dim, self.dim)}")
            if any(m[r, c] != (1 if r == c else 0) for r in range(self.dim) for c in range(r + 1)):
                raise InvalidModel(f"image of S{j} is not upper unitriangular")
            self.images.append(m)

    def identity(self):
        return np.identity(self.dim, dtype=int).astype(object)

    def unipotent_power(self, m, r):
        # M^r = sum_k C(r,k) (M - I)^k, exact for every integer r
        nil = m - self.identity()
        result = self.identity()
        term = self.identity()
        for k in range(1, self.dim):
            term = term.dot(nil)
            result = result + binom_int(r, k) * term
        return result

    def embed(self, coords):
        result = self.identity()
        for image, r in zip(self.images, coords):
            if r:
                result = result.dot(self.unipotent_power(image, r))
        return result


class GroupModel:
    """A Malcev basis of size s with its coordinate multiplication and power laws."""

    def __init__(self, name, s, mul, pow, matrix=None, validate=True):
        self.name = name
        self.s = int(s)
        if self.s < 1:
            raise InvalidModel(f"model '{name}' needs at least one basis element")
        if len(mul) != self.s or len(pow) != self.s:
            raise InvalidModel(f"model '{name}' needs exactly {self.s} mul and pow expressions")

        self.a_names = [f"a{i}" for i in range(1, self.s + 1)]
        self.b_names = [f"b{i}" for i in range(1, self.s + 1)]
        a = [sympy.Symbol(v) for v in self.a_names]
        b = [sympy.Symbol(v) for v in self.b_names]
        self._n = sympy.Symbol('n')

        mul_exprs = [parse_map_expression(e, self.a_names + self.b_names) for e in mul]
        pow_exprs = [parse_map_expression(e, self.a_names + ['n']) for e in pow]
        self.mul_map = CoordinateMap(mul_exprs, a + b)
        self.pow_map = CoordinateMap(pow_exprs, a + [self._n])
        self.inverse_map = CoordinateMap([e.subs(self._n, -1) for e in pow_exprs], a)
        self.matrix_rep = None
        if matrix is not None:
            self.matrix_rep = MatrixRepresentation(matrix['dim'], matrix['images'])
            if len(self.matrix_rep.images) != self.s:
                raise InvalidModel(f"model '{name}' needs {self.s} basis images")

        if validate:
            self._validate(a, b, mul_exprs, pow_exprs)

    def __repr__(self):
        return f"GroupModel({self.name!r}, s={self.s})"

    def _validate(self, a, b, mul_exprs, pow_exprs):
        zero_a = {v: 0 for v in a}
        zero_b = {v: 0 for v in b}
        for i, e in enumerate(mul_exprs):
            if sympy.expand(e.subs(zero_b) - a[i]) != 0 or sympy.expand(e.subs(zero_a) - b[i]) != 0:
                raise InvalidModel(f"model '{self.name}': mul coordinate {i + 1} violates the identity law")
        for i, e in enumerate(pow_exprs):
            if sympy.expand(e.subs(self._n, 0)) != 0 or sympy.expand(e.subs(self._n, 1) - a[i]) != 0:
                raise InvalidModel(f"model '{self.name}': pow coordinate {i + 1} violates x^0 = e or x^1 = x")
        inverse = dict(zip(b, self.inverse_map.exprs))
        for i, e in enumerate(mul_exprs):
            if sympy.expand(e.subs(inverse, simultaneous=True)) != 0:
                raise InvalidModel(f"model '{self.name}': mul(x, pow(x, -1)) is not the identity")

        try:
            for point in self._integrality_points():
                self.mul_map.evaluate(point)
                self.pow_map.evaluate(point[:self.s] + point[-1:])
        except InternalNotIntegral as e:
            raise InvalidModel(f"model '{self.name}': {e}")

        failures = self._malcev_failures()
        if failures:
            i, j, c = failures[0]
            raise InvalidModel(f"model '{self.name}': [S{i},S{j}] = {c} is not in the span of S1..S{i - 1}")

    def _malcev_failures(self):
        """Basis pairs i < j whose commutator has a non-zero coordinate at index i or later"""
        failures = []
        for i in range(1, self.s + 1):
            for j in range(i + 1, self.s + 1):
                c = self.commutator(self.basis_element(i), self.basis_element(j))
                if any(c[i - 1:]):
                    failures.append((i, j, c))
        return failures

    def _integrality_points(self):
        radius = config.get('algebra', 'integrality_radius')
        samples = config.get('algebra', 'integrality_samples')
        width = 2 * radius + 1
        if width ** (2 * self.s) <= samples:
            yield from itertools.product(range(-radius, radius + 1), repeat=2 * self.s)
            return
        logger.info(
            f"Model '{self.name}': integrality checked on {samples} sampled points of [-{radius},{radius}]^{2 * self.s}"
        )
        rng = np.random.default_rng(config.get('algebra', 'integrality_seed'))
        for row in rng.integers(-radius, radius + 1, size=(samples, 2 * self.s)):
            yield tuple(int(v) for v in row)

    def _check(self, *elements):
        for x in elements:
            if len(x) != self.s:
                raise DimensionMismatch(f"expected {self.s} coordinates for model '{self.name}', got {len(x)}")

    def identity(self):
        return (0,) * self.s

    def basis_element(self, j):
        """Coordinates of S_j (1-based)"""
        if not 1 <= j <= self.s:
            raise DimensionMismatch(f"basis index {j} outside 1..{self.s}")
        return tuple(1 if i == j else 0 for i in range(1, self.s + 1))

    def multiply(self, a, b):
        self._check(a, b)
        return self.mul_map.evaluate(tuple(a) + tuple(b))

    def inverse(self, a):
        self._check(a)
        return self.inverse_map.evaluate(tuple(a))

    def power(self, a, n):
        self._check(a)
        return self.pow_map.evaluate(tuple(a) + (int(n),))

    def commutator(self, a, b):
        """a^-1 b^-1 a b"""
        self._check(a, b)
        left = self.multiply(self.inverse(a), self.inverse(b))
        return self.multiply(self.multiply(left, a), b)

    def to_matrix(self, a):
        if self.matrix_rep is None:
            raise NoRepresentation(f"model '{self.name}' has no matrix representation")
        self._check(a)
        return self.matrix_rep.embed(a)

    def check_group_laws(self, samples=1000, seed=0, radius=50):
        """Seeded randomized check of the group axioms and the matrix oracle, plus the Malcev condition on basis pairs"""
        rng = np.random.default_rng(seed)
        draw = lambda: tuple(int(v) for v in rng.integers(-radius, radius + 1, size=self.s))
        e = self.identity()
        counts = {'associativity': 0, 'identity': 0, 'inverse': 0, 'power': 0, 'oracle': 0}
        failures = []
        for _ in range(samples):
            a, b, c = draw(), draw(), draw()
            if self.multiply(self.multiply(a, b), c) != self.multiply(a, self.multiply(b, c)):
                failures.append(('associativity', a, b, c))
            counts['associativity'] += 1
            if self.multiply(a, e) != a or self.multiply(e, a) != a:
                failures.append(('identity', a))
            counts['identity'] += 1
            if self.multiply(a, self.inverse(a)) != e or self.multiply(self.inverse(a), a) != e:
                failures.append(('inverse', a))
            counts['inverse'] += 1
            n = int(rng.integers(-10, 11))
            expected = e
            step = a if n >= 0 else self.inverse(a)
            for _ in range(abs(n)):
                expected = self.multiply(expected, step)
            if self.power(a, n) != expected:
                failures.append(('power', a, n))
            counts['power'] += 1
            if self.matrix_rep is not None:
                if not np.array_equal(self.to_matrix(self.multiply(a, b)), self.to_matrix(a).dot(self.to_matrix(b))):
                    failures.append(('oracle', a, b))
                counts['oracle'] += 1
        for i, j, c in self._malcev_failures():
            failures.append(('malcev', f"S{i}", f"S{j}", c))
        counts['malcev'] = self.s * (self.s - 1) // 2
        report = {
            'model': self.name,
            's': self.s,
            'samples': samples,
            'seed': seed,
            'checks': counts,
            'failures': [[str(x) for x in f] for f in failures[:20]],
            'violations': len(failures),
        }
        if failures:
            logger.error(f"Group law violations in model '{self.name}': {failures[:5]}")
        return report

    def require_group_laws(self, samples=1000, seed=0):
        report = self.check_group_laws(samples=samples, seed=seed)
        if report['violations']:
            raise GroupLawViolation(f"model '{self.name}' failed {report['violations']} group-law checks")
        return report


def _unit(dim, r, c):
    m = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    m[r][c] = 1
    return m


HEISENBERG = {
    'name': 'heisenberg',
    's': 3,
    # basis S1 = z, S2 = y, S3 = x with [x, y] = z central
    'mul': ['a1 + b1 + a3*b2', 'a2 + b2', 'a3 + b3'],
    'pow': ['n*a1 + n*(n-1)/2*a2*a3', 'n*a2', 'n*a3'],
    'matrix': {'dim': 3, 'images': [_unit(3, 0, 2), _unit(3, 1, 2), _unit(3, 0, 1)]},
}

UT4 = {
    'name': 'ut4',
    's': 6,
    # basis E14; E13, E24; E12, E23, E34 (descending superdiagonal distance)
    'mul': [
        'a1 + b1 + a4*b3 - a4*a6*b5 - a6*b2 - a6*b4*b5',
        'a2 + b2 - a5*b4',
        'a3 + b3 - a6*b5',
        'a4 + b4',
        'a5 + b5',
        'a6 + b6',
    ],
    'pow': [
        'n*a1 + n*(n-1)/2*a3*a4 - n*(n-1)/2*a2*a6 - (n^3-n)/3*a4*a5*a6',
        'n*a2 - n*(n-1)/2*a4*a5',
        'n*a3 - n*(n-1)/2*a5*a6',
        'n*a4',
        'n*a5',
        'n*a6',
    ],
    'matrix': {
        'dim': 4,
        'images': [_unit(4, 0, 3), _unit(4, 0, 2), _unit(4, 1, 3), _unit(4, 0, 1), _unit(4, 1, 2), _unit(4, 2, 3)],
    },
}


def abelian_definition(s):
    return {
        'name': f"Z{s}",
        's': s,
        'mul': [f"a{i} + b{i}" for i in range(1, s + 1)],
        'pow': [f"n*a{i}" for i in range(1, s + 1)],
        'matrix': {'dim': s + 1, 'images': [_unit(s + 1, 0, i) for i in range(1, s + 1)]},
    }


def from_definition(definition):
    return GroupModel(
        definition['name'],
        definition['s'],
        definition['mul'],
        definition['pow'],
        matrix=definition.get('matrix'),
    )


@lru_cache(maxsize=None)
def abelian(s):
    return from_definition(abelian_definition(s))


@lru_cache(maxsize=None)
def heisenberg():
    return from_definition(HEISENBERG)


@lru_cache(maxsize=None)
def ut4():
    return from_definition(UT4)


def builtin(name):
    """Resolve a builtin model name: Z<s>, heisenberg, ut4; None if unknown"""
    key = name.strip().lower()
    if key == 'heisenberg':
        return heisenberg()
    if key == 'ut4':
        return ut4()
    if key.startswith('z') and key[1:].isdigit() and int(key[1:]) >= 1:
        return abelian(int(key[1:]))
    return None

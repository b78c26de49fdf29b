"""Γ-polynomials in canonical form.

A Γ-polynomial ``g(n) = S_1^{p_1(n)} ... S_s^{p_s(n)}`` is stored as one integral
polynomial per basis element.  Integral polynomials live in the binomial basis
``p(n) = sum c_k C(n, k)`` with integer ``c_k``, so integer-valuedness holds by
construction.  Products, inverses and powers push the component polynomials
through the model's coordinate maps with exact rational arithmetic and convert
back, failing loudly if the result is not integral.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial
from typing import NamedTuple

import sympy

from src.config import config
from src.errors import (
    DegreeGuardExceeded,
    DimensionMismatch,
    InternalNotIntegral,
    ModelMismatch,
    NotInPG0,
    NotIntegral,
    PreconditionViolated,
    Undecided,
)
from src.nilgroup import binom_int

logger = logging.getLogger(__name__)

N = sympy.Symbol('n')


@lru_cache(maxsize=None)
def _binomial_basis(k):
    poly = sympy.Poly(1, N, domain='QQ')
    for i in range(k):
        poly = poly * sympy.Poly(N - i, N, domain='QQ')
    return poly.mul_ground(sympy.Rational(1, factorial(k)))


def _fractions(poly):
    """Monomial coefficients of a sympy Poly, lowest degree first"""
    if poly.is_zero:
        return []
    return [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]


def _horner(coeffs, x):
    value = Fraction(0)
    for c in reversed(coeffs):
        value = value * x + c
    return value


def _binomial_from_values(values, error):
    coeffs = []
    row = list(values)
    while row:
        head = row[0]
        if head.denominator != 1:
            raise error(f"polynomial is not integer-valued (binomial coefficient {head})")
        coeffs.append(int(head))
        row = [b - a for a, b in zip(row, row[1:])]
    return coeffs


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(int(c) for c in coeffs)


@dataclass(frozen=True)
class IntegralPolynomial:
    """Integer-valued polynomial in the binomial basis; ``()`` is the zero polynomial."""
    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', _trim(self.coeffs))

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def linear(cls, a=1):
        """p(n) = a*n"""
        return cls((0, a))

    @classmethod
    def from_monomials(cls, coeffs, error=NotIntegral):
        coeffs = [Fraction(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        values = [_horner(coeffs, x) for x in range(len(coeffs))]
        return cls(_binomial_from_values(values, error))

    @classmethod
    def from_poly(cls, poly, error=NotIntegral):
        return cls.from_monomials(_fractions(poly), error=error)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def is_zero(self):
        return not self.coeffs

    def evaluate(self, n):
        return sum(c * binom_int(n, k) for k, c in enumerate(self.coeffs) if c)

    @cached_property
    def poly(self):
        total = sympy.Poly(0, N, domain='QQ')
        for k, c in enumerate(self.coeffs):
            if c:
                total = total + _binomial_basis(k).mul_ground(c)
        return total

    @cached_property
    def monomial_coeffs(self):
        return tuple(_fractions(self.poly))

    @property
    def leading_coefficient(self):
        """Leading coefficient in the monomial basis"""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.coeffs[-1], factorial(self.degree))

    def shift(self, m):
        """n -> p(n + m)"""
        if self.is_zero or not m:
            return self
        return IntegralPolynomial.from_poly(self.poly.shift(m))

    def __add__(self, other):
        width = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (width - len(self.coeffs))
        b = other.coeffs + (0,) * (width - len(other.coeffs))
        return IntegralPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return IntegralPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntegralPolynomial(tuple(other * c for c in self.coeffs))
        return IntegralPolynomial.from_poly(self.poly * other.poly)

    __rmul__ = __mul__

    def __str__(self):
        from src.notation import format_poly
        return format_poly(self)


def poly_from_monomials(coeffs):
    """Binomial-basis form of sum coeffs[i] n^i; NotIntegral unless integer-valued"""
    return IntegralPolynomial.from_monomials(coeffs)


def eval_poly(p, n):
    return p.evaluate(n)


class Weight(NamedTuple):
    """(l, k); tuple order is the weight order"""
    l: int
    k: int

    def __str__(self):
        return f"({self.l},{self.k})"


@dataclass(frozen=True, eq=False)
class GammaPolynomial:
    model: object
    components: tuple

    def __post_init__(self):
        components = tuple(self.components)
        if len(components) != self.model.s:
            raise DimensionMismatch(
                f"model '{self.model.name}' has {self.model.s} basis elements, got {len(components)} components"
            )
        object.__setattr__(self, 'components', components)

    def __eq__(self, other):
        if not isinstance(other, GammaPolynomial):
            return NotImplemented
        return self.model.name == other.model.name and self.components == other.components

    def __hash__(self):
        return hash((self.model.name, self.components))

    def __repr__(self):
        return f"GammaPolynomial({self.model.name!r}, {self.key})"

    def __str__(self):
        from src.notation import format_gpoly
        return format_gpoly(self)

    @property
    def key(self):
        """Canonical coefficient vector"""
        return tuple(p.coeffs for p in self.components)

    @property
    def is_identity(self):
        return all(p.is_zero for p in self.components)

    @property
    def in_pg0(self):
        return all(p.evaluate(0) == 0 for p in self.components)

    @property
    def degree(self):
        return max(p.degree for p in self.components)

    def evaluate(self, n):
        return tuple(p.evaluate(n) for p in self.components)

    def weight(self):
        for j in range(len(self.components), 0, -1):
            p = self.components[j - 1]
            if not p.is_zero:
                return Weight(j, p.degree)
        return Weight(0, 0)

    def leading_coefficient(self):
        l = self.weight().l
        return self.components[l - 1].leading_coefficient if l else Fraction(0)


def identity(model):
    return GammaPolynomial(model, (IntegralPolynomial.zero(),) * model.s)


def constant(model, coords):
    """The constant Γ-polynomial n -> element with the given coordinates"""
    if len(coords) != model.s:
        raise DimensionMismatch(f"expected {model.s} coordinates, got {len(coords)}")
    return GammaPolynomial(model, tuple(IntegralPolynomial.constant(int(c)) for c in coords))


def basis_power(model, j, p):
    """S_j^{p(n)}"""
    components = [IntegralPolynomial.zero()] * model.s
    components[j - 1] = p
    return GammaPolynomial(model, tuple(components))


def evaluate(g, n):
    return g.evaluate(n)


def weight(g):
    return g.weight()


def _same_model(g, h):
    if g.model is h.model:
        return
    if g.model.name != h.model.name or g.model.s != h.model.s:
        raise ModelMismatch(f"Γ-polynomials over different models: '{g.model.name}' and '{h.model.name}'")


def _to_components(model, polys):
    guard = config.get('algebra', 'degree_guard')
    components = []
    for poly in polys:
        if not poly.is_zero and poly.degree() > guard:
            raise DegreeGuardExceeded(f"component degree {poly.degree()} exceeds the guard {guard}")
        components.append(IntegralPolynomial.from_poly(poly, error=InternalNotIntegral))
    return GammaPolynomial(model, tuple(components))


def gp_multiply(g, h):
    _same_model(g, h)
    if h.is_identity:
        return g
    if g.is_identity:
        return h
    args = [p.poly for p in g.components + h.components]
    return _to_components(g.model, g.model.mul_map.compose(args))


def gp_inverse(g):
    if g.is_identity:
        return g
    return _to_components(g.model, g.model.inverse_map.compose([p.poly for p in g.components]))


def gp_power(g, p):
    """n -> g(n)^{p(n)}"""
    if g.is_identity or p.is_zero:
        return identity(g.model)
    args = [q.poly for q in g.components] + [p.poly]
    return _to_components(g.model, g.model.pow_map.compose(args))


def shift_derive(g, m):
    """n -> g(m)^-1 g(n + m)"""
    shifted = GammaPolynomial(g.model, tuple(p.shift(m) if m else p for p in g.components))
    return gp_multiply(constant(g.model, g.model.inverse(g.evaluate(m))), shifted)


def conjugate(g, h):
    """h^-1 g h"""
    _same_model(g, h)
    if h.is_identity:
        return g
    return gp_multiply(gp_multiply(gp_inverse(h), g), h)


def equivalent(g, h):
    _same_model(g, h)
    w = g.weight()
    if w != h.weight():
        return False
    return w == Weight(0, 0) or g.leading_coefficient() == h.leading_coefficient()


def _require_pg0(f):
    if not f.in_pg0:
        raise NotInPG0(f"{f} does not vanish at n = 0")


def is_character(f):
    """True iff f(n) = f(1)^n identically"""
    _require_pg0(f)
    return f == gp_power(constant(f.model, f.evaluate(1)), IntegralPolynomial.linear())


def derived_form(f, m):
    """n -> f(m)^-1 f(n + m) f(n)^-1"""
    return gp_multiply(shift_derive(f, m), gp_inverse(f))


def relative_derived_form(f_t, f_1, k):
    """n -> f_t(k)^-1 f_t(n + k) f_1(n)^-1"""
    return gp_multiply(shift_derive(f_t, k), gp_inverse(f_1))


def find_additive_shift(f, bound=None):
    """Smallest u in 1..bound with f(n + u) = f(u) f(n) for all n, else None"""
    _require_pg0(f)
    bound = bound or config.get('search', 'max_shift')
    for u in range(1, bound + 1):
        if derived_form(f, u).is_identity:
            return u
    return None


def derived_distinct_shifts(f, ell, L, bound=None):
    """Shifts k_i = i(L+2)+u whose derived forms d_{i,j} = D(k_i + j), j = 0..L, are
    non-identity and pairwise distinct."""
    _require_pg0(f)
    if is_character(f):
        raise PreconditionViolated(f"{f} satisfies f(m+n) = f(m)f(n) for every m")
    bound = bound or config.get('search', 'max_shift')
    cache = {}

    def form(m):
        if m not in cache:
            d = derived_form(f, m)
            if d.is_identity:
                raise PreconditionViolated(f"{f} satisfies f(n+{m}) = f({m})f(n) for all n")
            cache[m] = d
        return cache[m]

    for u in range(1, bound + 1):
        shifts = tuple(i * (L + 2) + u for i in range(ell + 1))
        forms = [form(k + j) for k in shifts for j in range(L + 1)]
        if len(set(forms)) == len(forms):
            logger.debug(f"derived_distinct_shifts: u={u} gives {shifts}")
            return shifts
    raise Undecided(f"no shift u <= {bound} separates the derived forms of {f}")


def shift_gap_sequence(f_list, ell, bound=None):
    """Greedy increasing k_0 < ... < k_ell keeping the forms f_t(k)^-1 f_t(n+k) f_1(n)^-1
    non-identity for t >= 2 and distinct across different t."""
    if not f_list:
        raise PreconditionViolated("shift_gap_sequence needs at least one Γ-polynomial")
    if len(set(f_list)) != len(f_list):
        raise PreconditionViolated("Γ-polynomials must be pairwise distinct")
    for f in f_list:
        _require_pg0(f)
        if f.is_identity:
            raise PreconditionViolated("the identity is not allowed in a PG_0* family")
    bound = bound or config.get('search', 'max_shift')
    f_1 = f_list[0]
    chosen = []
    seen = [set() for _ in f_list]

    k = 0
    while len(chosen) <= ell:
        k += 1
        if k > bound:
            raise Undecided(f"no admissible shift <= {bound} after {chosen}")
        forms = [relative_derived_form(f_t, f_1, k) for f_t in f_list]
        if any(d.is_identity for d in forms[1:]):
            continue
        clash = False
        for t, d in enumerate(forms):
            for s, other in enumerate(forms):
                if s != t and (d == other or d in seen[s]):
                    clash = True
        if clash:
            continue
        chosen.append(k)
        for t, d in enumerate(forms):
            seen[t].add(d)
    return tuple(chosen)

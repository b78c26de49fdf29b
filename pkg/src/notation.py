"""Text notation for Γ-polynomials.

    gpoly  := "e" | factor {factor}
    factor := ("S" index | "T") "^" "{" poly "}"
    poly   := ["-"] term {("+" | "-") term}
    term   := [int ["*"]] ("n" ["^" int] | "C(n," int ")") | int

Factors appear in strictly increasing index order.  ``T`` is accepted for ``S1``
in rank-one models, and the printer uses it there.
"""
import logging
from functools import lru_cache

from pyparsing import (
    Literal,
    OneOrMore,
    Optional,
    ParseBaseException,
    Regex,
    StringEnd,
    Suppress,
    Word,
    ZeroOrMore,
    col,
    nums,
    one_of,
)

from src.errors import CanonicalOrderError, ParseError
from src.gpoly import GammaPolynomial, IntegralPolynomial, identity

logger = logging.getLogger(__name__)


class _Factor:

    def __init__(self, s, loc, toks):
        self.name = toks[0]
        self.poly = toks[1]
        self.column = col(loc, s)

    def __repr__(self):
        return f"_Factor({self.name}, {self.poly.coeffs})"


class _Identity:

    def __init__(self, s, loc, toks):
        self.column = col(loc, s)


def _monomial(toks):
    c = int(toks.get('coeff', 1))
    degree = int(toks.get('exp', 1))
    return IntegralPolynomial.from_monomials([0] * degree + [c])


def _binomial(toks):
    c = int(toks.get('coeff', 1))
    k = int(toks['k'])
    return IntegralPolynomial((0,) * k + (c,))


def _constant(toks):
    return IntegralPolynomial.constant(int(toks[0]))


def _fold_poly(toks):
    items = list(toks)
    sign = 1
    total = IntegralPolynomial.zero()
    for item in items:
        if isinstance(item, str):
            sign = -1 if item == '-' else 1
        else:
            total = total + (item if sign > 0 else -item)
            sign = 1
    return total


@lru_cache(maxsize=None)
def _grammars():
    integer = Word(nums)
    coeff = integer('coeff') + Optional(Suppress('*'))
    monomial = (Optional(coeff) + Suppress(Literal('n')) + Optional(Suppress('^') + integer('exp'))).set_parse_action(_monomial)
    binomial = (
        Optional(coeff) + Suppress('C') + Suppress('(') + Suppress('n') + Suppress(',') + integer('k') + Suppress(')')
    ).set_parse_action(_binomial)
    constant = integer.copy().set_parse_action(_constant)
    term = binomial | monomial | constant
    sign = one_of('+ -')
    poly = (Optional(sign) + term + ZeroOrMore(sign + term)).set_parse_action(_fold_poly)

    name = Regex(r"S\d+") | Literal('T')
    factor = (name + Suppress('^') + Suppress('{') - poly - Suppress('}')).set_parse_action(_Factor)
    unit = Literal('e').set_parse_action(_Identity)
    gpoly = (unit | OneOrMore(factor)) + StringEnd()
    return gpoly, poly + StringEnd()


def parse_poly(text):
    """Parse an integer polynomial in n such as ``n^2+9n`` or ``2*C(n,2)+C(n,1)``"""
    try:
        return _grammars()[1].parse_string(text, parse_all=True)[0]
    except ParseBaseException as e:
        raise ParseError(f"bad polynomial '{text}': {e.msg}", column=e.col, text=text)


def parse_gpoly(text, model):
    """Parse the canonical-form notation into a GammaPolynomial over ``model``"""
    try:
        parsed = list(_grammars()[0].parse_string(text, parse_all=True))
    except ParseBaseException as e:
        raise ParseError(f"bad Γ-polynomial '{text}': {e.msg}", column=e.col, text=text)

    if isinstance(parsed[0], _Identity):
        return identity(model)

    components = [IntegralPolynomial.zero()] * model.s
    last = 0
    for factor in parsed:
        if factor.name == 'T':
            if model.s != 1:
                raise ParseError(
                    f"'T' stands for S1 only in rank-one models, '{model.name}' has s={model.s}",
                    column=factor.column, text=text,
                )
            index = 1
        else:
            index = int(factor.name[1:])
        if not 1 <= index <= model.s:
            raise ParseError(
                f"basis index {index} outside 1..{model.s} for model '{model.name}'",
                column=factor.column, text=text,
            )
        if index <= last:
            raise CanonicalOrderError(
                f"factor S{index} after S{last}: factors must appear in increasing index order",
                column=factor.column, text=text,
            )
        components[index - 1] = factor.poly
        last = index
    return GammaPolynomial(model, tuple(components))


def _join(terms):
    out = ''
    for i, (c, body) in enumerate(terms):
        if i == 0:
            out += ('-' if c < 0 else '') + body
        else:
            out += ('-' if c < 0 else '+') + body
    return out


def format_poly(p):
    if p.is_zero:
        return '0'
    mono = p.monomial_coeffs
    terms = []
    if all(c.denominator == 1 for c in mono):
        for k in range(len(mono) - 1, -1, -1):
            c = int(mono[k])
            if not c:
                continue
            var = '' if k == 0 else ('n' if k == 1 else f"n^{k}")
            if k == 0:
                body = str(abs(c))
            else:
                body = var if abs(c) == 1 else f"{abs(c)}{var}"
            terms.append((c, body))
    else:
        for k in range(len(p.coeffs) - 1, -1, -1):
            c = p.coeffs[k]
            if not c:
                continue
            if k == 0:
                body = str(abs(c))
            else:
                body = f"C(n,{k})" if abs(c) == 1 else f"{abs(c)}*C(n,{k})"
            terms.append((c, body))
    return _join(terms)


def format_gpoly(g):
    if g.is_identity:
        return 'e'
    factors = []
    for j, p in enumerate(g.components, start=1):
        if p.is_zero:
            continue
        name = 'T' if g.model.s == 1 else f"S{j}"
        factors.append(f"{name}^{{{format_poly(p)}}}")
    return ' '.join(factors)

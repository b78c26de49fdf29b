"""Grammar for the coordinate-map expressions of a group model file.

Expressions are polynomials in named integer variables (``a1..as``, ``b1..bs``
and ``n``) built from integer literals, ``+ - * ^``, parentheses and division
by an integer literal.  They are parsed into exact sympy expressions.
"""
import logging
from functools import lru_cache

import sympy
from pyparsing import (
    ParseBaseException,
    ParseFatalException,
    ParserElement,
    Regex,
    StringEnd,
    Word,
    infix_notation,
    nums,
    one_of,
    OpAssoc,
)

from src.errors import ParseError

logger = logging.getLogger(__name__)

ParserElement.enable_packrat()


def _fold_power(s, loc, toks):
    operands = toks[0][::2]
    result = operands[-1]
    for base in reversed(operands[:-1]):
        if not (result.is_Integer and result >= 0):
            raise ParseFatalException(s, loc, "exponent must be a non-negative integer literal")
        result = base ** result
    return result


def _negate(s, loc, toks):
    return -toks[0][1]


def _fold_product(s, loc, toks):
    group = toks[0]
    result = group[0]
    for op, operand in zip(group[1::2], group[2::2]):
        if op == '*':
            result = result * operand
        else:
            if not (operand.is_Integer and operand != 0):
                raise ParseFatalException(s, loc, "division is only allowed by a non-zero integer literal")
            result = result / operand
    return result


def _fold_sum(s, loc, toks):
    group = toks[0]
    result = group[0]
    for op, operand in zip(group[1::2], group[2::2]):
        result = result + operand if op == '+' else result - operand
    return result


@lru_cache(maxsize=None)
def _grammar(variables):
    symbols = {name: sympy.Symbol(name) for name in variables}

    def to_symbol(s, loc, toks):
        name = toks[0]
        if name not in symbols:
            raise ParseFatalException(s, loc, f"unknown variable '{name}'")
        return symbols[name]

    integer = Word(nums).set_parse_action(lambda toks: sympy.Integer(int(toks[0])))
    variable = Regex(r"[A-Za-z_][A-Za-z_0-9]*").set_parse_action(to_symbol)
    expr = infix_notation(
        integer | variable,
        [
            ('^', 2, OpAssoc.RIGHT, _fold_power),
            ('-', 1, OpAssoc.RIGHT, _negate),
            (one_of('* /'), 2, OpAssoc.LEFT, _fold_product),
            (one_of('+ -'), 2, OpAssoc.LEFT, _fold_sum),
        ],
    )
    return expr + StringEnd()


def parse_map_expression(text, variables):
    """Parse one coordinate-map expression into an expanded sympy expression"""
    if not isinstance(text, str):
        return sympy.expand(sympy.sympify(text))
    try:
        result = _grammar(tuple(variables)).parse_string(text, parse_all=True)[0]
    except ParseBaseException as e:
        raise ParseError(f"bad coordinate expression '{text}': {e.msg}", column=e.col, text=text)
    return sympy.expand(result)

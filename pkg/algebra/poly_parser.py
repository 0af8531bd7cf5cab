"""
Polynomial Text Parser

Grammar (pyparsing infix notation, tightest first):

    atom    :: integer | variable | '(' expr ')'
    power   :: atom ['^' integer]*            left-associative
    signed  :: ['+' | '-']* power
    product :: signed ['*' signed]*
    expr    :: product [('+' | '-') product]*

Variables are x1..xN, the aliases x, y, z when N <= 3, and t (the class of
the generator) in extension fields. Integer literals of any size are reduced
into the field; exponents must be integer literals up to MAX_EXPONENT.
Before anything is expanded the whole tree is sized: a total degree above
MAX_EXPONENT or an expansion above MAX_EXPANDED_TERMS terms is an exponent
overflow.
"""

from __future__ import annotations

import re
from math import comb
from dataclasses import dataclass
from typing import Any

from pyparsing import (
    OpAssoc,
    ParseException,
    ParserElement,
    Regex,
    Word,
    infix_notation,
    nums,
    one_of,
)

from algebra.gf import FieldCtx
from algebra.mvpoly import ALIASES, MvPoly
from config import MAX_EXPANDED_TERMS, MAX_EXPONENT
from errors import PolynomialSyntaxError

ParserElement.enable_packrat()


# ============================================================================
# Syntax tree
# ============================================================================


@dataclass(frozen=True)
class Num:
    value: int
    loc: int


@dataclass(frozen=True)
class Var:
    name: str
    loc: int


@dataclass(frozen=True)
class Neg:
    operand: Any
    loc: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Any
    right: Any
    loc: int


def _binary(s, loc, toks):
    items = toks[0]
    node = items[0]
    for i in range(1, len(items), 2):
        node = BinOp(items[i], node, items[i + 1], loc)
    return node


def _unary(s, loc, toks):
    items = toks[0]
    node = items[-1]
    for op in reversed(items[:-1]):
        if op == "-":
            node = Neg(node, loc)
    return node


def _build_grammar() -> ParserElement:
    integer = Word(nums).set_parse_action(lambda s, loc, t: Num(int(t[0]), loc))
    variable = Regex(r"(x\d+|[xyzt])(?![A-Za-z0-9_])").set_parse_action(lambda s, loc, t: Var(t[0], loc))
    operand = integer | variable
    return infix_notation(
        operand,
        [
            ("^", 2, OpAssoc.LEFT, _binary),
            (one_of("+ -"), 1, OpAssoc.RIGHT, _unary),
            ("*", 2, OpAssoc.LEFT, _binary),
            (one_of("+ -"), 2, OpAssoc.LEFT, _binary),
        ],
    )


_GRAMMAR = _build_grammar()


# ============================================================================
# Evaluation into MvPoly
# ============================================================================


class _Builder:
    def __init__(self, text: str, nvars: int, ctx: FieldCtx):
        self.text = text
        self.nvars = nvars
        self.ctx = ctx

    def fail(self, message: str, loc: int):
        raise PolynomialSyntaxError(message, loc, self.text)

    def variable_index(self, node: Var) -> int:
        name = node.name
        if name in ALIASES:
            if self.nvars > len(ALIASES):
                self.fail(f"Alias '{name}' needs nvars <= 3; use x1..x{self.nvars}", node.loc)
            index = ALIASES.index(name)
        else:
            index = int(name[1:]) - 1
            if index < 0:
                self.fail(f"Variables are numbered from x1, got '{name}'", node.loc)
        if index >= self.nvars:
            self.fail(f"Variable '{name}' out of range for nvars = {self.nvars}", node.loc)
        return index

    def measure(self, node) -> tuple[int, int]:
        """Upper bounds (total degree, term count) of the expanded node."""
        if isinstance(node, Num):
            return 0, 1
        if isinstance(node, Var):
            return (0 if node.name == "t" else 1), 1
        if isinstance(node, Neg):
            return self.measure(node.operand)
        if not isinstance(node, BinOp):
            return 0, 1
        if node.op == "^":
            if not isinstance(node.right, Num):
                self.fail("Exponent must be a non-negative integer literal", node.right.loc)
            e = node.right.value
            if e > MAX_EXPONENT:
                self.fail(f"Exponent {e} exceeds {MAX_EXPONENT}", node.right.loc)
            degree, terms = self.measure(node.left)
            return self.bounded(degree * e, 1 if terms == 1 or e == 0 else None, node.right.loc)
        left_degree, left_terms = self.measure(node.left)
        right_degree, right_terms = self.measure(node.right)
        if node.op == "*":
            return self.bounded(left_degree + right_degree, left_terms * right_terms, node.loc)
        return self.bounded(max(left_degree, right_degree), left_terms + right_terms, node.loc)

    def bounded(self, degree: int, terms: int | None, loc: int) -> tuple[int, int]:
        if degree > MAX_EXPONENT:
            self.fail(f"Exponent overflow: total degree {degree} exceeds {MAX_EXPONENT}", loc)
        dense = comb(degree + self.nvars, self.nvars)
        terms = dense if terms is None else min(terms, dense)
        if terms > MAX_EXPANDED_TERMS:
            self.fail(f"Exponent overflow: expansion may reach {terms} terms (cap {MAX_EXPANDED_TERMS})", loc)
        return degree, terms

    def build(self, node) -> MvPoly:
        ctx, nvars = self.ctx, self.nvars
        if isinstance(node, Num):
            return MvPoly.constant(ctx, nvars, node.value)
        if isinstance(node, Var):
            if node.name == "t":
                if ctx.k == 1:
                    self.fail("The generator 't' exists only in extension fields", node.loc)
                return MvPoly.constant(ctx, nvars, ctx.generator)
            return MvPoly.variable(ctx, nvars, self.variable_index(node))
        if isinstance(node, Neg):
            return -self.build(node.operand)
        if isinstance(node, BinOp):
            if node.op == "^":
                if not isinstance(node.right, Num):
                    self.fail("Exponent must be a non-negative integer literal", node.right.loc)
                if node.right.value > MAX_EXPONENT:
                    self.fail(f"Exponent {node.right.value} exceeds {MAX_EXPONENT}", node.right.loc)
                return self.build(node.left) ** node.right.value
            left = self.build(node.left)
            right = self.build(node.right)
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            return left * right
        self.fail(f"Unexpected syntax node {node!r}", 0)


def parse(text: str, nvars: int, ctx: FieldCtx) -> MvPoly:
    """Parse polynomial text into an MvPoly over ctx in nvars variables."""
    if text is None or not str(text).strip():
        raise PolynomialSyntaxError("Empty polynomial text", 0, text or "")
    try:
        tree = _GRAMMAR.parse_string(text, parse_all=True)[0]
    except ParseException as e:
        raise PolynomialSyntaxError(f"Syntax error: {e.msg}", e.loc, text)
    except RecursionError:
        raise PolynomialSyntaxError("Expression nested too deeply", 0, text)
    builder = _Builder(text, nvars, ctx)
    builder.measure(tree)
    return builder.build(tree)


_VARIABLE = re.compile(r"x(\d+)|([xyz])(?![A-Za-z0-9_])")


def infer_nvars(text: str) -> int:
    """Highest xN used, otherwise the highest alias (x -> 1, y -> 2, z -> 3)."""
    highest = 0
    for match in _VARIABLE.finditer(text or ""):
        if match.group(1) is not None:
            highest = max(highest, int(match.group(1)))
        else:
            highest = max(highest, ALIASES.index(match.group(2)) + 1)
    return max(highest, 1)

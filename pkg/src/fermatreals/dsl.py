"""Expression DSL for the command line.

Grammar (whitespace-insensitive, left-associative):

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' '(' int-or-rational ')')?
    atom   := rational | 't' | '(' expr ')' | name '(' expr ')'

``t`` is the reserved infinitesimal generator; rationals are ``p`` or
``p/q``; exponents must be parenthesized after ``^``.  Fractional powers
only apply to ``t`` itself (``t^(3/2)`` parses fine and evaluates to 0).
Oracle names accept descriptor suffixes, e.g. ``powint:3(1+t)``.

A separate tiny polynomial grammar (integer ``^`` exponents, no parens
required) reads multivariate polynomials such as ``y^3 + x*y^2`` for the
parametrized-function commands; variables are sorted alphabetically and
the last one is the function variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .core import FermatReal
from .errors import FermatError, ParseError
from .extension import fermat_extend
from .oracles import MultiPolynomialOracle, oracle_from_descriptor
from .scalars import EXACT

# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class TGen:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*'
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: Fraction


@dataclass(frozen=True)
class Apply:
    name: str
    arg: "Expr"


Expr = Union[Num, TGen, Neg, BinOp, Pow, Apply]


# -- tokenizer ------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num', 'name', 'op', 'end'
    text: str
    pos: int


_OPS = set("+-*^()/,")
_DIGITS = set("0123456789")


def _is_name_char(ch: str) -> bool:
    return (ch.isalpha() and ch.isascii()) or ch in _DIGITS or ch == "_"


def _tokenize(src: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _DIGITS:
            j = i
            while j < n and src[j] in _DIGITS:
                j += 1
            tokens.append(_Token("num", src[i:j], i))
            i = j
            continue
        if (ch.isalpha() and ch.isascii()) or ch == "_":
            j = i
            while j < n and _is_name_char(src[j]):
                j += 1
            # descriptor suffix: name ':' then either [...] or a bare token
            if j < n and src[j] == ":":
                j += 1
                if j < n and src[j] == "[":
                    depth = 0
                    while j < n:
                        if src[j] == "[":
                            depth += 1
                        elif src[j] == "]":
                            depth -= 1
                            if depth == 0:
                                j += 1
                                break
                        j += 1
                    if depth != 0:
                        raise ParseError("unterminated '['", i)
                else:
                    while j < n and (src[j].isalnum() or src[j] in "_./-"):
                        j += 1
            tokens.append(_Token("name", src[i:j], i))
            i = j
            continue
        if ch in _OPS:
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


_MAX_DEPTH = 200


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0
        self.depth = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.advance()
        raise ParseError(f"got {tok.text or 'end of input'!r}", tok.pos, {text})

    def fail(self, expected: set[str]):
        tok = self.peek()
        raise ParseError(f"got {tok.text or 'end of input'!r}", tok.pos, expected)

    # expr := ['-'] term (('+'|'-') term)*
    def expr(self) -> Expr:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            raise ParseError("expression nested too deeply", self.peek().pos)
        try:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "-":
                self.advance()
                node: Expr = Neg(self.term())
            else:
                node = self.term()
            while True:
                tok = self.peek()
                if tok.kind == "op" and tok.text in "+-":
                    self.advance()
                    node = BinOp(tok.text, node, self.term())
                else:
                    return node
        finally:
            self.depth -= 1

    def term(self) -> Expr:
        node = self.factor()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "*":
                self.advance()
                node = BinOp("*", node, self.factor())
            else:
                return node

    # factor := atom ('^' '(' rational ')')?
    def factor(self) -> Expr:
        node = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            self.expect("(")
            exp = self.rational(signed=True)
            self.expect(")")
            node = Pow(node, exp)
        return node

    def rational(self, signed: bool = False) -> Fraction:
        neg = False
        tok = self.peek()
        if signed and tok.kind == "op" and tok.text == "-":
            self.advance()
            neg = True
        tok = self.peek()
        if tok.kind != "num":
            self.fail({"number"})
        self.advance()
        value = Fraction(int(tok.text))
        nxt = self.peek()
        if nxt.kind == "op" and nxt.text == "/":
            self.advance()
            den = self.peek()
            if den.kind != "num":
                self.fail({"number"})
            self.advance()
            if int(den.text) == 0:
                raise ParseError("zero denominator", den.pos)
            value = Fraction(int(tok.text), int(den.text))
        return -value if neg else value

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            return Num(self.rational())
        if tok.kind == "name":
            self.advance()
            if tok.text == "t":
                return TGen()
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Apply(tok.text, arg)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        self.fail({"number", "t", "name", "("})


def parse(src: str) -> Expr:
    """Parse a DSL expression; raises ParseError with position on bad input."""
    p = _Parser(src)
    node = p.expr()
    tok = p.peek()
    if tok.kind != "end":
        raise ParseError(f"trailing input {tok.text!r}", tok.pos, {"end of input"})
    return node


_T_SINGLETON = object()


def evaluate(node: Expr, field=EXACT) -> FermatReal:
    """Evaluate an AST to a ring element over the chosen backend."""
    if isinstance(node, Num):
        return FermatReal.real(node.value, field)
    if isinstance(node, TGen):
        return FermatReal.t_power(1, 1, field)
    if isinstance(node, Neg):
        return -evaluate(node.operand, field)
    if isinstance(node, BinOp):
        left = evaluate(node.left, field)
        right = evaluate(node.right, field)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        return left * right
    if isinstance(node, Pow):
        exp = node.exponent
        if exp.denominator == 1:
            if exp < 0:
                raise FermatError("negative powers do not exist in the ring")
            return evaluate(node.base, field) ** int(exp)
        base = evaluate(node.base, field)
        t_unit = FermatReal.t_power(1, 1, field)
        if base != t_unit:
            raise FermatError("fractional powers only apply to t itself")
        if exp <= 0:
            raise FermatError("t-exponents must be positive")
        if exp > 1:
            return FermatReal.real(0, field)  # o(t) truncates to 0
        return FermatReal.t_power(exp, 1, field)
    if isinstance(node, Apply):
        oracle = oracle_from_descriptor(node.name)
        return fermat_extend(oracle, evaluate(node.arg, field))
    raise TypeError(f"not an Expr node: {node!r}")


def parse_value(src: str, field=EXACT) -> FermatReal:
    return evaluate(parse(src), field)


# -- polynomial mini-grammar -----------------------------------------------------


def parse_polynomial(src: str, variables: Optional[list[str]] = None) -> MultiPolynomialOracle:
    """Read a multivariate polynomial like ``y^3 + x*y^2``.

    Integer ``^`` exponents need no parentheses here.  Unless given,
    variables are collected and sorted alphabetically; the last one is the
    function variable (the rest are parameter slots, in order).
    """
    tokens = _tokenize(src)
    if variables is None:
        seen = sorted({tok.text for tok in tokens if tok.kind == "name"})
        variables = seen
    if not variables:
        raise ParseError("polynomial has no variables", 0)
    index = {name: k for k, name in enumerate(variables)}
    arity = len(variables)

    zero: dict = {}
    one = {(0,) * arity: Fraction(1)}

    def padd(p, q):
        out = dict(p)
        for mono, c in q.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return {m: c for m, c in out.items() if c != 0}

    def pmul(p, q):
        out: dict = {}
        for m1, c1 in p.items():
            for m2, c2 in q.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                out[mono] = out.get(mono, Fraction(0)) + c1 * c2
        return {m: c for m, c in out.items() if c != 0}

    def pscale(p, s):
        return {m: c * s for m, c in p.items() if c * s != 0}

    pos = 0

    def peek():
        return tokens[pos]

    def advance():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def expect(text):
        tok = peek()
        if tok.kind == "op" and tok.text == text:
            return advance()
        raise ParseError(f"got {tok.text or 'end of input'!r}", tok.pos, {text})

    depth = [0]

    def parse_sum():
        depth[0] += 1
        if depth[0] > _MAX_DEPTH:
            raise ParseError("polynomial nested too deeply", peek().pos)
        try:
            tok = peek()
            if tok.kind == "op" and tok.text == "-":
                advance()
                node = pscale(parse_product(), Fraction(-1))
            else:
                node = parse_product()
            while True:
                tok = peek()
                if tok.kind == "op" and tok.text in "+-":
                    advance()
                    rhs = parse_product()
                    node = padd(node, rhs if tok.text == "+" else pscale(rhs, Fraction(-1)))
                else:
                    return node
        finally:
            depth[0] -= 1

    def parse_product():
        node = parse_power()
        while True:
            tok = peek()
            if tok.kind == "op" and tok.text == "*":
                advance()
                node = pmul(node, parse_power())
            elif tok.kind in ("name", "num") or (tok.kind == "op" and tok.text == "("):
                node = pmul(node, parse_power())  # implicit product
            else:
                return node

    def parse_power():
        base = parse_atom()
        tok = peek()
        if tok.kind == "op" and tok.text == "^":
            advance()
            parens = peek().kind == "op" and peek().text == "("
            if parens:
                advance()
            etok = peek()
            if etok.kind != "num":
                raise ParseError("exponent must be a nonnegative integer", etok.pos)
            advance()
            if parens:
                expect(")")
            e = int(etok.text)
            out = dict(one)
            for _ in range(e):
                out = pmul(out, base)
            return out
        return base

    def parse_atom():
        tok = peek()
        if tok.kind == "num":
            advance()
            value = Fraction(int(tok.text))
            nxt = peek()
            if nxt.kind == "op" and nxt.text == "/":
                advance()
                dtok = peek()
                if dtok.kind != "num" or int(dtok.text) == 0:
                    raise ParseError("bad denominator", dtok.pos)
                advance()
                value = Fraction(int(tok.text), int(dtok.text))
            return pscale(dict(one), value)
        if tok.kind == "name":
            advance()
            if tok.text not in index:
                raise ParseError(f"unknown variable {tok.text!r}", tok.pos)
            mono = [0] * arity
            mono[index[tok.text]] = 1
            return {tuple(mono): Fraction(1)}
        if tok.kind == "op" and tok.text == "(":
            advance()
            node = parse_sum()
            expect(")")
            return node
        raise ParseError(f"got {tok.text or 'end of input'!r}", tok.pos,
                         {"number", "variable", "("})

    result = parse_sum()
    tok = peek()
    if tok.kind != "end":
        raise ParseError(f"trailing input {tok.text!r}", tok.pos, {"end of input"})
    monomials = result or zero
    return MultiPolynomialOracle(arity, monomials, identifier=src.strip())

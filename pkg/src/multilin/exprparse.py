"""Hand-written recursive-descent parser for scalar function expressions.

Grammar (byte offsets reported on error):

    expr   :=  term  (('+' | '-') term)*
    term   :=  unary (('*' | '/') unary)*
    unary  :=  '-' unary | power
    power  :=  atom ('^' unary)?          # right-associative
    atom   :=  NUMBER | IDENT '(' args ')' | VARIABLE | '(' expr ')'

Precedence is ^ above unary minus above * / above + -, so ``-x1^2`` is
``-(x1^2)`` and ``2^-3`` parses.  Variables are ``x1`` .. ``xn``; the
callable functions are abs, sqrt, sin, cos, exp (one argument) and
min, max (two or more).
"""

from __future__ import annotations

import math
from typing import Callable, List, NamedTuple, Sequence, Tuple


class ExpressionError(ValueError):
    """Parse or binding failure, carrying the byte offset of the problem."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class Token(NamedTuple):
    kind: str  # "num", "ident", "op", "lparen", "rparen", "comma", "eof"
    text: str
    pos: int


_FUNCTIONS = {
    "abs": (1, lambda a: abs(a[0])),
    "sqrt": (1, lambda a: math.sqrt(a[0])),
    "sin": (1, lambda a: math.sin(a[0])),
    "cos": (1, lambda a: math.cos(a[0])),
    "exp": (1, lambda a: math.exp(a[0])),
    "min": (None, min),
    "max": (None, max),
}


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    i = 0
    size = len(text)
    while i < size:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < size and text[i + 1].isdigit()):
            start = i
            while i < size and (text[i].isdigit() or text[i] == "."):
                i += 1
            if i < size and text[i] in "eE":
                k = i + 1
                if k < size and text[k] in "+-":
                    k += 1
                if k < size and text[k].isdigit():
                    i = k
                    while i < size and text[i].isdigit():
                        i += 1
            lexeme = text[start:i]
            try:
                float(lexeme)
            except ValueError:
                raise ExpressionError(f"malformed number '{lexeme}'", start) from None
            tokens.append(Token("num", lexeme, start))
            continue
        if c.isalpha() or c == "_":
            start = i
            while i < size and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(Token("ident", text[start:i], start))
            continue
        if c in "+-*/^":
            tokens.append(Token("op", c, i))
            i += 1
            continue
        if c == "(":
            tokens.append(Token("lparen", c, i))
            i += 1
            continue
        if c == ")":
            tokens.append(Token("rparen", c, i))
            i += 1
            continue
        if c == ",":
            tokens.append(Token("comma", c, i))
            i += 1
            continue
        raise ExpressionError(f"unexpected character {c!r}", i)
    tokens.append(Token("eof", "", size))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token], n: int):
        self.tokens = tokens
        self.n = n
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ExpressionError(f"expected {what}", tok.pos)
        return self.advance()

    def parse(self) -> Callable:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "eof":
            raise ExpressionError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self) -> Callable:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = _binary(op, node, rhs)
        return node

    def term(self) -> Callable:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            rhs = self.unary()
            node = _binary(op, node, rhs)
        return node

    def unary(self) -> Callable:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            inner = self.unary()
            return lambda x: -inner(x)
        if tok.kind == "op" and tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Callable:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            expo = self.unary()
            return lambda x: base(x) ** expo(x)
        return base

    def atom(self) -> Callable:
        tok = self.advance()
        if tok.kind == "num":
            value = float(tok.text)
            return lambda x: value
        if tok.kind == "lparen":
            node = self.expr()
            self.expect("rparen", "')'")
            return node
        if tok.kind == "ident":
            if self.peek().kind == "lparen":
                return self.call(tok)
            return self.variable(tok)
        raise ExpressionError(f"expected a value, found {tok.text or 'end of input'!r}", tok.pos)

    def call(self, name: Token) -> Callable:
        spec = _FUNCTIONS.get(name.text)
        if spec is None:
            raise ExpressionError(f"unknown function '{name.text}'", name.pos)
        arity, fn = spec
        self.expect("lparen", "'('")
        args = [self.expr()]
        while self.peek().kind == "comma":
            self.advance()
            args.append(self.expr())
        self.expect("rparen", "')'")
        if arity is not None and len(args) != arity:
            raise ExpressionError(
                f"'{name.text}' takes {arity} argument(s), got {len(args)}", name.pos
            )
        if arity is None and len(args) < 2:
            raise ExpressionError(
                f"'{name.text}' takes at least 2 arguments, got {len(args)}", name.pos
            )
        return lambda x: fn([a(x) for a in args])

    def variable(self, tok: Token) -> Callable:
        name = tok.text
        if not (name.startswith("x") and name[1:].isdigit()):
            raise ExpressionError(f"unknown identifier '{name}'", tok.pos)
        index = int(name[1:])
        if not 1 <= index <= self.n:
            raise ExpressionError(
                f"variable '{name}' out of range for {self.n} variable(s)", tok.pos
            )
        k = index - 1
        return lambda x: x[k]


def _binary(op: str, lhs: Callable, rhs: Callable) -> Callable:
    if op == "+":
        return lambda x: lhs(x) + rhs(x)
    if op == "-":
        return lambda x: lhs(x) - rhs(x)
    if op == "*":
        return lambda x: lhs(x) * rhs(x)
    return lambda x: lhs(x) / rhs(x)


def parse_function(expr: str, n: int) -> Callable[[Sequence[float]], float]:
    """Compile an expression over x1..xn into a deterministic evaluator."""
    if n < 1:
        raise ExpressionError("need at least one variable", 0)
    node = _Parser(tokenize(expr), n).parse()

    def evaluate(x: Sequence[float]) -> float:
        if len(x) != n:
            raise ValueError(f"expected {n} coordinates, got {len(x)}")
        return float(node(tuple(float(v) for v in x)))

    return evaluate

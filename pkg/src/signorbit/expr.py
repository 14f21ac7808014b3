"""Arithmetic expression parser for exact parameter entry.

Parameters like alpha and the initial value are usually quoted as small
closed-form expressions ("1/sqrt(6)", "0.747467+0.445271*i").  Expressions
are evaluated in 192-bit working precision and rounded once at the end, so
the returned double is the nearest double to the value of the expression;
that double is the canonical parameter everywhere downstream, identical on
every platform.

Grammar (also documented in the README):

    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := "-" factor | power
    power   := atom ("^" intlit)*
    atom    := number | "pi" | "i" | "sqrt" "(" expr ")" | "(" expr ")"
    intlit  := ["+" | "-"] digits
    number  := digits ["." digits] [("e" | "E") ["+" | "-"] digits]

Equal-precedence operators associate left to right.  "^" requires a literal
integer exponent and binds tighter than unary minus.  No variables, no
functions other than sqrt.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

_WORK_PREC = 192


class ExpressionError(ValueError):
    """Syntax or evaluation error, with the offending position in the text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_IDENTS = ("sqrt", "pi", "i")


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num', 'int', 'ident', 'op', 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "+-*/^()":
            tokens.append(_Token("op", c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            while j < n and text[j].isdigit():
                j += 1
            is_int = j > i
            if j < n and text[j] == ".":
                j += 1
                digits_after = j
                while j < n and text[j].isdigit():
                    j += 1
                if not is_int and j == digits_after:
                    raise ExpressionError("malformed number", i)
                is_int = False
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_int = False
                    j = k
                    while j < n and text[j].isdigit():
                        j += 1
            tokens.append(_Token("int" if is_int else "num", text[i:j], i))
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word not in _IDENTS:
                raise ExpressionError(f"unknown name '{word}'", i)
            tokens.append(_Token("ident", word, i))
            i = j
            continue
        raise ExpressionError(f"unexpected character '{c}'", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    """Recursive descent, evaluating as it parses.

    real_only forbids the imaginary unit at parse time so the error points
    at the offending 'i'.  Values are mpmath mpf/mpc at the working
    precision; parse_real / parse_complex round once at the end.
    """

    def __init__(self, text: str, real_only: bool):
        self.text = text
        self.tokens = _tokenize(text)
        self.idx = 0
        self.real_only = real_only

    def peek(self) -> _Token:
        return self.tokens[self.idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.advance()
        if tok.kind != "op" or tok.text != op:
            raise ExpressionError(f"expected '{op}'", tok.pos)

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExpressionError(f"unexpected '{tok.text}'", tok.pos)
        return value

    def expr(self):
        value = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            tok = self.advance()
            rhs = self.factor()
            if tok.text == "*":
                value = value * rhs
            else:
                if rhs == 0:
                    raise ExpressionError("division by zero", tok.pos)
                value = value / rhs
        return value

    def factor(self):
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return -self.factor()
        return self.power()

    def power(self):
        value = self.atom()
        while self.peek().kind == "op" and self.peek().text == "^":
            caret = self.advance()
            exponent = self.int_literal(caret.pos)
            if exponent < 0 and value == 0:
                raise ExpressionError("zero raised to a negative exponent",
                                      caret.pos)
            value = value ** exponent
        return value

    def int_literal(self, caret_pos: int) -> int:
        sign = 1
        tok = self.peek()
        if tok.kind == "op" and tok.text in "+-":
            self.advance()
            if tok.text == "-":
                sign = -1
            tok = self.peek()
        if tok.kind != "int":
            raise ExpressionError("exponent must be a literal integer", caret_pos)
        self.advance()
        return sign * int(tok.text)

    def atom(self):
        tok = self.advance()
        if tok.kind in ("num", "int"):
            return mpmath.mpf(tok.text)
        if tok.kind == "ident":
            if tok.text == "pi":
                return +mpmath.pi
            if tok.text == "i":
                if self.real_only:
                    raise ExpressionError("imaginary unit in real context", tok.pos)
                return mpmath.mpc(0, 1)
            # sqrt
            self.expect_op("(")
            arg = self.expr()
            self.expect_op(")")
            if self.real_only and arg < 0:
                raise ExpressionError("sqrt of a negative value in real context",
                                      tok.pos)
            return mpmath.sqrt(arg)
        if tok.kind == "op" and tok.text == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise ExpressionError("expected a value", tok.pos)


def _evaluate(text: str, real_only: bool):
    if not text or not text.strip():
        raise ExpressionError("empty expression", 0)
    with mpmath.workprec(_WORK_PREC):
        return _Parser(text, real_only).parse()


def parse_complex(text: str) -> complex:
    """Evaluate an expression to a complex pair of nearest doubles."""
    value = _evaluate(text, real_only=False)
    value = mpmath.mpc(value)
    return complex(float(value.real), float(value.imag))


def parse_real(text: str) -> float:
    """Evaluate an expression to its nearest double; imaginary content errors."""
    value = _evaluate(text, real_only=True)
    if isinstance(value, mpmath.mpc):
        if value.imag != 0:
            raise ExpressionError("expression evaluates to a non-real value", 0)
        value = value.real
    return float(value)


def format_real(x: float) -> str:
    """Shortest decimal that re-parses to the identical double."""
    return repr(float(x))


def format_complex(z: complex) -> str:
    """Expression-syntax rendering of a complex value; re-parses bit-identically."""
    re, im = float(z.real), float(z.imag)
    if im == 0.0:
        return repr(re)
    sign = "-" if im < 0 else "+"
    return f"{re!r}{sign}{abs(im)!r}*i"

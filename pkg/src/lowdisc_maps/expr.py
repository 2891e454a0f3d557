"""Constant expressions for map-definition values.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/' | '×' | '÷') factor)*
    factor := ('+' | '-') factor | number | 'phi' | 'sqrt2' | '(' expr ')'

Plain numbers (int or float) pass through unchanged.
"""

from __future__ import annotations

import math
import re

from .errors import ExpressionError

CONSTANTS: dict[str, float] = {
    "phi": (1.0 + math.sqrt(5.0)) / 2.0,
    "sqrt2": math.sqrt(2.0),
}

_NUMBER = r"\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(rf"\s*(?:({_NUMBER})|([A-Za-z_]\w*)|(.))")
_MUL = {"*", "×"}
_DIV = {"/", "÷"}


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        match = _TOKEN.match(stripped, pos)
        if match is None:  # pragma: no cover - the pattern matches any character
            raise ExpressionError(f"cannot tokenize {text!r} at {pos}")
        number, name, op = match.groups()
        if number is not None:
            tokens.append(("num", number))
        elif name is not None:
            tokens.append(("name", name))
        elif op is not None and not op.isspace():
            tokens.append(("op", op))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        token = self.peek()
        if token is None:
            raise ExpressionError(f"unexpected end of expression {self.text!r}")
        self.pos += 1
        return token

    def parse(self) -> float:
        value = self.expr()
        leftover = self.peek()
        if leftover is not None:
            raise ExpressionError(f"trailing input in {self.text!r}: {leftover[1]!r}")
        return value

    def expr(self) -> float:
        value = self.term()
        while (token := self.peek()) is not None and token[0] == "op" and token[1] in "+-":
            self.take()
            rhs = self.term()
            value = value + rhs if token[1] == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.factor()
        while (token := self.peek()) is not None and token[0] == "op" and token[1] in _MUL | _DIV:
            self.take()
            rhs = self.factor()
            if token[1] in _MUL:
                value *= rhs
            elif rhs == 0:
                raise ExpressionError(f"division by zero in {self.text!r}")
            else:
                value /= rhs
        return value

    def factor(self) -> float:
        kind, text = self.take()
        if kind == "op" and text in "+-":
            inner = self.factor()
            return inner if text == "+" else -inner
        if kind == "num":
            return float(text)
        if kind == "name":
            if text not in CONSTANTS:
                raise ExpressionError(f"unknown name {text!r} (known: {', '.join(CONSTANTS)})")
            return CONSTANTS[text]
        if kind == "op" and text == "(":
            value = self.expr()
            closing = self.take()
            if closing != ("op", ")"):
                raise ExpressionError(f"expected ')' in {self.text!r}")
            return value
        raise ExpressionError(f"unexpected {text!r} in {self.text!r}")


def evaluate(value: str | float | int) -> float:
    """Evaluate a constant expression such as ``"1/phi"`` or ``"(1+sqrt2)/2"``.

    Raises:
        ExpressionError: On unknown names, trailing input or division by zero
    """
    if isinstance(value, bool):
        raise ExpressionError(f"boolean is not a number: {value!r}")
    if isinstance(value, int | float):
        return float(value)
    if not value.strip():
        raise ExpressionError("empty expression")
    return _Parser(value).parse()

"""
Recursive-descent parser for the expression language.

Grammar (``^`` binds tighter than unary minus, which binds tighter than ``*`` and ``/``)::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := "-" unary | power
    power    := primary ("^" exponent)?
    exponent := unary                      (must fold to a numeric constant)
    primary  := NUMBER | NAME | NAME "(" expr ")" | "(" expr ")"
"""
from __future__ import annotations

import logging
import re
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

from src.expr.evaluate import constant_value
from src.expr.nodes import (CONSTANTS, FUNCTIONS, Add, Call, Const, Div, Expr, Mul,
                            Neg, Num, Pow, Sub, Var, free_variables)
from src.utils.error_handler import (ExpressionDomainError, ExpressionSyntaxError,
                                     UnknownIdentifierError)

logger = logging.getLogger(__name__)

OPERAND_START = frozenset({"number", "identifier", "(", "-"})


class TokenKind(Enum):
    NUMBER = "number"
    NAME = "identifier"
    OP = "operator"
    LPAREN = "("
    RPAREN = ")"
    END = "end of input"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    offset: int


_TOKEN_PATTERN = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^])"
    r"|(?P<lparen>\()"
    r"|(?P<rparen>\))"
    r")"
)


def _byte_offset(source: str, index: int) -> int:
    return len(source[:index].encode("utf-8"))


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    position = 0
    while True:
        while position < len(source) and source[position].isspace():
            position += 1
        if position >= len(source):
            break
        match = _TOKEN_PATTERN.match(source, position)
        if match is None or match.end() == position:
            raise ExpressionSyntaxError(
                f"unexpected character '{source[position]}'",
                _byte_offset(source, position),
                OPERAND_START,
            )
        start = match.start(match.lastgroup)
        text = match.group(match.lastgroup)
        kind = {
            "number": TokenKind.NUMBER,
            "name": TokenKind.NAME,
            "op": TokenKind.OP,
            "lparen": TokenKind.LPAREN,
            "rparen": TokenKind.RPAREN,
        }[match.lastgroup]
        tokens.append(Token(kind, text, _byte_offset(source, start)))
        position = match.end()
    tokens.append(Token(TokenKind.END, "", _byte_offset(source, len(source))))
    return tokens


class ExpressionParser:
    """
    Parser for one expression text.

    Args:
        source: Expression text
        variables: Names admitted as variables; other identifiers must be
            constants or function names
    """

    def __init__(self, source: str, variables: Iterable[str] = ("x",)):
        self.source = source
        self.variables = frozenset(variables)
        self.tokens = tokenize(source)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        if token.kind is not TokenKind.END:
            self.index += 1
        return token

    def _error(self, message: str, expected: Iterable[str]) -> ExpressionSyntaxError:
        return ExpressionSyntaxError(message, self.current.offset, frozenset(expected))

    def parse(self) -> Expr:
        if self.current.kind is TokenKind.END:
            raise self._error("empty input", OPERAND_START)
        tree = self._expr()
        if self.current.kind is not TokenKind.END:
            raise self._error(f"unexpected '{self.current.text}'", {"operator", ")", "end of input"})
        return tree

    def _expr(self) -> Expr:
        left = self._term()
        while self.current.kind is TokenKind.OP and self.current.text in "+-":
            op = self._advance().text
            right = self._term()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def _term(self) -> Expr:
        left = self._unary()
        while self.current.kind is TokenKind.OP and self.current.text in "*/":
            op = self._advance().text
            right = self._unary()
            left = Mul(left, right) if op == "*" else Div(left, right)
        return left

    def _unary(self) -> Expr:
        if self.current.kind is TokenKind.OP and self.current.text == "-":
            self._advance()
            return Neg(self._unary())
        return self._power()

    def _power(self) -> Expr:
        base = self._primary()
        if self.current.kind is TokenKind.OP and self.current.text == "^":
            self._advance()
            start = self.current.offset
            exponent = self._unary()
            if free_variables(exponent):
                raise ExpressionSyntaxError("exponent must be a numeric constant", start,
                                            frozenset({"number"}))
            try:
                value = constant_value(exponent)
            except ExpressionDomainError as err:
                raise ExpressionSyntaxError(f"invalid exponent: {err.message}", start) from None
            return Pow(base, value)
        return base

    def _primary(self) -> Expr:
        token = self.current
        if token.kind is TokenKind.NUMBER:
            self._advance()
            return Num(float(token.text))
        if token.kind is TokenKind.LPAREN:
            self._advance()
            inner = self._expr()
            self._expect_rparen()
            return inner
        if token.kind is TokenKind.NAME:
            self._advance()
            return self._identifier(token)
        raise self._error("expected operand", OPERAND_START)

    def _identifier(self, token: Token) -> Expr:
        name = token.text
        if name in FUNCTIONS:
            if self.current.kind is not TokenKind.LPAREN:
                raise self._error(f"function '{name}' requires an argument", {"("})
            self._advance()
            argument = self._expr()
            self._expect_rparen()
            return Call(name, argument)
        if name in self.variables:
            return Var(name)
        if name in CONSTANTS:
            return Const(name)
        raise UnknownIdentifierError(name, token.offset, self.variables | frozenset(CONSTANTS))

    def _expect_rparen(self) -> None:
        if self.current.kind is not TokenKind.RPAREN:
            raise self._error("expected ')'", {")", "operator"})
        self._advance()


def parse(source: str, variables: Iterable[str] = ("x",)) -> Expr:
    """
    Parse expression text into a tree.

    Raises:
        ExpressionSyntaxError: malformed or empty input (offset and expected tokens attached)
        UnknownIdentifierError: identifier outside variables, constants and functions
    """
    if source is None or not source.strip():
        raise ExpressionSyntaxError("empty input", 0, OPERAND_START)
    tree = ExpressionParser(source, variables).parse()
    logger.debug(f"Parsed expression: {source!r}")
    return tree

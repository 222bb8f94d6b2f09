"""Concrete syntax for meadow expressions and equations.

Grammar (left-associative binary operators):

    expr    := sum
    sum     := prod (("+" | "-") prod)*
    prod    := unary (("*" | "/") unary)*
    unary   := "-" unary | postfix
    postfix := atom ("^" intlit)?
    atom    := intlit | "X" digits | ident | "(" expr ")"
             | "D[" digits "](" expr ")" | "d/dX" digits "(" expr ")"

An integer literal admits a leading "-" only as an exponent.  Uppercase
"X" followed by digits is a formal variable; lowercase identifiers are
metavariables.  Implicit multiplication is rejected: "2X1" is a syntax
error, write "2 * X1".  Division binds like multiplication and associates
left, so a/b/c is (a/b)/c.

Parsing desugars on the fly (division, subtraction, numerals, powers), so
the returned trees contain only core constructors.  print_term emits
minimal parentheses and round-trips: parse_term(print_term(t)) == t for
every core term t.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .terms import (
    Add,
    Diff,
    Equation,
    Hole,
    Inv,
    MetaVar,
    Mul,
    Neg,
    One,
    Term,
    Var,
    Zero,
    int_pow,
    numeral,
)


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """Byte offsets [start, end) into the source string."""

    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end or self.start < 0:
            raise ValueError(f"invalid span {self.start}..{self.end}")

    def __str__(self) -> str:
        return f"{self.start}..{self.end}"


class ParseError(ValueError):
    """Syntax or scope error, carrying the offending source span."""

    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} (at {span})")
        self.message = message
        self.span = span


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # INT VAR IDENT D DDX + - * / ^ ( ) [ ] = EOF
    text: str
    value: int | None
    span: SourceSpan


_TOKEN_RES = [
    ("DDX", re.compile(r"d/dX(\d+)")),
    ("INT", re.compile(r"\d+")),
    ("VAR", re.compile(r"X(\d+)")),
    ("IDENT", re.compile(r"[a-z][a-z0-9_]*")),
]
_SYMBOLS = set("+-*/^()[]=")


def _tokenize(src: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    n = len(src)
    while pos < n:
        ch = src[pos]
        if ch.isspace():
            pos += 1
            continue
        for kind, pattern in _TOKEN_RES:
            m = pattern.match(src, pos)
            if m:
                span = SourceSpan(pos, m.end())
                if kind in ("DDX", "VAR"):
                    value = int(m.group(1))
                elif kind == "INT":
                    value = int(m.group())
                else:
                    value = None
                tokens.append(_Token(kind, m.group(), value, span))
                pos = m.end()
                break
        else:
            span = SourceSpan(pos, pos + 1)
            if ch == "D":
                tokens.append(_Token("D", ch, None, span))
            elif ch in _SYMBOLS:
                tokens.append(_Token(ch, ch, None, span))
            else:
                raise ParseError(f"unexpected character {ch!r}", span)
            pos += 1
    tokens.append(_Token("EOF", "", None, SourceSpan(n, n)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], nvars: int):
        self.tokens = tokens
        self.pos = 0
        self.nvars = nvars

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.span)
        return self.next()

    def parse_expr(self) -> Term:
        return self.parse_sum()

    def parse_sum(self) -> Term:
        left = self.parse_prod()
        while self.peek().kind in ("+", "-"):
            op = self.next()
            right = self.parse_prod()
            joined = Add(left, right) if op.kind == "+" else Add(left, Neg(right))
            left = replace(joined, span=self._merge(left, right))
        return left

    def parse_prod(self) -> Term:
        left = self.parse_unary()
        while self.peek().kind in ("*", "/"):
            op = self.next()
            right = self.parse_unary()
            joined = Mul(left, right) if op.kind == "*" else Mul(left, Inv(right))
            left = replace(joined, span=self._merge(left, right))
        return left

    def parse_unary(self) -> Term:
        tok = self.peek()
        if tok.kind == "-":
            self.next()
            arg = self.parse_unary()
            end = arg.span.end if arg.span else tok.span.end
            return Neg(arg, span=SourceSpan(tok.span.start, end))
        return self.parse_postfix()

    def parse_postfix(self) -> Term:
        base = self.parse_atom()
        if self.peek().kind == "^":
            self.next()
            negative = False
            if self.peek().kind == "-":
                negative = True
                self.next()
            exp_tok = self.expect("INT")
            k = -exp_tok.value if negative else exp_tok.value
            start = base.span.start if base.span else exp_tok.span.start
            span = SourceSpan(start, exp_tok.span.end)
            return replace(int_pow(base, k), span=span)
        return base

    def parse_atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "INT":
            self.next()
            return replace(numeral(tok.value), span=tok.span)
        if tok.kind == "VAR":
            self.next()
            self._check_index(tok.value, tok.span)
            return Var(tok.value, span=tok.span)
        if tok.kind == "IDENT":
            self.next()
            return MetaVar(tok.text, span=tok.span)
        if tok.kind == "(":
            self.next()
            inner = self.parse_expr()
            close = self.expect(")")
            return replace(inner, span=SourceSpan(tok.span.start, close.span.end))
        if tok.kind == "D":
            self.next()
            self.expect("[")
            idx = self.expect("INT")
            self._check_index(idx.value, idx.span)
            self.expect("]")
            self.expect("(")
            inner = self.parse_expr()
            close = self.expect(")")
            return Diff(idx.value, inner, span=SourceSpan(tok.span.start, close.span.end))
        if tok.kind == "DDX":
            self.next()
            self._check_index(tok.value, tok.span)
            self.expect("(")
            inner = self.parse_expr()
            close = self.expect(")")
            return Diff(tok.value, inner, span=SourceSpan(tok.span.start, close.span.end))
        raise ParseError(
            f"expected an expression, found {tok.text or 'end of input'!r}", tok.span
        )

    def _check_index(self, index: int, span: SourceSpan) -> None:
        if not 1 <= index <= self.nvars:
            raise ParseError(
                f"variable index {index} exceeds the session variable count {self.nvars}",
                span,
            )

    @staticmethod
    def _merge(left: Term, right: Term) -> SourceSpan | None:
        if left.span and right.span:
            return SourceSpan(left.span.start, right.span.end)
        return None


def parse_term(src: str, nvars: int) -> Term:
    """Parse a single expression; raises ParseError with a span on failure."""
    parser = _Parser(_tokenize(src), nvars)
    term = parser.parse_expr()
    trailing = parser.peek()
    if trailing.kind != "EOF":
        raise ParseError(f"unexpected trailing input {trailing.text!r}", trailing.span)
    return term


def parse_equation(src: str, nvars: int, name: str | None = None) -> Equation:
    """Parse "lhs = rhs"; exactly one "=" is required.  Lowercase identifiers
    on both sides share one metavariable namespace."""
    tokens = _tokenize(src)
    splits = [i for i, tok in enumerate(tokens) if tok.kind == "="]
    if len(splits) != 1:
        span = tokens[splits[1]].span if len(splits) > 1 else tokens[-1].span
        raise ParseError(
            f"an equation needs exactly one '=', found {len(splits)}", span
        )
    cut = splits[0]
    eof = tokens[-1]
    lhs = _parse_token_slice(tokens[:cut] + [eof], nvars)
    rhs = _parse_token_slice(tokens[cut + 1 :], nvars)
    return Equation(name if name is not None else src.strip(), lhs, rhs)


def _parse_token_slice(tokens: list[_Token], nvars: int) -> Term:
    parser = _Parser(tokens, nvars)
    term = parser.parse_expr()
    trailing = parser.peek()
    if trailing.kind != "EOF":
        raise ParseError(f"unexpected trailing input {trailing.text!r}", trailing.span)
    return term


# Printer precedence levels, mirroring the grammar.
_SUM, _PROD, _UNARY, _POSTFIX, _ATOM = range(5)


def print_term(t: Term) -> str:
    """Minimal-parentheses rendering; parse_term(print_term(t)) == t."""
    text, _ = _render(t)
    return text


def _render(t: Term) -> tuple[str, int]:
    match t:
        case Zero():
            return "0", _ATOM
        case One():
            return "1", _ATOM
        case Var(i):
            return f"X{i}", _ATOM
        case MetaVar(name):
            return name, _ATOM
        case Hole():
            return "_", _ATOM
        case Add(l, Neg(u)):
            return f"{_at(l, _SUM)} - {_at(u, _PROD)}", _SUM
        case Add(l, r):
            return f"{_at(l, _SUM)} + {_at(r, _PROD)}", _SUM
        case Mul(l, r):
            return f"{_at(l, _PROD)} * {_at(r, _UNARY)}", _PROD
        case Neg(a):
            return f"-{_at(a, _UNARY)}", _UNARY
        case Inv(a):
            return f"{_at(a, _ATOM)}^-1", _POSTFIX
        case Diff(i, a):
            return f"D[{i}]({_at(a, _SUM)})", _ATOM
    raise TypeError(f"cannot print {t!r}")


def _at(t: Term, level: int) -> str:
    text, actual = _render(t)
    return text if actual >= level else f"({text})"

"""Text format for formulas.

Grammar (whitespace insensitive)::

    formula  := implies
    implies  := or [ '->' implies ]
    or       := and { '|' and }
    and      := unary { '&' unary }
    unary    := '!' unary | ('A'|'E') var '.' formula | '(' formula ')' | atom
    atom     := 'P' digits '(' term ')' | term ('<' | '=') term
    term     := factor { ('+' | '-') factor }
    factor   := '-' factor | int '*' primary | primary { '*' primary }
    primary  := int | var | '(' term ')'
    var      := [a-z][a-z0-9]*

Quantifiers take maximal scope.  In the group and Presburger signatures
``n*t`` is an integer scalar multiple (the integer must be on the left);
in the ring signature ``*`` is the ring product.  ``Pn`` atoms exist only
in the Presburger signature, with n between 2 and 10**6 in parsed text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from .syntax import (
    Add, And, Const, Dvd, Eq, Exists, Forall, Formula, Implies, Lt, Mul, Neg,
    Not, Or, Signature, SignatureError, SMul, Sub, Term, Var, validate,
)

MAX_PARSED_MODULUS = 10**6


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str):
        self.position = position
        self.text = text
        super().__init__(f"{message} (at position {position})")


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<pred>P\d+)|(?P<quant>[AE])\b|(?P<int>\d+)|(?P<var>[a-z][a-z0-9]*)"
    r"|(?P<op>->|[-+*<=&|!().]))"
)


@dataclass
class _Token:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", pos, text)
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.tokens = _tokenize(text)
        self.i = 0

    # token helpers

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", len(self.text), self.text)
        self.i += 1
        return tok

    def accept(self, value: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.value == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        tok = self.peek()
        if tok is None or tok.kind != "op" or tok.value != value:
            pos = tok.pos if tok else len(self.text)
            raise ParseError(f"expected {value!r}", pos, self.text)
        self.i += 1

    def fail(self, message: str) -> None:
        tok = self.peek()
        pos = tok.pos if tok else len(self.text)
        raise ParseError(message, pos, self.text)

    # formulas

    def formula(self) -> Formula:
        left = self.or_level()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def or_level(self) -> Formula:
        out = self.and_level()
        while self.accept("|"):
            out = Or(out, self.and_level())
        return out

    def and_level(self) -> Formula:
        out = self.unary()
        while self.accept("&"):
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            self.fail("expected a formula")
        if tok.kind == "op" and tok.value == "!":
            self.i += 1
            return Not(self.unary())
        if tok.kind == "quant":
            self.i += 1
            var = self.next()
            if var.kind != "var":
                raise ParseError("expected a variable after quantifier", var.pos, self.text)
            self.expect(".")
            body = self.formula()
            return (Exists if tok.value == "E" else Forall)(var.value, body)
        if tok.kind == "pred":
            self.i += 1
            n = int(tok.value[1:])
            if not 2 <= n <= MAX_PARSED_MODULUS:
                raise ParseError(
                    f"modulus of {tok.value} out of range [2, {MAX_PARSED_MODULUS}]",
                    tok.pos, self.text,
                )
            if not self.sig.has_divisibility:
                raise ParseError(
                    "divisibility predicates exist only in the Presburger signature",
                    tok.pos, self.text,
                )
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return Dvd(n, arg)
        if tok.kind == "op" and tok.value == "(":
            # either a parenthesized formula or a parenthesized term in an atom
            mark = self.i
            try:
                self.i += 1
                inner = self.formula()
                self.expect(")")
            except ParseError:
                self.i = mark
                return self.comparison()
            nxt = self.peek()
            if nxt is not None and nxt.kind == "op" and nxt.value in {"<", "=", "+", "-", "*"}:
                self.i = mark
                return self.comparison()
            return inner
        return self.comparison()

    def comparison(self) -> Formula:
        left = self.term()
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.value in {"<", "="}:
            self.i += 1
            right = self.term()
            return Lt(left, right) if tok.value == "<" else Eq(left, right)
        self.fail("expected '<' or '=' in atom")

    # terms

    def term(self) -> Term:
        out = self.factor()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "op" and tok.value in {"+", "-"}:
                self.i += 1
                rhs = self.factor()
                out = Add(out, rhs) if tok.value == "+" else Sub(out, rhs)
            else:
                return out

    def factor(self) -> Term:
        if self.accept("-"):
            return Neg(self.factor())
        out = self.primary()
        while self.accept("*"):
            if self.sig.has_product:
                out = Mul(out, self.primary())
            elif isinstance(out, Const):
                out = SMul(out.value, self.primary())
            else:
                self.fail(
                    "product is not in this signature; scalar multiples are written n*t"
                )
        return out

    def primary(self) -> Term:
        tok = self.next()
        if tok.kind == "int":
            return Const(int(tok.value))
        if tok.kind == "var":
            return Var(tok.value)
        if tok.kind == "op" and tok.value == "(":
            inner = self.term()
            self.expect(")")
            return inner
        raise ParseError("expected an integer, variable or '('", tok.pos, self.text)


def parse(text: str, sig: Signature) -> Formula:
    """Parse a formula; raises ParseError / SignatureError with positions."""
    p = _Parser(text, sig)
    phi = p.formula()
    tok = p.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok.value!r}", tok.pos, p.text)
    validate(phi, sig)
    return phi


def parse_term(text: str, sig: Signature) -> Term:
    p = _Parser(text, sig)
    t = p.term()
    tok = p.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok.value!r}", tok.pos, p.text)
    from .syntax import validate_term

    validate_term(t, sig)
    return t

"""First-order terms and formulas over the three fixed signatures.

Signatures:

* ``ORDERED_GROUP``  -- + - 0 <, with integer scalar multiples written n*t.
* ``PRESBURGER``     -- + - 0 1 <, unary divisibility predicates Pn (n >= 2).
* ``ORDERED_RING``   -- + - * 0 1 <.

Terms and formulas are immutable trees; sharing between threads is safe.
Integer literals in the tree are non-negative (negative constants are
spelled with ``Neg``) so that printing and parsing are mutual inverses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Mapping


class Signature(Enum):
    ORDERED_GROUP = "og"
    PRESBURGER = "pr"
    ORDERED_RING = "or"

    @property
    def has_divisibility(self) -> bool:
        return self is Signature.PRESBURGER

    @property
    def has_product(self) -> bool:
        return self is Signature.ORDERED_RING

    @property
    def has_one(self) -> bool:
        return self is not Signature.ORDERED_GROUP

    @classmethod
    def from_text(cls, text: str) -> "Signature":
        try:
            return cls(text.lower())
        except ValueError:
            raise SignatureError(f"unknown signature {text!r}; expected og, pr or or")


class SignatureError(ValueError):
    """A term or formula uses symbols outside the given signature."""


# ---------------------------------------------------------------------------
# terms


class Term:
    __slots__ = ()

    def __str__(self) -> str:
        return term_to_text(self)

    def __add__(self, other: "Term") -> "Term":
        return Add(self, other)

    def __sub__(self, other: "Term") -> "Term":
        return Sub(self, other)

    def __neg__(self) -> "Term":
        return Neg(self)


@dataclass(frozen=True)
class Var(Term):
    name: str

    def __post_init__(self):
        if not is_var_name(self.name):
            raise ValueError(f"bad variable name {self.name!r}")


@dataclass(frozen=True)
class Const(Term):
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("Const holds non-negative literals; use Neg for negatives")


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Sub(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg(Term):
    arg: Term


@dataclass(frozen=True)
class SMul(Term):
    """Integer scalar multiple n*t (group and Presburger signatures)."""

    coef: int
    arg: Term

    def __post_init__(self):
        if self.coef < 0:
            raise ValueError("SMul coefficient is non-negative; wrap in Neg")


@dataclass(frozen=True)
class Mul(Term):
    """Ring product (ordered-ring signature only)."""

    left: Term
    right: Term


def int_term(value: int) -> Term:
    """Integer constant as a term, negative values via Neg."""
    return Const(value) if value >= 0 else Neg(Const(-value))


# ---------------------------------------------------------------------------
# formulas


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)


@dataclass(frozen=True)
class Lt(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Dvd(Formula):
    """Pn(t): the modulus n divides t."""

    modulus: int
    arg: Term

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError("divisibility predicates need modulus >= 2")


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


TRUE = Eq(Const(0), Const(0))
FALSE = Lt(Const(0), Const(0))


def conjunction(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjunction(parts) -> Formula:
    parts = list(parts)
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# ---------------------------------------------------------------------------
# structural queries


_VAR_ALPHABET = "abcdefghijklmnopqrstuvwxyz0123456789"


def is_var_name(name: str) -> bool:
    return (
        bool(name)
        and name[0].isascii()
        and name[0].islower()
        and all(c in _VAR_ALPHABET for c in name)
    )


def term_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Const):
        return frozenset()
    if isinstance(t, (Add, Sub, Mul)):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Neg):
        return term_vars(t.arg)
    if isinstance(t, SMul):
        return term_vars(t.arg)
    raise TypeError(f"not a term: {t!r}")


@lru_cache(maxsize=65536)
def free_vars(phi: Formula) -> frozenset:
    if isinstance(phi, (Lt, Eq)):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, Dvd):
        return term_vars(phi.arg)
    if isinstance(phi, Not):
        return free_vars(phi.arg)
    if isinstance(phi, (And, Or, Implies)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def free_var_list(phi: Formula) -> tuple:
    """Free variables in sorted order."""
    return tuple(sorted(free_vars(phi)))


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, (Lt, Eq, Dvd)):
        return True
    if isinstance(phi, Not):
        return is_quantifier_free(phi.arg)
    if isinstance(phi, (And, Or, Implies)):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return False


def is_sentence(phi: Formula) -> bool:
    return not free_vars(phi)


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.arg)
    elif isinstance(phi, (And, Or, Implies)):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, (Exists, Forall)):
        yield from subformulas(phi.body)


def quantifier_alternations(phi: Formula) -> int:
    """Depth of E/A alternation blocks, for the decision-procedure cap."""

    def walk(f: Formula, mode: str) -> int:
        if isinstance(f, (Lt, Eq, Dvd)):
            return 0
        if isinstance(f, Not):
            return walk(f.arg, {"E": "A", "A": "E", "-": "-"}[mode])
        if isinstance(f, (And, Or)):
            return max(walk(f.left, mode), walk(f.right, mode))
        if isinstance(f, Implies):
            return max(walk(f.left, {"E": "A", "A": "E", "-": "-"}[mode]), walk(f.right, mode))
        if isinstance(f, Exists):
            inner = walk(f.body, "E")
            return inner + (1 if mode != "E" else 0)
        if isinstance(f, Forall):
            inner = walk(f.body, "A")
            return inner + (1 if mode != "A" else 0)
        raise TypeError(f"not a formula: {f!r}")

    return walk(phi, "-")


# ---------------------------------------------------------------------------
# signature validation


def validate_term(t: Term, sig: Signature) -> None:
    if isinstance(t, Var):
        return
    if isinstance(t, Const):
        if t.value != 0 and not sig.has_one:
            raise SignatureError(f"integer constant {t.value} not in the group signature")
        return
    if isinstance(t, (Add, Sub)):
        validate_term(t.left, sig)
        validate_term(t.right, sig)
        return
    if isinstance(t, Neg):
        validate_term(t.arg, sig)
        return
    if isinstance(t, SMul):
        if sig.has_product:
            raise SignatureError("scalar multiples are spelled with * in the ring signature")
        validate_term(t.arg, sig)
        return
    if isinstance(t, Mul):
        if not sig.has_product:
            raise SignatureError("product is not in this signature")
        validate_term(t.left, sig)
        validate_term(t.right, sig)
        return
    raise TypeError(f"not a term: {t!r}")


def validate(phi: Formula, sig: Signature) -> None:
    """Raise SignatureError if phi uses symbols outside sig."""
    if isinstance(phi, (Lt, Eq)):
        validate_term(phi.left, sig)
        validate_term(phi.right, sig)
    elif isinstance(phi, Dvd):
        if not sig.has_divisibility:
            raise SignatureError("divisibility predicates exist only in the Presburger signature")
        validate_term(phi.arg, sig)
    elif isinstance(phi, Not):
        validate(phi.arg, sig)
    elif isinstance(phi, (And, Or, Implies)):
        validate(phi.left, sig)
        validate(phi.right, sig)
    elif isinstance(phi, (Exists, Forall)):
        validate(phi.body, sig)
    else:
        raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# substitution, renaming, negation normal form


def fresh_name(base: str, taken) -> str:
    stem = base.rstrip("0123456789") or "v"
    for i in itertools.count(1):
        cand = f"{stem}{i}"
        if cand not in taken:
            return cand
    raise AssertionError


def substitute_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Const):
        return t
    if isinstance(t, Add):
        return Add(substitute_term(t.left, mapping), substitute_term(t.right, mapping))
    if isinstance(t, Sub):
        return Sub(substitute_term(t.left, mapping), substitute_term(t.right, mapping))
    if isinstance(t, Neg):
        return Neg(substitute_term(t.arg, mapping))
    if isinstance(t, SMul):
        return SMul(t.coef, substitute_term(t.arg, mapping))
    if isinstance(t, Mul):
        return Mul(substitute_term(t.left, mapping), substitute_term(t.right, mapping))
    raise TypeError(f"not a term: {t!r}")


def substitute(phi: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Capture-avoiding substitution; bound variables rename automatically."""
    mapping = {k: v for k, v in mapping.items() if v != Var(k)}
    if not mapping:
        return phi
    if isinstance(phi, Lt):
        return Lt(substitute_term(phi.left, mapping), substitute_term(phi.right, mapping))
    if isinstance(phi, Eq):
        return Eq(substitute_term(phi.left, mapping), substitute_term(phi.right, mapping))
    if isinstance(phi, Dvd):
        return Dvd(phi.modulus, substitute_term(phi.arg, mapping))
    if isinstance(phi, Not):
        return Not(substitute(phi.arg, mapping))
    if isinstance(phi, And):
        return And(substitute(phi.left, mapping), substitute(phi.right, mapping))
    if isinstance(phi, Or):
        return Or(substitute(phi.left, mapping), substitute(phi.right, mapping))
    if isinstance(phi, Implies):
        return Implies(substitute(phi.left, mapping), substitute(phi.right, mapping))
    if isinstance(phi, (Exists, Forall)):
        ctor = Exists if isinstance(phi, Exists) else Forall
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        if not inner:
            return ctor(phi.var, phi.body)
        incoming = set()
        for name in free_vars(phi.body) - {phi.var}:
            if name in inner:
                incoming |= term_vars(inner[name])
        if phi.var in incoming:
            taken = incoming | free_vars(phi.body) | set(inner)
            new = fresh_name(phi.var, taken)
            body = substitute(phi.body, {phi.var: Var(new)})
            return ctor(new, substitute(body, inner))
        return ctor(phi.var, substitute(phi.body, inner))
    raise TypeError(f"not a formula: {phi!r}")


def negate(phi: Formula) -> Formula:
    return phi.arg if isinstance(phi, Not) else Not(phi)


def nnf(phi: Formula) -> Formula:
    """Negation normal form; implications are expanded."""
    if isinstance(phi, (Lt, Eq, Dvd)):
        return phi
    if isinstance(phi, And):
        return And(nnf(phi.left), nnf(phi.right))
    if isinstance(phi, Or):
        return Or(nnf(phi.left), nnf(phi.right))
    if isinstance(phi, Implies):
        return Or(nnf(Not(phi.left)), nnf(phi.right))
    if isinstance(phi, Exists):
        return Exists(phi.var, nnf(phi.body))
    if isinstance(phi, Forall):
        return Forall(phi.var, nnf(phi.body))
    inner = phi.arg
    if isinstance(inner, (Lt, Eq, Dvd)):
        return phi
    if isinstance(inner, Not):
        return nnf(inner.arg)
    if isinstance(inner, And):
        return Or(nnf(Not(inner.left)), nnf(Not(inner.right)))
    if isinstance(inner, Or):
        return And(nnf(Not(inner.left)), nnf(Not(inner.right)))
    if isinstance(inner, Implies):
        return And(nnf(inner.left), nnf(Not(inner.right)))
    if isinstance(inner, Exists):
        return Forall(inner.var, nnf(Not(inner.body)))
    if isinstance(inner, Forall):
        return Exists(inner.var, nnf(Not(inner.body)))
    raise TypeError(f"not a formula: {phi!r}")


def is_nnf(phi: Formula) -> bool:
    if isinstance(phi, (Lt, Eq, Dvd)):
        return True
    if isinstance(phi, Not):
        return isinstance(phi.arg, (Lt, Eq, Dvd))
    if isinstance(phi, (And, Or)):
        return is_nnf(phi.left) and is_nnf(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return is_nnf(phi.body)
    return False


# ---------------------------------------------------------------------------
# printing
#
# Canonical text: spaces around binary connectives and comparison operators,
# `*` tight, `!` tight, one space after the quantifier dot.  Quantifiers take
# maximal scope, so a quantified operand of a binary connective is wrapped in
# parentheses.  parse(to_text(phi)) returns phi exactly.

_PREC_IMPLIES, _PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3, 4


def _fmla_text(phi: Formula, ctx: int) -> str:
    if isinstance(phi, Lt):
        return f"{term_to_text(phi.left)} < {term_to_text(phi.right)}"
    if isinstance(phi, Eq):
        return f"{term_to_text(phi.left)} = {term_to_text(phi.right)}"
    if isinstance(phi, Dvd):
        return f"P{phi.modulus}({term_to_text(phi.arg)})"
    if isinstance(phi, Not):
        return f"!{_fmla_text(phi.arg, _PREC_UNARY)}"
    if isinstance(phi, (Exists, Forall)):
        tag = "E" if isinstance(phi, Exists) else "A"
        body = f"{tag} {phi.var}. {_fmla_text(phi.body, _PREC_IMPLIES)}"
        return f"({body})" if ctx > _PREC_IMPLIES else body
    if isinstance(phi, And):
        text = f"{_fmla_text(phi.left, _PREC_AND)} & {_fmla_text(phi.right, _PREC_AND + 1)}"
        return f"({text})" if ctx > _PREC_AND else text
    if isinstance(phi, Or):
        text = f"{_fmla_text(phi.left, _PREC_OR)} | {_fmla_text(phi.right, _PREC_OR + 1)}"
        return f"({text})" if ctx > _PREC_OR else text
    if isinstance(phi, Implies):
        text = f"{_fmla_text(phi.left, _PREC_IMPLIES + 1)} -> {_fmla_text(phi.right, _PREC_IMPLIES)}"
        return f"({text})" if ctx > _PREC_IMPLIES else text
    raise TypeError(f"not a formula: {phi!r}")


def to_text(phi: Formula) -> str:
    return _fmla_text(phi, _PREC_IMPLIES)


_TPREC_ADD, _TPREC_NEG, _TPREC_MUL, _TPREC_ATOM = 1, 2, 3, 4


def _term_text(t: Term, ctx: int) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Add):
        text = f"{_term_text(t.left, _TPREC_ADD)} + {_term_text(t.right, _TPREC_NEG)}"
        return f"({text})" if ctx > _TPREC_ADD else text
    if isinstance(t, Sub):
        text = f"{_term_text(t.left, _TPREC_ADD)} - {_term_text(t.right, _TPREC_NEG)}"
        return f"({text})" if ctx > _TPREC_ADD else text
    if isinstance(t, Neg):
        text = f"-{_term_text(t.arg, _TPREC_NEG)}"
        return f"({text})" if ctx > _TPREC_NEG else text
    if isinstance(t, SMul):
        text = f"{t.coef}*{_term_text(t.arg, _TPREC_ATOM)}"
        return f"({text})" if ctx > _TPREC_MUL else text
    if isinstance(t, Mul):
        text = f"{_term_text(t.left, _TPREC_MUL)}*{_term_text(t.right, _TPREC_ATOM)}"
        return f"({text})" if ctx > _TPREC_MUL else text
    raise TypeError(f"not a term: {t!r}")


def term_to_text(t: Term) -> str:
    return _term_text(t, _TPREC_ADD)

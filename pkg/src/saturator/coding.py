"""Integer coding of terms and formulas.

Each signature gets a bijection between the natural numbers and its
well-formed formulas (and one for terms).  Composite nodes are coded with
the Cantor pairing function

    pair(a, b) = (a + b) * (a + b + 1) / 2 + b,

which is a bijection N x N -> N, monotone in each argument.  A node is
coded as ``tag + K * payload`` where K is the number of constructors for
the signature, so every natural number decodes to exactly one tree.

Variable names [a-z][a-z0-9]* are enumerated by length then position,
``a`` ... ``z``, then ``a0`` ... ``z9``, ``aa`` and so on.
"""

from __future__ import annotations

from math import isqrt

from .syntax import (
    Add, And, Const, Dvd, Eq, Exists, Forall, Formula, Implies, Lt, Mul, Neg,
    Not, Or, Signature, SignatureError, SMul, Sub, Term, Var, validate,
)


class CodeError(ValueError):
    """Raised when decoding an invalid code (negative or non-integral)."""


def pair(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + b


def unpair(n: int) -> tuple:
    w = (isqrt(8 * n + 1) - 1) // 2
    b = n - w * (w + 1) // 2
    return w - b, b


# ---------------------------------------------------------------------------
# variable names

_SUFFIX = "abcdefghijklmnopqrstuvwxyz0123456789"
_FIRST = "abcdefghijklmnopqrstuvwxyz"


def var_name(index: int) -> str:
    if index < 0:
        raise CodeError(f"negative variable index {index}")
    if index < 26:
        return _FIRST[index]
    rest = index - 26
    length = 1
    block = 26 * 36
    while rest >= block:
        rest -= block
        length += 1
        block *= 36
    first, tail = divmod(rest, 36 ** length)
    digits = []
    for _ in range(length):
        tail, d = divmod(tail, 36)
        digits.append(_SUFFIX[d])
    return _FIRST[first] + "".join(reversed(digits))


def var_index(name: str) -> int:
    if len(name) == 1:
        return _FIRST.index(name)
    base = 26
    block = 26 * 36
    for _ in range(len(name) - 2):
        base += block
        block *= 36
    value = 0
    for c in name[1:]:
        value = value * 36 + _SUFFIX.index(c)
    return base + _FIRST.index(name[0]) * 36 ** (len(name) - 1) + value


# ---------------------------------------------------------------------------
# terms

_TERM_TAGS = {
    Signature.PRESBURGER: ("var", "const", "add", "sub", "neg", "smul"),
    Signature.ORDERED_RING: ("var", "const", "add", "sub", "neg", "mul"),
    # ORDERED_GROUP handled separately: code 0 is the constant 0, the rest
    # cycles through five constructors.
}
_OG_TAGS = ("var", "add", "sub", "neg", "smul")


def encode_term(t: Term, sig: Signature) -> int:
    if sig is Signature.ORDERED_GROUP:
        if isinstance(t, Const):
            if t.value != 0:
                raise SignatureError("group terms have no constant other than 0")
            return 0
        tag, payload = _term_parts(t, sig, _OG_TAGS)
        return 1 + tag + len(_OG_TAGS) * payload
    tags = _TERM_TAGS[sig]
    tag, payload = _term_parts(t, sig, tags)
    return tag + len(tags) * payload


def _term_parts(t: Term, sig: Signature, tags: tuple) -> tuple:
    if isinstance(t, Var):
        return tags.index("var"), var_index(t.name)
    if isinstance(t, Const):
        return tags.index("const"), t.value
    if isinstance(t, Add):
        return tags.index("add"), pair(encode_term(t.left, sig), encode_term(t.right, sig))
    if isinstance(t, Sub):
        return tags.index("sub"), pair(encode_term(t.left, sig), encode_term(t.right, sig))
    if isinstance(t, Neg):
        return tags.index("neg"), encode_term(t.arg, sig)
    if isinstance(t, SMul):
        if "smul" not in tags:
            raise SignatureError("scalar multiples are not coded in the ring signature")
        return tags.index("smul"), pair(t.coef, encode_term(t.arg, sig))
    if isinstance(t, Mul):
        if "mul" not in tags:
            raise SignatureError("product is not in this signature")
        return tags.index("mul"), pair(encode_term(t.left, sig), encode_term(t.right, sig))
    raise TypeError(f"not a term: {t!r}")


def decode_term(code: int, sig: Signature) -> Term:
    if not isinstance(code, int) or code < 0:
        raise CodeError(f"invalid term code {code!r}")
    if sig is Signature.ORDERED_GROUP:
        if code == 0:
            return Const(0)
        tag, payload = (code - 1) % len(_OG_TAGS), (code - 1) // len(_OG_TAGS)
        name = _OG_TAGS[tag]
    else:
        tags = _TERM_TAGS[sig]
        tag, payload = code % len(tags), code // len(tags)
        name = tags[tag]
    if name == "var":
        return Var(var_name(payload))
    if name == "const":
        return Const(payload)
    if name == "neg":
        return Neg(decode_term(payload, sig))
    a, b = unpair(payload)
    if name == "add":
        return Add(decode_term(a, sig), decode_term(b, sig))
    if name == "sub":
        return Sub(decode_term(a, sig), decode_term(b, sig))
    if name == "smul":
        return SMul(a, decode_term(b, sig))
    return Mul(decode_term(a, sig), decode_term(b, sig))


# ---------------------------------------------------------------------------
# formulas

_FMLA_TAGS_PR = ("lt", "eq", "dvd", "and", "or", "not", "implies", "exists", "forall")
_FMLA_TAGS_NODVD = ("lt", "eq", "and", "or", "not", "implies", "exists", "forall")


def _fmla_tags(sig: Signature) -> tuple:
    return _FMLA_TAGS_PR if sig.has_divisibility else _FMLA_TAGS_NODVD


def encode(phi: Formula, sig: Signature) -> int:
    """Code of a well-formed formula; signature mismatches raise."""
    validate(phi, sig)
    return _encode(phi, sig)


def _encode(phi: Formula, sig: Signature) -> int:
    tags = _fmla_tags(sig)
    if isinstance(phi, Lt):
        tag, payload = tags.index("lt"), pair(encode_term(phi.left, sig), encode_term(phi.right, sig))
    elif isinstance(phi, Eq):
        tag, payload = tags.index("eq"), pair(encode_term(phi.left, sig), encode_term(phi.right, sig))
    elif isinstance(phi, Dvd):
        tag, payload = tags.index("dvd"), pair(phi.modulus - 2, encode_term(phi.arg, sig))
    elif isinstance(phi, And):
        tag, payload = tags.index("and"), pair(_encode(phi.left, sig), _encode(phi.right, sig))
    elif isinstance(phi, Or):
        tag, payload = tags.index("or"), pair(_encode(phi.left, sig), _encode(phi.right, sig))
    elif isinstance(phi, Not):
        tag, payload = tags.index("not"), _encode(phi.arg, sig)
    elif isinstance(phi, Implies):
        tag, payload = tags.index("implies"), pair(_encode(phi.left, sig), _encode(phi.right, sig))
    elif isinstance(phi, Exists):
        tag, payload = tags.index("exists"), pair(var_index(phi.var), _encode(phi.body, sig))
    elif isinstance(phi, Forall):
        tag, payload = tags.index("forall"), pair(var_index(phi.var), _encode(phi.body, sig))
    else:
        raise TypeError(f"not a formula: {phi!r}")
    return tag + len(tags) * payload


def decode(code: int, sig: Signature) -> Formula:
    """Inverse of encode; every natural number is a valid code."""
    if not isinstance(code, int) or isinstance(code, bool) or code < 0:
        raise CodeError(f"invalid formula code {code!r}")
    tags = _fmla_tags(sig)
    tag, payload = code % len(tags), code // len(tags)
    name = tags[tag]
    if name == "lt":
        a, b = unpair(payload)
        return Lt(decode_term(a, sig), decode_term(b, sig))
    if name == "eq":
        a, b = unpair(payload)
        return Eq(decode_term(a, sig), decode_term(b, sig))
    if name == "dvd":
        a, b = unpair(payload)
        return Dvd(a + 2, decode_term(b, sig))
    if name == "and":
        a, b = unpair(payload)
        return And(decode(a, sig), decode(b, sig))
    if name == "or":
        a, b = unpair(payload)
        return Or(decode(a, sig), decode(b, sig))
    if name == "not":
        return Not(decode(payload, sig))
    if name == "implies":
        a, b = unpair(payload)
        return Implies(decode(a, sig), decode(b, sig))
    a, b = unpair(payload)
    var = var_name(a)
    body = decode(b, sig)
    return Exists(var, body) if name == "exists" else Forall(var, body)


def negation_code(code: int, sig: Signature) -> int:
    """Code of the negation of the formula with the given code."""
    phi = decode(code, sig)
    return _encode(phi.arg if isinstance(phi, Not) else Not(phi), sig)

import random

import pytest

from saturator.coding import decode
from saturator.parser import ParseError, parse, parse_term
from saturator.syntax import (
    Add, And, Const, Dvd, Eq, Exists, Lt, Mul, SMul, Signature, Sub, Var,
    free_vars, term_to_text, to_text,
)

PR = Signature.PRESBURGER
OG = Signature.ORDERED_GROUP
OR = Signature.ORDERED_RING


def test_quantified_conjunction():
    phi = parse("E v. (P2(v) & a < v)", PR)
    assert phi == Exists("v", And(Dvd(2, Var("v")), Lt(Var("a"), Var("v"))))
    assert free_vars(phi) == {"a"}


def test_wellformed_but_not_valid():
    phi = parse("x + 1 < x", PR)
    assert phi == Lt(Add(Var("x"), Const(1)), Var("x"))


def test_product_rejected_outside_ring():
    with pytest.raises(ParseError):
        parse("P2(x*y)", PR)


def test_scalar_multiple_parses_in_pr_and_og():
    assert parse("3*x < y", PR) == Lt(SMul(3, Var("x")), Var("y"))
    assert parse("3*x < 2*y", OG) == Lt(SMul(3, Var("x")), SMul(2, Var("y")))
    assert parse("x*y = 0", OR) == Eq(Mul(Var("x"), Var("y")), Const(0))


def test_bare_constant_rejected_in_group_signature():
    from saturator.syntax import SignatureError

    with pytest.raises(SignatureError):
        parse("x < 3", OG)
    parse("x < 0", OG)


def test_quantifier_takes_maximal_scope():
    phi = parse("E v. P2(v) & a < v", PR)
    assert isinstance(phi, Exists)
    assert free_vars(phi) == {"a"}


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse("a < ", PR)
    assert err.value.position == 4
    with pytest.raises(ParseError):
        parse("a <", PR)
    with pytest.raises(ParseError):
        parse("E 3. a < v", PR)
    with pytest.raises(ParseError):
        parse("a < b extra", PR)
    with pytest.raises(ParseError):
        parse("P1(v)", PR)
    with pytest.raises(ParseError):
        parse("P2000000(v)", PR)


def test_parse_print_identity_on_asts():
    rng = random.Random(7)
    for sig in (PR, OG, OR):
        for code in rng.sample(range(40_000), 400):
            phi = decode(code, sig)
            assert parse(to_text(phi), sig) == phi


def test_print_parse_identity_up_to_whitespace():
    rng = random.Random(8)
    for code in rng.sample(range(40_000), 200):
        phi = decode(code, PR)
        text = to_text(phi)
        # inject random whitespace at token boundaries
        noisy = text.replace(" ", "  ").replace("(", "( ").replace(")", " )")
        reparsed = parse(noisy, PR)
        assert to_text(reparsed) == text


def test_term_round_trip():
    for text in ["a + 1", "2*x - -y", "-(a + b)", "3*(2*x)"]:
        t = parse_term(text, PR)
        assert term_to_text(t) == text
        assert parse_term(term_to_text(t), PR) == t

import pytest

from saturator.syntax import (
    Add, And, Const, Dvd, Eq, Exists, Forall, Implies, Lt, Mul, Neg, Not, Or,
    Signature, SignatureError, SMul, Sub, Var, free_vars, int_term, is_nnf,
    is_quantifier_free, nnf, quantifier_alternations, substitute, term_vars,
    to_text, validate,
)

a, b, v, w = Var("a"), Var("b"), Var("v"), Var("w")


def naive_free_vars(phi):
    # independent recursion used as the oracle for free_vars
    if isinstance(phi, (Lt, Eq)):
        return term_vars(phi.left) | term_vars(phi.right)
    if isinstance(phi, Dvd):
        return term_vars(phi.arg)
    if isinstance(phi, Not):
        return naive_free_vars(phi.arg)
    if isinstance(phi, (And, Or, Implies)):
        return naive_free_vars(phi.left) | naive_free_vars(phi.right)
    return naive_free_vars(phi.body) - {phi.var}


def sample_formulas():
    yield Lt(a, Add(b, Const(1)))
    yield Exists("v", And(Dvd(2, v), Lt(a, v)))
    yield Forall("v", Or(Dvd(2, v), Dvd(2, Add(v, Const(1)))))
    yield Implies(Lt(a, b), Exists("v", Eq(v, Sub(a, b))))
    yield Not(Exists("v", Forall("w", Lt(v, w))))
    yield And(Eq(SMul(3, a), b), Lt(Neg(a), Const(0)))


def test_free_vars_matches_naive_recursion():
    for phi in sample_formulas():
        assert free_vars(phi) == naive_free_vars(phi)


def test_free_vars_examples():
    phi = Exists("v", And(Dvd(2, v), Lt(a, v)))
    assert free_vars(phi) == {"a"}
    assert is_quantifier_free(Lt(a, b))
    assert not is_quantifier_free(phi)


def test_substitute_simple():
    phi = Lt(v, w)
    out = substitute(phi, {"w": Add(a, Const(1))})
    assert out == Lt(v, Add(a, Const(1)))


def test_substitute_capture_avoiding():
    phi = Exists("v", Lt(v, w))
    out = substitute(phi, {"w": v})
    assert isinstance(out, Exists)
    assert out.var != "v"
    assert out.body == Lt(Var(out.var), v)
    # semantics preserved: the new bound variable is fresh
    assert free_vars(out) == {"v"}


def test_substitute_no_op_for_unused_vars():
    phi = Exists("v", Lt(v, w))
    assert substitute(phi, {"z": Const(0)}) == phi


def test_nnf_removes_implications_and_pushes_negations():
    for phi in sample_formulas():
        flat = nnf(phi)
        assert is_nnf(flat)
    assert nnf(Not(And(Lt(a, b), Lt(b, a)))) == Or(Not(Lt(a, b)), Not(Lt(b, a)))
    assert nnf(Not(Exists("v", Lt(v, a)))) == Forall("v", Not(Lt(v, a)))


def test_signature_validation():
    validate(Dvd(2, v), Signature.PRESBURGER)
    with pytest.raises(SignatureError):
        validate(Dvd(2, v), Signature.ORDERED_RING)
    with pytest.raises(SignatureError):
        validate(Eq(Mul(a, b), Const(0)), Signature.PRESBURGER)
    with pytest.raises(SignatureError):
        validate(Lt(Const(3), a), Signature.ORDERED_GROUP)
    validate(Lt(SMul(3, a), Const(0)), Signature.ORDERED_GROUP)
    with pytest.raises(SignatureError):
        validate(Eq(SMul(2, a), b), Signature.ORDERED_RING)


def test_const_and_smul_reject_negative():
    with pytest.raises(ValueError):
        Const(-1)
    with pytest.raises(ValueError):
        SMul(-2, a)
    assert int_term(-5) == Neg(Const(5))
    assert int_term(7) == Const(7)


def test_dvd_modulus_bound():
    with pytest.raises(ValueError):
        Dvd(1, v)


def test_alternation_depth():
    assert quantifier_alternations(Lt(a, b)) == 0
    assert quantifier_alternations(Exists("v", Lt(v, a))) == 1
    assert quantifier_alternations(Exists("v", Exists("w", Lt(v, w)))) == 1
    assert quantifier_alternations(Exists("v", Forall("w", Lt(v, w)))) == 2
    assert quantifier_alternations(Not(Exists("v", Forall("w", Lt(v, w))))) == 2


def test_printing_is_stable():
    phi = Exists("v", And(Dvd(2, v), Lt(a, v)))
    assert to_text(phi) == "E v. P2(v) & a < v"
    assert str(Lt(Add(a, Const(1)), a)) == "a + 1 < a"

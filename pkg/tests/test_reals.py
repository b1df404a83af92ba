from fractions import Fraction

import pytest

from saturator.budgets import BudgetExhausted, Budgets
from saturator.reals import (
    ComputableReal, Side, audit_monotone, from_decimal_string, from_intervals,
    from_rational, from_series, liouville_real, real_arith,
)


def sqrt2() -> ComputableReal:
    # dyadic bisection around sqrt(2); used before the Sturm machinery exists
    def approx(k):
        lo, hi = Fraction(1), Fraction(2)
        for _ in range(k + 1):
            mid = (lo + hi) / 2
            if mid * mid <= 2:
                lo = mid
            else:
                hi = mid
        return (lo, hi)

    return from_intervals(approx, "sqrt2")


def test_compare_above_below():
    r = sqrt2()
    assert r.compare(1) is Side.ABOVE
    assert r.compare(2) is Side.BELOW
    assert r.compare(Fraction(7, 5)) is Side.ABOVE
    assert r.compare(Fraction(3, 2)) is Side.BELOW


def test_certified_rational_equality():
    r = from_rational(Fraction(3, 2))
    assert r.compare(Fraction(3, 2)) is Side.EQUAL
    assert r.compare(1) is Side.ABOVE


def test_series_real_above_truncation():
    r = liouville_real()
    assert r.compare(Fraction(11, 100)) is Side.ABOVE
    assert r.compare(Fraction(12, 100)) is Side.BELOW


def test_budget_exhaustion_at_the_real_itself():
    r = sqrt2()
    with pytest.raises(BudgetExhausted):
        # sqrt2 is irrational but the cut cannot decide equality; small budget
        r.compare(Fraction(141421356237, 100000000000), Budgets(refine_steps=8))


def test_product_with_itself_brackets_two():
    r = sqrt2()
    prod = real_arith("*", r, r)
    assert prod.compare(Fraction(2001, 1000)) is Side.BELOW
    assert prod.compare(Fraction(1999, 1000)) is Side.ABOVE


def test_add_zero_identity():
    r = sqrt2()
    s = r + from_rational(0)
    for i in range(100):
        q = Fraction(i - 50, 37)
        assert s.compare(q) == r.compare(q)


def test_certified_arithmetic():
    a = from_rational(Fraction(1, 2))
    b = from_rational(Fraction(1, 3))
    c = real_arith("+", a, b)
    assert c.exact == Fraction(5, 6)
    assert c.compare(Fraction(5, 6)) is Side.EQUAL
    d = real_arith("recip", from_rational(Fraction(2, 3)))
    assert d.exact == Fraction(3, 2)


def test_recip_requires_separation():
    r = sqrt2()
    inv = real_arith("recip", real_arith("-", r, r))  # reciprocal of an uncertified zero
    with pytest.raises(BudgetExhausted):
        inv.compare(Fraction(1, 7), Budgets(refine_steps=50))


def test_recip_of_irrational():
    inv = real_arith("recip", sqrt2())
    assert inv.compare(Fraction(7, 10)) is Side.ABOVE   # 1/sqrt2 = 0.707...
    assert inv.compare(Fraction(71, 100)) is Side.BELOW


def test_decimal_string():
    r = from_decimal_string("1.4142")
    assert r.exact == Fraction(14142, 10000)
    assert from_decimal_string("-0.5").exact == Fraction(-1, 2)
    assert from_decimal_string("12").exact == 12


def test_monotonicity_audit_on_query_logs():
    r = sqrt2()
    for q in [1, 2, Fraction(3, 2), Fraction(7, 5), Fraction(17, 12), 0, 3]:
        r.compare(q)
    assert audit_monotone(r) is None


def test_monotonicity_audit_detects_violation():
    flaky = from_intervals(lambda k: (Fraction(0), Fraction(1)), "flaky")
    flaky._log.append((Fraction(1, 3), Side.BELOW))
    flaky._log.append((Fraction(2, 3), Side.ABOVE))
    assert audit_monotone(flaky) is not None


def test_series_constructor():
    # geometric series 1/2 + 1/4 + ... = 1, tail bound 2^-k
    r = from_series(
        lambda k: sum(Fraction(1, 2**i) for i in range(1, k + 2)),
        lambda k: Fraction(1, 2 ** (k + 1)),
        "geometric",
    )
    assert r.compare(Fraction(99, 100)) is Side.ABOVE
    assert r.compare(Fraction(101, 100)) is Side.BELOW

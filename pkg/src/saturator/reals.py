"""Computable reals represented by their cuts in the rationals.

A real is a procedure that answers "is the real above or below q" for
rational q.  Internally each real carries an interval approximator
``approx(k) -> (lo, hi) | None`` whose widths shrink to zero; cut queries
refine until the query rational falls outside the current interval.  A
query at the real itself cannot terminate and is stopped by the
refinement budget, except for reals carrying an exactness certificate
(certified rationals, and algebraic reals which can test equality).

All endpoints are exact fractions; no floating point is involved.
"""

from __future__ import annotations

import threading
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

from .budgets import BudgetExhausted, Budgets, default_budgets

Interval = Tuple[Fraction, Fraction]


class Side(Enum):
    BELOW = "below"   # the real is below the query rational
    ABOVE = "above"   # the real is above the query rational
    EQUAL = "equal"   # certified equality


class InconsistentRealError(RuntimeError):
    """The interval approximations of a real have empty intersection."""


class ComputableReal:
    def __init__(
        self,
        approx: Callable[[int], Optional[Interval]],
        exact: Optional[Fraction] = None,
        label: str = "real",
        exact_test: Optional[Callable[[Fraction], bool]] = None,
    ):
        self._approx = approx
        self.exact = Fraction(exact) if exact is not None else None
        self.label = label
        self._exact_test = exact_test
        self._best: Optional[Interval] = None
        self._k = 0
        self._log: List[Tuple[Fraction, Side]] = []
        self._lock = threading.RLock()

    # -- refinement ---------------------------------------------------------

    def improve(self, upto: int) -> Optional[Interval]:
        """Evaluate approximation indices below ``upto``; return best interval."""
        with self._lock:
            while self._k < upto:
                iv = self._approx(self._k)
                self._k += 1
                if iv is None:
                    continue
                lo, hi = Fraction(iv[0]), Fraction(iv[1])
                if self._best is None:
                    self._best = (lo, hi)
                else:
                    blo, bhi = self._best
                    nlo, nhi = max(blo, lo), min(bhi, hi)
                    if nlo > nhi:
                        raise InconsistentRealError(
                            f"{self.label}: intervals [{blo},{bhi}] and [{lo},{hi}] disjoint"
                        )
                    self._best = (nlo, nhi)
            return self._best

    def interval(self) -> Optional[Interval]:
        with self._lock:
            return self._best

    # -- the cut ------------------------------------------------------------

    def compare(self, q, budgets: Optional[Budgets] = None) -> Side:
        """Where the real sits relative to q; see module docstring for budgets."""
        q = Fraction(q)
        budgets = budgets or default_budgets()
        with self._lock:
            if self.exact is not None:
                if self.exact < q:
                    side = Side.BELOW
                elif self.exact > q:
                    side = Side.ABOVE
                else:
                    side = Side.EQUAL
                self._log.append((q, side))
                return side
            if self._exact_test is not None and self._exact_test(q):
                self._log.append((q, Side.EQUAL))
                return Side.EQUAL
            limit = self._k + budgets.refine_steps
            while True:
                iv = self._best
                if iv is not None:
                    lo, hi = iv
                    if q < lo:
                        self._log.append((q, Side.ABOVE))
                        return Side.ABOVE
                    if q > hi:
                        self._log.append((q, Side.BELOW))
                        return Side.BELOW
                if self._k >= limit:
                    raise BudgetExhausted(
                        "refine_steps", budgets.refine_steps,
                        f"cut of {self.label} queried at {q}",
                    )
                self.improve(self._k + 1)

    def sign(self, budgets: Optional[Budgets] = None) -> int:
        side = self.compare(Fraction(0), budgets)
        return {-1: -1, 0: 0, 1: 1}[
            -1 if side is Side.BELOW else (1 if side is Side.ABOVE else 0)
        ]

    def query_log(self) -> List[Tuple[Fraction, Side]]:
        with self._lock:
            return list(self._log)

    def __repr__(self) -> str:
        tag = f"={self.exact}" if self.exact is not None else ""
        return f"ComputableReal({self.label}{tag})"

    # -- arithmetic sugar ----------------------------------------------------

    def __add__(self, other):
        return real_arith("+", self, _lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return real_arith("-", self, _lift(other))

    def __rsub__(self, other):
        return real_arith("-", _lift(other), self)

    def __mul__(self, other):
        return real_arith("*", self, _lift(other))

    __rmul__ = __mul__

    def __neg__(self):
        return real_arith("-", from_rational(0), self)

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def rational(q) -> "ComputableReal":
        return from_rational(q)


def _lift(x) -> ComputableReal:
    if isinstance(x, ComputableReal):
        return x
    return from_rational(x)


def from_rational(q, label: Optional[str] = None) -> ComputableReal:
    q = Fraction(q)
    return ComputableReal(lambda k: (q, q), exact=q, label=label or f"rat({q})")


def from_intervals(
    approx: Callable[[int], Optional[Interval]],
    label: str = "real",
    exact_test: Optional[Callable[[Fraction], bool]] = None,
) -> ComputableReal:
    return ComputableReal(approx, exact=None, label=label, exact_test=exact_test)


def from_series(
    partial_sum: Callable[[int], Fraction],
    tail_bound: Callable[[int], Fraction],
    label: str = "series",
) -> ComputableReal:
    """Real given by partial sums with an explicit tail bound."""

    def approx(k: int) -> Interval:
        s = Fraction(partial_sum(k))
        t = Fraction(tail_bound(k))
        if t < 0:
            raise ValueError("tail bound must be non-negative")
        return (s - t, s + t)

    return ComputableReal(approx, label=label)


def liouville_real() -> ComputableReal:
    """Sum of 10**(-n!) for n >= 1, via truncations with a tail bound."""

    def partial(k: int) -> Fraction:
        total = Fraction(0)
        fact = 1
        for n in range(1, k + 2):
            fact *= n
            total += Fraction(1, 10**fact)
        return total

    def tail(k: int) -> Fraction:
        fact = 1
        for n in range(1, k + 3):
            fact *= n
        return Fraction(2, 10**fact)

    return ComputableReal(lambda k: (partial(k) - tail(k), partial(k) + tail(k)),
                          label="liouville")


def from_decimal_string(text: str) -> ComputableReal:
    """Certified rational from a finite decimal string like '1.4142'."""
    sign = -1 if text.strip().startswith("-") else 1
    body = text.strip().lstrip("+-")
    if "." in body:
        whole, frac = body.split(".", 1)
        num = int(whole + frac) if whole + frac else 0
        q = Fraction(sign * num, 10 ** len(frac))
    else:
        q = Fraction(sign * int(body))
    return from_rational(q, label=f"dec({text.strip()})")


# ---------------------------------------------------------------------------
# arithmetic


def real_arith(op: str, a: ComputableReal, b: Optional[ComputableReal] = None) -> ComputableReal:
    """Field operations on cut oracles by interval refinement.

    ``recip`` needs its operand separated from zero; until the refinement
    achieves that, the result has no interval information and queries
    against it consume budget.
    """
    if op in {"+", "add"}:
        assert b is not None
        if a.exact is not None and b.exact is not None:
            return from_rational(a.exact + b.exact, label=f"({a.label}+{b.label})")

        def approx(k: int) -> Optional[Interval]:
            ia, ib = a.improve(k + 1), b.improve(k + 1)
            if ia is None or ib is None:
                return None
            return (ia[0] + ib[0], ia[1] + ib[1])

        return ComputableReal(approx, label=f"({a.label}+{b.label})")
    if op in {"-", "sub"}:
        assert b is not None
        if a.exact is not None and b.exact is not None:
            return from_rational(a.exact - b.exact, label=f"({a.label}-{b.label})")

        def approx(k: int) -> Optional[Interval]:
            ia, ib = a.improve(k + 1), b.improve(k + 1)
            if ia is None or ib is None:
                return None
            return (ia[0] - ib[1], ia[1] - ib[0])

        return ComputableReal(approx, label=f"({a.label}-{b.label})")
    if op in {"*", "mul"}:
        assert b is not None
        if a.exact is not None and b.exact is not None:
            return from_rational(a.exact * b.exact, label=f"({a.label}*{b.label})")

        def approx(k: int) -> Optional[Interval]:
            ia, ib = a.improve(k + 1), b.improve(k + 1)
            if ia is None or ib is None:
                return None
            prods = [x * y for x in ia for y in ib]
            return (min(prods), max(prods))

        return ComputableReal(approx, label=f"({a.label}*{b.label})")
    if op == "recip":
        if a.exact is not None:
            if a.exact == 0:
                raise ZeroDivisionError("reciprocal of certified zero")
            return from_rational(1 / a.exact, label=f"recip({a.label})")

        def approx(k: int) -> Optional[Interval]:
            ia = a.improve(k + 1)
            if ia is None:
                return None
            lo, hi = ia
            if lo <= 0 <= hi:
                return None  # not separated from zero yet
            return (1 / hi, 1 / lo)

        return ComputableReal(approx, label=f"recip({a.label})")
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# audits


def audit_monotone(real: ComputableReal):
    """First pair of logged answers violating cut monotonicity, or None.

    Monotonicity: sorting queries by the rational, the answers must read
    ABOVE..ABOVE [EQUAL] BELOW..BELOW.
    """
    log = sorted(real.query_log(), key=lambda e: e[0])
    prev = None
    rank = {Side.ABOVE: 0, Side.EQUAL: 1, Side.BELOW: 2}
    for q, side in log:
        if prev is not None:
            pq, pside = prev
            if q == pq and side != pside:
                return (pq, pside, q, side)
            if q != pq and rank[side] < rank[pside]:
                return (pq, pside, q, side)
        prev = (q, side)
    return None

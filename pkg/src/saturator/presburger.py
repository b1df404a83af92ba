"""Quantifier elimination and decision procedures for Presburger arithmetic.

Three routes into the same theory, kept deliberately distinct so they can
cross-check each other:

* :func:`cooper_qe` -- symbolic elimination producing an equivalent
  quantifier-free formula (valid in every model of the theory, which is
  what lets nonstandard models reuse it).
* :func:`decide_standard` -- decision over the standard integers.  The
  outermost quantifier block is decided arithmetically (interval plus
  congruence counting in closed form); inner blocks are eliminated
  symbolically first.
* the brute-force grid evaluators in :mod:`saturator.kernels`, which scan
  provably sufficient witness windows.

:func:`normal_form` reshapes a one-variable formula into cells made of
congruence constraints, equalities and strict bounds whose endpoints are
definable-closure terms (integer linear combinations divided by a
positive integer).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .budgets import Budgets, CapExceeded, default_budgets
from .syntax import (
    Add, And, Const, Dvd, Eq, Exists,Forall, Formula, Implies, Lt, Mul, Neg,
    Not, Or, SMul, Sub, Term, Var, conjunction, disjunction, free_vars,
    int_term, is_quantifier_free, TRUE, FALSE,
)


class NonlinearTermError(ValueError):
    """A ring product appeared where a linear term was required."""


# ---------------------------------------------------------------------------
# linear terms


@dataclass(frozen=True)
class LinTerm:
    """Integer linear combination of variables plus a constant."""

    coeffs: Tuple[Tuple[str, int], ...]
    const: int

    @staticmethod
    def make(coeffs: Dict[str, int], const: int) -> "LinTerm":
        items = tuple(sorted((v, c) for v, c in coeffs.items() if c != 0))
        return LinTerm(items, const)

    @staticmethod
    def of_const(c: int) -> "LinTerm":
        return LinTerm((), c)

    @staticmethod
    def of_var(name: str) -> "LinTerm":
        return LinTerm(((name, 1),), 0)

    def as_dict(self) -> Dict[str, int]:
        return dict(self.coeffs)

    def add(self, other: "LinTerm") -> "LinTerm":
        d = self.as_dict()
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return LinTerm.make(d, self.const + other.const)

    def neg(self) -> "LinTerm":
        return LinTerm(tuple((v, -c) for v, c in self.coeffs), -self.const)

    def sub(self, other: "LinTerm") -> "LinTerm":
        return self.add(other.neg())

    def scale(self, k: int) -> "LinTerm":
        if k == 0:
            return LinTerm.of_const(0)
        return LinTerm(tuple((v, k * c) for v, c in self.coeffs), k * self.const)

    def plus_const(self, k: int) -> "LinTerm":
        return LinTerm(self.coeffs, self.const + k)

    def coeff_of(self, var: str) -> int:
        for v, c in self.coeffs:
            if v == var:
                return c
        return 0

    def drop_var(self, var: str) -> "LinTerm":
        return LinTerm(tuple((v, c) for v, c in self.coeffs if v != var), self.const)

    def subst(self, var: str, repl: "LinTerm") -> "LinTerm":
        c = self.coeff_of(var)
        if c == 0:
            return self
        return self.drop_var(var).add(repl.scale(c))

    def vars(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.coeffs)

    def is_ground(self) -> bool:
        return not self.coeffs

    def evaluate(self, env, make_int=lambda c: c):
        value = make_int(self.const)
        for v, c in self.coeffs:
            value = value + c * env[v]
        return value

    def to_term(self) -> Term:
        out: Optional[Term] = None
        for v, c in self.coeffs:
            piece: Term
            if c == 1:
                piece = Var(v)
            elif c == -1:
                piece = Neg(Var(v))
            elif c > 0:
                piece = SMul(c, Var(v))
            else:
                piece = Neg(SMul(-c, Var(v)))
            out = piece if out is None else Add(out, piece)
        if out is None:
            return int_term(self.const)
        if self.const > 0:
            out = Add(out, Const(self.const))
        elif self.const < 0:
            out = Sub(out, Const(-self.const))
        return out


def linearize(t: Term) -> LinTerm:
    """Linear normal form of a group/Presburger term."""
    if isinstance(t, Var):
        return LinTerm.of_var(t.name)
    if isinstance(t, Const):
        return LinTerm.of_const(t.value)
    if isinstance(t, Add):
        return linearize(t.left).add(linearize(t.right))
    if isinstance(t, Sub):
        return linearize(t.left).sub(linearize(t.right))
    if isinstance(t, Neg):
        return linearize(t.arg).neg()
    if isinstance(t, SMul):
        return linearize(t.arg).scale(t.coef)
    if isinstance(t, Mul):
        left, right = linearize(t.left), linearize(t.right)
        if left.is_ground():
            return right.scale(left.const)
        if right.is_ground():
            return left.scale(right.const)
        raise NonlinearTermError(f"nonlinear product: {t}")
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# literal trees (internal normal form for elimination)


@dataclass(frozen=True)
class LitLt:
    t: LinTerm  # 0 < t


@dataclass(frozen=True)
class LitEq:
    t: LinTerm  # 0 = t


@dataclass(frozen=True)
class LitDvd:
    n: int
    t: LinTerm
    neg: bool = False

    def canonical(self) -> Union["LitDvd", bool]:
        n = self.n
        coeffs = {v: c % n for v, c in self.t.coeffs}
        t = LinTerm.make(coeffs, self.t.const % n)
        if t.is_ground():
            return (t.const % n == 0) != self.neg
        g = gcd(n, *(c for _, c in t.coeffs), t.const)
        if g > 1:
            n //= g
            t = LinTerm(tuple((v, c // g) for v, c in t.coeffs), t.const // g)
        if n == 1:
            return not self.neg
        return LitDvd(n, t, self.neg)


Lit = Union[LitLt, LitEq, LitDvd]
Node = Union[bool, Lit, Tuple[str, Tuple["Node", ...]]]


def _fold_lit(lit: Lit) -> Node:
    if isinstance(lit, LitLt):
        return lit.t.const > 0 if lit.t.is_ground() else lit
    if isinstance(lit, LitEq):
        return lit.t.const == 0 if lit.t.is_ground() else lit
    return lit.canonical()


def mk_and(children: Iterable[Node]) -> Node:
    out: List[Node] = []
    seen = set()
    for ch in children:
        if ch is True:
            continue
        if ch is False:
            return False
        if isinstance(ch, tuple) and ch[0] == "and":
            grand = ch[1]
        else:
            grand = (ch,)
        for g in grand:
            if g is True:
                continue
            if g is False:
                return False
            if g not in seen:
                seen.add(g)
                out.append(g)
    if not out:
        return True
    if len(out) == 1:
        return out[0]
    return ("and", tuple(out))


def mk_or(children: Iterable[Node]) -> Node:
    out: List[Node] = []
    seen = set()
    for ch in children:
        if ch is False:
            continue
        if ch is True:
            return True
        if isinstance(ch, tuple) and ch[0] == "or":
            grand = ch[1]
        else:
            grand = (ch,)
        for g in grand:
            if g is False:
                continue
            if g is True:
                return True
            if g not in seen:
                seen.add(g)
                out.append(g)
    if not out:
        return False
    if len(out) == 1:
        return out[0]
    return ("or", tuple(out))


def to_littree(phi: Formula, positive: bool = True) -> Node:
    """Negation normal form over normalized literals.

    Atom normalizations over the integers: not(a < b) becomes b < a + 1,
    not(a = b) splits into a disjunction of strict comparisons.
    """
    if isinstance(phi, Lt):
        diff = linearize(phi.right).sub(linearize(phi.left))
        if positive:
            return _fold_lit(LitLt(diff))
        return _fold_lit(LitLt(diff.neg().plus_const(1)))
    if isinstance(phi, Eq):
        diff = linearize(phi.right).sub(linearize(phi.left))
        if positive:
            return _fold_lit(LitEq(diff))
        return mk_or([_fold_lit(LitLt(diff)), _fold_lit(LitLt(diff.neg()))])
    if isinstance(phi, Dvd):
        return _fold_lit(LitDvd(phi.modulus, linearize(phi.arg), neg=not positive))
    if isinstance(phi, Not):
        return to_littree(phi.arg, not positive)
    if isinstance(phi, And):
        parts = [to_littree(phi.left, positive), to_littree(phi.right, positive)]
        return mk_and(parts) if positive else mk_or(parts)
    if isinstance(phi, Or):
        parts = [to_littree(phi.left, positive), to_littree(phi.right, positive)]
        return mk_or(parts) if positive else mk_and(parts)
    if isinstance(phi, Implies):
        parts = [to_littree(phi.left, not positive), to_littree(phi.right, positive)]
        return mk_or(parts) if positive else mk_and(parts)
    raise ValueError(f"quantifier in literal conversion: {phi}")


def littree_to_formula(node: Node) -> Formula:
    if node is True:
        return TRUE
    if node is False:
        return FALSE
    if isinstance(node, LitLt):
        return Lt(Const(0), node.t.to_term())
    if isinstance(node, LitEq):
        return Eq(Const(0), node.t.to_term())
    if isinstance(node, LitDvd):
        base = Dvd(node.n, node.t.to_term())
        return Not(base) if node.neg else base
    op, children = node
    parts = [littree_to_formula(c) for c in children]
    return conjunction(parts) if op == "and" else disjunction(parts)


def _count_lits(node: Node) -> int:
    if isinstance(node, tuple):
        return sum(_count_lits(c) for c in node[1])
    return 0 if isinstance(node, bool) else 1


def _subst_node(node: Node, var: str, repl: LinTerm) -> Node:
    if isinstance(node, bool):
        return node
    if isinstance(node, LitLt):
        return _fold_lit(LitLt(node.t.subst(var, repl)))
    if isinstance(node, LitEq):
        return _fold_lit(LitEq(node.t.subst(var, repl)))
    if isinstance(node, LitDvd):
        return _fold_lit(LitDvd(node.n, node.t.subst(var, repl), node.neg))
    op, children = node
    parts = [_subst_node(c, var, repl) for c in children]
    return mk_and(parts) if op == "and" else mk_or(parts)


# ---------------------------------------------------------------------------
# Cooper elimination


def _rewrite_eq_on(var: str, node: Node) -> Node:
    """Replace equalities mentioning var by a pair of strict bounds."""
    if isinstance(node, LitEq) and node.t.coeff_of(var) != 0:
        return mk_and([
            _fold_lit(LitLt(node.t.plus_const(1))),
            _fold_lit(LitLt(node.t.neg().plus_const(1))),
        ])
    if isinstance(node, tuple):
        op, children = node
        parts = [_rewrite_eq_on(var, c) for c in children]
        return mk_and(parts) if op == "and" else mk_or(parts)
    return node


def _scale_to_unit(var: str, node: Node, delta: int) -> Node:
    """Multiply literals so the variable's coefficient is +-1.

    After this pass the variable stands for delta times its old value; the
    caller conjoins the divisibility-by-delta constraint.
    """
    if isinstance(node, LitLt):
        c = node.t.coeff_of(var)
        if c == 0:
            return node
        m = delta // abs(c)
        t = node.t.scale(m)
        # rebuild with coefficient +-1 on var
        d = t.as_dict()
        d[var] = 1 if c > 0 else -1
        return LitLt(LinTerm.make(d, t.const))
    if isinstance(node, LitDvd):
        c = node.t.coeff_of(var)
        if c == 0:
            return node
        m = delta // abs(c)
        t = node.t.scale(m)
        d = t.as_dict()
        d[var] = 1 if c > 0 else -1
        return LitDvd(node.n * m, LinTerm.make(d, t.const), node.neg)
    if isinstance(node, LitEq):
        raise AssertionError("equalities must be rewritten before scaling")
    if isinstance(node, tuple):
        op, children = node
        parts = [_scale_to_unit(var, c, delta) for c in children]
        return ("and" if op == "and" else "or", tuple(parts))
    return node


def _collect_lits(node: Node, var: str, out: List[Lit]) -> None:
    if isinstance(node, tuple):
        for c in node[1]:
            _collect_lits(c, var, out)
    elif not isinstance(node, bool):
        if isinstance(node, (LitLt, LitEq, LitDvd)) and node.t.coeff_of(var) != 0:
            out.append(node)


def _limit_node(node: Node, var: str, lower: bool) -> Node:
    """The formula at -infinity (lower=True) or +infinity of the variable."""
    if isinstance(node, LitLt):
        c = node.t.coeff_of(var)
        if c == 0:
            return node
        # 0 < c*var + rest as var -> -inf is decided by the sign of c
        return (c < 0) if lower else (c > 0)
    if isinstance(node, tuple):
        op, children = node
        parts = [_limit_node(c, var, lower) for c in children]
        return mk_and(parts) if op == "and" else mk_or(parts)
    return node


def eliminate_exists(var: str, node: Node, budgets: Optional[Budgets] = None) -> Node:
    """Cooper's method: one existential quantifier over a literal tree."""
    budgets = budgets or default_budgets()
    node = _rewrite_eq_on(var, node)
    lits: List[Lit] = []
    _collect_lits(node, var, lits)
    if not lits:
        return node  # var does not occur

    delta = 1
    for lit in lits:
        delta = lcm(delta, abs(lit.t.coeff_of(var)))
    scaled = _scale_to_unit(var, node, delta)
    divis = _fold_lit(LitDvd(delta, LinTerm.of_var(var))) if delta > 1 else True
    scaled = mk_and([scaled, divis])

    lits = []
    _collect_lits(scaled, var, lits)
    big_l = delta if delta > 1 else 1
    lowers: List[LinTerm] = []
    uppers: List[LinTerm] = []
    for lit in lits:
        if isinstance(lit, LitDvd):
            big_l = lcm(big_l, lit.n)
        elif isinstance(lit, LitLt):
            rest = lit.t.drop_var(var)
            if lit.t.coeff_of(var) > 0:
                lowers.append(rest.neg())   # var > -rest
            else:
                uppers.append(rest)         # var < rest

    lowers = list(dict.fromkeys(lowers))
    uppers = list(dict.fromkeys(uppers))
    use_lower = len(lowers) <= len(uppers)
    bounds = lowers if use_lower else uppers
    limit = _limit_node(scaled, var, lower=use_lower)

    parts: List[Node] = []
    atom_budget = budgets.qe_atoms
    for j in range(1, big_l + 1):
        parts.append(_subst_node(limit, var, LinTerm.of_const(j if use_lower else -j)))
        for b in bounds:
            repl = b.plus_const(j) if use_lower else b.plus_const(-j)
            parts.append(_subst_node(scaled, var, repl))
        if sum(_count_lits(p) for p in parts) > atom_budget:
            raise CapExceeded(
                "qe_atoms",
                {
                    "variable": var,
                    "cap": atom_budget,
                    "moduli_lcm": big_l,
                    "bound_terms": len(bounds),
                },
            )
    return mk_or(parts)


def _eliminate_all(phi: Formula, budgets: Budgets) -> Formula:
    if isinstance(phi, (Lt, Eq, Dvd)):
        return phi
    if isinstance(phi, Not):
        return Not(_eliminate_all(phi.arg, budgets))
    if isinstance(phi, And):
        return And(_eliminate_all(phi.left, budgets), _eliminate_all(phi.right, budgets))
    if isinstance(phi, Or):
        return Or(_eliminate_all(phi.left, budgets), _eliminate_all(phi.right, budgets))
    if isinstance(phi, Implies):
        return Implies(_eliminate_all(phi.left, budgets), _eliminate_all(phi.right, budgets))
    if isinstance(phi, Exists):
        body = _eliminate_all(phi.body, budgets)
        return littree_to_formula(eliminate_exists(phi.var, to_littree(body), budgets))
    if isinstance(phi, Forall):
        body = _eliminate_all(phi.body, budgets)
        inner = eliminate_exists(phi.var, to_littree(Not(body)), budgets)
        return littree_to_formula(_negate_node(inner))
    raise TypeError(f"not a formula: {phi!r}")


def _negate_node(node: Node) -> Node:
    if isinstance(node, bool):
        return not node
    if isinstance(node, LitLt):
        return _fold_lit(LitLt(node.t.neg().plus_const(1)))
    if isinstance(node, LitEq):
        return mk_or([_fold_lit(LitLt(node.t)), _fold_lit(LitLt(node.t.neg()))])
    if isinstance(node, LitDvd):
        return LitDvd(node.n, node.t, not node.neg)
    op, children = node
    parts = [_negate_node(c) for c in children]
    return mk_or(parts) if op == "and" else mk_and(parts)


def cooper_qe(phi: Formula, budgets: Optional[Budgets] = None) -> Formula:
    """Equivalent quantifier-free formula, valid in every model of the theory."""
    budgets = budgets or default_budgets()
    out = _eliminate_all(phi, budgets)
    out = littree_to_formula(to_littree(out))
    assert is_quantifier_free(out)
    return out


# ---------------------------------------------------------------------------
# congruence bookkeeping


@dataclass(frozen=True)
class DivConstraintSet:
    """Finite set of congruence constraints (residue, modulus) on one variable."""

    pairs: Tuple[Tuple[int, int], ...]

    @staticmethod
    def make(pairs: Iterable[Tuple[int, int]]) -> "DivConstraintSet":
        normalized = []
        for r, n in pairs:
            if n < 1:
                raise ValueError(f"modulus must be positive: {n}")
            normalized.append((r % n, n))
        return DivConstraintSet(tuple(normalized))


@dataclass(frozen=True)
class CrtResult:
    consistent: bool
    witness: Optional[Tuple[int, int]] = None          # (residue, lcm)
    conflict: Optional[Tuple[Tuple[int, int], Tuple[int, int]]] = None


def crt_merge(a1: int, m1: int, a2: int, m2: int) -> Optional[Tuple[int, int]]:
    """Solve v = a1 (mod m1), v = a2 (mod m2); None if incompatible."""
    g = gcd(m1, m2)
    if (a2 - a1) % g != 0:
        return None
    l = m1 // g * m2
    # a1 + m1 * t = a2 (mod m2)  =>  t = (a2-a1)/g * inv(m1/g) (mod m2/g)
    m2g = m2 // g
    t = ((a2 - a1) // g * pow(m1 // g, -1, m2g)) % m2g if m2g > 1 else 0
    return ((a1 + m1 * t) % l, l)


def crt_consistent(constraints: Union[DivConstraintSet, Iterable[Tuple[int, int]]]) -> CrtResult:
    """CRT solvability with a witness modulo the lcm, or a conflicting pair.

    Pairwise compatibility of integer congruences implies joint solvability,
    so the conflict report is always a single pair.
    """
    if isinstance(constraints, DivConstraintSet):
        pairs = list(constraints.pairs)
    else:
        pairs = [(r % n, n) for r, n in constraints]
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            if crt_merge(*pairs[i], *pairs[j]) is None:
                return CrtResult(False, conflict=(pairs[i], pairs[j]))
    acc = (0, 1)
    for r, n in pairs:
        merged = crt_merge(acc[0], acc[1], r, n)
        assert merged is not None
        acc = merged
    return CrtResult(True, witness=acc)


def _count_progression(a: int, m: int, lo: int, hi: int) -> int:
    if lo > hi:
        return 0
    first = lo + ((a - lo) % m)
    if first > hi:
        return 0
    return (hi - first) // m + 1


_FORBIDDEN_CAP = 18


def count_congruence_solutions(
    a: int,
    m: int,
    forbidden: Sequence[Tuple[int, int]],
    lo: Optional[int],
    hi: Optional[int],
) -> int:
    """Solutions of v = a (mod m) in [lo, hi] avoiding forbidden classes.

    Unbounded ends are replaced by one full period, so the result doubles
    as an existence test on infinite intervals.  Counting is by
    inclusion-exclusion in closed form; nothing is enumerated.
    """
    if len(forbidden) > _FORBIDDEN_CAP:
        raise CapExceeded("forbidden_classes", {"count": len(forbidden), "cap": _FORBIDDEN_CAP})
    period = m
    for _, n in forbidden:
        period = lcm(period, n)
    if lo is None and hi is None:
        lo, hi = 0, period - 1
    elif lo is None:
        lo = hi - period + 1
    elif hi is None:
        hi = lo + period - 1
    total = 0
    k = len(forbidden)
    for mask in range(1 << k):
        merged: Optional[Tuple[int, int]] = (a % m, m)
        sign = 1
        for i in range(k):
            if mask >> i & 1:
                sign = -sign
                merged = crt_merge(merged[0], merged[1], *forbidden[i]) if merged else None
                if merged is None:
                    break
        if merged is not None:
            total += sign * _count_progression(merged[0], merged[1], lo, hi)
    return total


# ---------------------------------------------------------------------------
# ground decision over the standard model


def _dnf(node: Node, cap: int) -> List[List[Lit]]:
    if node is False:
        return []
    if node is True:
        return [[]]
    if not isinstance(node, tuple):
        return [[node]]
    op, children = node
    if op == "or":
        out: List[List[Lit]] = []
        for c in children:
            out.extend(_dnf(c, cap))
            if len(out) > cap:
                raise CapExceeded("dnf_conjuncts", {"cap": cap})
        return out
    out = [[]]
    for c in children:
        pieces = _dnf(c, cap)
        out = [x + y for x in out for y in pieces]
        if len(out) > cap:
            raise CapExceeded("dnf_conjuncts", {"cap": cap})
    return out


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _exists_ground_conjunct(var: str, lits: Sequence[Lit], env: Dict[str, int]) -> bool:
    lo: Optional[int] = None
    hi: Optional[int] = None
    positives: List[Tuple[int, int]] = []
    forbidden: List[Tuple[int, int]] = []
    pinned: Optional[int] = None

    def ground(t: LinTerm) -> int:
        return t.drop_var(var).evaluate(env)

    for lit in lits:
        if isinstance(lit, LitLt):
            c = lit.t.coeff_of(var)
            r = ground(lit.t)
            if c == 0:
                if r <= 0:
                    return False
            elif c > 0:
                # 0 < c*var + r  =>  var > -r/c  =>  var >= floor(-r/c) + 1
                bound = (-r) // c + 1
                lo = bound if lo is None else max(lo, bound)
            else:
                # var < r/(-c)
                bound = _ceil_div(r, -c) - 1
                hi = bound if hi is None else min(hi, bound)
        elif isinstance(lit, LitEq):
            c = lit.t.coeff_of(var)
            r = ground(lit.t)
            if c == 0:
                if r != 0:
                    return False
            else:
                if r % c != 0:
                    return False
                val = -r // c
                if pinned is not None and pinned != val:
                    return False
                pinned = val
        else:
            c = lit.t.coeff_of(var)
            r = ground(lit.t)
            if c == 0:
                if (r % lit.n == 0) == lit.neg:
                    return False
                continue
            # c*var + r = 0 (mod n)
            g = gcd(c, lit.n)
            if (-r) % g != 0:
                if lit.neg:
                    continue  # never satisfied, negation vacuous
                return False
            n2 = lit.n // g
            if n2 == 1:
                if lit.neg:
                    return False  # always satisfied, negation impossible
                continue
            a = ((-r) // g * pow(c // g, -1, n2)) % n2
            (forbidden if lit.neg else positives).append((a, n2))

    if pinned is not None:
        if lo is not None and pinned < lo:
            return False
        if hi is not None and pinned > hi:
            return False
        for a, n in positives:
            if pinned % n != a:
                return False
        for a, n in forbidden:
            if pinned % n == a:
                return False
        return True

    merged = (0, 1)
    for a, n in positives:
        nxt = crt_merge(merged[0], merged[1], a, n)
        if nxt is None:
            return False
        merged = nxt
    if lo is not None and hi is not None and lo > hi:
        return False
    return count_congruence_solutions(merged[0], merged[1], forbidden, lo, hi) > 0


def _exists_ground(var: str, body: Formula, env: Dict[str, int], budgets: Budgets) -> bool:
    tree = to_littree(body)
    for conjunct in _dnf(tree, budgets.dnf_conjuncts):
        if _exists_ground_conjunct(var, conjunct, env):
            return True
    return False


def decide_standard(
    phi: Formula, env: Optional[Dict[str, int]] = None, budgets: Optional[Budgets] = None
) -> bool:
    """Truth over the standard integers with divisibility predicates."""
    budgets = budgets or default_budgets()
    env = dict(env or {})
    missing = free_vars(phi) - set(env)
    if missing:
        raise ValueError(f"unassigned free variables: {sorted(missing)}")
    return _decide(phi, env, budgets)


def _decide(phi: Formula, env: Dict[str, int], budgets: Budgets) -> bool:
    if isinstance(phi, Lt):
        return linearize(phi.left).evaluate(env) < linearize(phi.right).evaluate(env)
    if isinstance(phi, Eq):
        return linearize(phi.left).evaluate(env) == linearize(phi.right).evaluate(env)
    if isinstance(phi, Dvd):
        return linearize(phi.arg).evaluate(env) % phi.modulus == 0
    if isinstance(phi, Not):
        return not _decide(phi.arg, env, budgets)
    if isinstance(phi, And):
        return _decide(phi.left, env, budgets) and _decide(phi.right, env, budgets)
    if isinstance(phi, Or):
        return _decide(phi.left, env, budgets) or _decide(phi.right, env, budgets)
    if isinstance(phi, Implies):
        return (not _decide(phi.left, env, budgets)) or _decide(phi.right, env, budgets)
    if isinstance(phi, (Exists, Forall)):
        body = phi.body
        if not is_quantifier_free(body):
            body = _eliminate_all(body, budgets)
        # ground every other free variable so one-variable arithmetic applies
        subst_env = {v: env[v] for v in free_vars(body) if v != phi.var and v in env}
        if isinstance(phi, Exists):
            return _exists_ground(phi.var, body, subst_env, budgets)
        return not _exists_ground(phi.var, Not(body), subst_env, budgets)
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# simple qf evaluation (shared by tests and the CLI)


def eval_qf(phi: Formula, env: Dict[str, int]) -> bool:
    """Evaluate a quantifier-free formula at an integer point."""
    if isinstance(phi, Lt):
        return linearize(phi.left).evaluate(env) < linearize(phi.right).evaluate(env)
    if isinstance(phi, Eq):
        return linearize(phi.left).evaluate(env) == linearize(phi.right).evaluate(env)
    if isinstance(phi, Dvd):
        return linearize(phi.arg).evaluate(env) % phi.modulus == 0
    if isinstance(phi, Not):
        return not eval_qf(phi.arg, env)
    if isinstance(phi, And):
        return eval_qf(phi.left, env) and eval_qf(phi.right, env)
    if isinstance(phi, Or):
        return eval_qf(phi.left, env) or eval_qf(phi.right, env)
    if isinstance(phi, Implies):
        return (not eval_qf(phi.left, env)) or eval_qf(phi.right, env)
    raise ValueError(f"not quantifier-free: {phi}")


# ---------------------------------------------------------------------------
# one-variable normal form


@dataclass(frozen=True)
class DclTerm:
    """Definable-closure term: an integer linear combination over the
    context divided by a positive integer.

    Comparisons against the distinguished variable go through cross
    multiplication, so a bound needs no divisibility certificate; an
    equality cell asserts exact divisibility implicitly (den*v = num).
    """

    num: LinTerm
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise ValueError("denominator must be positive")


@dataclass(frozen=True)
class Cell:
    """One disjunct of the one-variable normal form.

    Conjunction of: a context guard (no occurrence of the variable), at
    most one merged congruence constraint, optional equalities, and strict
    lower/upper bounds by definable-closure terms.
    """

    guard: Node
    eqs: Tuple[DclTerm, ...]
    lowers: Tuple[DclTerm, ...]
    uppers: Tuple[DclTerm, ...]
    congruence: Tuple[int, int]   # (residue, modulus), modulus 1 = trivial

    def to_formula(self, var: str) -> Formula:
        parts: List[Formula] = []
        guard = littree_to_formula(self.guard)
        if guard != TRUE:
            parts.append(guard)
        v = Var(var)
        for e in self.eqs:
            parts.append(Eq(SMul(e.den, v) if e.den > 1 else v, e.num.to_term()))
        for b in self.lowers:
            parts.append(Lt(b.num.to_term(), SMul(b.den, v) if b.den > 1 else v))
        for b in self.uppers:
            parts.append(Lt(SMul(b.den, v) if b.den > 1 else v, b.num.to_term()))
        r, n = self.congruence
        if n > 1:
            parts.append(Dvd(n, Sub(v, Const(r)) if r else v))
        return conjunction(parts) if parts else TRUE


def cells_to_formula(cells: Sequence[Cell], var: str) -> Formula:
    return disjunction([c.to_formula(var) for c in cells])


def normal_form(phi: Formula, var: str, budgets: Optional[Budgets] = None) -> List[Cell]:
    """One-variable cells equivalent (as a disjunction) to phi.

    Cells may overlap; congruences within a cell are CRT-merged.  Guards
    collect the context literals, including the residue splits introduced
    when a divisibility atom mixes the variable with context terms.
    """
    budgets = budgets or default_budgets()
    if not is_quantifier_free(phi):
        phi = _eliminate_all(phi, budgets)
    tree = to_littree(phi)
    cells: List[Cell] = []
    for conjunct in _dnf(tree, budgets.dnf_conjuncts):
        cells.extend(_conjunct_cells(var, conjunct, budgets))
    return cells


def _conjunct_cells(var: str, lits: Sequence[Lit], budgets: Budgets) -> List[Cell]:
    guard: List[Node] = []
    eqs: List[DclTerm] = []
    lowers: List[DclTerm] = []
    uppers: List[DclTerm] = []
    # alternatives: list of choices, one per context-dependent divisibility
    congs: List[List[Tuple[Node, Tuple[int, int]]]] = []

    for lit in lits:
        c = lit.t.coeff_of(var) if not isinstance(lit, bool) else 0
        if c == 0:
            guard.append(lit)
            continue
        rest = lit.t.drop_var(var)
        if isinstance(lit, LitLt):
            # 0 < c*v + rest
            if c > 0:
                lowers.append(DclTerm(rest.neg(), c))
            else:
                uppers.append(DclTerm(rest, -c))
        elif isinstance(lit, LitEq):
            if c > 0:
                eqs.append(DclTerm(rest.neg(), c))
            else:
                eqs.append(DclTerm(rest, -c))
        else:
            choices: List[Tuple[Node, Tuple[int, int]]] = []
            if lit.neg:
                residues = [(rho, j) for rho in range(lit.n) for j in range(lit.n) if j != 0]
                # not(n | c v + rest): rest = rho and c v = j - rho (mod n), j != 0
                # expand as: for each rho, c v + rho != 0 (mod n)
                choices = _neg_dvd_choices(lit, c, rest)
            else:
                choices = _pos_dvd_choices(lit, c, rest)
            if not choices:
                return []
            congs.append(choices)

    out: List[Cell] = []
    combos: List[Tuple[List[Node], List[Tuple[int, int]]]] = [([], [])]
    for choices in congs:
        nxt = []
        for g, cs in combos:
            for extra_guard, pair in choices:
                nxt.append((g + [extra_guard], cs + ([pair] if pair is not None else [])))
        combos = nxt
        if len(combos) > budgets.dnf_conjuncts:
            raise CapExceeded("cell_residue_splits", {"cap": budgets.dnf_conjuncts})

    for extra_guards, pairs in combos:
        merged = (0, 1)
        dead = False
        for a, n in pairs:
            nosrt = crt_merge(merged[0], merged[1], a, n)
            if nosrt is None:
                dead = True
                break
            merged = nosrt
        if dead:
            continue
        g = mk_and(guard + extra_guards)
        if g is False:
            continue
        out.append(Cell(g, tuple(eqs), tuple(lowers), tuple(uppers), merged))
    return out


def _pos_dvd_choices(lit: LitDvd, c: int, rest: LinTerm):
    """Choices (guard, congruence) for n | c*v + rest."""
    n = lit.n
    if rest.is_ground():
        rhos = [rest.const % n]
        ground = True
    else:
        rhos = list(range(n))
        ground = False
    choices = []
    for rho in rhos:
        g = gcd(c, n)
        if (-rho) % g != 0:
            continue
        n2 = n // g
        a = ((-rho) // g * pow(c // g, -1, n2)) % n2 if n2 > 1 else 0
        extra: Node = True if ground else _fold_lit(LitDvd(n, rest.plus_const(-rho)))
        choices.append((extra, (a, n2) if n2 > 1 else None))
    return choices


def _neg_dvd_choices(lit: LitDvd, c: int, rest: LinTerm):
    """Choices for not(n | c*v + rest): the complementary residues of v."""
    n = lit.n
    if rest.is_ground():
        rhos = [rest.const % n]
        ground = True
    else:
        rhos = list(range(n))
        ground = False
    choices = []
    for rho in rhos:
        extra: Node = True if ground else _fold_lit(LitDvd(n, rest.plus_const(-rho)))
        g = gcd(c, n)
        solvable = (-rho) % g == 0
        if not solvable:
            # c v + rest is never 0 mod n under this rho: negation always true
            choices.append((extra, None))
            continue
        n2 = n // g
        if n2 == 1:
            continue  # always divisible: negation unsatisfiable under this rho
        a = ((-rho) // g * pow(c // g, -1, n2)) % n2
        for j in range(1, n2):
            choices.append((extra, ((a + j) % n2, n2)))
    return choices

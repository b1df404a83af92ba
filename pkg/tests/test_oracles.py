import random

import pytest

from saturator.budgets import BudgetExhausted, Budgets
from saturator.coding import encode
from saturator.oracles import (
    BinaryTreeOracle, MembershipOracle, PathResult, TypeOracle,
    TypeOracleInconsistent, bounded_path, join,
)
from saturator.syntax import Dvd, Lt, Not, Signature, Var

PR = Signature.PRESBURGER


def test_join_definition_unfolding():
    evens = MembershipOracle.computable(lambda n: n % 2 == 0, "evens")
    empty = MembershipOracle.from_set([], "empty")
    z = join(evens, empty)
    assert z(4)          # 4 = 2*2 asks evens(2)
    assert not z(1)      # odd index asks empty(0)


def test_join_projections():
    rng = random.Random(0)
    x = MembershipOracle.computable(lambda n: (n * n + 1) % 3 == 0, "x")
    y = MembershipOracle.computable(lambda n: n % 5 < 2, "y")
    z = join(x, y)
    for _ in range(100):
        n = rng.randrange(10_000)
        assert z(2 * n) == x(n)
        assert z(2 * n + 1) == y(n)


def test_join_idempotent_on_samples():
    x = MembershipOracle.computable(lambda n: n % 7 == 3, "x")
    z = join(x, x)
    for n in range(100):
        assert z(2 * n) == z(2 * n + 1) == x(n)


def _random_reduction(seed: int):
    """A tiny deterministic 'program' that queries an oracle several times."""
    rng = random.Random(seed)
    queries = [rng.randrange(200) for _ in range(8)]

    def run(oracle):
        acc = 0
        for q in queries:
            acc = (acc * 2 + (1 if oracle(q) else 0)) % 997
        return acc

    return run


def test_reductions_replay_identically_through_join():
    x = MembershipOracle.computable(lambda n: n % 3 == 1, "x")
    y = MembershipOracle.computable(lambda n: (n // 2) % 4 == 0, "y")
    z = join(x, y)
    for seed in range(100):
        run = _random_reduction(seed)
        # reduction reading both halves of the join
        via_join = run(lambda n: z(2 * n) or z(2 * n + 1))
        direct = run(lambda n: x(n) or y(n))
        assert via_join == direct


def test_oracle_determinism_and_cache():
    calls = []

    def flaky(n):
        calls.append(n)
        return len(calls) % 2 == 1  # changes answer between invocations

    o = MembershipOracle.computable(flaky, "flaky")
    first = o(7)
    assert o(7) == first
    assert calls == [7]


def test_eventually_periodic():
    o = MembershipOracle.eventually_periodic([1, 0, 0], [1, 0])
    assert [o(i) for i in range(8)] == [True, False, False, True, False, True, False, True]


def test_bounded_path_full_tree_leftmost():
    res = bounded_path(BinaryTreeOracle.full(), 5)
    assert res.found and res.bits == (0, 0, 0, 0, 0)


def test_bounded_path_no_consecutive_ones():
    tree = BinaryTreeOracle.from_predicate(
        lambda bits: all(not (a and b) for a, b in zip(bits, bits[1:])),
        "no-11",
    )
    res = bounded_path(tree, 4)
    assert res.bits == (0, 0, 0, 0)
    assert tree((1, 0, 1, 0))  # on-tree but not returned: not leftmost


def test_bounded_path_diagonal_tree():
    # exactly one node per level: the binary expansion of a fixed path
    path = (1, 0, 1, 1, 0, 1, 0, 0, 1, 1)

    def fn(bits):
        return bits == path[: len(bits)]

    tree = BinaryTreeOracle.from_predicate(fn, "diagonal")
    res = bounded_path(tree, 10)
    assert res.bits == path
    # exhaustive enumeration oracle: the only on-tree string of length 10
    assert [b for b in _all_strings(10) if fn(b)] == [path]


def _all_strings(n):
    out = [()]
    for _ in range(n):
        out = [s + (b,) for s in out for b in (0, 1)]
    return out


def test_bounded_path_absent_vs_budget():
    empty = BinaryTreeOracle.from_set([()], "root-only")
    res = bounded_path(empty, 3)
    assert res.status == "absent"
    # full up to depth 20 with nothing below forces an exhaustive backtrack
    stump = BinaryTreeOracle.from_predicate(lambda bits: len(bits) <= 20, "stump")
    with pytest.raises(BudgetExhausted):
        bounded_path(stump, 21, Budgets(tree_visits=100))


def test_tree_audit_downward_closure():
    bad = BinaryTreeOracle.from_predicate(lambda bits: len(bits) == 2, "bad")
    bad((0, 0))
    bad((0,))
    assert bad.audit_downward_closed() is not None
    good = BinaryTreeOracle.full()
    good((0, 1))
    good((0,))
    assert good.audit_downward_closed() is None


def test_type_oracle_consistency_check():
    phi = Lt(Var("a"), Var("b"))
    c, nc = encode(phi, PR), encode(Not(phi), PR)
    always_in = TypeOracle(lambda code: True, PR, 2, "broken")
    always_in(c)
    with pytest.raises(TypeOracleInconsistent):
        always_in(nc)


def test_type_oracle_decides_formulas():
    def truth(phi):
        return isinstance(phi, Dvd)

    o = TypeOracle.from_decision(truth, PR, 1, "dvd-only")
    assert o.decides(Dvd(2, Var("a")))
    assert not o.decides(Lt(Var("a"), Var("a")))
    assert o.consistency_violations() == []

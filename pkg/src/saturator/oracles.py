"""Executable membership oracles, join, type oracles and bounded tree search.

An oracle is a total decision procedure with a memo cache; repeated queries
return the cached first answer, so every oracle is deterministic even when
built from stateful callables.  Caches are lock-protected, which makes
concurrent queries behave as if serialized.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from .budgets import BudgetExhausted, Budgets, default_budgets
from .coding import decode, negation_code
from .syntax import Formula, Signature, free_vars


class MembershipOracle:
    """Total decision procedure n -> bool over the naturals, memoized."""

    def __init__(self, fn: Callable[[int], bool], label: str = "oracle"):
        self._fn = fn
        self.label = label
        self._cache: Dict[int, bool] = {}
        self._lock = threading.Lock()

    def __call__(self, n: int) -> bool:
        if n < 0:
            raise ValueError("membership oracles are indexed by naturals")
        with self._lock:
            if n in self._cache:
                return self._cache[n]
        ans = bool(self._fn(n))
        with self._lock:
            return self._cache.setdefault(n, ans)

    def queried(self) -> Dict[int, bool]:
        """Snapshot of the query log (the cache)."""
        with self._lock:
            return dict(self._cache)

    def __repr__(self) -> str:
        return f"MembershipOracle({self.label!r}, {len(self._cache)} cached)"

    @classmethod
    def from_set(cls, members: Iterable[int], label: str = "finite") -> "MembershipOracle":
        s = frozenset(members)
        return cls(lambda n: n in s, label)

    @classmethod
    def eventually_periodic(
        cls, prefix: Sequence[int], period: Sequence[int], label: str = "periodic"
    ) -> "MembershipOracle":
        """Characteristic sequence given by a finite prefix then a cycle."""
        pre = tuple(bool(b) for b in prefix)
        cyc = tuple(bool(b) for b in period)
        if not cyc:
            raise ValueError("period must be non-empty")

        def fn(n: int) -> bool:
            if n < len(pre):
                return pre[n]
            return cyc[(n - len(pre)) % len(cyc)]

        return cls(fn, label)

    @classmethod
    def computable(cls, fn: Callable[[int], bool], label: str = "computable") -> "MembershipOracle":
        return cls(fn, label)


def join(x: MembershipOracle, y: MembershipOracle) -> MembershipOracle:
    """Disjoint union: even indices answer from x, odd ones from y."""

    def fn(n: int) -> bool:
        q, r = divmod(n, 2)
        return x(q) if r == 0 else y(q)

    return MembershipOracle(fn, f"join({x.label},{y.label})")


# ---------------------------------------------------------------------------
# binary trees


class BinaryTreeOracle:
    """Membership oracle for a subset of bit strings.

    Downward closure is an obligation on the described set; ``audit`` checks
    it over everything queried so far.
    """

    def __init__(self, fn: Callable[[Tuple[int, ...]], bool], label: str = "tree"):
        self._fn = fn
        self.label = label
        self._cache: Dict[Tuple[int, ...], bool] = {}
        self._lock = threading.Lock()

    def __call__(self, bits: Sequence[int]) -> bool:
        key = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in key):
            raise ValueError("tree nodes are bit strings")
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        ans = bool(self._fn(key))
        with self._lock:
            return self._cache.setdefault(key, ans)

    def queried(self) -> Dict[Tuple[int, ...], bool]:
        with self._lock:
            return dict(self._cache)

    def audit_downward_closed(self) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        """First queried (node, prefix) pair with node on-tree, prefix off."""
        log = self.queried()
        on = [k for k, v in log.items() if v]
        for node in on:
            for cut in range(len(node)):
                prefix = node[:cut]
                if prefix in log and not log[prefix]:
                    return node, prefix
        return None

    @classmethod
    def full(cls) -> "BinaryTreeOracle":
        return cls(lambda bits: True, "full")

    @classmethod
    def from_set(cls, nodes: Iterable[Sequence[int]], label: str = "finite-tree") -> "BinaryTreeOracle":
        s = {tuple(int(b) for b in node) for node in nodes}
        return cls(lambda bits: bits in s, label)

    @classmethod
    def from_predicate(cls, fn: Callable[[Tuple[int, ...]], bool], label: str = "tree") -> "BinaryTreeOracle":
        return cls(fn, label)


@dataclass(frozen=True)
class PathResult:
    status: str                      # "found" | "absent" | "budget"
    bits: Optional[Tuple[int, ...]]
    visits: int

    @property
    def found(self) -> bool:
        return self.status == "found"


def bounded_path(
    tree: BinaryTreeOracle, depth: int, budgets: Optional[Budgets] = None
) -> PathResult:
    """Leftmost on-tree string of the given length, by depth-first search.

    Visits are counted per node membership test; exceeding the visit budget
    reports ``budget``, which is distinct from a certified ``absent``.
    """
    budgets = budgets or default_budgets()
    limit = budgets.tree_visits
    visits = 0
    stack = [()]
    while stack:
        node = stack.pop()
        visits += 1
        if visits > limit:
            raise BudgetExhausted("tree_visits", limit, f"depth {depth} search")
        if not tree(node):
            continue
        if len(node) == depth:
            return PathResult("found", node, visits)
        # push right first so the left child is explored first
        stack.append(node + (1,))
        stack.append(node + (0,))
    return PathResult("absent", None, visits)


# ---------------------------------------------------------------------------
# type oracles


class TypeOracleInconsistent(RuntimeError):
    def __init__(self, code: int, neg_code: int):
        self.code = code
        self.neg_code = neg_code
        super().__init__(
            f"type oracle contains both code {code} and its negation {neg_code}"
        )


class TypeOracle:
    """Membership oracle over formula codes for a fixed signature and arity.

    Queries are checked lazily for consistency: the oracle must never
    contain both a code and the code of its negation.
    """

    def __init__(
        self,
        fn: Callable[[int], bool],
        sig: Signature,
        arity: int,
        label: str = "type",
    ):
        self.sig = sig
        self.arity = arity
        self.label = label
        self._member = MembershipOracle(fn, label)

    def __call__(self, code: int) -> bool:
        ans = self._member(code)
        nc = negation_code(code, self.sig)
        log = self._member.queried()
        if ans and log.get(nc):
            raise TypeOracleInconsistent(code, nc)
        return ans

    def decides(self, phi: Formula) -> bool:
        from .coding import encode

        if len(free_vars(phi)) > self.arity:
            raise ValueError(
                f"formula has more than {self.arity} free variables: {phi}"
            )
        return self(encode(phi, self.sig))

    def queried(self) -> Dict[int, bool]:
        return self._member.queried()

    def consistency_violations(self) -> list:
        """All queried (code, negation-code) pairs answered 'in' on both sides."""
        log = self._member.queried()
        bad = []
        for code, ans in log.items():
            if not ans:
                continue
            nc = negation_code(code, self.sig)
            if nc > code and log.get(nc):
                bad.append((code, nc))
        return bad

    @classmethod
    def from_decision(
        cls,
        decide: Callable[[Formula], bool],
        sig: Signature,
        arity: int,
        label: str = "type",
    ) -> "TypeOracle":
        def fn(code: int) -> bool:
            return bool(decide(decode(code, sig)))

        return cls(fn, sig, arity, label)

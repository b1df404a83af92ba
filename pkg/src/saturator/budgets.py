"""Deterministic resource budgets shared by all engines.

Every potentially unbounded search (cut-oracle refinement, tree search,
definable-term enumeration, formula blowup during elimination) is guarded
by one of these limits so that runs are reproducible.  The environment
variable ``SATURATOR_BUDGET`` overrides every limit at once; individual
limits can be tuned per call or via CLI flags.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


class BudgetExhausted(RuntimeError):
    """A bounded search ran out of budget.  Never a wrong answer."""

    def __init__(self, kind: str, limit: int, detail: str = ""):
        self.kind = kind
        self.limit = limit
        self.detail = detail
        msg = f"budget exhausted: {kind} (limit {limit})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class CapExceeded(RuntimeError):
    """A structural cap (formula size, coefficient count) was hit.

    Carries a structured diagnostic dict in ``info``.
    """

    def __init__(self, kind: str, info: dict):
        self.kind = kind
        self.info = dict(info)
        super().__init__(f"cap exceeded: {kind}: {self.info}")


@dataclass(frozen=True)
class Budgets:
    refine_steps: int = 10_000     # interval refinements per cut query
    tree_visits: int = 1 << 20     # node visits in bounded tree search
    term_search: int = 20_000      # definable-term enumeration steps
    qe_atoms: int = 200_000        # atom count cap for elimination output
    dnf_conjuncts: int = 50_000    # conjunct cap for DNF conversion
    dcl_bound: int = 64            # coefficient/divisor bound for dcl scans
    alternation_cap: int = 8       # quantifier alternation depth for decide()

    def scaled(self, **overrides: int) -> "Budgets":
        return replace(self, **overrides)


def default_budgets() -> Budgets:
    """Budgets honouring the SATURATOR_BUDGET environment override."""
    raw = os.environ.get("SATURATOR_BUDGET")
    if not raw:
        return Budgets()
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"SATURATOR_BUDGET must be an integer, got {raw!r}") from exc
    if n <= 0:
        raise ValueError("SATURATOR_BUDGET must be positive")
    return Budgets(
        refine_steps=n,
        tree_visits=n,
        term_search=n,
        qe_atoms=n,
        dnf_conjuncts=n,
        dcl_bound=max(4, min(n, 4096)),
        alternation_cap=Budgets.alternation_cap,
    )

"""Vectorized brute-force evaluation of formulas over integer grids.

Quantifier-free formulas compile to a small postfix program interpreted
either by a numba-jitted loop or by numpy array operations.  Existential
quantifiers are decided by scanning every candidate in a witness window
that is provably sufficient:

    if the quantified variable occurs in atoms ``0 < c*v + r`` with
    thresholds t = floor(-r/c), and in divisibility atoms with moduli
    lcm L, then a witness exists in
    ``[min t - L - 1, max t + L + 2]``
    whenever one exists at all (with ``[-L-1, L+2]`` when there are no
    order atoms).

Universal quantifiers go through the complement.  Quantifiers nested
inside the scanned block are eliminated symbolically before scanning, so
only the outermost block of each branch is brute-forced.

The backend is selected by the environment variable ``SATURATOR_KERNEL``
(``numba``, ``numpy``, or ``auto``); ``auto`` prefers numba when
importable.  Both backends interpret the same programs.
"""

from __future__ import annotations

import os
from math import lcm
from typing import Dict, List, Optional, Tuple

import numpy as np

from .budgets import Budgets, default_budgets
from .presburger import LinTerm, LitDvd, LitEq, LitLt, _eliminate_all, to_littree
from .syntax import (
    And, Dvd, Eq, Exists, Forall, Formula, Implies, Lt, Not, Or,
    free_vars, is_quantifier_free,
)

OP_PUSHC, OP_PUSHV, OP_ADD, OP_MULC, OP_GT0, OP_EQ0, OP_DVD, OP_AND, OP_OR, OP_NOT = range(10)

_INT_LIMIT = 1 << 62


class KernelOverflow(RuntimeError):
    """Interval analysis found a possible int64 overflow for these bounds."""


# ---------------------------------------------------------------------------
# backend selection

_backend: Optional[str] = None


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
        return True
    except ImportError:
        return False


def backend() -> str:
    global _backend
    if _backend is None:
        pref = os.environ.get("SATURATOR_KERNEL", "auto").lower()
        if pref == "numpy":
            _backend = "numpy"
        elif pref == "numba":
            if not _numba_available():
                raise RuntimeError("SATURATOR_KERNEL=numba but numba is not importable")
            _backend = "numba"
        else:
            _backend = "numba" if _numba_available() else "numpy"
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in {"numba", "numpy", "auto"}:
        raise ValueError(f"unknown backend {name!r}")
    _backend = None if name == "auto" else name


# ---------------------------------------------------------------------------
# program compilation


class _Compiler:
    def __init__(self, varorder: Tuple[str, ...], bounds: Dict[str, Tuple[int, int]]):
        self.varorder = varorder
        self.index = {v: i for i, v in enumerate(varorder)}
        self.bounds = bounds
        self.code: List[Tuple[int, int]] = []
        self.ranges: List[Tuple[int, int]] = []  # interval per stack slot
        self.max_depth = 0

    def emit(self, op: int, arg: int, pop: int, rng: Tuple[int, int]) -> None:
        self.code.append((op, arg))
        for _ in range(pop):
            self.ranges.pop()
        self.ranges.append(rng)
        self.max_depth = max(self.max_depth, len(self.ranges))
        if abs(rng[0]) > _INT_LIMIT or abs(rng[1]) > _INT_LIMIT:
            raise KernelOverflow(f"stack value range {rng} exceeds int64 headroom")

    def lin(self, t: LinTerm) -> None:
        self.emit(OP_PUSHC, t.const, 0, (t.const, t.const))
        for v, c in t.coeffs:
            lo, hi = self.bounds[v]
            self.emit(OP_PUSHV, self.index[v], 0, (lo, hi))
            pr = sorted((c * lo, c * hi))
            self.emit(OP_MULC, c, 1, (pr[0], pr[1]))
            a = self.ranges[-2]
            b = self.ranges[-1]
            self.emit(OP_ADD, 0, 2, (a[0] + b[0], a[1] + b[1]))

    def formula(self, phi: Formula) -> None:
        if isinstance(phi, Lt):
            from .presburger import linearize

            self.lin(linearize(phi.right).sub(linearize(phi.left)))
            self.emit(OP_GT0, 0, 1, (0, 1))
        elif isinstance(phi, Eq):
            from .presburger import linearize

            self.lin(linearize(phi.right).sub(linearize(phi.left)))
            self.emit(OP_EQ0, 0, 1, (0, 1))
        elif isinstance(phi, Dvd):
            from .presburger import linearize

            self.lin(linearize(phi.arg))
            self.emit(OP_DVD, phi.modulus, 1, (0, 1))
        elif isinstance(phi, Not):
            self.formula(phi.arg)
            self.emit(OP_NOT, 0, 1, (0, 1))
        elif isinstance(phi, And):
            self.formula(phi.left)
            self.formula(phi.right)
            self.emit(OP_AND, 0, 2, (0, 1))
        elif isinstance(phi, Or):
            self.formula(phi.left)
            self.formula(phi.right)
            self.emit(OP_OR, 0, 2, (0, 1))
        elif isinstance(phi, Implies):
            self.formula(Or(Not(phi.left), phi.right))
        else:
            raise ValueError(f"not quantifier-free: {phi}")


def compile_qf(
    phi: Formula, varorder: Tuple[str, ...], bounds: Dict[str, Tuple[int, int]]
) -> Tuple[np.ndarray, int]:
    comp = _Compiler(varorder, bounds)
    comp.formula(phi)
    prog = np.array(comp.code, dtype=np.int64).reshape(len(comp.code), 2)
    return prog, comp.max_depth


# ---------------------------------------------------------------------------
# numpy interpreter


def _run_numpy(prog: np.ndarray, cols: List[np.ndarray]) -> np.ndarray:
    stack: List[np.ndarray] = []
    n = len(cols[0]) if cols else 1
    for op, arg in prog:
        if op == OP_PUSHC:
            stack.append(np.full(n, arg, dtype=np.int64))
        elif op == OP_PUSHV:
            stack.append(cols[arg])
        elif op == OP_MULC:
            stack.append(stack.pop() * arg)
        elif op == OP_ADD:
            b, a = stack.pop(), stack.pop()
            stack.append(a + b)
        elif op == OP_GT0:
            stack.append((stack.pop() > 0).astype(np.int64))
        elif op == OP_EQ0:
            stack.append((stack.pop() == 0).astype(np.int64))
        elif op == OP_DVD:
            stack.append((stack.pop() % arg == 0).astype(np.int64))
        elif op == OP_AND:
            b, a = stack.pop(), stack.pop()
            stack.append(a & b)
        elif op == OP_OR:
            b, a = stack.pop(), stack.pop()
            stack.append(a | b)
        else:
            stack.append(1 - stack.pop())
    return stack.pop().astype(bool)


# ---------------------------------------------------------------------------
# numba interpreter (compiled lazily)

_numba_funcs = None


def _get_numba():
    global _numba_funcs
    if _numba_funcs is not None:
        return _numba_funcs
    from numba import njit

    @njit(cache=True)
    def eval_grid(prog, pts, out, depth):
        npts = pts.shape[0]
        stack = np.empty(depth, dtype=np.int64)
        for p in range(npts):
            sp = 0
            for i in range(prog.shape[0]):
                op = prog[i, 0]
                arg = prog[i, 1]
                if op == 0:
                    stack[sp] = arg
                    sp += 1
                elif op == 1:
                    stack[sp] = pts[p, arg]
                    sp += 1
                elif op == 3:
                    stack[sp - 1] = stack[sp - 1] * arg
                elif op == 2:
                    stack[sp - 2] = stack[sp - 2] + stack[sp - 1]
                    sp -= 1
                elif op == 4:
                    stack[sp - 1] = 1 if stack[sp - 1] > 0 else 0
                elif op == 5:
                    stack[sp - 1] = 1 if stack[sp - 1] == 0 else 0
                elif op == 6:
                    stack[sp - 1] = 1 if stack[sp - 1] % arg == 0 else 0
                elif op == 7:
                    stack[sp - 2] = stack[sp - 2] & stack[sp - 1]
                    sp -= 1
                elif op == 8:
                    stack[sp - 2] = stack[sp - 2] | stack[sp - 1]
                    sp -= 1
                else:
                    stack[sp - 1] = 1 - stack[sp - 1]
            out[p] = stack[0] != 0

    @njit(cache=True)
    def scan_exists(prog, pts, lo, hi, out, depth):
        npts = pts.shape[0]
        nvars = pts.shape[1] - 1
        stack = np.empty(depth, dtype=np.int64)
        for p in range(npts):
            found = False
            v = lo[p]
            while v <= hi[p]:
                pts[p, nvars] = v
                sp = 0
                for i in range(prog.shape[0]):
                    op = prog[i, 0]
                    arg = prog[i, 1]
                    if op == 0:
                        stack[sp] = arg
                        sp += 1
                    elif op == 1:
                        stack[sp] = pts[p, arg]
                        sp += 1
                    elif op == 3:
                        stack[sp - 1] = stack[sp - 1] * arg
                    elif op == 2:
                        stack[sp - 2] = stack[sp - 2] + stack[sp - 1]
                        sp -= 1
                    elif op == 4:
                        stack[sp - 1] = 1 if stack[sp - 1] > 0 else 0
                    elif op == 5:
                        stack[sp - 1] = 1 if stack[sp - 1] == 0 else 0
                    elif op == 6:
                        stack[sp - 1] = 1 if stack[sp - 1] % arg == 0 else 0
                    elif op == 7:
                        stack[sp - 2] = stack[sp - 2] & stack[sp - 1]
                        sp -= 1
                    elif op == 8:
                        stack[sp - 2] = stack[sp - 2] | stack[sp - 1]
                        sp -= 1
                    else:
                        stack[sp - 1] = 1 - stack[sp - 1]
                if stack[0] != 0:
                    found = True
                    break
                v += 1
            out[p] = found

    _numba_funcs = (eval_grid, scan_exists)
    return _numba_funcs


# ---------------------------------------------------------------------------
# evaluation


def _qf_truth(
    phi: Formula,
    env: Dict[str, np.ndarray],
    bounds: Dict[str, Tuple[int, int]],
    n: int,
) -> np.ndarray:
    varorder = tuple(sorted(free_vars(phi)))
    prog, depth = compile_qf(phi, varorder, bounds)
    cols = [np.asarray(env[v], dtype=np.int64) for v in varorder]
    if backend() == "numba":
        eval_grid, _ = _get_numba()
        pts = (
            np.stack(cols, axis=1)
            if cols
            else np.zeros((n, 0), dtype=np.int64)
        )
        out = np.zeros(n, dtype=np.bool_)
        eval_grid(prog, pts, out, max(depth, 1))
        return out
    if not cols:
        cols = [np.zeros(n, dtype=np.int64)]
        # program never reads variables; column exists only for sizing
    return _run_numpy(prog, cols)


def _window(
    var: str, body: Formula, env: Dict[str, np.ndarray], n: int
) -> Tuple[np.ndarray, np.ndarray, int]:
    """Per-point witness windows [lo, hi] and the congruence lcm."""
    lits: List = []

    def collect(node):
        if isinstance(node, tuple):
            for c in node[1]:
                collect(c)
        elif not isinstance(node, bool):
            if node.t.coeff_of(var) != 0:
                lits.append(node)

    collect(to_littree(body))
    big_l = 1
    thresholds: List[np.ndarray] = []
    for lit in lits:
        c = lit.t.coeff_of(var)
        if isinstance(lit, LitDvd):
            big_l = lcm(big_l, lit.n)
            continue
        rest = lit.t.drop_var(var)
        val = np.full(n, rest.const, dtype=np.int64)
        for v, k in rest.coeffs:
            val = val + k * np.asarray(env[v], dtype=np.int64)
        thresholds.append((-val) // c)
    margin = big_l + 2
    if thresholds:
        stackv = np.stack(thresholds, axis=0)
        lo = stackv.min(axis=0) - margin
        hi = stackv.max(axis=0) + margin
    else:
        lo = np.full(n, -margin, dtype=np.int64)
        hi = np.full(n, margin, dtype=np.int64)
    return lo.astype(np.int64), hi.astype(np.int64), big_l


def evaluate(
    phi: Formula,
    env: Dict[str, np.ndarray],
    bounds: Dict[str, Tuple[int, int]],
    budgets: Optional[Budgets] = None,
) -> np.ndarray:
    """Pointwise truth of phi at integer points given as parallel arrays.

    ``bounds`` maps every free variable to the inclusive range its array
    values live in (used for overflow analysis and witness windows).
    """
    budgets = budgets or default_budgets()
    n = len(next(iter(env.values()))) if env else 1

    def rec(f: Formula) -> np.ndarray:
        if is_quantifier_free(f):
            return _qf_truth(f, env1, bounds1, n)
        if isinstance(f, Not):
            return ~rec(f.arg)
        if isinstance(f, And):
            return rec(f.left) & rec(f.right)
        if isinstance(f, Or):
            return rec(f.left) | rec(f.right)
        if isinstance(f, Implies):
            return ~rec(f.left) | rec(f.right)
        if isinstance(f, Forall):
            return ~_exists(f.var, Not(f.body))
        if isinstance(f, Exists):
            return _exists(f.var, f.body)
        raise TypeError(f"not a formula: {f!r}")

    def _exists(var: str, body: Formula) -> np.ndarray:
        if not is_quantifier_free(body):
            body = _eliminate_all(body, budgets)
        lo, hi, _ = _window(var, body, env1, n)
        glo, ghi = int(lo.min()), int(hi.max())
        inner_bounds = dict(bounds1)
        inner_bounds[var] = (glo, ghi)
        varorder = tuple(sorted(free_vars(body) - {var})) + (var,)
        prog, depth = compile_qf(body, varorder, inner_bounds)
        cols = [np.asarray(env1[v], dtype=np.int64) for v in varorder[:-1]]
        if backend() == "numba":
            _, scan = _get_numba()
            pts = np.zeros((n, len(varorder)), dtype=np.int64)
            for i, col in enumerate(cols):
                pts[:, i] = col
            out = np.zeros(n, dtype=np.bool_)
            scan(prog, pts, lo, hi, out, max(depth, 1))
            return out
        acc = np.zeros(n, dtype=bool)
        for val in range(glo, ghi + 1):
            vic = cols + [np.full(n, val, dtype=np.int64)]
            res = _run_numpy(prog, vic)
            acc |= res & (val >= lo) & (val <= hi)
            if acc.all():
                break
        return acc

    env1 = {v: np.asarray(a, dtype=np.int64) for v, a in env.items()}
    bounds1 = dict(bounds)
    return rec(phi)


def evaluate_on_box(
    phi: Formula,
    box: Dict[str, Tuple[int, int]],
    budgets: Optional[Budgets] = None,
) -> np.ndarray:
    """Truth table of phi over the cartesian product of inclusive ranges.

    Returns an array of shape (product of range sizes,), with the first
    variable (sorted order) varying slowest.
    """
    names = tuple(sorted(box))
    axes = [np.arange(box[v][0], box[v][1] + 1, dtype=np.int64) for v in names]
    grids = np.meshgrid(*axes, indexing="ij") if axes else []
    env = {v: g.ravel() for v, g in zip(names, grids)}
    return evaluate(phi, env, dict(box), budgets)

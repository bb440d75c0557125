"""Closed-form single-variable selection and the exhaustive 1-Opt search.

For a fixed variable the objective reduces to the parabola
``f_i(y) = q*y^2 + M*y`` on the integers ``0..cap``.  Its nonzero root is
``-M/q`` and its vertex ``-M/(2q)``; every comparison against those
rationals is done by integer cross-multiplication.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .model import QipInstance, SearchState, is_feasible, partial_value
from .report import RunReport


@dataclass
class SelectionScratch:
    """Intermediate quantities of one selection, kept for inspection and tests."""

    y2: tuple[int, int] | None  # root -M/q as (num, den), den > 0
    y_star: tuple[int, int] | None  # vertex -M/(2q)
    y_max: int | None
    U: int
    U1: int
    U2: int | None


@dataclass
class SweepOutcome:
    improved: bool
    moves_applied: int
    final_f: int


def _normalize(num: int, den: int) -> tuple[int, int]:
    return (-num, -den) if den < 0 else (num, den)


def round_to_candidate(m_i: int, q_ii: int) -> int:
    """Nearest integer to ``-m_i / (2 q_ii)``; halves round away from zero."""
    if q_ii == 0:
        raise ValueError("vertex undefined for q_ii == 0")
    num, den = _normalize(-m_i, 2 * q_ii)
    mag = (2 * abs(num) + den) // (2 * den)
    return mag if num >= 0 else -mag


def scratch(q_ii: int, m_i: int, u_i: int, x_i: int, alpha_i: int | None = None) -> SelectionScratch:
    cap = u_i if alpha_i is None else min(u_i, alpha_i + x_i)
    if q_ii == 0:
        return SelectionScratch(None, None, None, u_i, cap, None)
    y_max = round_to_candidate(m_i, q_ii)
    return SelectionScratch(
        _normalize(-m_i, q_ii),
        _normalize(-m_i, 2 * q_ii),
        y_max,
        min(u_i, y_max),
        cap,
        min(cap, y_max),
    )


def _table_choice(q: int, M: int, cap: int) -> int:
    # y2 = -M/q.  Sign of y2 is the sign of -M*q.
    if q < 0:
        if M <= 0:  # y2 <= 0
            return 0
        return min(cap, round_to_candidate(M, q))
    if q > 0:
        if M >= 0:  # y2 <= 0
            return cap
        # cap > y2  <=>  cap*q > -M
        return cap if cap * q + M > 0 else 0
    if M > 0:
        return cap
    return 0


def _select(q: int, M: int, x: int, cap: int) -> int:
    if q == 0 and M == 0:
        return x
    y = _table_choice(q, M, cap)
    # Keep the current value on exact ties so only strict improvements move.
    if y != x and partial_value(q, M, y) == partial_value(q, M, x):
        return x
    return y


def best_value_unconstrained(q_ii: int, m_i: int, u_i: int, x_i: int) -> int:
    """Integer ``y`` in ``[0, u_i]`` maximizing ``q_ii*y^2 + m_i*y``."""
    return _select(q_ii, m_i, x_i, u_i)


def best_value_constrained(q_ii: int, m_i: int, u_i: int, x_i: int, alpha_i: int) -> int:
    """Like :func:`best_value_unconstrained` but capped at ``min(u_i, x_i + alpha_i)``."""
    return _select(q_ii, m_i, x_i, min(u_i, x_i + alpha_i))


def random_sequence(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random permutation of ``0..n-1`` obtained by sorting random keys."""
    keys = rng.random(n)
    return np.argsort(keys, kind="stable")


def best_move(state: SearchState, i: int) -> int:
    """Best value for variable ``i`` given the rest of ``state`` (respects slacks)."""
    inst = state.instance
    xi = int(state.x[i])
    cap = int(inst.u[i]) if not inst.m else min(int(inst.u[i]), xi + state.headroom(i))
    return _select(inst.diag[i], int(state.M[i]), xi, cap)


def one_opt(state: SearchState, rng: np.random.Generator) -> SweepOutcome:
    """Sweep random orders applying the best single-variable move until none improves."""
    moves = 0
    improved = True
    n = state.instance.n
    while improved:
        improved = False
        for i in random_sequence(n, rng):
            i = int(i)
            y = best_move(state, i)
            if y != state.x[i]:
                state.apply_move(i, y)
                moves += 1
                improved = True
    return SweepOutcome(moves > 0, moves, state.f)


def is_one_opt_local_optimum(state: SearchState) -> bool:
    """True iff no single-variable change can raise the objective."""
    inst = state.instance
    for i in range(inst.n):
        xi = int(state.x[i])
        q, M = inst.diag[i], int(state.M[i])
        if partial_value(q, M, best_move(state, i)) > partial_value(q, M, xi):
            return False
    return True


def run_one_opt(instance: QipInstance, seed: int) -> tuple[SearchState, RunReport]:
    """Single exhaustive 1-Opt run from ``x = 0``."""
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    state = SearchState.from_point(instance)
    outcome = one_opt(state, rng)
    report = RunReport(instance.name, "1opt", seed, state.f, time.perf_counter() - start, 1,
                       is_feasible(instance, state.x), outcome.moves_applied)
    return state, report

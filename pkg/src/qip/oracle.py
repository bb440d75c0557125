"""Brute-force ground truth for small instances.

Nothing here uses the cached interactions, the selection tables or the
headroom rule; values come from full objective evaluations and feasibility
from recomputed slacks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .model import QipInstance, SearchState, compute_interactions, compute_slacks, objective


class BudgetExceeded(RuntimeError):
    """The lattice is too large to enumerate; use the property tests instead."""


@dataclass(frozen=True)
class EnumerationBudget:
    max_points: int = 20_000_000


def lattice_size(instance: QipInstance) -> int:
    size = 1
    for ui in instance.u:
        size *= int(ui) + 1
    return size


def brute_force_global(instance: QipInstance, budget: EnumerationBudget = EnumerationBudget(),
                       chunk: int = 1 << 16) -> tuple[np.ndarray, int]:
    """Enumerate the whole box in lexicographic order; ties keep the first maximizer."""
    total = lattice_size(instance)
    if total > budget.max_points:
        raise BudgetExceeded(f"{total} lattice points exceed the budget of {budget.max_points}")
    dims = tuple(int(ui) + 1 for ui in instance.u)
    best_f: Optional[int] = None
    best_x = np.zeros(instance.n, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        X = np.stack(np.unravel_index(idx, dims), axis=1).astype(np.int64)
        values = X @ instance.d + np.einsum("ki,ij,kj->k", X, instance.Q, X)
        if instance.m:
            ok = np.all(X @ instance.A.T <= instance.b, axis=1)
            values = np.where(ok, values, np.iinfo(np.int64).min)
            if not ok.any():
                continue
        k = int(np.argmax(values))
        if best_f is None or values[k] > best_f:
            best_f, best_x = int(values[k]), X[k].copy()
    assert best_f is not None  # x = 0 is always feasible
    return best_x, best_f


def enumerate_best_value(q_ii: int, m_i: int, cap: int) -> tuple[int, int]:
    """Smallest maximizer and maximum of ``q*y^2 + M*y`` over ``y = 0..cap``."""
    best_y, best = 0, 0
    for y in range(1, cap + 1):
        value = q_ii * y * y + m_i * y
        if value > best:
            best_y, best = y, value
    return best_y, best


def brute_force_best_single(state: SearchState, i: int) -> tuple[int, int]:
    """Best feasible value for variable ``i`` with the others fixed.

    The returned value is ``f(x[i<-y]) - f(x[i<-0])``, i.e. the single-variable
    part of the objective, found by evaluating the full objective.
    """
    inst = state.instance
    x = state.x.copy()
    x[i] = 0
    base = objective(inst, x)
    slack0 = compute_slacks(inst, x)
    best_y, best = 0, 0
    for y in range(1, int(inst.u[i]) + 1):
        if inst.m and np.any(slack0 - y * inst.A[:, i] < 0):
            break
        x[i] = y
        value = objective(inst, x) - base
        if value > best:
            best_y, best = y, value
    return best_y, best


def improving_coordinates(instance: QipInstance, x, indices: Optional[Iterable[int]] = None) -> list[int]:
    """Indices where some feasible single-variable change raises the objective.

    Interactions and slacks are recomputed from ``x``; each candidate value is
    scored by its exact objective change.
    """
    x = np.asarray(x, dtype=np.int64)
    M = compute_interactions(instance, x)
    slack = compute_slacks(instance, x)
    found = []
    for i in range(instance.n) if indices is None else indices:
        xi, q, Mi = int(x[i]), int(instance.Q[i, i]), int(M[i])
        current = q * xi * xi + Mi * xi
        for y in range(int(instance.u[i]) + 1):
            if y == xi:
                continue
            if instance.m and np.any(slack - (y - xi) * instance.A[:, i] < 0):
                continue
            if q * y * y + Mi * y > current:
                found.append(i)
                break
    return found


def check_local_optimality_by_enumeration(state_or_instance, x=None) -> bool:
    """True iff no single-variable change improves the objective.

    Accepts either a :class:`SearchState` or an ``(instance, x)`` pair.  Every
    candidate point is scored with a full objective evaluation.
    """
    if isinstance(state_or_instance, SearchState):
        inst, x = state_or_instance.instance, state_or_instance.x
    else:
        inst = state_or_instance
    x = np.asarray(x, dtype=np.int64).copy()
    slack = compute_slacks(inst, x)
    if np.any(slack < 0):
        raise ValueError("point is infeasible")
    f = objective(inst, x)
    for i in range(inst.n):
        xi = int(x[i])
        for y in range(int(inst.u[i]) + 1):
            if y == xi:
                continue
            if inst.m and np.any(slack - (y - xi) * inst.A[:, i] < 0):
                continue
            x[i] = y
            better = objective(inst, x) > f
            x[i] = xi
            if better:
                return False
    return True

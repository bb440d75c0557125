"""Tabu search with an oscillation strategy.

Each round runs a tabu-filtered construction phase, a plain 1-Opt pass, and
a destruction phase that perturbs a few randomly chosen variables and marks
them tabu.  The same loop handles the unconstrained and the knapsack case;
constraints only enter through the headroom caps.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .local_search import SweepOutcome, best_move, one_opt, random_sequence
from .model import QipInstance, SearchState, is_feasible
from .report import RunReport


def default_tenure(n: int) -> int:
    return 10 + n // 1000


class TabuMemory:
    """Per-variable tabu counters.

    Setting a counter and then decrementing every positive counter after each
    move is equivalent to storing expiry times against a move clock, which
    makes each update O(1).
    """

    def __init__(self, n: int, tenure: int):
        if tenure < 1:
            raise ValueError("tenure must be positive")
        self.tenure = tenure
        self._expiry = np.zeros(n, dtype=np.int64)
        self._clock = 0

    def is_tabu(self, i: int) -> bool:
        return self._expiry[i] > self._clock

    def counter(self, i: int) -> int:
        return max(0, int(self._expiry[i]) - self._clock)

    @property
    def counters(self) -> np.ndarray:
        return np.maximum(self._expiry - self._clock, 0)

    def stamp(self, i: int, value: int) -> None:
        """Set ``tabu(i) = value``, then decrement every positive counter."""
        self._expiry[i] = self._clock + value
        self._clock += 1


@dataclass
class Incumbent:
    x_star: np.ndarray
    f_star: int
    start: float = field(default_factory=time.perf_counter, repr=False)
    tb: float = 0.0
    history: list[tuple[float, int]] = field(default_factory=list, repr=False)

    @classmethod
    def from_state(cls, state: SearchState) -> "Incumbent":
        inc = cls(state.x.copy(), state.f)
        inc.history.append((0.0, state.f))
        return inc

    def offer(self, state: SearchState) -> bool:
        if state.f > self.f_star:
            self.f_star = state.f
            self.x_star = state.x.copy()
            self.tb = time.perf_counter() - self.start
            self.history.append((self.tb, self.f_star))
            return True
        return False


@dataclass
class TsosConfig:
    tenure: Optional[int] = None
    time_limit: Optional[float] = None
    round_limit: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.time_limit is None and self.round_limit is None:
            raise ValueError("set time_limit or round_limit")
        if self.round_limit is not None and self.round_limit < 0:
            raise ValueError("round_limit must be non-negative")
        if self.tenure is not None and self.tenure < 1:
            raise ValueError("tenure must be positive")


def construction_phase(state: SearchState, tabu: TabuMemory, incumbent: Incumbent,
                       rng: np.random.Generator) -> SweepOutcome:
    """Improving sweeps that skip tabu variables unless the move beats the incumbent."""
    n = state.instance.n
    moves = 0
    flag = True
    while flag:
        flag = False
        for i in random_sequence(n, rng):
            i = int(i)
            y = best_move(state, i)
            if y == state.x[i]:
                continue
            f1 = state.f + state.delta_for_move(i, y)
            if not tabu.is_tabu(i) or f1 > incumbent.f_star:
                state.apply_move(i, y)
                incumbent.offer(state)
                tabu.stamp(i, tabu.tenure + 1)
                moves += 1
                flag = True
    return SweepOutcome(moves > 0, moves, state.f)


def draw_perturbation_size(n: int, rng: np.random.Generator) -> int:
    """Random integer strictly inside ``(n/400 + 5, n/80 + 30)``, clamped to ``[1, n]``."""
    lo = math.floor(Fraction(n, 400) + 5) + 1
    hi = math.ceil(Fraction(n, 80) + 30) - 1
    lo = max(1, min(lo, n))
    hi = max(lo, min(hi, n))
    return int(rng.integers(lo, hi, endpoint=True))


def destruction_phase(state: SearchState, tabu: TabuMemory, rng: np.random.Generator) -> int:
    """Randomly reset ``p`` variables, stamping them tabu; returns the count perturbed."""
    inst = state.instance
    order = random_sequence(inst.n, rng)
    p = draw_perturbation_size(inst.n, rng)
    perturbed = 0
    for k in range(1, p + 1):
        i = int(order[k - 1])
        xi = int(state.x[i])
        if xi > 0:
            y = int(rng.integers(0, xi, endpoint=True))
        else:
            cap = int(inst.u[i])
            if inst.m:
                cap = min(cap, state.headroom(i))
            if cap == 0:
                continue
            y = int(rng.integers(1, cap, endpoint=True))
        state.apply_move(i, y)
        tabu.stamp(i, tabu.tenure + p + 1 - k)
        perturbed += 1
    return perturbed


def tsos(instance: QipInstance, config: TsosConfig, verify: bool = False,
         on_move=None) -> tuple[Incumbent, RunReport]:
    """Run the oscillating tabu search from ``x = 0``.

    ``round_limit`` counts destruction phases; construction and 1-Opt always
    run once more after the last one, so ``round_limit=0`` returns the
    locally improved starting point.
    """
    rng = np.random.default_rng(config.seed)
    tenure = config.tenure if config.tenure is not None else default_tenure(instance.n)
    state = SearchState.from_point(instance, verify=verify, on_move=on_move)
    tabu = TabuMemory(instance.n, tenure)
    incumbent = Incumbent.from_state(state)
    moves = 0
    rounds = 0
    while True:
        moves += construction_phase(state, tabu, incumbent, rng).moves_applied
        moves += one_opt(state, rng).moves_applied
        incumbent.offer(state)
        if config.round_limit is not None and rounds >= config.round_limit:
            break
        if config.time_limit is not None and time.perf_counter() - incumbent.start >= config.time_limit:
            break
        moves += destruction_phase(state, tabu, rng)
        rounds += 1
    report = RunReport(
        instance_name=instance.name,
        algorithm="tsos",
        seed=config.seed,
        ofv=incumbent.f_star,
        tb=incumbent.tb,
        rounds=rounds,
        feasible=is_feasible(instance, incumbent.x_star),
        moves=moves,
        history=list(incumbent.history),
    )
    return incumbent, report


"""Random benchmark instances in five coefficient families.

Every draw is an inclusive-range uniform integer except the right-hand-side
ratios, which are uniform reals inside the tightness bracket.  Each
component (off-diagonal, diagonal, linear, bounds, constraint rows, ratios)
gets its own child stream of a numpy ``SeedSequence`` so a ``(config,
seed)`` pair fixes the instance bit for bit.  The underlying bit generator
is numpy's PCG64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import QipInstance

# family -> (llq, ulq), (lldiag, uldiag), (lld, uld), (llx, ulx), (lla, ula)
FAMILIES = {
    1: ((-20, 20), (-20, 20), (1, 20), (0, 10), (0, 9)),
    2: ((-40, 40), (-40, 40), (1, 40), (0, 20), (0, 19)),
    3: ((-80, 80), (-80, 80), (1, 80), (0, 40), (0, 39)),
    4: ((-160, 160), (-160, 160), (1, 60), (0, 80), (0, 79)),
    5: ((-200, 200), (-200, 200), (1, 200), (0, 100), (0, 99)),
}

TIGHTNESS = {"e": (0.6, 0.8), "d": (0.4, 0.6), "h": (0.2, 0.4)}

RHS_BASES = ("max_consumption", "coefficient_sum")


@dataclass(frozen=True)
class GeneratorConfig:
    family: int
    n: int
    constrained: bool = False
    c: float = 0.2
    tightness: str = "e"
    seed: int = 0
    rhs_basis: str = "max_consumption"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {sorted(FAMILIES)}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.constrained:
            if not 0 < self.c <= 1:
                raise ValueError("constraint ratio c must lie in (0, 1]")
            if self.tightness not in TIGHTNESS:
                raise ValueError(f"tightness must be one of {sorted(TIGHTNESS)}")
            if self.rhs_basis not in RHS_BASES:
                raise ValueError(f"rhs_basis must be one of {RHS_BASES}")

    @property
    def m(self) -> int:
        if not self.constrained:
            return 0
        return max(1, math.floor(self.c * self.n + 0.5))

    @property
    def name(self) -> str:
        if self.constrained:
            return f"n{self.n}m{self.m}{self.tightness}-{self.family}"
        return f"n{self.n}-{self.family}"


def _uniform(rng: np.random.Generator, bounds: tuple[int, int], size) -> np.ndarray:
    lo, hi = bounds
    return rng.integers(lo, hi, size=size, endpoint=True, dtype=np.int64)


def derive_rhs(A: np.ndarray, u: np.ndarray, bracket: tuple[float, float], rng: np.random.Generator,
               rhs_basis: str = "max_consumption") -> np.ndarray:
    """Right-hand sides as a random fraction of each row's load.

    The load is ``sum_i a_ji * u_i`` (``max_consumption``) or ``sum_i a_ji``
    (``coefficient_sum``).  Results are at least 1, so ``x = 0`` stays feasible.
    """
    A = np.asarray(A, dtype=np.int64)
    if rhs_basis == "max_consumption":
        load = A @ np.asarray(u, dtype=np.int64)
    elif rhs_basis == "coefficient_sum":
        load = A.sum(axis=1)
    else:
        raise ValueError(f"rhs_basis must be one of {RHS_BASES}")
    lo, hi = bracket
    ratios = rng.uniform(lo, hi, size=A.shape[0])
    b = np.floor(ratios * load + 0.5).astype(np.int64)
    return np.maximum(b, 1)


def generate(config: GeneratorConfig) -> QipInstance:
    offdiag, diag, lin, xb, ab = FAMILIES[config.family]
    n, m = config.n, config.m
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(config.seed).spawn(6)]

    Q = np.triu(_uniform(streams[0], offdiag, (n, n)), 1)
    Q[np.diag_indices(n)] = _uniform(streams[1], diag, n)
    d = _uniform(streams[2], lin, n)
    u = _uniform(streams[3], (max(1, xb[0]), xb[1]), n)
    A = b = None
    if m:
        A = _uniform(streams[4], ab, (m, n))
        b = derive_rhs(A, u, TIGHTNESS[config.tightness], streams[5], config.rhs_basis)
    return QipInstance(d, Q, u, A, b, name=config.name)

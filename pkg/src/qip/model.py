"""Problem data, search state and exact incremental move evaluation.

An instance maximizes ``d.x + x'Qx`` with ``Q`` upper triangular over the
integer box ``0 <= x <= u``, optionally subject to ``Ax <= b`` with
``A >= 0`` and ``b > 0``.  All coefficients are 64-bit integers so every
objective change is computed exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

INT64_MAX = np.iinfo(np.int64).max
INT64_MIN = np.iinfo(np.int64).min


class InstanceError(ValueError):
    """Raised for malformed or out-of-range problem data."""


class InfeasibleMoveError(ValueError):
    """Raised when a move would leave the box or violate a constraint."""


def _as_int_vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise InstanceError(f"{name} must be one-dimensional")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.mod(arr, 1) == 0):
            raise InstanceError(f"{name} must hold integers")
    return arr.astype(np.int64)


class QipInstance:
    """Immutable quadratic integer program.

    ``Q`` may be given as a full square matrix (entries below the diagonal must
    be zero) or as the ragged list of upper rows ``[q_ii, ..., q_in]``.
    """

    def __init__(self, d, Q, u, A=None, b=None, name: str = ""):
        self.d = _as_int_vector(d, "d")
        self.n = n = self.d.size
        self.u = _as_int_vector(u, "u")
        if self.u.size != n:
            raise InstanceError(f"u has length {self.u.size}, expected {n}")
        if np.any(self.u < 0):
            raise InstanceError("upper bounds must be non-negative")

        if isinstance(Q, np.ndarray) and Q.ndim == 2:
            Qm = Q.astype(np.int64)
            if Qm.shape != (n, n):
                raise InstanceError(f"Q has shape {Qm.shape}, expected ({n}, {n})")
            if np.any(np.tril(Qm, -1)):
                raise InstanceError("Q must be upper triangular")
        else:
            rows = list(Q)
            if len(rows) != n:
                raise InstanceError(f"Q has {len(rows)} rows, expected {n}")
            Qm = np.zeros((n, n), dtype=np.int64)
            for i, row in enumerate(rows):
                row = list(row)
                if len(row) == n:
                    if any(row[:i]):
                        raise InstanceError("Q must be upper triangular")
                    row = row[i:]
                if len(row) != n - i:
                    raise InstanceError(f"Q row {i} has {len(row)} entries, expected {n - i}")
                Qm[i, i:] = row
        self.Q = Qm

        if A is None:
            if b is not None:
                raise InstanceError("b given without A")
            self.A = np.zeros((0, n), dtype=np.int64)
            self.b = np.zeros(0, dtype=np.int64)
        else:
            self.A = np.asarray(A, dtype=np.int64)
            if self.A.ndim != 2 or self.A.shape[1] != n:
                raise InstanceError(f"A must have {n} columns")
            self.b = _as_int_vector(b, "b")
            if self.A.shape[0] != self.b.size:
                raise InstanceError(f"A has {self.A.shape[0]} rows but b has {self.b.size} entries")
            if np.any(self.A < 0):
                raise InstanceError("constraint coefficients must be non-negative")
            if np.any(self.b <= 0):
                raise InstanceError("right-hand sides must be positive")
        self.m = self.A.shape[0]
        self.name = name

        self._check_magnitude()

        # Symmetric coupling matrix without the diagonal: row i holds q_{j,i}
        # for j < i and q_{i,j} for j > i, so M changes by dy * coupling[i].
        self.coupling = self.Q + self.Q.T
        np.fill_diagonal(self.coupling, 0)
        self.diag = [int(v) for v in np.diag(self.Q)]
        self.At = np.ascontiguousarray(self.A.T)
        for arr in (self.d, self.u, self.Q, self.A, self.b, self.coupling, self.At):
            arr.setflags(write=False)

    def _check_magnitude(self) -> None:
        # Conservative bound on any quadratic-form evaluation over the box.
        umax = int(self.u.max()) if self.n else 0
        bound = sum(abs(int(v)) for v in self.d) * umax
        bound += int(np.abs(self.Q).sum(dtype=object)) * umax * umax
        if bound > INT64_MAX:
            raise InstanceError("coefficients too large for exact 64-bit evaluation")
        if self.m:
            load = int((self.A.astype(object) @ self.u.astype(object)).max())
            if load > INT64_MAX:
                raise InstanceError("constraint loads overflow 64-bit range")

    @property
    def constrained(self) -> bool:
        return self.m > 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, QipInstance):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and np.array_equal(self.d, other.d)
            and np.array_equal(self.Q, other.Q)
            and np.array_equal(self.u, other.u)
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.b, other.b)
        )

    def __repr__(self) -> str:
        kind = "cqip" if self.constrained else "uqip"
        label = f" {self.name!r}" if self.name else ""
        return f"<QipInstance{label} {kind} n={self.n} m={self.m}>"


def _check_point(instance: QipInstance, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (instance.n,):
        raise InstanceError(f"x has shape {x.shape}, expected ({instance.n},)")
    if np.any(x < 0) or np.any(x > instance.u):
        raise InfeasibleMoveError("x lies outside the box [0, u]")
    return x


def objective(instance: QipInstance, x) -> int:
    """Return ``d.x + sum_{i<=j} q_ij x_i x_j`` exactly."""
    x = _check_point(instance, x)
    return int(instance.d @ x) + int(x @ (instance.Q @ x))


def compute_interactions(instance: QipInstance, x) -> np.ndarray:
    """Return the interaction vector ``M``; ``M[i]`` omits the diagonal term of ``i``."""
    x = _check_point(instance, x)
    return instance.d + instance.coupling @ x


def compute_slacks(instance: QipInstance, x) -> np.ndarray:
    """Return the uncommitted budgets ``b - Ax`` (possibly negative)."""
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (instance.n,):
        raise InstanceError(f"x has shape {x.shape}, expected ({instance.n},)")
    return instance.b - instance.A @ x


def is_feasible(instance: QipInstance, x) -> bool:
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (instance.n,):
        raise InstanceError(f"x has shape {x.shape}, expected ({instance.n},)")
    if np.any(x < 0) or np.any(x > instance.u):
        return False
    return bool(np.all(compute_slacks(instance, x) >= 0))


def partial_value(q_ii: int, m_i: int, y: int) -> int:
    """The part of the objective that depends on a single variable: ``q y^2 + M y``."""
    value = (q_ii * y + m_i) * y
    if not INT64_MIN <= value <= INT64_MAX:
        raise OverflowError("partial value exceeds 64-bit range")
    return value


@dataclass(frozen=True)
class MoveCandidate:
    i: int
    y: int
    delta: int


@dataclass
class SearchState:
    """Current point with cached interactions, objective and slacks.

    Build with :meth:`from_point`.  With ``verify`` set, every move is followed
    by a full recomputation that must match the cached values exactly.
    """

    instance: QipInstance
    x: np.ndarray
    M: np.ndarray
    f: int
    B: np.ndarray
    verify: bool = False
    on_move: Optional[Callable[["SearchState", int, int, int, int], None]] = field(default=None, repr=False)

    @classmethod
    def from_point(cls, instance: QipInstance, x=None, verify: bool = False, on_move=None) -> "SearchState":
        if x is None:
            x = np.zeros(instance.n, dtype=np.int64)
        x = _check_point(instance, x).copy()
        B = compute_slacks(instance, x)
        if np.any(B < 0):
            raise InfeasibleMoveError("starting point violates a constraint")
        return cls(instance, x, compute_interactions(instance, x), objective(instance, x), B, verify, on_move)

    def copy(self) -> "SearchState":
        return SearchState(self.instance, self.x.copy(), self.M.copy(), self.f, self.B.copy(), self.verify, self.on_move)

    def delta_for_move(self, i: int, y: int) -> int:
        """Objective change from setting ``x[i] = y``."""
        if not 0 <= i < self.instance.n:
            raise IndexError(f"variable index {i} out of range")
        if not 0 <= y <= self.instance.u[i]:
            raise InfeasibleMoveError(f"value {y} outside [0, {self.instance.u[i]}] for variable {i}")
        xi = int(self.x[i])
        return (y - xi) * (self.instance.diag[i] * (y + xi) + int(self.M[i]))

    def headroom(self, i: int) -> int:
        """Largest increase of ``x[i]`` the current slacks allow (ignores ``u`` unless the column is empty)."""
        inst = self.instance
        if inst.m:
            col = inst.At[i]
            mask = col > 0
            if mask.any():
                return int((self.B[mask] // col[mask]).min())
        # Columns without positive coefficients are limited by the box only.
        return int(inst.u[i] - self.x[i])

    def apply_move(self, i: int, y: int) -> int:
        """Set ``x[i] = y`` and update ``f``, ``M`` and ``B``; returns the objective change."""
        delta = self.delta_for_move(i, y)
        xi = int(self.x[i])
        dy = y - xi
        if dy == 0:
            return 0
        inst = self.instance
        if inst.m:
            newB = self.B - dy * inst.At[i]
            if dy > 0 and np.any(newB < 0):
                raise InfeasibleMoveError(f"setting x[{i}]={y} violates a constraint")
            self.B = newB
        self.M += dy * inst.coupling[i]
        self.x[i] = y
        self.f += delta
        if self.verify:
            self.check_consistency()
        if self.on_move is not None:
            self.on_move(self, i, xi, y, delta)
        return delta

    def check_consistency(self) -> None:
        """Raise ``AssertionError`` unless cached values equal a full recomputation."""
        inst = self.instance
        if np.any(self.x < 0) or np.any(self.x > inst.u):
            raise AssertionError("x left the box")
        if self.f != objective(inst, self.x):
            raise AssertionError("cached objective drifted")
        if not np.array_equal(self.M, compute_interactions(inst, self.x)):
            raise AssertionError("cached interactions drifted")
        B = compute_slacks(inst, self.x)
        if not np.array_equal(self.B, B):
            raise AssertionError("cached slacks drifted")
        if np.any(B < 0):
            raise AssertionError("state is infeasible")


def headroom(state: SearchState, i: int) -> int:
    return state.headroom(i)

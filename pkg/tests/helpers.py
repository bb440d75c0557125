import numpy as np

from qip import QipInstance


def example_instance(u=(2, 2), constrained=False):
    """n=2, d=(1,2), Q=[[3,4],[.,5]]; optionally with the single row 2x1 + 3x2 <= 7."""
    if constrained:
        return QipInstance([1, 2], [[3, 4], [5]], list(u), [[2, 3]], [7])
    return QipInstance([1, 2], [[3, 4], [5]], list(u))


def random_instance(rng, n, umax, coef=10, m=0, amax=5):
    """Dense random instance with coefficients in [-coef, coef] and u_i in [0, umax]."""
    Q = np.triu(rng.integers(-coef, coef, size=(n, n), endpoint=True))
    d = rng.integers(-coef, coef, size=n, endpoint=True)
    u = rng.integers(0, umax, size=n, endpoint=True)
    if not m:
        return QipInstance(d, Q, u)
    A = rng.integers(0, amax, size=(m, n), endpoint=True)
    load = A @ u
    b = np.array([rng.integers(1, max(1, int(lj)), endpoint=True) for lj in load])
    return QipInstance(d, Q, u, A, b)


VERDICTS: list[str] = []


def verdict(number, title, ok, detail):
    """Record and print one acceptance line, then fail the test if needed."""
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    VERDICTS.append(line)
    print(line)
    assert ok, line

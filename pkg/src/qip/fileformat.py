"""Plain-text instance and solution files.

Instance layout (one declared row per line, single spaces)::

    QIP1 uqip|cqip
    <n> <m>
    u <n ints>
    d <n ints>
    Q <q_ii ... q_in>        # n lines, row i holds n - i entries
    A <n ints>               # m lines, cqip only
    b <m ints>               # cqip only

Solution layout::

    QIPSOL1
    <instance name>
    <objective>
    <n ints>
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .model import InstanceError, QipInstance, objective

PathLike = Union[str, os.PathLike]


class FormatError(ValueError):
    """Malformed instance or solution file; message carries the line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _ints(values: Iterable) -> str:
    return " ".join(str(int(v)) for v in values)


def format_instance(instance: QipInstance) -> str:
    n, m = instance.n, instance.m
    lines = [
        f"QIP1 {'cqip' if m else 'uqip'}",
        f"{n} {m}",
        f"u {_ints(instance.u)}",
        f"d {_ints(instance.d)}",
    ]
    lines += [f"Q {_ints(instance.Q[i, i:])}" for i in range(n)]
    if m:
        lines += [f"A {_ints(row)}" for row in instance.A]
        lines.append(f"b {_ints(instance.b)}")
    return "\n".join(lines) + "\n"


def write_instance(instance: QipInstance, destination: PathLike) -> None:
    Path(destination).write_text(format_instance(instance))


class _Lines:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self, what: str) -> tuple[int, list[str]]:
        while self.pos < len(self.lines):
            self.pos += 1
            tokens = self.lines[self.pos - 1].split()
            if tokens:
                return self.pos, tokens
        raise FormatError(self.pos + 1, f"unexpected end of file, missing {what}")

    def row(self, tag: str, count: int, what: str) -> tuple[int, list[int]]:
        lineno, tokens = self.next(what)
        if tokens[0] != tag:
            raise FormatError(lineno, f"expected {what} starting with {tag!r}, found {tokens[0]!r}")
        if len(tokens) - 1 != count:
            raise FormatError(lineno, f"{what} has {len(tokens) - 1} values, expected {count}")
        try:
            return lineno, [int(t) for t in tokens[1:]]
        except ValueError:
            raise FormatError(lineno, f"{what} holds a non-integer value") from None


def parse_instance(text: str, name: str = "") -> QipInstance:
    lines = _Lines(text)
    lineno, header = lines.next("header")
    if len(header) != 2 or header[0] != "QIP1" or header[1] not in ("uqip", "cqip"):
        raise FormatError(lineno, "header must be 'QIP1 uqip' or 'QIP1 cqip'")
    kind = header[1]
    lineno, dims = lines.next("dimensions")
    try:
        n, m = (int(t) for t in dims)
    except ValueError:
        raise FormatError(lineno, "dimensions must be two integers 'n m'") from None
    if n < 1 or m < 0:
        raise FormatError(lineno, "need n >= 1 and m >= 0")
    if (kind == "uqip") != (m == 0):
        raise FormatError(lineno, f"{kind} instance declares m={m}")

    _, u = lines.row("u", n, "bounds row")
    _, d = lines.row("d", n, "linear row")
    rows = [lines.row("Q", n - i, f"Q row {i + 1}")[1] for i in range(n)]
    A = b = None
    if m:
        A = [lines.row("A", n, f"A row {j + 1}")[1] for j in range(m)]
        lineno, b = lines.row("b", m, "rhs row")
    try:
        rest = lines.next("")
    except FormatError:
        rest = None
    if rest is not None:
        raise FormatError(rest[0], "trailing content after instance")
    try:
        return QipInstance(d, rows, u, A, b, name=name)
    except InstanceError as exc:
        raise FormatError(lines.pos, str(exc)) from None


def read_instance(source: PathLike) -> QipInstance:
    path = Path(source)
    return parse_instance(path.read_text(), name=instance_name_from_path(path))


def instance_name_from_path(path: PathLike) -> str:
    name = Path(path).name
    return name[:-4] if name.endswith(".qip") else name


def format_solution(instance: QipInstance, x) -> str:
    x = np.asarray(x, dtype=np.int64)
    return f"QIPSOL1\n{instance.name or '-'}\n{objective(instance, x)}\n{_ints(x)}\n"


def write_solution(instance: QipInstance, x, destination: PathLike) -> None:
    Path(destination).write_text(format_solution(instance, x))


def parse_solution(text: str, instance: QipInstance) -> tuple[str, np.ndarray, int]:
    """Parse a solution for ``instance``; the stored objective is re-verified."""
    lines = _Lines(text)
    lineno, header = lines.next("header")
    if header != ["QIPSOL1"]:
        raise FormatError(lineno, "header must be 'QIPSOL1'")
    _, name = lines.next("instance name")
    lineno, obj = lines.next("objective")
    try:
        claimed = int(obj[0])
    except ValueError:
        raise FormatError(lineno, "objective must be an integer") from None
    lineno, tokens = lines.next("solution vector")
    if len(tokens) != instance.n:
        raise FormatError(lineno, f"solution has {len(tokens)} values, expected {instance.n}")
    try:
        x = np.array([int(t) for t in tokens], dtype=np.int64)
    except ValueError:
        raise FormatError(lineno, "solution holds a non-integer value") from None
    if np.any(x < 0) or np.any(x > instance.u):
        raise FormatError(lineno, "solution lies outside the box [0, u]")
    actual = objective(instance, x)
    if actual != claimed:
        raise FormatError(3, f"stored objective {claimed} does not match recomputed {actual}")
    return " ".join(name), x, actual


def read_solution(source: PathLike, instance: QipInstance) -> tuple[str, np.ndarray, int]:
    return parse_solution(Path(source).read_text(), instance)


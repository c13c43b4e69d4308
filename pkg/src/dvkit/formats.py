"""Text formats for Distinct Vectors instances and solutions.

Instance::

    c format v1
    p dv <m> <n> <k>
    <m lines of exactly n characters from {0, 1}>

Solution: one line of ascending 1-based column indices separated by single
spaces. An empty file means "no solution".
"""

from __future__ import annotations

from typing import Optional

from .bitmatrix import BinaryMatrix, ColumnSet
from .errors import FormatError
from .solver import DvInstance


def _is_comment(line: str) -> bool:
    return line == "c" or line.startswith("c ")


def write_instance(inst: DvInstance) -> str:
    A = inst.matrix
    lines = ["c format v1", f"p dv {A.m} {A.n} {inst.budget_k}"]
    lines.extend(A.row_string(i) for i in range(1, A.m + 1))
    return "\n".join(lines) + "\n"


def read_instance(text: str) -> DvInstance:
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if _is_comment(line):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 5 or parts[:2] != ["p", "dv"]:
                raise FormatError(f"expected 'p dv <m> <n> <k>', got {line!r}", lineno)
            try:
                m, n, k = (int(x) for x in parts[2:])
            except ValueError:
                raise FormatError(f"non-integer header field in {line!r}", lineno) from None
            if m < 1 or n < 1 or not 0 <= k <= n:
                raise FormatError(f"bad header values m={m} n={n} k={k}", lineno)
            header = (m, n, k)
            continue
        if not line and len(rows) == header[0]:
            continue
        if len(line) != header[1] or set(line) - {"0", "1"}:
            raise FormatError(f"row must be {header[1]} characters from {{0,1}}", lineno)
        rows.append(int(line[::-1], 2))
    if header is None:
        raise FormatError("missing 'p dv' header")
    m, n, k = header
    if len(rows) != m:
        raise FormatError(f"header declares {m} rows, found {len(rows)}")
    return DvInstance(BinaryMatrix.from_packed(rows, n), k)


def write_solution(K: Optional[ColumnSet]) -> str:
    if K is None:
        return ""
    return str(K) + "\n"


def read_solution(text: str) -> Optional[ColumnSet]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not _is_comment(ln)]
    if not lines:
        return None
    if len(lines) > 1:
        raise FormatError("solution must be a single line")
    try:
        cols = [int(x) for x in lines[0].split()]
    except ValueError:
        raise FormatError(f"non-integer column in {lines[0]!r}") from None
    if any(b <= a for a, b in zip(cols, cols[1:])):
        raise FormatError("solution columns must be strictly ascending")
    if cols and cols[0] < 1:
        raise FormatError("solution columns are 1-based")
    return ColumnSet(cols)

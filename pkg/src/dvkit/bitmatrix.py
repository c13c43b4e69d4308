"""Immutable bit-packed binary matrices.

Each row is stored as one Python integer; column ``j`` (1-based) lives in
bit ``j - 1``. Column sets use the same layout, so restricting a row to a
column set is a single ``&`` and comparing two rows is a single ``^``.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence


class ColumnSet:
    """An ascending set of 1-based column indices."""

    __slots__ = ("columns", "mask")

    def __init__(self, columns: Iterable[int] = ()) -> None:
        cols = sorted(columns)
        for a, b in zip(cols, cols[1:]):
            if a == b:
                raise ValueError(f"duplicate column {a}")
        if cols and cols[0] < 1:
            raise ValueError(f"column indices are 1-based, got {cols[0]}")
        self.columns: tuple[int, ...] = tuple(cols)
        mask = 0
        for c in cols:
            mask |= 1 << (c - 1)
        self.mask = mask

    @classmethod
    def from_mask(cls, mask: int) -> ColumnSet:
        return cls(c + 1 for c in _bits(mask))

    def __iter__(self) -> Iterator[int]:
        return iter(self.columns)

    def __len__(self) -> int:
        return len(self.columns)

    def __contains__(self, column: object) -> bool:
        return column in self.columns

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ColumnSet):
            return self.columns == other.columns
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.columns)

    def __lt__(self, other: ColumnSet) -> bool:
        # canonical order: smaller sets first, then lexicographic
        return (len(self), self.columns) < (len(other), other.columns)

    def __repr__(self) -> str:
        return f"ColumnSet({list(self.columns)})"

    def __str__(self) -> str:
        return " ".join(map(str, self.columns))

    def check_range(self, n: int) -> None:
        if self.columns and self.columns[-1] > n:
            raise ValueError(f"column {self.columns[-1]} out of range [1, {n}]")


class BinaryMatrix:
    """An m x n matrix over {0, 1}, addressed with 1-based indices."""

    __slots__ = ("m", "n", "rows")

    def __init__(self, entries: Sequence[Sequence[int]]) -> None:
        if not entries:
            raise ValueError("matrix needs at least one row")
        n = len(entries[0])
        if n == 0:
            raise ValueError("matrix needs at least one column")
        rows = []
        for i, row in enumerate(entries, start=1):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
            packed = 0
            for j, v in enumerate(row):
                if v not in (0, 1):
                    raise ValueError(f"entry ({i}, {j + 1}) is {v!r}, not 0 or 1")
                if v:
                    packed |= 1 << j
            rows.append(packed)
        self._set(len(rows), n, tuple(rows))

    def _set(self, m: int, n: int, rows: tuple[int, ...]) -> None:
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, name, value):
        raise AttributeError("BinaryMatrix is immutable")

    @classmethod
    def from_packed(cls, rows: Iterable[int], n: int) -> BinaryMatrix:
        """Build from packed rows (bit j-1 holds column j)."""
        rows = tuple(rows)
        if not rows or n < 1:
            raise ValueError("matrix needs at least one row and one column")
        full = (1 << n) - 1
        for i, r in enumerate(rows, start=1):
            if r < 0 or r & ~full:
                raise ValueError(f"row {i} has bits outside {n} columns")
        self = object.__new__(cls)
        self._set(len(rows), n, rows)
        return self

    @classmethod
    def from_strings(cls, lines: Iterable[str]) -> BinaryMatrix:
        return cls([[int(ch) for ch in line] for line in lines])

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (1 <= i <= self.m and 1 <= j <= self.n):
            raise IndexError(f"entry ({i}, {j}) outside {self.m}x{self.n} matrix")
        return (self.rows[i - 1] >> (j - 1)) & 1

    def row(self, i: int) -> tuple[int, ...]:
        r = self.rows[i - 1]
        return tuple((r >> j) & 1 for j in range(self.n))

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(1, self.m + 1)]

    def row_string(self, i: int) -> str:
        return "".join("1" if b else "0" for b in self.row(i))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BinaryMatrix):
            return (self.m, self.n, self.rows) == (other.m, other.n, other.rows)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.m, self.n, self.rows))

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.to_lists()})"


def _bits(x: int) -> Iterator[int]:
    """Yield the 0-based positions of set bits in ascending order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def rows_pairwise_distinct(A: BinaryMatrix) -> bool:
    return len(set(A.rows)) == A.m


def restrict(A: BinaryMatrix, K: ColumnSet) -> BinaryMatrix:
    """Return A[*, K] with K's columns in ascending order."""
    if not len(K):
        raise ValueError("cannot restrict to an empty column set")
    K.check_range(A.n)
    shifts = [c - 1 for c in K]
    rows = []
    for r in A.rows:
        packed = 0
        for j, s in enumerate(shifts):
            packed |= ((r >> s) & 1) << j
        rows.append(packed)
    return BinaryMatrix.from_packed(rows, len(shifts))


def difference_set(A: BinaryMatrix, i: int, j: int) -> ColumnSet:
    """Columns where rows i and j disagree."""
    if i == j:
        raise ValueError("difference set needs two different rows")
    for x in (i, j):
        if not 1 <= x <= A.m:
            raise ValueError(f"row {x} out of range [1, {A.m}]")
    return ColumnSet.from_mask(A.rows[i - 1] ^ A.rows[j - 1])


def separated_by(rows: Sequence[int], mask: int) -> bool:
    """True iff the packed rows stay pairwise distinct under column mask."""
    seen = set()
    for r in rows:
        key = r & mask
        if key in seen:
            return False
        seen.add(key)
    return True

"""Exact, exhaustive and greedy solvers for Distinct Vectors.

Every exact answer follows the canonical rule: fewest columns first, then
the lexicographically smallest ascending column tuple. A budget of 0 means
"minimize" and otherwise caps the solution size.
"""

from __future__ import annotations

import atexit
import itertools
import logging
import math
import multiprocessing
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .bitmatrix import BinaryMatrix, ColumnSet, _bits, separated_by
from .errors import InfeasibleError, ResourceLimitError

log = logging.getLogger(__name__)

DEFAULT_NODE_LIMIT = 10**8

SOLUTION = "solution"
INFEASIBLE = "infeasible"
BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class DvInstance:
    matrix: BinaryMatrix
    budget_k: int = 0

    def __post_init__(self):
        if not 0 <= self.budget_k <= self.matrix.n:
            raise ValueError(f"budget {self.budget_k} outside [0, {self.matrix.n}]")


@dataclass
class SolveReport:
    outcome: str
    columns: Optional[ColumnSet]
    nodes_explored: int
    wall_time: float
    lower_bound_used: int

    @property
    def found(self) -> bool:
        return self.outcome == SOLUTION


def verify_solution(A: BinaryMatrix, K: ColumnSet) -> bool:
    K.check_range(A.n)
    return separated_by(A.rows, K.mask)


def lower_bound(A: BinaryMatrix) -> int:
    """ceil(log2 m): t columns split the rows into at most 2**t classes."""
    return (A.m - 1).bit_length()


def _ceil_log2(x: int) -> int:
    return (x - 1).bit_length()


def _has_duplicates(rows: Sequence[int]) -> bool:
    return len(set(rows)) != len(rows)


def _max_size(inst: DvInstance) -> int:
    return inst.budget_k if inst.budget_k > 0 else inst.matrix.n


def solve_brute_force(inst: DvInstance, node_limit: int = DEFAULT_NODE_LIMIT) -> SolveReport:
    """Enumerate column subsets by size, then lexicographically, from the lower bound up."""
    start = time.perf_counter()
    A = inst.matrix
    lb = lower_bound(A)
    if _has_duplicates(A.rows):
        return SolveReport(INFEASIBLE, None, 0, time.perf_counter() - start, lb)
    nodes = 0
    planned = 0
    for size in range(lb, _max_size(inst) + 1):
        planned += math.comb(A.n, size)
        if planned > node_limit:
            raise ResourceLimitError(
                f"brute force needs more than {node_limit} subsets (n={A.n}, size {size})"
            )
        for combo in itertools.combinations(range(A.n), size):
            nodes += 1
            mask = 0
            for c in combo:
                mask |= 1 << c
            if separated_by(A.rows, mask):
                return SolveReport(
                    SOLUTION, ColumnSet.from_mask(mask), nodes, time.perf_counter() - start, lb
                )
    return SolveReport(BUDGET_EXCEEDED, None, nodes, time.perf_counter() - start, lb)


def enumerate_solutions(
    A: BinaryMatrix, max_size: int, node_limit: int = DEFAULT_NODE_LIMIT
) -> Iterator[ColumnSet]:
    """Yield every separating column set with at most max_size columns, in canonical order."""
    planned = sum(math.comb(A.n, t) for t in range(max_size + 1))
    if planned > node_limit:
        raise ResourceLimitError(f"enumeration needs {planned} subsets, limit {node_limit}")
    for size in range(lower_bound(A), max_size + 1):
        for combo in itertools.combinations(range(1, A.n + 1), size):
            K = ColumnSet(combo)
            if separated_by(A.rows, K.mask):
                yield K


class _Search:
    """Branch and bound over the hitting-set view.

    A column set separates all rows iff it hits the difference mask of every
    row pair. ``pairs`` is the worklist of difference masks not yet hit, kept
    in (first row, second row) order so ties resolve to the smallest first row.
    """

    def __init__(self, rows, node_limit=None, deadline=None):
        self.rows = rows
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise ResourceLimitError(f"exact search exceeded {self.node_limit} nodes")
        if self.deadline is not None and self.nodes % 1024 == 0:
            if time.monotonic() > self.deadline:
                raise ResourceLimitError("exact search exceeded its time limit")

    def shortfall(self, chosen: int) -> int:
        # the largest class of rows still merged needs ceil(log2 size) more columns
        biggest = max(Counter(r & chosen for r in self.rows).values())
        return _ceil_log2(biggest)

    def extendable(self, chosen: int, allowed: int, pairs: list[int], budget: int) -> bool:
        """Can ``chosen`` grow to <= budget columns, adding only ``allowed`` ones?"""
        self._tick()
        if not pairs:
            return True
        if chosen.bit_count() + self.shortfall(chosen) > budget:
            return False
        best = 0
        best_size = None
        for d in pairs:
            size = (d & allowed).bit_count()
            if best_size is None or size < best_size:
                if size == 0:
                    return False
                best, best_size = d, size
        for c in _bits(best & allowed):
            bit = 1 << c
            rest = [d for d in pairs if not d & bit]
            if self.extendable(chosen | bit, allowed, rest, budget):
                return True
            # later siblings never revisit a column an earlier sibling already covered
            allowed &= ~bit
        return False


def _all_pairs(rows: Sequence[int]) -> list[int]:
    m = len(rows)
    return [rows[i] ^ rows[j] for i in range(m) for j in range(i + 1, m)]


def _probe(rows, n, chosen, allowed, budget, node_limit, deadline):
    search = _Search(rows, node_limit, deadline)
    pairs = [d for d in _all_pairs(rows) if not d & chosen]
    return search.extendable(chosen, allowed, pairs, budget), search.nodes


_pools: dict[int, ProcessPoolExecutor] = {}


def _pool(workers: int) -> ProcessPoolExecutor:
    if workers not in _pools:
        _pools[workers] = ProcessPoolExecutor(
            workers, mp_context=multiprocessing.get_context("spawn")
        )
    return _pools[workers]


@atexit.register
def _shutdown_pools():
    for pool in _pools.values():
        pool.shutdown(cancel_futures=True)
    _pools.clear()


def solve_exact(
    inst: DvInstance,
    workers: int = 1,
    node_limit: Optional[int] = DEFAULT_NODE_LIMIT,
    time_limit: Optional[float] = None,
) -> SolveReport:
    """Branch-and-bound solver returning the canonical minimum column set.

    First the smallest feasible size is found by iterative deepening from the
    lower bound. The lexicographically smallest set of that size is then
    fixed one column at a time: the next column is the smallest one after
    which a completion from strictly larger columns still exists. With
    ``workers > 1`` those completion probes run in a process pool, and the
    smallest feasible candidate wins, so the answer does not depend on the
    worker count.
    """
    start = time.perf_counter()
    A = inst.matrix
    rows = A.rows
    lb = lower_bound(A)
    if _has_duplicates(rows):
        return SolveReport(INFEASIBLE, None, 0, time.perf_counter() - start, lb)
    deadline = time.monotonic() + time_limit if time_limit is not None else None
    search = _Search(rows, node_limit, deadline)
    pairs = _all_pairs(rows)
    full = (1 << A.n) - 1

    size = None
    for t in range(lb, _max_size(inst) + 1):
        if search.extendable(0, full, pairs, t):
            size = t
            break
        log.debug("no solution with %d columns (%d nodes so far)", t, search.nodes)
    if size is None:
        return SolveReport(BUDGET_EXCEEDED, None, search.nodes, time.perf_counter() - start, lb)

    nodes = search.nodes
    chosen = 0
    first = 0
    for _ in range(size):
        candidates = [
            (chosen | (1 << c), full & ~((2 << c) - 1)) for c in range(first, A.n)
        ]
        pick = None
        if workers > 1:
            pool = _pool(workers)
            for lo in range(0, len(candidates), workers):
                batch = candidates[lo : lo + workers]
                futures = [
                    pool.submit(_probe, rows, A.n, cand, allowed, size, node_limit, deadline)
                    for cand, allowed in batch
                ]
                results = [f.result() for f in futures]
                nodes += sum(r[1] for r in results)
                hits = [idx for idx, (ok, _) in enumerate(results) if ok]
                if hits:
                    pick = lo + hits[0]
                    break
        else:
            for idx, (cand, allowed) in enumerate(candidates):
                rest = [d for d in pairs if not d & cand]
                if search.extendable(cand, allowed, rest, size):
                    pick = idx
                    break
            nodes = search.nodes
        assert pick is not None, "minimum size was feasible but no completion found"
        chosen = candidates[pick][0]
        first += pick + 1
    log.debug("canonical solution of size %d after %d nodes", size, nodes)
    return SolveReport(
        SOLUTION, ColumnSet.from_mask(chosen), nodes, time.perf_counter() - start, lb
    )


def solve_greedy(A: BinaryMatrix) -> ColumnSet:
    """Greedy set cover over row pairs; ties go to the lowest column index."""
    if _has_duplicates(A.rows):
        raise InfeasibleError("matrix has duplicate rows")
    pairs = _all_pairs(A.rows)
    chosen = []
    while pairs:
        counts = [0] * A.n
        for d in pairs:
            for c in _bits(d):
                counts[c] += 1
        best = max(range(A.n), key=lambda c: (counts[c], -c))
        chosen.append(best + 1)
        bit = 1 << best
        pairs = [d for d in pairs if not d & bit]
    return ColumnSet(chosen)

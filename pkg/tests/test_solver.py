import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from dvkit.bitmatrix import BinaryMatrix, ColumnSet
from dvkit.errors import InfeasibleError, ResourceLimitError
from dvkit.solver import (
    BUDGET_EXCEEDED,
    INFEASIBLE,
    SOLUTION,
    DvInstance,
    enumerate_solutions,
    lower_bound,
    solve_brute_force,
    solve_exact,
    solve_greedy,
    verify_solution,
)

SMALL = [[0, 0], [0, 1], [1, 1]]
XOR = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]]


def all_rows(t):
    return BinaryMatrix([list(bits) for bits in itertools.product((0, 1), repeat=t)])


@pytest.mark.parametrize("cols, expected", [([1, 2], True), ([1], False), ([2], False)])
def test_verify_solution(cols, expected):
    assert verify_solution(BinaryMatrix(SMALL), ColumnSet(cols)) is expected


def test_verify_solution_range_check():
    with pytest.raises(ValueError):
        verify_solution(BinaryMatrix(SMALL), ColumnSet([3]))


@pytest.mark.parametrize("m, expected", [(1, 0), (2, 1), (5, 3), (8, 3), (9, 4)])
def test_lower_bound(m, expected):
    A = BinaryMatrix.from_packed(range(m), 4)
    assert lower_bound(A) == expected


@pytest.mark.parametrize("solve", [solve_brute_force, solve_exact])
def test_solver_examples(solve):
    rep = solve(DvInstance(BinaryMatrix(SMALL), 2))
    assert rep.outcome == SOLUTION and rep.columns.columns == (1, 2)
    for k in (0, 1, 2):
        assert solve(DvInstance(BinaryMatrix([[0, 1], [0, 1]]), k)).outcome == INFEASIBLE
    rep = solve(DvInstance(BinaryMatrix(XOR), 2))
    assert rep.columns.columns == (1, 2)
    assert solve(DvInstance(BinaryMatrix(SMALL), 1)).outcome == BUDGET_EXCEEDED


def test_xor_example_against_hand_enumeration():
    # every 2-column subset of the XOR matrix separates; lexicographic order picks (1, 2)
    sols = oracles.all_solutions(XOR, max_size=2)
    assert sols == [(1, 2), (1, 3), (2, 3)]


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5])
def test_all_rows_matrix_needs_every_column(t):
    rep = solve_exact(DvInstance(all_rows(t), t))
    assert rep.columns == ColumnSet(range(1, t + 1))
    if t > 1:
        assert solve_exact(DvInstance(all_rows(t), t - 1)).outcome == BUDGET_EXCEEDED


def test_single_row_needs_no_columns():
    A = BinaryMatrix([[1, 0, 1]])
    for solve in (solve_exact, solve_brute_force):
        rep = solve(DvInstance(A, 0))
        assert rep.outcome == SOLUTION and len(rep.columns) == 0
    assert solve_greedy(A) == ColumnSet()
    assert verify_solution(A, ColumnSet())


def test_greedy_examples():
    assert solve_greedy(BinaryMatrix(SMALL)).columns == (1, 2)
    assert solve_greedy(BinaryMatrix([[0, 0], [0, 1], [1, 0], [1, 1]])).columns == (1, 2)
    assert solve_greedy(BinaryMatrix([[0, 0, 0], [1, 1, 1]])).columns == (1,)
    with pytest.raises(InfeasibleError):
        solve_greedy(BinaryMatrix([[0, 1], [0, 1]]))


def test_brute_force_node_cap():
    A = BinaryMatrix.from_packed(range(16), 30)
    with pytest.raises(ResourceLimitError):
        solve_brute_force(DvInstance(A, 0), node_limit=1000)


def test_exact_node_and_time_limits():
    A = all_rows(6)
    with pytest.raises(ResourceLimitError):
        solve_exact(DvInstance(A, 0), node_limit=3)
    with pytest.raises(ResourceLimitError):
        solve_exact(DvInstance(BinaryMatrix.from_packed(random.Random(1).sample(range(2**40), 60), 40), 0), time_limit=0.0)


def test_instance_budget_validation():
    with pytest.raises(ValueError):
        DvInstance(BinaryMatrix(SMALL), 3)


def test_enumerate_solutions_matches_oracle():
    rows = [[0, 1, 1, 0], [1, 0, 1, 0], [1, 1, 0, 1], [0, 0, 0, 1], [1, 1, 1, 1]]
    got = [K.columns for K in enumerate_solutions(BinaryMatrix(rows), 3)]
    assert got == oracles.all_solutions(rows, max_size=3)


def distinct_matrices(max_m=10, max_n=14):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(
            st.integers(0, 2**n - 1), min_size=1, max_size=min(max_m, 2**n), unique=True
        ).map(lambda rows: BinaryMatrix.from_packed(rows, n))
    )


any_matrices = st.integers(1, 8).flatmap(
    lambda n: st.lists(st.integers(0, 2**n - 1), min_size=1, max_size=8).map(
        lambda rows: BinaryMatrix.from_packed(rows, n)
    )
)


@settings(max_examples=120, deadline=None)
@given(st.one_of(distinct_matrices(8, 9), any_matrices), st.data())
def test_solvers_match_enumeration_oracle(A, data):
    k = data.draw(st.integers(0, A.n))
    outcome, cols = oracles.canonical(A.to_lists(), k)
    for solve in (solve_exact, solve_brute_force):
        rep = solve(DvInstance(A, k))
        assert rep.outcome == outcome
        assert (rep.columns.columns if rep.columns is not None else None) == cols
        assert rep.lower_bound_used == lower_bound(A)


@settings(max_examples=150, deadline=None)
@given(distinct_matrices())
def test_exact_equals_brute_force_for_every_budget(A):
    for k in range(A.n + 1):
        exact = solve_exact(DvInstance(A, k))
        brute = solve_brute_force(DvInstance(A, k))
        assert (exact.outcome, exact.columns) == (brute.outcome, brute.columns)
        if exact.columns is not None:
            assert verify_solution(A, exact.columns)
            assert len(exact.columns) >= lower_bound(A)
            assert k == 0 or len(exact.columns) <= k


@settings(max_examples=150, deadline=None)
@given(distinct_matrices())
def test_greedy_is_valid_and_never_beats_exact(A):
    G = solve_greedy(A)
    assert verify_solution(A, G)
    assert len(G) >= len(solve_exact(DvInstance(A, 0)).columns)


@settings(max_examples=100, deadline=None)
@given(distinct_matrices(), st.data())
def test_supersets_of_solutions_verify(A, data):
    K = solve_exact(DvInstance(A, 0)).columns
    extra = data.draw(st.sets(st.integers(1, A.n)))
    assert verify_solution(A, ColumnSet(set(K) | extra))


def test_exact_is_deterministic_across_worker_counts():
    rng = random.Random(7)
    for _ in range(12):
        n = rng.randint(4, 14)
        A = BinaryMatrix.from_packed(rng.sample(range(2**n), rng.randint(2, min(10, 2**n))), n)
        base = solve_exact(DvInstance(A, 0), workers=1).columns
        assert solve_exact(DvInstance(A, 0), workers=1).columns == base
        assert solve_exact(DvInstance(A, 0), workers=4).columns == base

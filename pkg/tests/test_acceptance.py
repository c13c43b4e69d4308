"""Exit criteria. Each test records one PASS/FAIL line shown in the terminal summary."""

import itertools
import math
import time

import pytest

from dvkit.bitmatrix import BinaryMatrix, ColumnSet, rows_pairwise_distinct
from dvkit.cnf import CnfFormula, evaluate, solve_sat_brute_force
from dvkit.harness import (
    CampaignConfig,
    gen_random_formula,
    micro_formulas,
    run_equivalence_campaign,
    run_oracle_campaign,
)
from dvkit.reduction import (
    build_instance,
    check_structure,
    cost_report,
    decode_solution,
    encode_solution,
    pad_formula,
)
from dvkit.solver import (
    DvInstance,
    enumerate_solutions,
    lower_bound,
    solve_brute_force,
    solve_exact,
    verify_solution,
)

pytestmark = pytest.mark.acceptance

SEED = 20261018
RANDOM = CampaignConfig(seed=SEED, trials=1000, formula_r_range=(1, 8), clause_count_range=(1, 7))
# few variables and many clauses: a larger share of unsatisfiable formulas
DENSE = CampaignConfig(seed=SEED + 1, trials=1000, formula_r_range=(1, 2), clause_count_range=(4, 7))
MATRICES = CampaignConfig(seed=SEED, trials=500, matrix_m_range=(2, 10), matrix_n_range=(1, 14))


def _equivalence(workers):
    start = time.perf_counter()
    main = run_equivalence_campaign(
        CampaignConfig(**{**RANDOM.__dict__, "workers": workers}), micro_formulas(2, 2)
    )
    dense = run_equivalence_campaign(CampaignConfig(**{**DENSE.__dict__, "workers": workers}))
    return main, dense, time.perf_counter() - start


@pytest.fixture(scope="module")
def equivalence():
    return _equivalence(1)


@pytest.fixture(scope="module")
def oracle():
    start = time.perf_counter()
    results = run_oracle_campaign(MATRICES)
    return results, time.perf_counter() - start


def _formulas(cfg, extra=()):
    return [gen_random_formula(cfg, i) for i in range(cfg.trials)] + list(extra)


def test_1_reduction_equivalence(equivalence, criterion):
    main, dense, seconds = equivalence
    trials = main.trials + dense.trials
    mismatches = [t for t in trials if t.sat != t.dv or not t.ok]
    padded = {pad_formula(phi).r for phi in _formulas(RANDOM)}
    unsat = sum(not t.sat for t in trials)
    ok = (
        not mismatches
        and len(main.trials) >= 1000 + len(micro_formulas(2, 2))
        and padded == {2, 4, 8}
        and seconds < 300
    )
    criterion(
        "1 reduction equivalence",
        ok,
        f"{len(trials)} formulas, {unsat} unsatisfiable, {len(mismatches)} mismatches, {seconds:.1f}s",
    )
    assert ok


@pytest.mark.parametrize("r", [4, 8, 16])
def test_2_exact_parameter_formulas(r, criterion):
    log_r = int(math.log2(r))
    s = r - 1
    bad = []
    for seed in range(3):
        phi = gen_random_formula(
            CampaignConfig(seed=seed, formula_r_range=(r, r), clause_count_range=(s, s)), 0
        )
        rep = cost_report(phi)
        inst, rmap = build_instance(phi)
        ell = int(math.log2(s + 1))
        rho = 2 ** math.ceil(r / log_r)
        expected = (ell + rho * log_r, 1 + log_r + 2 * s, ell + log_r)
        if (rep.n, rep.m, rep.k) != expected or (inst.matrix.n, inst.matrix.m, inst.budget_k) != expected:
            bad.append(seed)
    if r == 16:
        rep = cost_report(CnfFormula(16, ((1, 2, 3),) * 15))
        if (rep.n, rep.m, rep.k) != (68, 35, 8):
            bad.append("r16")
    ok = not bad
    criterion(f"2 exact parameters r={r}", ok, f"s={s}, violations={bad}")
    assert ok


def test_3_solution_shape(criterion):
    cfg = CampaignConfig(seed=SEED + 3, formula_r_range=(1, 4), clause_count_range=(1, 7))
    instances = solutions = violations = 0
    index = 0
    while instances < 120:
        phi = gen_random_formula(cfg, index)
        index += 1
        if solve_sat_brute_force(phi) is None:
            continue
        inst, rmap = build_instance(phi)
        assert rmap.padded.r in (2, 4)
        instances += 1
        for K in enumerate_solutions(inst.matrix, rmap.k):
            solutions += 1
            try:
                check_structure(rmap, K)
            except ValueError:
                violations += 1
    ok = instances >= 100 and violations == 0 and solutions >= instances
    criterion(
        "3 solution shape (consistency prefix + one column per bundle)",
        ok,
        f"{instances} satisfiable instances, {solutions} solutions enumerated, {violations} violations",
    )
    assert ok


def test_4_round_trips(equivalence, criterion):
    main, dense, _ = equivalence
    formulas = _formulas(RANDOM, micro_formulas(2, 2)) + _formulas(DENSE)
    trials = main.trials + dense.trials
    checked = violations = 0
    for phi, trial in zip(formulas, trials):
        if not trial.sat:
            continue
        checked += 1
        _, rmap = build_instance(phi)
        alpha = solve_sat_brute_force(phi)
        back = decode_solution(rmap, encode_solution(rmap, alpha))
        if any(back[v - 1] != alpha[v - 1] for v in phi.clause_variables()):
            violations += 1
        if not evaluate(phi, decode_solution(rmap, ColumnSet(trial.solution))):
            violations += 1
    ok = violations == 0 and checked > 0
    criterion("4 round trips", ok, f"{checked} satisfiable trials, {violations} violations")
    assert ok


def test_5_solver_oracle_equivalence(oracle, criterion):
    results, seconds = oracle
    divergences = [p for r in results for p in r.problems]
    shapes_ok = all(r.m <= 10 and r.n <= 14 for r in results)
    budgets = sum(len(r.outcomes) for r in results)
    ok = len(results) >= 500 and not divergences and shapes_ok and seconds < 120
    criterion(
        "5 solver oracle equivalence",
        ok,
        f"{len(results)} matrices, {budgets} budgets, {len(divergences)} divergences, {seconds:.1f}s",
    )
    assert ok


def test_6_lower_bound_soundness(equivalence, oracle, criterion):
    main, dense, _ = equivalence
    results, _ = oracle
    violations = 0
    for phi, trial in zip(_formulas(RANDOM, micro_formulas(2, 2)), main.trials):
        if trial.solution is not None:
            inst, _ = build_instance(phi)
            violations += len(trial.solution) < lower_bound(inst.matrix)
    violations += sum("lower bound" in p or "invalid" in p for t in main.trials + dense.trials for p in t.problems)
    violations += sum(not r.ok for r in results)
    exact_t = []
    for t in (2, 3, 4):
        A = BinaryMatrix([list(b) for b in itertools.product((0, 1), repeat=t)])
        sizes = {
            len(solve_exact(DvInstance(A, 0)).columns),
            len(solve_brute_force(DvInstance(A, 0)).columns),
        }
        exact_t.append(sizes == {t} and lower_bound(A) == t)
        exact_t.append(not solve_exact(DvInstance(A, t - 1)).found)
    ok = violations == 0 and all(exact_t)
    criterion("6 lower-bound soundness", ok, f"{violations} violations, all-rows t=2..4 exact={all(exact_t)}")
    assert ok


def test_7_instance_validity(criterion):
    formulas = _formulas(RANDOM, micro_formulas(2, 2)) + _formulas(DENSE)
    formulas += [CnfFormula(r, ((1, 2, 3),) * s) for r in (4, 8, 16) for s in (1, 3, 7, 15)]
    violations = sum(not rows_pairwise_distinct(build_instance(phi)[0].matrix) for phi in formulas)
    ok = violations == 0
    criterion("7 instance validity", ok, f"{len(formulas)} reduced matrices, {violations} with duplicate rows")
    assert ok


def test_8_determinism(equivalence, oracle, criterion):
    main1, dense1, _ = equivalence
    main4, dense4, _ = _equivalence(4)
    same_equiv = (
        main1.text(timing=False) == main4.text(timing=False)
        and dense1.text(timing=False) == dense4.text(timing=False)
        and [t.solution for t in main1.trials + dense1.trials]
        == [t.solution for t in main4.trials + dense4.trials]
    )
    results1, _ = oracle
    results4 = run_oracle_campaign(CampaignConfig(**{**MATRICES.__dict__, "workers": 4}))
    same_oracle = [r.line() for r in results1] == [r.line() for r in results4]
    # the solver's own worker pool must not change answers either
    same_solver = True
    for phi in _formulas(RANDOM)[:25]:
        inst, _ = build_instance(phi)
        a = solve_exact(inst, workers=1).columns
        b = solve_exact(inst, workers=4).columns
        same_solver &= a == b
    ok = same_equiv and same_oracle and same_solver
    criterion(
        "8 determinism (workers 1 vs 4)",
        ok,
        f"equivalence={same_equiv}, oracle={same_oracle}, solver pool={same_solver}",
    )
    assert ok

"""Seeded validation campaigns and a small solver benchmark.

Every generated input is a pure function of ``(seed, index)``, and reports
are assembled in index order, so two runs with the same configuration give
identical reports apart from the timing columns, whatever the worker count.
"""

from __future__ import annotations

import itertools
import json
import logging
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

from .bitmatrix import BinaryMatrix, rows_pairwise_distinct
from .cnf import CnfFormula, evaluate, solve_sat_brute_force, to_dimacs
from .errors import ResourceLimitError
from .reduction import (
    DEFAULT_MAX_COLS,
    build_instance,
    decode_solution,
    encode_solution,
    pad_formula,
)
from .solver import (
    DEFAULT_NODE_LIMIT,
    DvInstance,
    lower_bound,
    solve_brute_force,
    solve_exact,
    solve_greedy,
    verify_solution,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 0
    formula_r_range: tuple[int, int] = (1, 8)
    clause_count_range: tuple[int, int] = (1, 7)
    trials: int = 100
    matrix_m_range: tuple[int, int] = (2, 10)
    matrix_n_range: tuple[int, int] = (1, 14)
    node_limit: int = DEFAULT_NODE_LIMIT
    time_limit: Optional[float] = None
    workers: int = 1
    max_padded_r: int = 8
    max_cols: int = DEFAULT_MAX_COLS

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        for name in ("formula_r_range", "clause_count_range", "matrix_m_range", "matrix_n_range"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise ValueError(f"{name} must be a nonempty range of positive integers")
            object.__setattr__(self, name, (lo, hi))
        if self.trials < 0 or self.workers < 1:
            raise ValueError("trials must be >= 0 and workers >= 1")


def gen_random_formula(cfg: CampaignConfig, index: int) -> CnfFormula:
    rng = random.Random(f"formula:{cfg.seed}:{index}")
    r = rng.randint(*cfg.formula_r_range)
    s = rng.randint(*cfg.clause_count_range)
    clauses = [
        tuple(rng.randint(1, r) * rng.choice((1, -1)) for _ in range(3)) for _ in range(s)
    ]
    return CnfFormula(r, tuple(clauses))


def gen_random_matrix(cfg: CampaignConfig, index: int) -> BinaryMatrix:
    """Random matrix with pairwise distinct rows."""
    rng = random.Random(f"matrix:{cfg.seed}:{index}")
    n = rng.randint(*cfg.matrix_n_range)
    lo, hi = (min(x, 2**n) for x in cfg.matrix_m_range)
    m = rng.randint(lo, hi)
    return BinaryMatrix.from_packed(rng.sample(range(2**n), m), n)


def micro_formulas(num_vars: int = 2, max_clauses: int = 2) -> list[CnfFormula]:
    """All 3CNF formulas over num_vars variables with 1..max_clauses clauses.

    Clauses and formulas are taken as multisets; formulas that only differ by
    flipping the sign of some variables everywhere are listed once.
    """
    literals = [v * sign for v in range(1, num_vars + 1) for sign in (1, -1)]
    clauses = list(itertools.combinations_with_replacement(literals, 3))
    seen = set()
    out = []
    flips = list(itertools.product((1, -1), repeat=num_vars))
    for count in range(1, max_clauses + 1):
        for combo in itertools.combinations_with_replacement(clauses, count):
            key = min(
                tuple(sorted(tuple(sorted(lit * f[abs(lit) - 1] for lit in c)) for c in combo))
                for f in flips
            )
            if key in seen:
                continue
            seen.add(key)
            out.append(CnfFormula(num_vars, combo))
    return out


@dataclass
class TrialResult:
    index: int
    sat: bool
    dv: bool
    ok: bool
    ms: float
    solution: Optional[tuple[int, ...]] = None
    problems: list[str] = field(default_factory=list)

    def line(self, timing: bool = True) -> str:
        text = f"trial {self.index} sat={int(self.sat)} dv={int(self.dv)} ok={int(self.ok)}"
        return text + (f" ms={self.ms:.3f}" if timing else "")


def check_formula(index: int, phi: CnfFormula, cfg: CampaignConfig) -> TrialResult:
    """Cross-check the SAT oracle against the exact solver on the reduced instance."""
    start = time.perf_counter()
    problems = []
    alpha = solve_sat_brute_force(phi)
    inst, rmap = build_instance(phi, cfg.max_cols)
    A = inst.matrix
    if not rows_pairwise_distinct(A):
        problems.append("reduced matrix has duplicate rows")
    if (A.m, A.n, inst.budget_k) != (rmap.m, rmap.n, rmap.k):
        problems.append("matrix size disagrees with the reduction map")
    report = solve_exact(inst, node_limit=cfg.node_limit, time_limit=cfg.time_limit)
    K = report.columns
    if K is not None:
        if not verify_solution(A, K) or len(K) > inst.budget_k:
            problems.append(f"solver returned invalid set {K}")
        if len(K) < lower_bound(A):
            problems.append(f"solution {K} below the lower bound")
        try:
            decoded = decode_solution(rmap, K)
            if not evaluate(phi, decoded):
                problems.append(f"decoded assignment of {K} does not satisfy the formula")
        except ValueError as exc:
            problems.append(f"decoding {K} failed: {exc}")
    if alpha is not None:
        enc = encode_solution(rmap, alpha)
        if len(enc) != rmap.k or not verify_solution(A, enc):
            problems.append(f"encoded set {enc} is not a solution of size {rmap.k}")
        back = decode_solution(rmap, enc)
        if any(back[v - 1] != alpha[v - 1] for v in phi.clause_variables()):
            problems.append("decode(encode(alpha)) changed a clause variable")
    sat, dv = alpha is not None, report.found
    ok = sat == dv and not problems
    ms = (time.perf_counter() - start) * 1000
    return TrialResult(index, sat, dv, ok, ms, K.columns if K is not None else None, problems)


def _percentile(values: Sequence[float], pct: float) -> float:
    ordered = sorted(values)
    rank = max(1, math.ceil(pct / 100 * len(ordered)))
    return ordered[rank - 1]


@dataclass
class EquivalenceReport:
    config: CampaignConfig
    trials: list[TrialResult]

    @property
    def mismatches(self) -> list[TrialResult]:
        return [t for t in self.trials if not t.ok]

    def lines(self, timing: bool = True) -> list[str]:
        out = [t.line(timing) for t in self.trials]
        sat = sum(t.sat for t in self.trials)
        out.append(f"summary trials={len(self.trials)} sat={sat} mismatches={len(self.mismatches)}")
        if timing and self.trials:
            ms = [t.ms for t in self.trials]
            out.append(
                "timing "
                + " ".join(f"p{p}={_percentile(ms, p):.3f}" for p in (50, 90, 99))
                + f" max={max(ms):.3f}"
            )
        return out

    def text(self, timing: bool = True) -> str:
        return "\n".join(self.lines(timing)) + "\n"


class CampaignFailure(AssertionError):
    def __init__(self, report, replay_path):
        self.report = report
        self.replay_path = replay_path
        bad = report.mismatches[0]
        super().__init__(
            f"{len(report.mismatches)} mismatching trial(s); first is trial {bad.index}"
            f" ({'; '.join(bad.problems) or 'verdicts differ'}), replay: {replay_path}"
        )


def _run_trial(args):
    index, phi, cfg = args
    return check_formula(index, phi, cfg)


def _map(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(fn, items, chunksize=8))


def write_replay(path: str, cfg: CampaignConfig, index: int, phi: CnfFormula) -> None:
    with open(path, "w") as fh:
        fh.write(f"c replay trial {index}\n")
        fh.write("c config " + json.dumps(asdict(cfg), sort_keys=True) + "\n")
        fh.write(to_dimacs(phi))


def run_equivalence_campaign(
    cfg: CampaignConfig,
    extra_formulas: Iterable[CnfFormula] = (),
    replay_dir: Optional[str] = None,
) -> EquivalenceReport:
    """Random trials 0..trials-1, then ``extra_formulas`` numbered after them.

    Raises CampaignFailure, after writing a replay file for the first bad
    trial, if any trial disagrees.
    """
    formulas = [gen_random_formula(cfg, i) for i in range(cfg.trials)]
    formulas.extend(extra_formulas)
    for phi in formulas:
        padded_r = pad_formula(phi).r
        if padded_r > cfg.max_padded_r:
            raise ValueError(f"padded r={padded_r} exceeds max_padded_r={cfg.max_padded_r}")
    results = _map(_run_trial, [(i, phi, cfg) for i, phi in enumerate(formulas)], cfg.workers)
    report = EquivalenceReport(cfg, results)
    if report.mismatches:
        bad = report.mismatches[0]
        path = os.path.join(replay_dir or ".", f"replay-{cfg.seed}-{bad.index}.cnf")
        write_replay(path, cfg, bad.index, formulas[bad.index])
        raise CampaignFailure(report, path)
    return report


@dataclass
class OracleResult:
    index: int
    m: int
    n: int
    outcomes: list[str]
    ok: bool
    problems: list[str] = field(default_factory=list)

    def line(self) -> str:
        return (
            f"matrix {self.index} m={self.m} n={self.n} ok={int(self.ok)} "
            + " ".join(self.outcomes)
        )


def _describe(report) -> str:
    if report.columns is not None:
        return ",".join(map(str, report.columns)) or "-"
    return report.outcome


def check_matrix(index: int, A: BinaryMatrix, cfg: CampaignConfig) -> OracleResult:
    """Compare the exact and exhaustive solvers at every budget 0..n."""
    outcomes, problems = [], []
    lb = lower_bound(A)
    for k in range(A.n + 1):
        inst = DvInstance(A, k)
        exact = solve_exact(inst, node_limit=cfg.node_limit)
        brute = solve_brute_force(inst, node_limit=cfg.node_limit)
        a, b = _describe(exact), _describe(brute)
        if a != b:
            problems.append(f"k={k}: exact {a} vs brute {b}")
        if exact.columns is not None:
            if not verify_solution(A, exact.columns) or len(exact.columns) < lb:
                problems.append(f"k={k}: invalid exact answer {a}")
            if k and len(exact.columns) > k:
                problems.append(f"k={k}: exact answer over budget")
        outcomes.append(f"k{k}={a}")
    return OracleResult(index, A.m, A.n, outcomes, not problems, problems)


def _run_matrix(args):
    index, cfg = args
    return check_matrix(index, gen_random_matrix(cfg, index), cfg)


def run_oracle_campaign(cfg: CampaignConfig) -> list[OracleResult]:
    return _map(_run_matrix, [(i, cfg) for i in range(cfg.trials)], cfg.workers)


@dataclass
class BenchRow:
    ident: str
    m: int
    n: int
    k: int
    outcome: str
    nodes: int
    exact_ms: Optional[float]
    brute_ms: Optional[float]
    greedy_ms: Optional[float]
    exact_size: Optional[int]
    greedy_size: Optional[int]
    agree: Optional[bool]


def _timed(fn, *args, **kwargs):
    start = time.perf_counter()
    try:
        result = fn(*args, **kwargs)
    except ResourceLimitError:
        return None, None
    return result, (time.perf_counter() - start) * 1000


def bench_instance(ident: str, inst: DvInstance, cfg: CampaignConfig) -> BenchRow:
    A = inst.matrix
    exact, exact_ms = _timed(
        solve_exact, inst, node_limit=cfg.node_limit, time_limit=cfg.time_limit
    )
    brute, brute_ms = _timed(solve_brute_force, inst, node_limit=cfg.node_limit)
    greedy, greedy_ms = _timed(solve_greedy, A)
    agree = None
    if exact is not None and brute is not None:
        agree = (exact.outcome, exact.columns) == (brute.outcome, brute.columns)
    return BenchRow(
        ident,
        A.m,
        A.n,
        inst.budget_k,
        exact.outcome if exact is not None else "limit",
        exact.nodes_explored if exact is not None else 0,
        exact_ms,
        brute_ms,
        greedy_ms,
        len(exact.columns) if exact is not None and exact.columns is not None else None,
        len(greedy) if greedy is not None else None,
        agree,
    )


def _run_bench(args):
    ident, inst, cfg = args
    return bench_instance(ident, inst, cfg)


def run_solver_bench(cfg: CampaignConfig) -> list[BenchRow]:
    """Time all three solvers on cfg.trials random matrices and cfg.trials reduced instances."""
    jobs = []
    for i in range(cfg.trials):
        jobs.append((f"M{i}", DvInstance(gen_random_matrix(cfg, i), 0), cfg))
    for i in range(cfg.trials):
        inst, _ = build_instance(gen_random_formula(cfg, i), cfg.max_cols)
        jobs.append((f"R{i}", inst, cfg))
    return _map(_run_bench, jobs, cfg.workers)


def format_bench(rows: Sequence[BenchRow], timing: bool = True) -> str:
    def ms(x):
        return "limit" if x is None else f"{x:.2f}"

    def opt(x):
        return "-" if x is None else str(int(x) if isinstance(x, bool) else x)

    header = ["id", "m", "n", "k", "outcome", "nodes", "exact_size", "greedy_size", "agree"]
    if timing:
        header += ["exact_ms", "brute_ms", "greedy_ms"]
    table = [header]
    for r in rows:
        cells = [r.ident, r.m, r.n, r.k, r.outcome, r.nodes,
                 opt(r.exact_size), opt(r.greedy_size), opt(r.agree)]
        if timing:
            cells += [ms(r.exact_ms), ms(r.brute_ms), ms(r.greedy_ms)]
        table.append([str(c) for c in cells])
    widths = [max(len(row[c]) for row in table) for c in range(len(header))]
    return "\n".join(
        "  ".join(cell.rjust(w) for cell, w in zip(row, widths)).rstrip() for row in table
    ) + "\n"

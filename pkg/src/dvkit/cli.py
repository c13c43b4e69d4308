"""Command-line entry point.

Exit codes: 0 success, 1 no solution / verification failed, 2 usage or
input error, 3 resource limit hit.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import formats
from .cnf import evaluate, parse_dimacs, to_dimacs
from .errors import InfeasibleError, ResourceLimitError, StructureError
from .harness import (
    CampaignConfig,
    CampaignFailure,
    format_bench,
    gen_random_formula,
    gen_random_matrix,
    micro_formulas,
    run_equivalence_campaign,
    run_oracle_campaign,
    run_solver_bench,
)
from .reduction import (
    DEFAULT_MAX_COLS,
    build_instance,
    cost_report,
    decode_solution,
    read_metadata,
    write_metadata,
)
from .solver import (
    DEFAULT_NODE_LIMIT,
    DvInstance,
    solve_brute_force,
    solve_exact,
    solve_greedy,
    verify_solution,
)

OK, NO, USAGE, LIMIT = 0, 1, 2, 3

log = logging.getLogger("dvkit")


def _read(path):
    with open(path) as fh:
        return fh.read()


def _write(path, text):
    with open(path, "w") as fh:
        fh.write(text)


def cmd_solve(args):
    inst = formats.read_instance(_read(args.instance))
    if args.k is not None:
        inst = DvInstance(inst.matrix, args.k)
    budget = inst.budget_k or inst.matrix.n
    if args.solver == "greedy":
        try:
            K = solve_greedy(inst.matrix)
        except InfeasibleError:
            print(f"UNSAT-LIKE: no column subset of size <= {budget}")
            return NO
        print(K)
        if inst.budget_k and len(K) > inst.budget_k:
            print(f"greedy set has {len(K)} columns, budget is {inst.budget_k}", file=sys.stderr)
            return NO
        if args.output:
            _write(args.output, formats.write_solution(K))
        return OK
    if args.solver == "brute":
        report = solve_brute_force(inst, node_limit=args.node_limit)
    else:
        report = solve_exact(inst, workers=args.workers, node_limit=args.node_limit)
    log.info("%s: %s after %d nodes", args.solver, report.outcome, report.nodes_explored)
    if args.output:
        _write(args.output, formats.write_solution(report.columns))
    if report.columns is None:
        print(f"UNSAT-LIKE: no column subset of size <= {budget}")
        return NO
    print(report.columns)
    return OK


def cmd_verify(args):
    inst = formats.read_instance(_read(args.instance))
    K = formats.read_solution(_read(args.solution))
    good = K is not None and verify_solution(inst.matrix, K)
    if good and inst.budget_k and len(K) > inst.budget_k:
        good = False
    print("OK" if good else "FAIL")
    return OK if good else NO


def cmd_reduce(args):
    phi = parse_dimacs(_read(args.cnf))
    inst, rmap = build_instance(phi, args.max_cols)
    _write(args.out_prefix + ".dv", formats.write_instance(inst))
    _write(args.out_prefix + ".meta", write_metadata(rmap))
    log.info("wrote %s.dv (m=%d n=%d k=%d)", args.out_prefix, rmap.m, rmap.n, rmap.k)
    return OK


def cmd_decode(args):
    inst = formats.read_instance(_read(args.instance))
    rmap = read_metadata(_read(args.metadata))
    K = formats.read_solution(_read(args.solution))
    if K is None:
        print("no solution to decode", file=sys.stderr)
        return NO
    if not verify_solution(inst.matrix, K):
        print("column set does not separate the rows", file=sys.stderr)
        return NO
    try:
        alpha = decode_solution(rmap, K)
    except StructureError as exc:
        print(f"structure error: {exc}", file=sys.stderr)
        return NO
    original = alpha[: rmap.padded.original_r]
    lits = [v if val else -v for v, val in enumerate(original, start=1)]
    print("v " + " ".join(map(str, lits)) + " 0")
    if not evaluate(rmap.padded.formula, alpha):
        print("decoded assignment does not satisfy the formula", file=sys.stderr)
        return NO
    return OK


def cmd_cost(args):
    report = cost_report(parse_dimacs(_read(args.cnf)))
    print("\n".join(report.lines()))
    return OK


def _config(args, **extra):
    return CampaignConfig(
        seed=args.seed,
        formula_r_range=(args.r_min, args.r_max),
        clause_count_range=(args.s_min, args.s_max),
        trials=args.trials,
        matrix_m_range=(args.m_min, args.m_max),
        matrix_n_range=(args.n_min, args.n_max),
        node_limit=args.node_limit,
        time_limit=args.time_limit,
        workers=args.workers,
        max_cols=args.max_cols,
        **extra,
    )


def cmd_gen(args):
    cfg = _config(args)
    if args.kind == "formula":
        sys.stdout.write(to_dimacs(gen_random_formula(cfg, args.index)))
    else:
        A = gen_random_matrix(cfg, args.index)
        sys.stdout.write(formats.write_instance(DvInstance(A, args.k or 0)))
    return OK


def cmd_campaign(args):
    cfg = _config(args)
    if args.matrices:
        results = run_oracle_campaign(cfg)
        for res in results:
            print(res.line())
            for p in res.problems:
                print(f"matrix {res.index}: {p}", file=sys.stderr)
        bad = sum(not r.ok for r in results)
        print(f"summary matrices={len(results)} divergences={bad}")
        return NO if bad else OK
    extra = micro_formulas(2, 2) if args.exhaustive else ()
    try:
        report = run_equivalence_campaign(cfg, extra, args.replay_dir)
    except CampaignFailure as exc:
        sys.stdout.write(exc.report.text(timing=not args.no_timing))
        print(str(exc), file=sys.stderr)
        return NO
    text = report.text(timing=not args.no_timing)
    sys.stdout.write(text)
    if args.output:
        _write(args.output, text)
    return OK


def cmd_bench(args):
    rows = run_solver_bench(_config(args))
    sys.stdout.write(format_bench(rows, timing=not args.no_timing))
    return OK


def build_parser():
    p = argparse.ArgumentParser(prog="dvkit", description=__doc__.splitlines()[0])
    p.add_argument("--verbose", action="store_true", help="node-count traces on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def solver_flags(sp):
        sp.add_argument("--k", type=int, help="override the budget (0 = minimize)")
        sp.add_argument("--solver", choices=("exact", "brute", "greedy"), default="exact")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)

    def campaign_flags(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=100)
        sp.add_argument("--r-min", type=int, default=1)
        sp.add_argument("--r-max", type=int, default=8)
        sp.add_argument("--s-min", type=int, default=1)
        sp.add_argument("--s-max", type=int, default=7)
        sp.add_argument("--m-min", type=int, default=2)
        sp.add_argument("--m-max", type=int, default=10)
        sp.add_argument("--n-min", type=int, default=1)
        sp.add_argument("--n-max", type=int, default=14)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)
        sp.add_argument("--time-limit", type=float, help="seconds per exact solve")
        sp.add_argument("--max-cols", type=int, default=DEFAULT_MAX_COLS)

    sp = sub.add_parser("solve", help="solve a Distinct Vectors instance")
    sp.add_argument("instance")
    sp.add_argument("-o", "--output", help="also write the solution file here")
    solver_flags(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("verify", help="check a solution file against an instance")
    sp.add_argument("instance")
    sp.add_argument("solution")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("reduce", help="reduce a 3CNF formula to <prefix>.dv and <prefix>.meta")
    sp.add_argument("cnf")
    sp.add_argument("out_prefix")
    sp.add_argument("--max-cols", type=int, default=DEFAULT_MAX_COLS)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("decode", help="turn a solution of a reduced instance into an assignment")
    sp.add_argument("instance")
    sp.add_argument("metadata")
    sp.add_argument("solution")
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("cost", help="sizes of the reduced instance for a formula")
    sp.add_argument("cnf")
    sp.set_defaults(func=cmd_cost)

    sp = sub.add_parser("gen", help="print a seeded random formula or matrix")
    sp.add_argument("--kind", choices=("formula", "matrix"), default="formula")
    sp.add_argument("--index", type=int, default=0)
    sp.add_argument("--k", type=int, help="budget written into a generated matrix instance")
    campaign_flags(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("campaign", help="SAT vs Distinct Vectors equivalence campaign")
    campaign_flags(sp)
    sp.add_argument("--exhaustive", action="store_true",
                    help="append all 2-variable formulas with at most 2 clauses")
    sp.add_argument("--matrices", action="store_true",
                    help="compare exact and brute-force solvers on random matrices instead")
    sp.add_argument("--replay-dir", default=".")
    sp.add_argument("--output", help="also write the report here")
    sp.add_argument("--no-timing", action="store_true")
    sp.set_defaults(func=cmd_campaign)

    sp = sub.add_parser("bench", help="time the solvers")
    campaign_flags(sp)
    sp.add_argument("--no-timing", action="store_true")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.DEBUG if args.verbose else logging.WARNING)
    log.propagate = False
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return LIMIT
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())

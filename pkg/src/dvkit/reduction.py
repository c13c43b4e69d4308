"""Reduction from 3CNF satisfiability to Distinct Vectors.

Layout of the produced matrix (1-based, ``ell = log2(s + 1)``,
``rho = 2 ** r_prime``):

* columns ``1..ell`` hold the binary clause index (consistency columns);
* bundle ``i`` owns columns ``ell + (i-1)*rho + 1 .. ell + i*rho``, one per
  truth assignment of that bundle's variables;
* row 1 is all zero, row ``i + 1`` marks the columns of bundle ``i``;
* clause ``q`` contributes row ``log r + 2q`` (clause index, then the
  per-bundle satisfaction bits) and row ``log r + 2q + 1`` (clause index,
  then zeros).

The budget is ``ell + log r``. Any solution within budget must take every
consistency column plus exactly one column per bundle, and the chosen bundle
columns spell out a satisfying assignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .bitmatrix import BinaryMatrix, ColumnSet
from .cnf import Assignment, CnfFormula, evaluate, parse_dimacs, to_dimacs
from .errors import FormatError, ResourceLimitError, StructureError
from .solver import DvInstance

DEFAULT_MAX_COLS = 2**20


@dataclass(frozen=True)
class PaddedFormula:
    formula: CnfFormula
    original_r: int
    original_s: int
    ell: int

    @property
    def r(self) -> int:
        return self.formula.num_vars

    @property
    def s(self) -> int:
        return self.formula.num_clauses

    @property
    def log_r(self) -> int:
        return self.r.bit_length() - 1


@dataclass(frozen=True)
class BundlePlan:
    log_r: int
    r_prime: int
    rho: int
    # slots[i - 1] lists the r_prime variables of bundle i, repetitions included
    slots: tuple[tuple[int, ...], ...]

    @property
    def num_bundles(self) -> int:
        return self.log_r

    def distinct(self, i: int) -> tuple[int, ...]:
        """Distinct variables of bundle i in slot order."""
        return tuple(dict.fromkeys(self.slots[i - 1]))


def _next_pow2(x: int) -> int:
    return 1 << (x - 1).bit_length()


def pad_formula(phi: CnfFormula) -> PaddedFormula:
    """Round r up to a power of two (at least 2) and s up to 2**ell - 1.

    New variables occur in no clause; new clauses are copies of the first one.
    """
    if phi.num_clauses < 1:
        raise ValueError("formula needs at least one clause")
    r = max(2, _next_pow2(phi.num_vars))
    # least ell with 2**ell - 1 >= s
    ell = phi.num_clauses.bit_length()
    s = (1 << ell) - 1
    clauses = phi.clauses + (phi.clauses[0],) * (s - phi.num_clauses)
    return PaddedFormula(CnfFormula(r, clauses), phi.num_vars, phi.num_clauses, ell)


def make_bundle_plan(padded: PaddedFormula) -> BundlePlan:
    """Deal variables into log r contiguous bundles, then cycle each to r' slots."""
    r, log_r = padded.r, padded.log_r
    if r < 2 or r & (r - 1):
        raise ValueError(f"padded variable count must be a power of two >= 2, got {r}")
    r_prime = -(-r // log_r)
    slots = []
    for i in range(log_r):
        block = list(range(i * r_prime + 1, min(r, (i + 1) * r_prime) + 1))
        assert block, "every bundle receives at least one variable"
        slots.append(tuple(block[t % len(block)] for t in range(r_prime)))
    return BundlePlan(log_r, r_prime, 2**r_prime, tuple(slots))


@dataclass(frozen=True)
class ReductionMap:
    padded: PaddedFormula
    plan: BundlePlan

    @property
    def ell(self) -> int:
        return self.padded.ell

    @property
    def n(self) -> int:
        return self.ell + self.plan.rho * self.plan.log_r

    @property
    def m(self) -> int:
        return 1 + self.plan.log_r + 2 * self.padded.s

    @property
    def k(self) -> int:
        return self.ell + self.plan.log_r

    @property
    def consistency_cols(self) -> range:
        return range(1, self.ell + 1)

    def bundle_col_range(self, i: int) -> range:
        rho = self.plan.rho
        return range(self.ell + (i - 1) * rho + 1, self.ell + i * rho + 1)

    def bundle_of_column(self, column: int) -> Optional[tuple[int, int]]:
        """(bundle, assignment position) of a bundle column, None for consistency columns."""
        if not 1 <= column <= self.n:
            raise ValueError(f"column {column} out of range [1, {self.n}]")
        if column <= self.ell:
            return None
        i, p = divmod(column - self.ell - 1, self.plan.rho)
        return i + 1, p + 1

    def assignment_of(self, i: int, p: int) -> dict[int, bool]:
        """The p-th assignment to bundle i's distinct variables.

        Binary counter over the distinct variables, lowest index most
        significant, cycled to length rho.
        """
        variables = self.plan.distinct(i)
        d = len(variables)
        code = (p - 1) % (1 << d)
        return {v: bool((code >> (d - 1 - t)) & 1) for t, v in enumerate(variables)}

    def position_of(self, i: int, values: dict[int, bool]) -> int:
        """Smallest p whose assignment agrees with ``values`` on bundle i."""
        code = 0
        for v in self.plan.distinct(i):
            code = (code << 1) | int(values[v])
        return code + 1


def sat_table(rmap: ReductionMap, i: int, q: int) -> tuple[int, ...]:
    """Bit p-1 tells whether bundle i's p-th assignment satisfies a literal of clause q."""
    clause = rmap.padded.formula.clauses[q - 1]
    home = set(rmap.plan.distinct(i))
    local = [lit for lit in clause if abs(lit) in home]
    bits = []
    for p in range(1, rmap.plan.rho + 1):
        alpha = rmap.assignment_of(i, p)
        bits.append(int(any(alpha[abs(lit)] == (lit > 0) for lit in local)))
    return tuple(bits)


def _pack(bits: Sequence[int], offset: int) -> int:
    x = 0
    for t, b in enumerate(bits):
        if b:
            x |= 1 << (offset + t)
    return x


def _bin_prefix(q: int, ell: int) -> int:
    # bin(q, ell) written MSB first: column 1 holds the top bit
    return _pack([(q >> (ell - 1 - t)) & 1 for t in range(ell)], 0)


@dataclass(frozen=True)
class CostReport:
    r: int
    s: int
    ell: int
    log_r: int
    r_prime: int
    rho: int
    n: int
    m: int
    k: int
    bound: float

    def lines(self) -> list[str]:
        return [
            f"r {self.r}",
            f"s {self.s}",
            f"ell {self.ell}",
            f"logr {self.log_r}",
            f"rprime {self.r_prime}",
            f"rho {self.rho}",
            f"n {self.n}",
            f"m {self.m}",
            f"k {self.k}",
            f"bound {self.bound:.6f}",
        ]


def cost_report(phi: CnfFormula) -> CostReport:
    """Sizes of the reduced instance, computed without building it."""
    padded = pad_formula(phi)
    r, s, ell = padded.r, padded.s, padded.ell
    log_r = padded.log_r
    r_prime = -(-r // log_r)
    rho = 2**r_prime
    k = ell + log_r
    bound = math.log2(2 * s) + math.log2(r)
    assert k <= bound + 1e-9, (k, bound)
    return CostReport(r, s, ell, log_r, r_prime, rho, ell + rho * log_r, 1 + log_r + 2 * s, k, bound)


def reduction_map(phi: CnfFormula) -> ReductionMap:
    padded = pad_formula(phi)
    return ReductionMap(padded, make_bundle_plan(padded))


def build_matrix(rmap: ReductionMap, max_cols: int = DEFAULT_MAX_COLS) -> BinaryMatrix:
    if rmap.n > max_cols:
        raise ResourceLimitError(
            f"reduced instance would have {rmap.n} columns, cap is {max_cols}"
        )
    ell, rho, log_r = rmap.ell, rmap.plan.rho, rmap.plan.log_r
    block = (1 << rho) - 1
    rows = [0]
    for i in range(1, log_r + 1):
        rows.append(block << (ell + (i - 1) * rho))
    for q in range(1, rmap.padded.s + 1):
        prefix = _bin_prefix(q, ell)
        odd = prefix
        for i in range(1, log_r + 1):
            odd |= _pack(sat_table(rmap, i, q), ell + (i - 1) * rho)
        rows.append(odd)
        rows.append(prefix)
    return BinaryMatrix.from_packed(rows, rmap.n)


def build_instance(
    phi: CnfFormula, max_cols: int = DEFAULT_MAX_COLS
) -> tuple[DvInstance, ReductionMap]:
    rmap = reduction_map(phi)
    return DvInstance(build_matrix(rmap, max_cols), rmap.k), rmap


def _full_assignment(rmap: ReductionMap, alpha: Sequence[bool]) -> Assignment:
    r = rmap.padded.r
    if len(alpha) < rmap.padded.original_r:
        raise ValueError(
            f"assignment covers {len(alpha)} of {rmap.padded.original_r} variables"
        )
    return tuple(bool(v) for v in alpha[:r]) + (False,) * (r - len(alpha))


def encode_solution(rmap: ReductionMap, alpha: Sequence[bool]) -> ColumnSet:
    """Column set built from a satisfying assignment: all consistency columns
    plus, per bundle, the first column whose assignment agrees with alpha.

    Variables added by padding default to False when alpha does not cover them.
    """
    full = _full_assignment(rmap, alpha)
    if not evaluate(rmap.padded.formula, full):
        raise ValueError("assignment does not satisfy the formula")
    values = {v: full[v - 1] for v in range(1, rmap.padded.r + 1)}
    cols = list(rmap.consistency_cols)
    for i in range(1, rmap.plan.log_r + 1):
        cols.append(rmap.bundle_col_range(i)[rmap.position_of(i, values) - 1])
    return ColumnSet(cols)


def check_structure(rmap: ReductionMap, K: ColumnSet) -> dict[int, int]:
    """Map each bundle to its single chosen column, or raise StructureError."""
    K.check_range(rmap.n)
    missing = [c for c in rmap.consistency_cols if c not in K]
    if missing:
        raise StructureError(f"consistency columns {missing} not selected")
    chosen = {}
    for i in range(1, rmap.plan.log_r + 1):
        cols = [c for c in K if c in rmap.bundle_col_range(i)]
        if len(cols) != 1:
            raise StructureError(f"bundle {i} has {len(cols)} selected columns, expected 1")
        chosen[i] = cols[0]
    return chosen


def decode_solution(rmap: ReductionMap, K: ColumnSet) -> Assignment:
    """Assignment over the padded variables read off the chosen bundle columns.

    Variables introduced by padding are set to False.
    """
    values = {}
    for i, col in check_structure(rmap, K).items():
        _, p = rmap.bundle_of_column(col)
        values.update(rmap.assignment_of(i, p))
    original = rmap.padded.original_r
    return tuple(values[v] if v <= original else False for v in range(1, rmap.padded.r + 1))


def separation_case(rmap: ReductionMap, A: BinaryMatrix, K: ColumnSet, i: int, j: int):
    """Which argument separates rows i and j under an encoded solution K.

    1: both rows mark bundles and differ on a chosen bundle column;
    2: one row has a zero clause prefix and the other a nonzero one;
    3: both are clause rows, differing in the prefix or, for the odd/even
       rows of one clause, on a chosen column whose assignment satisfies it.
    Returns None when no case applies.
    """
    top = rmap.plan.log_r + 1
    ell_mask = (1 << rmap.ell) - 1
    ri, rj = A.rows[i - 1], A.rows[j - 1]
    in_i1, in_j1 = i <= top, j <= top
    if in_i1 and in_j1:
        bundle_mask = K.mask & ~ell_mask
        return 1 if (ri ^ rj) & bundle_mask else None
    if in_i1 != in_j1:
        return 2 if bool(ri & ell_mask) != bool(rj & ell_mask) else None
    if (ri ^ rj) & ell_mask & K.mask:
        return 3
    qi, qj = (i - top + 1) // 2, (j - top + 1) // 2
    if qi != qj:
        return None
    for col in K:
        hit = rmap.bundle_of_column(col)
        if hit is None:
            continue
        b, p = hit
        if sat_table(rmap, b, qi)[p - 1] and (ri ^ rj) >> (col - 1) & 1:
            return 3
    return None


def write_metadata(rmap: ReductionMap) -> str:
    plan, padded = rmap.plan, rmap.padded
    lines = [
        "c format v1",
        f"ell {rmap.ell}",
        f"logr {plan.log_r}",
        f"rprime {plan.r_prime}",
        f"rho {plan.rho}",
        f"orig {padded.original_r} {padded.original_s}",
    ]
    for i, slot in enumerate(plan.slots, start=1):
        lines.append(f"bundle {i} " + " ".join(map(str, slot)))
    lines.append("formula")
    return "\n".join(lines) + "\n" + to_dimacs(padded.formula, versioned=False)


def read_metadata(text: str) -> ReductionMap:
    head, sep, tail = text.partition("\nformula\n")
    if not sep:
        raise FormatError("missing 'formula' section")
    fields: dict[str, list[int]] = {}
    bundles: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(head.splitlines(), start=1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        key, *rest = line.split()
        try:
            nums = [int(x) for x in rest]
        except ValueError:
            raise FormatError(f"non-integer value in {line!r}", lineno) from None
        if key == "bundle":
            if len(nums) < 2:
                raise FormatError("bundle line needs an index and variables", lineno)
            bundles[nums[0]] = tuple(nums[1:])
        elif key in ("ell", "logr", "rprime", "rho", "orig"):
            fields[key] = nums
        else:
            raise FormatError(f"unknown key {key!r}", lineno)
    for key, width in (("ell", 1), ("logr", 1), ("rprime", 1), ("rho", 1), ("orig", 2)):
        if len(fields.get(key, ())) != width:
            raise FormatError(f"missing or malformed '{key}' line")
    formula = parse_dimacs(tail)
    ell, log_r, r_prime, rho = (fields[k][0] for k in ("ell", "logr", "rprime", "rho"))
    padded = PaddedFormula(formula, fields["orig"][0], fields["orig"][1], ell)
    plan = BundlePlan(log_r, r_prime, rho, tuple(bundles.get(i, ()) for i in range(1, log_r + 1)))
    if rho != 2**r_prime or padded.s != 2**ell - 1 or padded.log_r != log_r:
        raise FormatError("metadata parameters are inconsistent with the formula")
    if sorted(bundles) != list(range(1, log_r + 1)):
        raise FormatError(f"expected bundles 1..{log_r}, got {sorted(bundles)}")
    if any(len(s) != r_prime for s in plan.slots):
        raise FormatError(f"every bundle needs exactly {r_prime} slots")
    homes = [v for i in range(1, log_r + 1) for v in plan.distinct(i)]
    if sorted(homes) != list(range(1, padded.r + 1)):
        raise FormatError("bundles do not partition the variables")
    return ReductionMap(padded, plan)

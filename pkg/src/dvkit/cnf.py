"""3CNF formulas: model, DIMACS I/O, evaluation and a brute-force oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import FormatError, ResourceLimitError

# values[v - 1] is the truth value of variable v
Assignment = tuple[bool, ...]

SAT_VAR_CAP = 24


@dataclass(frozen=True)
class CnfFormula:
    """A formula over variables 1..num_vars whose clauses have exactly three literals.

    Repeated literals, repeated clauses and tautological clauses are allowed.
    """

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("formula needs at least one variable")
        clauses = tuple(tuple(c) for c in self.clauses)
        for q, clause in enumerate(clauses, start=1):
            if len(clause) != 3:
                raise ValueError(f"clause {q} has {len(clause)} literals, expected 3")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"clause {q}: literal {lit} outside ±[1, {self.num_vars}]")
        object.__setattr__(self, "clauses", clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def clause_variables(self) -> set[int]:
        return {abs(lit) for c in self.clauses for lit in c}


def parse_dimacs(text) -> CnfFormula:
    """Parse a DIMACS CNF file in which every clause has exactly three literals."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode()
    header = None
    clauses = []
    current: list[int] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise FormatError("second problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"malformed header {line!r}", lineno)
            try:
                r, s = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError(f"malformed header {line!r}", lineno) from None
            if r < 1 or s < 0:
                raise FormatError(f"bad header counts {line!r}", lineno)
            header = (r, s)
            continue
        if header is None:
            raise FormatError("clause before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if len(current) != 3:
                    raise FormatError(f"clause has {len(current)} literals, expected 3", lineno)
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > header[0]:
                raise FormatError(f"variable {abs(lit)} out of range [1, {header[0]}]", lineno)
            current.append(lit)
    if header is None:
        raise FormatError("missing 'p cnf' header", lineno or None)
    if current:
        raise FormatError("last clause is not terminated by 0", lineno)
    if len(clauses) != header[1]:
        raise FormatError(f"header declares {header[1]} clauses, found {len(clauses)}", lineno)
    return CnfFormula(header[0], tuple(clauses))


def to_dimacs(formula: CnfFormula, versioned: bool = True) -> str:
    lines = ["c format v1"] if versioned else []
    lines.append(f"p cnf {formula.num_vars} {formula.num_clauses}")
    lines.extend(" ".join(map(str, c)) + " 0" for c in formula.clauses)
    return "\n".join(lines) + "\n"


def evaluate(formula: CnfFormula, assignment: Sequence[bool]) -> bool:
    if len(assignment) < formula.num_vars:
        raise ValueError(
            f"assignment covers {len(assignment)} of {formula.num_vars} variables"
        )
    for clause in formula.clauses:
        if not any(assignment[abs(lit) - 1] == (lit > 0) for lit in clause):
            return False
    return True


def solve_sat_brute_force(formula: CnfFormula, cap: int = SAT_VAR_CAP) -> Optional[Assignment]:
    """First satisfying assignment in lexicographic order (x1 most significant, False < True)."""
    if formula.num_vars > cap:
        raise ResourceLimitError(f"{formula.num_vars} variables exceeds brute-force cap {cap}")
    for values in itertools.product((False, True), repeat=formula.num_vars):
        if evaluate(formula, values):
            return values
    return None

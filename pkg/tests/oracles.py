"""Entry-by-entry reference implementations, independent of the packed code paths."""

import itertools


def distinct(rows):
    return all(rows[i] != rows[j] for i in range(len(rows)) for j in range(i + 1, len(rows)))


def restrict(rows, cols):
    return [[row[c - 1] for c in cols] for row in rows]


def diff(rows, i, j):
    return [c + 1 for c in range(len(rows[0])) if rows[i - 1][c] != rows[j - 1][c]]


def all_solutions(rows, max_size=None):
    """Every separating column tuple, found by walking all 2**n indicator vectors."""
    n = len(rows[0])
    found = []
    for pick in itertools.product((0, 1), repeat=n):
        cols = tuple(c + 1 for c in range(n) if pick[c])
        if max_size is not None and len(cols) > max_size:
            continue
        if distinct([[row[c - 1] for c in cols] for row in rows]):
            found.append(cols)
    return sorted(found, key=lambda K: (len(K), K))


def canonical(rows, k):
    """('solution', cols) | ('infeasible', None) | ('budget-exceeded', None)."""
    if not distinct(rows):
        return "infeasible", None
    sols = all_solutions(rows)
    best = sols[0]
    if k and len(best) > k:
        return "budget-exceeded", None
    return "solution", best


def evaluate(clauses, values):
    """values is a dict var -> bool."""
    for clause in clauses:
        sat = False
        for lit in clause:
            v = values[abs(lit)]
            if (lit > 0 and v) or (lit < 0 and not v):
                sat = True
        if not sat:
            return False
    return True


def satisfiable(num_vars, clauses):
    for bits in range(2**num_vars):
        values = {v: bool(bits >> (v - 1) & 1) for v in range(1, num_vars + 1)}
        if evaluate(clauses, values):
            return True
    return False


def reduced_rows(num_vars, clauses):
    """The reduced matrix as 0/1 strings, written straight from the row formulas.

    Uses the package's conventions: padding to a power of two >= 2 variables
    and 2**ell - 1 clauses (copies of clause 1), contiguous bundles of
    ceil(r / log r) variables cycled to fill, binary-counter assignment order
    with the lowest variable most significant, MSB-first clause index.
    """
    r = 2
    while r < num_vars:
        r *= 2
    ell = 1
    while 2**ell - 1 < len(clauses):
        ell += 1
    s = 2**ell - 1
    clauses = list(clauses) + [clauses[0]] * (s - len(clauses))
    logr = r.bit_length() - 1
    rp = -(-r // logr)
    rho = 2**rp
    bundles = []
    for i in range(logr):
        members = [v for v in range(1, r + 1) if i * rp < v <= (i + 1) * rp]
        bundles.append(members)

    def assignment(members, p):
        d = len(members)
        code = format((p - 1) % 2**d, f"0{d}b")
        return {v: ch == "1" for v, ch in zip(members, code)}

    def sat_bits(members, clause):
        out = ""
        for p in range(1, rho + 1):
            a = assignment(members, p)
            ok = any(abs(l) in a and a[abs(l)] == (l > 0) for l in clause)
            out += "1" if ok else "0"
        return out

    n = ell + rho * logr
    rows = ["0" * n]
    for i in range(1, logr + 1):
        rows.append("0" * ell + "0" * ((i - 1) * rho) + "1" * rho + "0" * ((logr - i) * rho))
    for q in range(1, s + 1):
        prefix = format(q, f"0{ell}b")
        rows.append(prefix + "".join(sat_bits(b, clauses[q - 1]) for b in bundles))
        rows.append(prefix + "0" * (n - ell))
    return rows, ell + logr

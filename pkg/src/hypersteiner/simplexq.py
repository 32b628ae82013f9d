"""Exact rational LP solver: dense two-phase primal simplex, Bland's rule.

Solves  min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0
with every number an exact rational.  Bland's rule (smallest eligible
index enters, smallest-index basic variable leaves on ties) guarantees
termination; no scaling, no tolerances.  Dense tableau - fine at the
problem sizes this package targets.
"""

from .ratio import Rat, R0, R1


class LPError(Exception):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


def _pivot(T, pr, pc, basis):
    row = T[pr]
    inv = R1 / row[pc]
    for j in range(len(row)):
        row[j] = row[j] * inv
    for i, ri in enumerate(T):
        if i == pr:
            continue
        f = ri[pc]
        if f == 0:
            continue
        for j in range(len(ri)):
            ri[j] = ri[j] - f * row[j]
    basis[pr] = pc


def _iterate(T, basis, m, rhs_col, price_cols):
    """Bland iterations; objective row is T[m], rhs in column rhs_col."""
    obj = T[m]
    while True:
        pc = -1
        for j in range(price_cols):
            if obj[j] < 0:
                pc = j
                break
        if pc < 0:
            return
        pr = -1
        best = None
        for i in range(m):
            a = T[i][pc]
            if a > 0:
                ratio = T[i][rhs_col] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[pr]):
                    best, pr = ratio, i
        if pr < 0:
            raise Unbounded("column %d unbounded" % pc)
        _pivot(T, pr, pc, basis)


def solve_lp(c, A_ub, b_ub, A_eq=(), b_eq=()):
    """Returns (x, objective) with x a list of exact rationals.

    Raises Infeasible / Unbounded accordingly.
    """
    n = len(c)
    c = [Rat(v) for v in c]
    rows = []
    for a, b in zip(A_ub, b_ub):
        rows.append(([Rat(v) for v in a], Rat(b), "ub"))
    for a, b in zip(A_eq, b_eq):
        rows.append(([Rat(v) for v in a], Rat(b), "eq"))
    m = len(rows)
    nslack = sum(1 for r in rows if r[2] == "ub")
    norm = []
    needs_art = []
    si = 0
    for a, b, kind in rows:
        srow = list(a) + [R0] * nslack
        if kind == "ub":
            srow[n + si] = R1
            si += 1
        if b < 0:
            srow = [-v for v in srow]
            b = -b
            needs_art.append(True)
        else:
            needs_art.append(kind == "eq")
        norm.append((srow, b))
    nart = sum(needs_art)
    width = n + nslack + nart  # rhs lives at column `width`
    T = [[R0] * (width + 1) for _ in range(m + 1)]
    basis = [None] * m
    ai = 0
    for i, ((srow, b), art) in enumerate(zip(norm, needs_art)):
        for j, v in enumerate(srow):
            T[i][j] = v
        T[i][width] = b
        if art:
            T[i][n + nslack + ai] = R1
            basis[i] = n + nslack + ai
            ai += 1
        else:
            for j in range(n, n + nslack):
                if srow[j] == R1:
                    basis[i] = j
                    break
            assert basis[i] is not None, "ub row without identity slack"

    if nart:
        # phase 1: minimize the sum of artificials.  Reduced-cost row:
        # c_j - sum over artificial-basic rows of T[i][j], with phase-1
        # cost 1 on artificial columns and 0 elsewhere.
        for j in range(width + 1):
            s = R0
            for i in range(m):
                if basis[i] >= n + nslack:
                    s += T[i][j]
            cj = R1 if n + nslack <= j < width else R0
            T[m][j] = cj - s
        _iterate(T, basis, m, width, width)
        if T[m][width] != 0:
            raise Infeasible("phase 1 optimum nonzero")
        for i in range(m):
            if basis[i] >= n + nslack:
                # artificial at value 0 still basic: pivot it out if the
                # row has any structural/slack entry, else the row is
                # redundant and can stay
                for j in range(n + nslack):
                    if T[i][j] != 0:
                        _pivot(T, i, j, basis)
                        break

    # phase 2 objective expressed over the current basis
    for j in range(width + 1):
        T[m][j] = R0
    for j in range(n):
        T[m][j] = c[j]
    for i in range(m):
        bi = basis[i]
        if bi is not None and bi < n and c[bi] != 0:
            f = c[bi]
            for j in range(width + 1):
                T[m][j] -= f * T[i][j]
    # artificial columns are excluded from pricing so they never re-enter
    _iterate(T, basis, m, width, n + nslack)

    x = [R0] * n
    for i in range(m):
        if basis[i] is not None and basis[i] < n:
            x[basis[i]] = T[i][width]
    obj_val = sum((ci * xi for ci, xi in zip(c, x)), R0)
    return x, obj_val

"""Exact dense linear algebra over Q (lists of lists of Fractions)."""

from fractions import Fraction


def row_reduce(rows, ncols):
    """Reduced row echelon form.  Returns (rref rows, pivot column list).

    Pivot choice is the first nonzero entry in column order, so the result
    is deterministic for a given input order.
    """
    m = [[Fraction(c) for c in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows, ncols):
    return len(row_reduce(rows, ncols)[0])


def nullspace(rows, ncols):
    """Basis of the right kernel, echelon-normalized.

    Each basis vector has a 1 in its defining free column and zeros in the
    other free columns; vectors are ordered by free column index.
    """
    rref, pivots = row_reduce(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for row, pc in zip(rref, pivots):
            v[pc] = -row[free]
        basis.append(v)
    return basis


def solve(rows, ncols, rhs):
    """One solution of A x = b, or None if inconsistent.

    Augments, reduces, and reads the particular solution with free
    variables set to zero.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = row_reduce(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(rref, pivots):
        x[pc] = row[ncols]
    return x

"""Polynomial solutions of holonomic ideals by Groebner deformation.

A strictly negative weight w confines the exponents a polynomial solution
can use: writing -k_1 for the smallest non-positive integer root of the
weight b-function, every exponent p of a solution satisfies p.(-w) <= k_1.
That leaves a finite ansatz, and the solution space inside it is the exact
kernel of the generators' action.
"""

from fractions import Fraction

from .bfunctions import weight_bfunction
from .linalg import nullspace, row_reduce
from .polys import CommPoly


class PolySolutionBasis:
    """Echelonized basis of the polynomial solution space.

    bound is the ansatz degree bound k_1, or None when the b-function has no
    non-positive integer root (then only the zero solution exists)."""

    def __init__(self, solutions, weight_used, bound):
        self.solutions = list(solutions)
        self.weight_used = tuple(weight_used)
        self.bound = bound

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def __repr__(self):
        return (f"PolySolutionBasis({len(self.solutions)} solutions, "
                f"w={self.weight_used}, bound={self.bound})")


def exponent_bound(pres, w, cap=None, check=True):
    """k_1 such that every solution exponent p satisfies p.(-w) <= k_1.

    None when the weight b-function has no integer root <= 0, which rules
    out nonzero polynomial solutions altogether."""
    assert all(wi < 0 for wi in w), "weights must be strictly negative"
    res = weight_bfunction(pres, w, cap=cap, check=check)
    roots = [r for r in res.integer_roots if r <= 0]
    if not roots:
        return None
    return -min(roots)


def _ansatz_exponents(costs, budget):
    """All nonnegative integer tuples p with sum(costs[i] * p[i]) <= budget."""
    n = len(costs)
    out = []

    def rec(i, left, prefix):
        if i == n:
            out.append(tuple(prefix))
            return
        c = costs[i]
        k = 0
        while c * k <= left:
            rec(i + 1, left - c * k, prefix + [k])
            k += 1

    rec(0, budget, [])
    return out


def polynomial_solutions(pres, w=None, cap=None, check=True):
    """Basis of {f in k[x] : g . f = 0 for every generator g}.

    Default weight (-1, ..., -1) bounds total degree; any strictly negative
    weight works and the result does not depend on the choice."""
    ring = pres.ring
    assert pres.rank == 1, "polynomial solutions expect an ideal presentation"
    n = ring.nx
    if w is None:
        w = [-1] * n
    w = list(w)
    assert len(w) == n
    k1 = exponent_bound(pres, w, cap=cap, check=check)
    if k1 is None:
        return PolySolutionBasis([], w, None)

    costs = [-wi for wi in w]
    monos = _ansatz_exponents(costs, k1)
    # columns in descending degrevlex so the echelon pivots are lead terms
    monos.sort(key=lambda e: (sum(e), tuple(-x for x in reversed(e))),
               reverse=True)
    gens = pres.gens_as_scalars()
    rows = []
    for g in gens:
        images = [g.apply(CommPoly(n, {e: Fraction(1)})) for e in monos]
        support = set()
        for img in images:
            support.update(img.terms)
        for m in sorted(support):
            rows.append([img.terms.get(m, Fraction(0)) for img in images])
    kernel = nullspace(rows, len(monos))
    basis, _ = row_reduce(kernel, len(monos))
    sols = []
    for vec in basis:
        if not any(vec):
            continue
        sols.append(CommPoly(n, {monos[i]: c for i, c in enumerate(vec) if c}))
    return PolySolutionBasis(sols, w, k1)

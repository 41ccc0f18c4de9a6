"""Term orders on free modules over a Weyl ring.

A TermOrder turns (component, exponent tuple) into a sortable key:

    (weight layer values..., total degree, -component, reversed negated exps)

Weight layers come first; the first layer may carry per-component shifts,
entering with a minus sign so that the layer value is the filtration level
w.alpha - w.beta - m_j of the shifted filtration.  Ties fall through to total
degree, then position (lower component wins), then degrevlex.  In a
homogenized ring h takes weight 0, counts toward total degree, and sits last
in the exponent tuple, which makes it the smallest variable under the
degrevlex tail.

Orders whose weight entries are all nonnegative are well-orders on the plain
ring; any negative entry requires routing Groebner computations through the
homogenized ring (needs_homogenization).
"""

from __future__ import annotations


class TermOrder:
    def __init__(self, ring, layers=(), shifts=None):
        """layers: weight vectors over the nx+nd slots (h never included).
        shifts: per-component shift vector applied to the first layer."""
        self.ring = ring
        base = ring.nx + ring.nd
        self.layers = [tuple(w) for w in layers]
        for w in self.layers:
            assert len(w) == base
        self.shifts = None if shifts is None else tuple(shifts)
        if self.shifts is not None:
            assert self.layers, "shifts need a weight layer"
        # Key results are cached per monomial; layers and shifts never change
        # after construction, so the cache stays valid for the instance's life.
        self._memo = {}

    def key(self, comp, exps):
        memo = self._memo
        mono = (comp, exps)
        got = memo.get(mono)
        if got is not None:
            return got
        vals = []
        for i, w in enumerate(self.layers):
            v = sum(a * b for a, b in zip(w, exps))
            if i == 0 and self.shifts is not None:
                v -= self.shifts[comp]
            vals.append(v)
        vals.append(sum(exps))
        vals.append(-comp)
        vals.extend(-e for e in reversed(exps))
        out = tuple(vals)
        memo[mono] = out
        return out

    def needs_homogenization(self):
        return any(any(e < 0 for e in w) for w in self.layers)

    def homogenized(self):
        """The same order viewed in the homogenized ring (h weight 0)."""
        hring = self.ring.homogenized_ring()
        out = TermOrder.__new__(TermOrder)
        out.ring = hring
        out.layers = [w + (0,) for w in self.layers]
        out.shifts = self.shifts
        out._memo = {}
        return out

    def level(self, comp, exps):
        """First-layer value (the filtration level of the monomial)."""
        assert self.layers
        v = sum(a * b for a, b in zip(self.layers[0], exps))
        if self.shifts is not None:
            v -= self.shifts[comp]
        return v

    def with_shifts(self, shifts):
        return TermOrder(self.ring, self.layers, shifts)

    def __repr__(self):
        return f"TermOrder(layers={self.layers}, shifts={self.shifts})"


def drl_order(ring):
    return TermOrder(ring, [])


def weight_order(ring, u, v, shifts=None):
    """Order refining the (u,v) weight (u on the x-slots, v on the d-slots)."""
    assert len(u) == ring.nx and len(v) == ring.nd
    return TermOrder(ring, [tuple(u) + tuple(v)], shifts)


def elimination_order(ring, elim_names):
    """Block order: monomials containing any of elim_names dominate."""
    names = ring.xnames + ring.dnames
    w = tuple(1 if nm in elim_names else 0 for nm in names)
    assert sum(w) == len(set(elim_names)), "unknown variable in elimination set"
    return TermOrder(ring, [w])

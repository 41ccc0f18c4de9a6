"""Buchberger engine for left submodules of free modules over Weyl rings.

Everything runs on VecElement rows (terms keyed by (component, exponents)).
Orders with negative weight entries are routed through the homogenized ring;
the returned basis keeps the homogenized elements alongside, one to one with
the dehomogenized ones, so that syzygy extraction can continue in the graded
world.  Weight-homogeneous inputs may skip the routing (graded=True): all
S-pairs and reductions then stay inside graded pieces, where the order is
well-founded even with negative weights.

The classical coprime-lead-terms criterion is sound only for commutative
scalar ideals; it is applied in exactly that case.  The chain criterion is
valid here as in any algebra of solvable type.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd as int_gcd

from .orders import TermOrder, drl_order, elimination_order, weight_order
from .polys import CommPoly
from .weyl import WeylElement, WeylRing


class VecElement:
    """Row vector in D^rank: {(component, exps): Fraction}."""

    __slots__ = ("ring", "rank", "terms")

    def __init__(self, ring, rank, terms):
        self.ring = ring
        self.rank = rank
        self.terms = {k: c for k, c in terms.items() if c}

    @classmethod
    def from_scalar(cls, w: WeylElement, rank=1, comp=0):
        return cls(w.ring, rank, {(comp, e): c for e, c in w.terms.items()})

    @classmethod
    def from_row(cls, ring, scalars):
        t = {}
        for j, w in enumerate(scalars):
            if w is None:
                continue
            for e, c in w.terms.items():
                t[(j, e)] = t.get((j, e), Fraction(0)) + c
        return cls(ring, len(scalars), t)

    def component(self, j):
        return WeylElement(self.ring, {e: c for (i, e), c in self.terms.items() if i == j})

    def to_row(self):
        return [self.component(j) for j in range(self.rank)]

    def drop_component(self, j):
        """Remove coordinate j (its content must have been accounted for by
        the caller) and shift higher coordinates down."""
        t = {}
        for (i, e), c in self.terms.items():
            if i == j:
                continue
            t[(i - 1 if i > j else i, e)] = c
        return VecElement(self.ring, self.rank - 1, t)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, VecElement) and self.ring == other.ring
                and self.rank == other.rank and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, self.rank, frozenset(self.terms.items())))

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            s = t.get(k, Fraction(0)) + c
            if s:
                t[k] = s
            else:
                del t[k]
        return VecElement(self.ring, self.rank, t)

    def __neg__(self):
        return VecElement(self.ring, self.rank, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return VecElement(self.ring, self.rank, {})
        return VecElement(self.ring, self.rank, {k: c * v for k, v in self.terms.items()})

    def mono_mul(self, mexps, coeff):
        """Left-multiply by the monomial coeff * x^a d^b given by mexps."""
        out = {}
        for (comp, e), c in self.terms.items():
            for e2, k in self.ring._mono_mul(tuple(mexps), e).items():
                key = (comp, e2)
                s = out.get(key, Fraction(0)) + coeff * c * k
                if s:
                    out[key] = s
                else:
                    del out[key]
        return VecElement(self.ring, self.rank, out)

    def scalar_mul(self, w: WeylElement):
        """Left-multiply by a ring element."""
        out = VecElement(self.ring, self.rank, {})
        for e, c in w.terms.items():
            out = out + self.mono_mul(e, c)
        return out

    def lead(self, order):
        assert self.terms
        key = max(self.terms, key=lambda k: order.key(*k))
        return key, self.terms[key]

    def int_primitive(self):
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // int_gcd(den, c.denominator)
        num = 0
        for c in self.terms.values():
            num = int_gcd(num, abs(c.numerator * (den // c.denominator)))
        out = self.scale(Fraction(den, num))
        return out

    def homogenize(self):
        ring = self.ring
        hring = ring.homogenized_ring()
        if not self.terms:
            return VecElement(hring, self.rank, {})
        m = max(sum(e) for _, e in self.terms)
        return VecElement(hring, self.rank, {
            (comp, e + (m - sum(e),)): c for (comp, e), c in self.terms.items()
        })

    def dehomogenize(self):
        ring = self.ring
        pring = ring.plain_ring()
        out = {}
        for (comp, e), c in self.terms.items():
            k = (comp, e[:-1])
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                del out[k]
        return VecElement(pring, self.rank, out)

    def initial_form(self, order):
        """Terms attaining the maximal first-layer (weight) value."""
        if not self.terms:
            return self
        top = max(order.level(*k) for k in self.terms)
        return VecElement(self.ring, self.rank, {
            k: c for k, c in self.terms.items() if order.level(*k) == top
        })

    def __repr__(self):
        return f"VecElement(rank={self.rank}, {dict(self.terms)!r})"


def _divides(a, b):
    """Monomial a divides monomial b (same component, exps <=)."""
    return a[0] == b[0] and all(x <= y for x, y in zip(a[1], b[1]))


def _lcm(a, b):
    return (a[0], tuple(max(x, y) for x, y in zip(a[1], b[1])))


def reduce_full(v, basis, order, leads=None, track=False):
    """Division remainder of v by basis; no surprise rescaling.

    With track=True also returns the quotients q_k (WeylElements) with
    v = sum q_k o basis_k + remainder.
    """
    ring = v.ring
    if leads is None:
        leads = [g.lead(order) for g in basis]
    rem = {}
    work = v
    quots = [ring.zero() for _ in basis] if track else None
    while work.terms:
        lm, lc = work.lead(order)
        hit = None
        for idx, (glm, glc) in enumerate(leads):
            if _divides(glm, lm):
                hit = idx
                break
        if hit is None:
            rem[lm] = lc
            t = dict(work.terms)
            del t[lm]
            work = VecElement(ring, v.rank, t)
        else:
            glm, glc = leads[hit]
            mexps = tuple(a - b for a, b in zip(lm[1], glm[1]))
            factor = lc / glc
            work = work - basis[hit].mono_mul(mexps, factor)
            if track:
                quots[hit] = quots[hit] + WeylElement(ring, {mexps: factor})
    out = VecElement(ring, v.rank, rem)
    return (out, quots) if track else out


def _int_terms(v):
    """Coefficient dict of v scaled to integers (common denominator cleared)."""
    den = 1
    for c in v.terms.values():
        den = den * (c.denominator // int_gcd(den, c.denominator))
    return {k: c.numerator * (den // c.denominator) for k, c in v.terms.items()}


def _shift_int(ring, gterms, mexps):
    """Integer-coefficient monomial shift: x^a d^b applied to gterms."""
    out = {}
    for (comp, e), c in gterms.items():
        for e2, k in ring._mono_mul(mexps, e).items():
            key = (comp, e2)
            s = out.get(key, 0) + c * k
            if s:
                out[key] = s
            else:
                del out[key]
    return out


def _reduce_fast(v, basis, leads, order, intcache=None):
    """Reduction for basis building: integer pseudo-division.

    Each division step replaces work by glc*work - lc*(shift of g), which
    keeps every coefficient an integer; content is stripped periodically.
    Frozen remainder terms record how many scale events they missed and are
    put back on a common scale once at the end (the remainder is only
    meaningful up to units, so the global scale never matters).
    """
    ring = v.ring
    okey = order.key
    work = _int_terms(v)
    if intcache is None:
        intcache = {}
    gints = []
    for g in basis:
        gi = intcache.get(id(g))
        if gi is None:
            gi = _int_terms(g)
            intcache[id(g)] = gi
        gints.append(gi)
    rem = []        # (monomial, integer coeff, scale events seen so far)
    scale_log = []  # multiplicative events applied to work
    steps = 0
    while work:
        lm = max(work, key=lambda k: okey(*k))
        hit = None
        for idx, (glm, _) in enumerate(leads):
            if _divides(glm, lm):
                hit = idx
                break
        if hit is None:
            rem.append((lm, work.pop(lm), len(scale_log)))
            continue
        glm = leads[hit][0]
        gi = gints[hit]
        glc = gi[glm]
        lc = work.pop(lm)
        mexps = tuple(a - b for a, b in zip(lm[1], glm[1]))
        shifted = _shift_int(ring, gi, mexps)
        for k in work:
            work[k] *= glc
        for k, c in shifted.items():
            if k == lm:
                continue  # the lead cancels exactly
            s = work.get(k, 0) - lc * c
            if s:
                work[k] = s
            elif k in work:
                del work[k]
        scale_log.append(Fraction(glc))
        steps += 1
        if steps % 8 == 0 and work:
            g0 = 0
            for c in work.values():
                g0 = int_gcd(g0, c)
                if g0 == 1:
                    break
            if g0 > 1:
                for k in work:
                    work[k] //= g0
                scale_log.append(Fraction(1, g0))
    if not rem:
        return VecElement(ring, v.rank, {})
    suffix = [Fraction(1)] * (len(scale_log) + 1)
    for i in range(len(scale_log) - 1, -1, -1):
        suffix[i] = scale_log[i] * suffix[i + 1]
    out = VecElement(ring, v.rank, {m: c * suffix[idx] for m, c, idx in rem})
    return out.int_primitive()


def _spair(f, g, lf, lg):
    m = _lcm(lf[0], lg[0])
    mf = tuple(a - b for a, b in zip(m[1], lf[0][1]))
    mg = tuple(a - b for a, b in zip(m[1], lg[0][1]))
    return f.mono_mul(mf, lg[1]) - g.mono_mul(mg, lf[1])


class GroebnerBasis:
    def __init__(self, order, elements, h_order=None, h_elements=None):
        self.order = order
        self.elements = elements
        self.h_order = h_order
        self.h_elements = h_elements
        self.leads = [g.lead(order) for g in elements]

    def __len__(self):
        return len(self.elements)

    def scalars(self):
        """The elements as WeylElements (rank-1 bases only)."""
        return [g.component(0) for g in self.elements]


def _buchberger_core(rows, order, interreduce=True):
    G = []
    for r in rows:
        if not r.is_zero():
            G.append(r.int_primitive())
    leads = [g.lead(order) for g in G]
    intcache = {}
    commutative_scalars = (order.ring.nd == 0
                           and all(g.rank == 1 for g in G))

    def pair_sort_key(p):
        i, j = p
        m = _lcm(leads[i][0], leads[j][0])
        # Degree first: with homogeneous input (the homogenized ring) this
        # processes pairs layer by layer, which keeps intermediate elements
        # near the reduced basis and avoids coefficient blowup.
        return (sum(m[1]), order.key(*m), i, j)

    pending = set()
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if leads[i][0][0] == leads[j][0][0]:
                pending.add((i, j))

    while pending:
        i, j = min(pending, key=pair_sort_key)
        pending.discard((i, j))
        li, lj = leads[i], leads[j]
        m = _lcm(li[0], lj[0])
        if commutative_scalars:
            # coprime leads: S-pair reduces to zero (commutative ideals only)
            if all(a + b == c for a, b, c in zip(li[0][1], lj[0][1], m[1])):
                continue
        # chain criterion
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            if _divides(leads[k][0], m):
                pi = (min(i, k), max(i, k))
                pj = (min(j, k), max(j, k))
                if pi not in pending and pj not in pending:
                    skip = True
                    break
        if skip:
            continue
        s = _spair(G[i], G[j], li, lj)
        r = _reduce_fast(s, G, leads, order, intcache)
        if not r.is_zero():
            G.append(r)
            leads.append(r.lead(order))
            t = len(G) - 1
            for i2 in range(t):
                if leads[i2][0][0] == leads[t][0][0]:
                    pending.add((i2, t))

    if interreduce:
        G = _interreduce(G, order)
    return G


def _minimalize(items, order):
    """Drop elements whose lead is divisible by another element's lead.

    Checks every pair, not just earlier-sorted ones: under orders with
    negative weight entries a divisor can sort above its multiple, so a
    single ascending pass would keep both.  Equal leads keep the first.
    """
    leads = [g.lead(order)[0] for g in items]
    kept = []
    for i in range(len(items)):
        dominated = False
        for j in range(len(items)):
            if j == i:
                continue
            if _divides(leads[j], leads[i]) and (leads[j] != leads[i] or j < i):
                dominated = True
                break
        if not dominated:
            kept.append(items[i])
    return kept


def _interreduce(G, order):
    if not G:
        return G
    items = sorted(G, key=lambda g: order.key(*g.lead(order)[0]))
    kept = _minimalize(items, order)
    # full tail reduction, monic
    out = []
    for i, g in enumerate(kept):
        others = kept[:i] + kept[i + 1:]
        leads = [o.lead(order) for o in others]
        r = reduce_full(g, others, order, leads=leads)
        _, lc = r.lead(order)
        out.append(r.scale(1 / lc))
    out.sort(key=lambda g: order.key(*g.lead(order)[0]))
    return out


def buchberger(rows, order, graded=False):
    """Reduced Groebner basis of the left module generated by the rows.

    graded=True asserts that the rows are homogeneous for the order's first
    weight layer, in which case no homogenization is needed even for
    negative weights.
    """
    rows = list(rows)
    if rows and isinstance(rows[0], WeylElement):
        rows = [VecElement.from_scalar(w) for w in rows]
    if order.needs_homogenization() and not graded:
        horder = order.homogenized()
        hrows = [r.homogenize() for r in rows]
        HG = _buchberger_core(hrows, horder)
        els = [g.dehomogenize() for g in HG]
        return GroebnerBasis(order, els, h_order=horder, h_elements=HG)
    G = _buchberger_core(rows, order)
    return GroebnerBasis(order, G)


def normal_form(v, gb: GroebnerBasis):
    """Canonical remainder modulo the basis.

    For homogenization-routed bases this terminates on queries that are
    homogeneous for the weight layer (the only way such bases are consulted).
    """
    scalar = isinstance(v, WeylElement)
    if scalar:
        v = VecElement.from_scalar(v)
    r = reduce_full(v, gb.elements, gb.order, leads=gb.leads)
    return r.component(0) if scalar else r


def member(v, gb: GroebnerBasis):
    return normal_form(v, gb).is_zero()


def schreyer_syzygies(gb: GroebnerBasis):
    """Generators of the left syzygy module of gb.elements.

    Every S-pair is reduced to zero with cofactor tracking; no pair skipping
    criteria are applied here, as completeness of the generating set relies
    on covering all pairs.  For homogenization-routed bases the computation
    runs in the graded world and the rows are dehomogenized at the end.
    """
    if gb.h_elements is not None:
        G, order = gb.h_elements, gb.h_order
        # monic scaling of the dehomogenized elements changed nothing upstream;
        # cofactors here are taken against the homogeneous representatives
        routed = True
    else:
        G, order = gb.elements, gb.order
        routed = False
    ring = order.ring
    leads = [g.lead(order) for g in G]
    syz = []
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if leads[i][0][0] != leads[j][0][0]:
                continue
            li, lj = leads[i], leads[j]
            m = _lcm(li[0], lj[0])
            mi = tuple(a - b for a, b in zip(m[1], li[0][1]))
            mj = tuple(a - b for a, b in zip(m[1], lj[0][1]))
            s = G[i].mono_mul(mi, lj[1]) - G[j].mono_mul(mj, li[1])
            rem, quots = reduce_full(s, G, order, leads=leads, track=True)
            assert rem.is_zero(), "input was not a Groebner basis"
            row = {}
            for k, q in enumerate(quots):
                for e, c in q.terms.items():
                    key = (k, e)
                    row[key] = row.get(key, Fraction(0)) - c
            for e, c in WeylElement(ring, {tuple(mi): lj[1]}).terms.items():
                row[(i, e)] = row.get((i, e), Fraction(0)) + c
            for e, c in WeylElement(ring, {tuple(mj): li[1]}).terms.items():
                row[(j, e)] = row.get((j, e), Fraction(0)) - c
            v = VecElement(ring, len(G), row)
            if not v.is_zero():
                syz.append(v.int_primitive())
    if routed:
        # gb.elements are exactly the dehomogenized h_elements, so the
        # dehomogenized cofactor rows are syzygies of them as they stand
        return [v.dehomogenize().int_primitive() for v in syz]
    return syz


def syzygies(rows, order=None):
    """Generators of the left syzygy module of arbitrary rows.

    Computes a Groebner basis with a transformation matrix, takes Schreyer
    syzygies of the basis, and pulls both layers back to the input rows.
    """
    rows = list(rows)
    if rows and isinstance(rows[0], WeylElement):
        rows = [VecElement.from_scalar(w) for w in rows]
    assert rows
    ring = rows[0].ring
    n = len(rows)
    if order is None:
        order = drl_order(ring)
    assert not order.needs_homogenization(), "transform tracking needs a plain order"

    # Buchberger with transformation rows: G[k] = T[k] o rows
    G, T = [], []
    triv = []
    for idx, r in enumerate(rows):
        if r.is_zero():
            e = VecElement(ring, n, {(idx, (0,) * ring.width): Fraction(1)})
            triv.append(e)
        else:
            G.append(r)
            T.append(VecElement(ring, n, {(idx, (0,) * ring.width): Fraction(1)}))
    leads = [g.lead(order) for g in G]
    pending = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))
               if leads[i][0][0] == leads[j][0][0]}

    def pair_sort_key(p):
        i, j = p
        m = _lcm(leads[i][0], leads[j][0])
        # Degree first: with homogeneous input (the homogenized ring) this
        # processes pairs layer by layer, which keeps intermediate elements
        # near the reduced basis and avoids coefficient blowup.
        return (sum(m[1]), order.key(*m), i, j)

    while pending:
        i, j = min(pending, key=pair_sort_key)
        pending.discard((i, j))
        li, lj = leads[i], leads[j]
        m = _lcm(li[0], lj[0])
        mi = tuple(a - b for a, b in zip(m[1], li[0][1]))
        mj = tuple(a - b for a, b in zip(m[1], lj[0][1]))
        s = G[i].mono_mul(mi, lj[1]) - G[j].mono_mul(mj, li[1])
        ts = T[i].mono_mul(mi, lj[1]) - T[j].mono_mul(mj, li[1])
        # tracked reduction against G
        rem, quots = reduce_full(s, G, order, leads=leads, track=True)
        for k, q in enumerate(quots):
            if not q.is_zero():
                ts = ts - T[k].scalar_mul(q)
        if not rem.is_zero():
            G.append(rem)
            T.append(ts)
            leads.append(rem.lead(order))
            t = len(G) - 1
            for i2 in range(t):
                if leads[i2][0][0] == leads[t][0][0]:
                    pending.add((i2, t))

    gb = GroebnerBasis(order, G)
    schreyer = schreyer_syzygies(gb)
    out = list(triv)
    for s in schreyer:
        v = VecElement(ring, n, {})
        for k in range(len(G)):
            q = s.component(k)
            if not q.is_zero():
                v = v + T[k].scalar_mul(q)
        if not v.is_zero():
            out.append(v.int_primitive())
    # rows re-expressed through the basis: e_i - sum quot_k T_k is a syzygy
    for idx, r in enumerate(rows):
        if r.is_zero():
            continue
        rem, quots = reduce_full(r, G, order, leads=leads, track=True)
        assert rem.is_zero()
        v = VecElement(ring, n, {(idx, (0,) * ring.width): Fraction(1)})
        for k, q in enumerate(quots):
            if not q.is_zero():
                v = v - T[k].scalar_mul(q)
        if not v.is_zero():
            out.append(v.int_primitive())
    return out


class ModulePresentation:
    """Left module D^rank / (left span of relation rows)."""

    def __init__(self, ring, rank, rows):
        self.ring = ring
        self.rank = rank
        self.rows = [VecElement.from_scalar(r, rank) if isinstance(r, WeylElement) else r
                     for r in rows]
        for r in self.rows:
            assert r.rank == rank

    @classmethod
    def cyclic(cls, ring, gens):
        return cls(ring, 1, [VecElement.from_scalar(g) for g in gens])

    def is_cyclic(self):
        return self.rank == 1

    def gens_as_scalars(self):
        assert self.rank == 1
        return [r.component(0) for r in self.rows]

    def __repr__(self):
        return f"ModulePresentation(rank={self.rank}, {len(self.rows)} relations)"


def free_resolution(pres: ModulePresentation, length, order_factory=None,
                    minimize=True):
    """Iterated syzygies: returns a list of stages, each a dict with the
    matrix rows (generators of the kernel of the previous map), the target
    rank, and the source rank.

    order_factory(stage_index, target_rank) supplies the order per stage;
    default is degrevlex.  Stage k's rows live in D^(target rank of stage k).
    With minimize=True (the default) unit entries are cancelled afterward,
    splitting off trivial D -> D summands; this keeps compositions zero and
    homology intact while shrinking the ranks.
    """
    if order_factory is None:
        order_factory = lambda k, rank: drl_order(pres.ring)
    stages = []
    rows, rank = pres.rows, pres.rank
    for k in range(length):
        nz = [r for r in rows if not r.is_zero()]
        if not nz:
            stages.append({"rows": [], "target_rank": rank, "source_rank": 0})
            rows, rank = [], 0
            continue
        order = order_factory(k, rank)
        gb = buchberger(nz, order)
        stages.append({"rows": gb.elements, "target_rank": rank,
                       "source_rank": len(gb.elements), "gb": gb})
        rows = schreyer_syzygies(gb)
        rank = len(gb.elements)
    if minimize:
        stages = minimize_resolution(stages)
    return stages


def _constant_of(op):
    """The coefficient if op is a nonzero constant, else None."""
    if len(op.terms) != 1:
        return None
    (exps, c), = op.terms.items()
    if any(exps):
        return None
    return c


def minimize_resolution(stages):
    """Cancel constant entries of the differentials in place of the chain.

    A nonzero scalar at position (r, c) of stage k lets the complex split
    off a trivial summand D -> D: row r and target coordinate c disappear
    after clearing the rest of column c by row operations.  The adjacent
    stages are rewritten in the new bases.  Homology is unchanged at every
    position, so exactness of the computed stages survives.
    """
    stages = [{"rows": list(s["rows"]), "target_rank": s["target_rank"],
               "source_rank": s["source_rank"]} for s in stages]

    def find_unit():
        for k, st in enumerate(stages):
            for r, row in enumerate(st["rows"]):
                comps = sorted({comp for comp, _ in row.terms})
                for comp in comps:
                    u = _constant_of(row.component(comp))
                    if u is not None:
                        return k, r, comp, u
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        k, r, c, u = hit
        ring = stages[k]["rows"][r].ring
        pivot = stages[k]["rows"][r]
        lams = {}
        new_rows = []
        for i, row in enumerate(stages[k]["rows"]):
            if i == r:
                continue
            coef = row.component(c)
            if coef.is_zero():
                new_rows.append((i, row))
            else:
                lam = coef.scale(1 / u)
                lams[i] = lam
                new_rows.append((i, row - pivot.scalar_mul(lam)))
        # rewrite the next stage in the basis e_i - lam_i e_r; the e_r
        # coordinate of every syzygy then vanishes (composition with the
        # cleared matrix is still zero and the pivot entry is a unit)
        if k + 1 < len(stages):
            nxt = []
            for srow in stages[k + 1]["rows"]:
                corr = srow.component(r)
                for i, lam in lams.items():
                    q = srow.component(i)
                    if not q.is_zero():
                        corr = corr + q * lam
                assert corr.is_zero(), "cancellation left a nonzero pivot column"
                nxt.append(srow.drop_component(r))
            stages[k + 1]["rows"] = nxt
            stages[k + 1]["target_rank"] -= 1
        # target coordinate c is solved by the pivot row; drop it everywhere
        stages[k]["rows"] = [row.drop_component(c) for _, row in new_rows]
        stages[k]["target_rank"] -= 1
        stages[k]["source_rank"] = len(stages[k]["rows"])
        if k > 0:
            prev = stages[k - 1]
            prev["rows"] = prev["rows"][:c] + prev["rows"][c + 1:]
            prev["source_rank"] = len(prev["rows"])
    # zero rows left in the final stage are redundant generators of the last
    # syzygy module; no later stage references them, so they can go
    if stages:
        last = stages[-1]
        last["rows"] = [r for r in last["rows"] if not r.is_zero()]
        last["source_rank"] = len(last["rows"])
    return stages


def compose(rowvec: VecElement, matrix_rows):
    """rowvec in D^m composed with the map sending e_k to matrix_rows[k]."""
    assert rowvec.rank == len(matrix_rows) or not matrix_rows
    if not matrix_rows:
        return None
    target = matrix_rows[0]
    out = VecElement(target.ring, target.rank, {})
    for k in range(rowvec.rank):
        q = rowvec.component(k)
        if not q.is_zero():
            out = out + matrix_rows[k].scalar_mul(q)
    return out


def initial_module(rows, u, v, shifts=None, ring=None):
    """Generators of in_(u,v)[shifts] of the left module generated by rows.

    Returned as VecElements of the same ring (weight-homogeneous).  Computed
    from a Groebner basis under an order refining the weight; negative
    weights go through the homogenized ring.
    """
    rows = list(rows)
    if rows and isinstance(rows[0], WeylElement):
        rows = [VecElement.from_scalar(w) for w in rows]
    if ring is None:
        ring = rows[0].ring
    order = weight_order(ring, u, v, shifts)
    gb = buchberger(rows, order)
    forms = [g.initial_form(order) for g in gb.elements]
    # slim: drop forms whose lead is divisible by another's
    forms.sort(key=lambda g: order.key(*g.lead(order)[0]))
    return _minimalize(forms, order)


def initial_ideal(gens, u, v, ring=None):
    """Scalar-ideal version of initial_module."""
    forms = initial_module(gens, u, v, ring=ring)
    return [f.component(0) for f in forms]


def _inject(element, new_ring, xslot_of, dslot_of):
    """Relabel an element into a larger ring by slot maps."""
    ring = element.ring
    width = new_ring.width

    def fn(e):
        out = [0] * width
        for i in range(ring.nx):
            out[xslot_of[i]] = e[i]
        for i in range(ring.nd):
            out[new_ring.nx + dslot_of[i]] = e[ring.nx + i]
        return tuple(out)

    return element.map_exponents(fn, new_ring)


def _project_drop_x(element, new_ring, keep_xslots):
    """Drop x-slots not in keep_xslots (their exponents must be zero)."""
    ring = element.ring
    out = {}
    for e, c in element.terms.items():
        ne = tuple(e[i] for i in keep_xslots) + e[ring.nx:]
        out[ne] = out.get(ne, Fraction(0)) + c
    return WeylElement(new_ring, out)


def eliminate(gens, keep_names):
    """Intersection of the left ideal with the subalgebra on keep_names.

    The kept variables must pairwise commute (checked), which makes the
    intersection a genuine ideal of a polynomial subring.
    """
    gens = list(gens)
    ring = gens[0].ring
    keep = set(keep_names)
    names = ring.xnames + ring.dnames
    assert keep <= set(names)
    for i in range(ring.nd):
        assert not (ring.xnames[i] in keep and ring.dnames[i] in keep), \
            "kept variables must commute"
    elim = [nm for nm in names if nm not in keep]
    order = elimination_order(ring, elim)
    gb = buchberger(gens, order)
    elim_slots = [names.index(nm) for nm in elim]
    out = []
    for g in gb.scalars():
        if all(all(e[s] == 0 for s in elim_slots) for e in g.terms):
            out.append(g)
    return out


def _fresh_name(base, taken):
    if base not in taken:
        return base
    for k in itertools.count():
        nm = f"{base}{k}"
        if nm not in taken:
            return nm


def intersect_ideals(gens_a, gens_b, ring):
    """Intersection of two ideals of a commutative ring (t-trick)."""
    assert ring.nd == 0
    t = _fresh_name("tt", set(ring.xnames))
    bigring = WeylRing((t,) + ring.xnames, ())
    slot = list(range(1, ring.nx + 1))
    tvar = bigring.gen(t)
    big = []
    for g in gens_a:
        big.append(tvar * _inject(g, bigring, slot, []))
    for g in gens_b:
        big.append((bigring.one() - tvar) * _inject(g, bigring, slot, []))
    inter = eliminate(big, ring.xnames)
    small = WeylRing(ring.xnames, ())
    return [_project_drop_x(g, small, slot) for g in inter]


def saturate(gens, sat_names, ring=None):
    """(J : (v_1,...,v_k)^infinity) for the named variables, computed as the
    intersection of the single-variable saturations (inverse-variable trick)."""
    gens = list(gens)
    if ring is None:
        ring = gens[0].ring
    assert ring.nd == 0
    result = None
    for nm in sat_names:
        q = _fresh_name("qq", set(ring.xnames))
        bigring = WeylRing((q,) + ring.xnames, ())
        slot = list(range(1, ring.nx + 1))
        big = [_inject(g, bigring, slot, []) for g in gens]
        big.append(bigring.one() - bigring.gen(q) * bigring.gen(nm))
        sat = eliminate(big, ring.xnames)
        small = WeylRing(ring.xnames, ())
        sat = [_project_drop_x(g, small, slot) for g in sat]
        result = sat if result is None else intersect_ideals(result, sat, ring)
    return result


# rank and dimension invariants


class _RatWeylElement:
    """Element of k(x)<d>^rank, fraction-free: {(comp, dexps): CommPoly}."""

    __slots__ = ("nx", "nd", "rank", "coeffs")

    def __init__(self, nx, nd, rank, coeffs):
        self.nx = nx
        self.nd = nd
        self.rank = rank
        self.coeffs = {k: p for k, p in coeffs.items() if not p.is_zero()}

    def is_zero(self):
        return not self.coeffs

    def lead(self):
        key = max(self.coeffs, key=lambda k: (sum(k[1]), -k[0],
                                              tuple(-e for e in reversed(k[1]))))
        return key, self.coeffs[key]

    def sub(self, other):
        out = dict(self.coeffs)
        for k, p in other.coeffs.items():
            s = out.get(k)
            s = (-p) if s is None else s - p
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return _RatWeylElement(self.nx, self.nd, self.rank, out)

    def poly_mul(self, p):
        return _RatWeylElement(self.nx, self.nd, self.rank,
                               {k: q * p for k, q in self.coeffs.items()})

    def d_shift(self, gamma):
        """Left multiplication by d^gamma (Leibniz on the coefficients)."""
        from math import comb
        out = {}
        for (cmp_, b), a in self.coeffs.items():
            ranges = [range(g + 1) for g in gamma]
            for k in itertools.product(*ranges):
                c = 1
                for i, ki in enumerate(k):
                    c *= comb(gamma[i], ki)
                p = a
                for i, ki in enumerate(k):
                    for _ in range(ki):
                        p = p.derivative(i)
                if p.is_zero():
                    continue
                nb = tuple(g - ki + bi for g, ki, bi in zip(gamma, k, b))
                key = (cmp_, nb)
                s = out.get(key)
                s = p.scale(c) if s is None else s + p.scale(c)
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return _RatWeylElement(self.nx, self.nd, self.rank, out)

    def int_primitive(self):
        if not self.coeffs:
            return self
        from math import gcd
        den = 1
        num = 0
        for p in self.coeffs.values():
            for c in p.terms.values():
                den = den * c.denominator // gcd(den, c.denominator)
        for p in self.coeffs.values():
            for c in p.terms.values():
                num = gcd(num, abs(c.numerator * (den // c.denominator)))
        f = Fraction(den, num)
        return _RatWeylElement(self.nx, self.nd, self.rank,
                               {k: p.scale(f) for k, p in self.coeffs.items()})


def _ratweyl_from_vec(v: VecElement):
    ring = v.ring
    coeffs = {}
    for (comp, e), c in v.terms.items():
        b = tuple(e[ring.nx:ring.nx + ring.nd])
        key = (comp, b)
        mono = CommPoly(ring.nx, {tuple(e[:ring.nx]): c})
        coeffs[key] = coeffs.get(key, CommPoly.zero(ring.nx)) + mono
    return _RatWeylElement(ring.nx, ring.nd, v.rank, coeffs)


def _ratweyl_reduce_head(f, G):
    r = f
    while not r.is_zero():
        (comp, b), lc = r.lead()
        hit = None
        for g in G:
            (gc, gb), glc = g.lead()
            if gc == comp and all(x <= y for x, y in zip(gb, b)):
                hit = (g, gb, glc)
                break
        if hit is None:
            return r
        g, gb, glc = hit
        gamma = tuple(x - y for x, y in zip(b, gb))
        r = r.poly_mul(glc).sub(g.d_shift(gamma).poly_mul(lc))
        if not r.is_zero():
            r = r.int_primitive()
    return r


def holonomic_rank(pres: ModulePresentation):
    """dim over k(x) of the induced k(x)<d>-module; None when infinite."""
    ring = pres.ring
    nd = ring.nd
    G = []
    for row in pres.rows:
        e = _ratweyl_from_vec(row)
        if not e.is_zero():
            G.append(e.int_primitive())
    pending = set()

    def add_pairs(t):
        for i in range(t):
            if G[i].lead()[0][0] == G[t].lead()[0][0]:
                pending.add((i, t))

    for t in range(len(G)):
        add_pairs(t)
    while pending:
        def pkey(p):
            i, j = p
            bi, bj = G[i].lead()[0][1], G[j].lead()[0][1]
            m = tuple(max(x, y) for x, y in zip(bi, bj))
            return (sum(m), m, i, j)
        i, j = min(pending, key=pkey)
        pending.discard((i, j))
        (ci, bi), lci = G[i].lead()
        (cj, bj), lcj = G[j].lead()
        m = tuple(max(x, y) for x, y in zip(bi, bj))
        # chain criterion
        skip = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            (ck, bk), _ = G[k].lead()
            if ck == ci and all(x <= y for x, y in zip(bk, m)):
                pi = (min(i, k), max(i, k))
                pj = (min(j, k), max(j, k))
                if pi not in pending and pj not in pending:
                    skip = True
                    break
        if skip:
            continue
        s = G[i].d_shift(tuple(a - b for a, b in zip(m, bi))).poly_mul(lcj).sub(
            G[j].d_shift(tuple(a - b for a, b in zip(m, bj))).poly_mul(lci))
        r = _ratweyl_reduce_head(s, G)
        if not r.is_zero():
            G.append(r.int_primitive())
            add_pairs(len(G) - 1)

    # staircase count per component
    total = 0
    for comp in range(pres.rank):
        leads = [g.lead()[0][1] for g in G if g.lead()[0][0] == comp]
        for i in range(nd):
            if not any(all(b[k] == 0 for k in range(nd) if k != i) for b in leads):
                return None
        count = 0
        seen = set()
        stack = [(0,) * nd]
        while stack:
            b = stack.pop()
            if b in seen:
                continue
            seen.add(b)
            if any(all(x <= y for x, y in zip(lb, b)) for lb in leads):
                continue
            count += 1
            for i in range(nd):
                nb = tuple(x + (1 if k == i else 0) for k, x in enumerate(b))
                if nb not in seen:
                    stack.append(nb)
        total += count
    return total


def char_dimension(pres: ModulePresentation):
    """Krull dimension of the characteristic variety (principal symbols)."""
    ring = pres.ring
    n = ring.nd
    u = (0,) * ring.nx
    v = (1,) * n
    forms = initial_module(pres.rows, u, v, ring=ring)
    xinames = tuple("xi_" + nm for nm in ring.dnames)
    sring = WeylRing(ring.xnames + xinames, ())
    symbols = []
    for f in forms:
        t = {}
        for (comp, e), c in f.terms.items():
            t[(comp, tuple(e))] = c
        symbols.append(VecElement(sring, pres.rank, t))
    cgb = buchberger(symbols, drl_order(sring))
    nvars = sring.nx
    best = -1
    for comp in range(pres.rank):
        leads = [lm[1] for (lm, _) in cgb.leads if lm[0] == comp]
        if any(not any(e) for e in leads):
            continue  # unit lead: this component's quotient vanishes
        dim = None
        for size in range(nvars, -1, -1):
            for S in itertools.combinations(range(nvars), size):
                sset = set(S)
                ok = True
                for e in leads:
                    if all(i in sset for i, x in enumerate(e) if x):
                        ok = False
                        break
                if ok:
                    dim = size
                    break
            if dim is not None:
                break
        best = max(best, dim if dim is not None else -1)
    return best


def is_holonomic(pres: ModulePresentation):
    return char_dimension(pres) == pres.ring.nd

"""Holonomic duality and Ext dimension tables.

Ext groups of a holonomic module against polynomial, delta, or localized
coefficients all reduce to one primitive: pushing a holonomic module to the
origin along a positive weight.  The push is computed from a weight-strict
free resolution whose scalar complex, truncated by the integer roots of an
integration b-function, has the same cohomology as the full infinite one.
Duality enters because Ext^i(M, N) only becomes a push of a single module
after replacing M by its transposed dual and twisting the external product
of the two inputs.  Everything is exact arithmetic over Q.
"""

from fractions import Fraction
from math import comb, factorial

from .bfunctions import _degree_cap, integration_bfunction
from .errors import DegreeCapError, MissingPresentationError, NotHolonomicError
from .groebner import (ModulePresentation, VecElement, buchberger,
                       char_dimension, free_resolution, normal_form,
                       schreyer_syzygies, syzygies)
from .linalg import nullspace, rank as mat_rank
from .orders import drl_order, weight_order
from .weyl import WeylElement, WeylRing, fourier, substitute


class ExtTable:
    """Dimension table {cohomological degree: dim_Q Ext^degree}.

    Carries the truncated complex and the b-function that produced it when
    the computation went through a push to the origin.
    """

    def __init__(self, dims, complex=None, bfunction=None):
        self.dims = {int(k): int(v) for k, v in dims.items()}
        self.complex = complex
        self.bfunction = bfunction

    def __getitem__(self, i):
        return self.dims.get(i, 0)

    def euler(self):
        return sum((-1) ** i * d for i, d in self.dims.items())

    def __eq__(self, other):
        if isinstance(other, ExtTable):
            other = other.dims
        return isinstance(other, dict) and self.dims == other

    def __repr__(self):
        return f"ExtTable({self.dims!r})"


class OriginTable:
    """Cohomology dimensions of a push to the origin, keyed by degree.

    Degrees run 0, -1, ..., -n.  Same payload fields as ExtTable.
    """

    def __init__(self, dims, complex=None, bfunction=None):
        self.dims = {int(k): int(v) for k, v in dims.items()}
        self.complex = complex
        self.bfunction = bfunction

    def __getitem__(self, d):
        return self.dims.get(d, 0)

    def __eq__(self, other):
        if isinstance(other, OriginTable):
            other = other.dims
        return isinstance(other, dict) and self.dims == other

    def __repr__(self):
        return f"OriginTable({self.dims!r})"


class TruncatedComplex:
    """Finite complex of Q-vector spaces cut out of a filtered resolution.

    Stage k is spanned by bases[k], a sorted list of (component, exponent
    tuple) pairs; boundaries[k] is the matrix of the map from stage k to
    stage k-1, one row per stage-k basis vector.
    """

    def __init__(self, dims, boundaries, bases):
        self.dims = list(dims)
        self.boundaries = boundaries
        self.bases = bases

    def euler(self):
        return sum((-1) ** k * d for k, d in enumerate(self.dims))

    def homology(self):
        """Homology dimension per stage.

        The top entry assumes the complex continues by zero, so it is only
        meaningful when the resolution behind it was computed one stage
        further than the homology the caller reads.
        """
        L = len(self.dims)
        ranks = [0] * (L + 1)
        for k in range(1, L):
            if self.dims[k] and self.dims[k - 1]:
                ranks[k] = mat_rank(self.boundaries[k], self.dims[k - 1])
        return [self.dims[k] - ranks[k] - ranks[k + 1] for k in range(L)]

    def __repr__(self):
        return f"TruncatedComplex(dims={self.dims!r})"


class FilteredResolution:
    """Free resolution adapted to a (w,-w) filtration with shift vectors.

    stages[k] holds the rows of the map from the (k+1)-st free module to the
    k-th; shifts[k] is the shift vector of the k-th free module, normalized
    so that a basis vector enters the filtration at the level of the row it
    maps to.
    """

    def __init__(self, ring, weight, stages, shifts):
        self.ring = ring
        self.weight = tuple(weight)
        self.stages = stages
        self.shifts = [list(s) for s in shifts]

    def ranks(self):
        out = [self.stages[0]["target_rank"]]
        out.extend(st["source_rank"] for st in self.stages)
        return out

    def order_for(self, k):
        u = self.weight
        v = tuple(-wi for wi in self.weight)
        return weight_order(self.ring, u, v, shifts=tuple(self.shifts[k]))

    def check(self):
        """Compositions vanish and every entry obeys the shift order bound."""
        for k in range(1, len(self.stages)):
            upper, lower = self.stages[k], self.stages[k - 1]
            for row in upper["rows"]:
                acc = VecElement(self.ring, lower["target_rank"], {})
                for i in range(upper["target_rank"]):
                    q = row.component(i)
                    if not q.is_zero():
                        acc = acc + lower["rows"][i].scalar_mul(q)
                assert acc.is_zero(), "stage maps do not compose to zero"
        for k, st in enumerate(self.stages):
            src, tgt = self.shifts[k + 1], self.shifts[k]
            order = self.order_for(k)
            for i, row in enumerate(st["rows"]):
                for (j, e), _ in row.terms.items():
                    lev = order.level(j, e)
                    assert lev <= -src[i], "entry exceeds its filtration level"


def _tau_transpose(rows, target_rank, ring):
    """Transpose of a stage matrix with the formal adjoint applied entrywise.

    The input maps D^a -> D^b by right matrix action on rows; the output is
    the induced map D^b -> D^a on the dualized side, converted back to left
    modules through the adjoint.
    """
    a = len(rows)
    out = []
    for j in range(target_rank):
        t = {}
        for i, row in enumerate(rows):
            adj = row.component(j).adjoint()
            for e, c in adj.terms.items():
                t[(i, e)] = c
        out.append(VecElement(ring, a, t))
    return out


def holonomic_dual(pres: ModulePresentation, check=True):
    """Presentation of the dual holonomic module Ext^n(M, D), made left again.

    Resolves one step past homological degree n, dualizes the two maps
    around position n by the adjoint-transpose, and presents the resulting
    kernel modulo image.  When the resolution already stopped the kernel is
    the whole free module and the answer is a plain cokernel.
    """
    ring = pres.ring
    n = ring.nx
    assert ring.nx == ring.nd and n >= 1
    if check and char_dimension(pres) != n:
        raise NotHolonomicError("input not holonomic")
    stages = free_resolution(pres, n + 1, minimize=True)
    last, prev = stages[n], stages[n - 1]
    r_n = last["target_rank"]
    assert prev["source_rank"] == r_n
    if r_n == 0:
        return ModulePresentation(ring, 0, [])
    tau_prev = _tau_transpose(prev["rows"], prev["target_rank"], ring)
    if last["source_rank"] == 0:
        return ModulePresentation(ring, r_n, tau_prev)
    tau_last = _tau_transpose(last["rows"], r_n, ring)
    kernel = syzygies(tau_last)
    if not kernel:
        return ModulePresentation(ring, 0, [])
    t = len(kernel)
    rels = []
    for s in syzygies(kernel + tau_prev):
        v = VecElement(ring, t,
                       {(i, e): c for (i, e), c in s.terms.items() if i < t})
        if not v.is_zero():
            rels.append(v.int_primitive())
    return ModulePresentation(ring, t, rels)


def _constant_of(op):
    if len(op.terms) != 1:
        return None
    (exps, c), = op.terms.items()
    return None if any(exps) else c


def _strict_minimize(stages, shifts):
    """Cancel constant entries joining basis vectors of equal shift.

    Same splitting-off of trivial D -> D summands as plain resolution
    minimization, but a pivot is only eligible when the source and target
    shifts agree: exactly then the pivot stays a unit on the associated
    graded complex, so the cancellation is a filtered homotopy equivalence
    and graded exactness survives.
    """
    stages = [{"rows": list(s["rows"]), "target_rank": s["target_rank"],
               "source_rank": s["source_rank"]} for s in stages]
    shifts = [list(s) for s in shifts]

    def find_pivot():
        for k, st in enumerate(stages):
            for r, row in enumerate(st["rows"]):
                for comp in sorted({c for c, _ in row.terms}):
                    u = _constant_of(row.component(comp))
                    if u is not None and shifts[k + 1][r] == shifts[k][comp]:
                        return k, r, comp, u
        return None

    while True:
        hit = find_pivot()
        if hit is None:
            break
        k, r, c, u = hit
        pivot = stages[k]["rows"][r]
        lams = {}
        kept = []
        for i, row in enumerate(stages[k]["rows"]):
            if i == r:
                continue
            coef = row.component(c)
            if coef.is_zero():
                kept.append(row)
            else:
                lams[i] = coef.scale(1 / u)
                kept.append(row - pivot.scalar_mul(lams[i]))
        if k + 1 < len(stages):
            nxt = []
            for srow in stages[k + 1]["rows"]:
                corr = srow.component(r)
                for i, lam in lams.items():
                    q = srow.component(i)
                    if not q.is_zero():
                        corr = corr + q * lam
                assert corr.is_zero(), "pivot column failed to clear"
                nxt.append(srow.drop_component(r))
            stages[k + 1]["rows"] = nxt
            stages[k + 1]["target_rank"] -= 1
        stages[k]["rows"] = [row.drop_component(c) for row in kept]
        stages[k]["target_rank"] -= 1
        stages[k]["source_rank"] = len(stages[k]["rows"])
        del shifts[k + 1][r]
        del shifts[k][c]
        if k > 0:
            prev = stages[k - 1]
            prev["rows"] = prev["rows"][:c] + prev["rows"][c + 1:]
            prev["source_rank"] = len(prev["rows"])
    if stages:
        last = stages[-1]
        zero = [i for i, row in enumerate(last["rows"]) if row.is_zero()]
        for i in reversed(zero):
            del last["rows"][i]
            del shifts[-1][i]
        last["source_rank"] = len(last["rows"])
    return stages, shifts


def strict_resolution(pres: ModulePresentation, w, length, minimize=True):
    """Filtration-strict free resolution for the (w,-w) weight.

    Each stage is a Groebner basis under the shifted weight order (routed
    through homogenization, since -w has negative entries) and the next
    stage is its syzygy module; that combination keeps the induced graded
    complex exact.  Shifts are tight at construction: a basis vector enters
    at the level of the row it maps to.  Minimization afterward cancels
    constant entries between equal shifts only, which preserves graded
    exactness along with the homology of every filtration window.
    """
    ring = pres.ring
    assert ring.nx == ring.nd == len(w)
    assert all(wi > 0 for wi in w)
    u = tuple(w)
    v = tuple(-wi for wi in w)
    shifts = [[0] * pres.rank]
    stages = []
    rows, rank = pres.rows, pres.rank
    for _ in range(length):
        nz = [r for r in rows if not r.is_zero()]
        if not nz:
            stages.append({"rows": [], "target_rank": rank, "source_rank": 0})
            shifts.append([])
            rows, rank = [], 0
            continue
        order = weight_order(ring, u, v, shifts=tuple(shifts[-1]))
        gb = buchberger(nz, order)
        stages.append({"rows": list(gb.elements), "target_rank": rank,
                       "source_rank": len(gb.elements)})
        shifts.append([-order.level(*g.lead(order)[0]) for g in gb.elements])
        rows = schreyer_syzygies(gb)
        rank = len(gb.elements)
    if minimize:
        stages, shifts = _strict_minimize(stages, shifts)
    return FilteredResolution(ring, w, stages, shifts)


def _monomials_up_to(w, bound):
    """Exponent tuples alpha >= 0 with w.alpha <= bound (w positive)."""
    if bound < 0:
        return []
    n = len(w)
    out = []
    cur = [0] * n

    def rec(i, rem):
        if i == n:
            out.append(tuple(cur))
            return
        k = 0
        while k * w[i] <= rem:
            cur[i] = k
            rec(i + 1, rem - k * w[i])
            k += 1
        cur[i] = 0

    rec(0, bound)
    return out


def _scalar_class(op: WeylElement):
    """Image of an operator in D/(d_1 D + ... + d_n D), as {exps: coeff}.

    Moving every derivative to the front leaves, per variable, the single
    term (-1)^b b! C(a, b) x^(a-b) from x^a d^b; terms with b > a die.
    """
    ring = op.ring
    n = ring.nx
    out = {}
    for e, c in op.terms.items():
        a, b = e[:n], e[n:2 * n]
        if any(bi > ai for ai, bi in zip(a, b)):
            continue
        coeff = c
        for ai, bi in zip(a, b):
            if bi:
                coeff *= Fraction((-1) ** bi * factorial(bi) * comb(ai, bi))
        key = tuple(ai - bi for ai, bi in zip(a, b))
        s = out.get(key, Fraction(0)) + coeff
        if s:
            out[key] = s
        else:
            del out[key]
    return out


def integration_to_origin(pres: ModulePresentation, w=None, cap=None,
                          check=True):
    """Cohomology dimensions of the derived integration of pres to a point.

    The integration b-function bounds where cohomology can sit: with k0 and
    k1 its smallest and largest integer roots, the classes x^alpha e_j whose
    level w.alpha - m_j lies in [-k1, -k0] span a finite subquotient complex
    of scalars-tensor-resolution with the full complex's cohomology.  No
    integer roots means the push vanishes.  Degrees run 0 (top) to -n.
    """
    ring = pres.ring
    n = ring.nx
    assert ring.nx == ring.nd
    if w is None:
        w = (1,) * n
    w = tuple(w)
    assert len(w) == n and all(wi > 0 for wi in w)
    if check and char_dimension(pres) != n:
        raise NotHolonomicError("input not holonomic")
    bres = integration_bfunction(pres, w, cap=cap, check=False)
    if not bres.integer_roots:
        return OriginTable({-j: 0 for j in range(n + 1)}, None, bres)
    lo = -max(bres.integer_roots)
    hi = -min(bres.integer_roots)
    res = strict_resolution(pres, w, n + 1)

    bases, index = [], []
    for m in res.shifts:
        basis = []
        for j, mj in enumerate(m):
            for alpha in _monomials_up_to(w, hi + mj):
                if sum(a * b for a, b in zip(w, alpha)) - mj >= lo:
                    basis.append((j, alpha))
        basis.sort()
        bases.append(basis)
        index.append({key: i for i, key in enumerate(basis)})

    dims = [len(b) for b in bases]
    boundaries = [None]
    for k in range(1, len(bases)):
        stage_rows = res.stages[k - 1]["rows"]
        mat = []
        for (j, alpha) in bases[k]:
            image = stage_rows[j].mono_mul(alpha + (0,) * n, Fraction(1))
            row = [Fraction(0)] * dims[k - 1]
            for jj in range(res.stages[k - 1]["target_rank"]):
                comp = image.component(jj)
                if comp.is_zero():
                    continue
                for exps, c in _scalar_class(comp).items():
                    pos = index[k - 1].get((jj, exps))
                    if pos is None:
                        # strictness keeps images below the ceiling; only
                        # monomials under the floor get quotiented away
                        lev = sum(a * b for a, b in zip(w, exps))
                        assert lev - res.shifts[k - 1][jj] < lo
                        continue
                    row[pos] += c
            mat.append(row)
        boundaries.append(mat)

    cx = TruncatedComplex(dims, boundaries, bases)
    H = cx.homology()
    return OriginTable({-j: H[n - j] for j in range(n + 1)}, cx, bres)


def _vec_fourier(vec: VecElement):
    t = {}
    for j in range(vec.rank):
        comp = vec.component(j)
        if comp.is_zero():
            continue
        for e, c in fourier(comp).terms.items():
            t[(j, e)] = c
    return VecElement(vec.ring, vec.rank, t)


def restriction_to_origin(pres: ModulePresentation, w=None, cap=None,
                          check=True):
    """Cohomology dimensions of the derived restriction of pres to the origin.

    Computed as the integration of the Fourier transform; the degree axis
    flips, so the table is the reversed integration table.
    """
    ring = pres.ring
    n = ring.nx
    fp = ModulePresentation(ring, pres.rank,
                            [_vec_fourier(r) for r in pres.rows])
    t = integration_to_origin(fp, w, cap=cap, check=check)
    dims = {-j: t[-(n - j)] for j in range(n + 1)}
    return OriginTable(dims, t.complex, t.bfunction)


def _fresh_names(base, taken):
    out = []
    seen = set(taken)
    for nm in base:
        cand = nm + "_b"
        while cand in seen:
            cand += "b"
        seen.add(cand)
        out.append(cand)
    return out


def external_product(left: ModulePresentation, right: ModulePresentation):
    """Presentation of the external tensor product over the doubled algebra.

    The doubled Weyl algebra is free as a module over either factor, so the
    left relations acting on the first block together with the right
    relations acting on the second block present the product.
    """
    lr, rr = left.ring, right.ring
    assert lr.nx == lr.nd and rr.nx == rr.nd
    nl, nr = lr.nx, rr.nx
    taken = set(lr.xnames) | set(lr.dnames)
    xn = tuple(lr.xnames) + tuple(_fresh_names(rr.xnames, taken))
    dn = tuple(lr.dnames) + tuple(_fresh_names(rr.dnames, taken | set(xn)))
    ring2 = WeylRing(xn, dn)
    ra, rb = left.rank, right.rank
    rows = []

    def lift(row, comp_of, emb):
        t = {}
        for (i, e), c in row.terms.items():
            t[(comp_of(i), emb(e))] = c
        return VecElement(ring2, ra * rb, t)

    def emb_left(e):
        return e[:nl] + (0,) * nr + e[nl:2 * nl] + (0,) * nr

    def emb_right(e):
        return (0,) * nl + e[:nr] + (0,) * nl + e[nr:2 * nr]

    for row in left.rows:
        for j in range(rb):
            rows.append(lift(row, lambda i: i * rb + j, emb_left))
    for row in right.rows:
        for i in range(ra):
            rows.append(lift(row, lambda j: i * rb + j, emb_right))
    return ModulePresentation(ring2, ra * rb, rows)


def eta_transform(pres: ModulePresentation):
    """Twist a doubled-algebra presentation by the diagonal shear.

    With the blocks written (x, y, dx, dy), generators map to

        x_i -> x_i/2 - dy_i      y_i  -> -x_i/2 - dy_i
        dx_i -> y_i/2 + dx_i     dy_i -> y_i/2 - dx_i

    an automorphism under which restriction to the origin of the twisted
    external product computes derived Hom between the factors.
    """
    ring = pres.ring
    assert ring.nx == ring.nd and ring.nx % 2 == 0
    n = ring.nx // 2
    half = Fraction(1, 2)
    ximg, dimg = [], []
    for i in range(n):
        ximg.append(ring.x(i).scale(half) - ring.d(n + i))
        dimg.append(ring.x(n + i).scale(half) + ring.d(i))
    for i in range(n):
        ximg.append(ring.x(i).scale(-half) - ring.d(n + i))
        dimg.append(ring.x(n + i).scale(half) - ring.d(i))
    rows = []
    for row in pres.rows:
        t = {}
        for j in range(pres.rank):
            comp = row.component(j)
            if comp.is_zero():
                continue
            for e, c in substitute(comp, ring, ximg, dimg).terms.items():
                t[(j, e)] = t.get((j, e), Fraction(0)) + c
        rows.append(VecElement(ring, pres.rank,
                               {k: c for k, c in t.items() if c}))
    return ModulePresentation(ring, pres.rank, rows)


def poly_ext(pres: ModulePresentation, w=None, cap=None, check=True):
    """Ext dimensions of pres against the polynomials, via the dual's push.

    Ext^i(M, k[x]) is the degree -i integration cohomology of the dual
    module, so one strict resolution of the dual answers all degrees.
    """
    n = pres.ring.nx
    dual = holonomic_dual(pres, check=check)
    t = integration_to_origin(dual, w, cap=cap, check=False)
    return ExtTable({i: t[-i] for i in range(n + 1)},
                    complex=t.complex, bfunction=t.bfunction)


def d_ext(pres: ModulePresentation, other: ModulePresentation, w=None,
          cap=None, check=True):
    """Ext dimensions between two holonomic modules over the same algebra.

    Builds the external product of the dual of the first argument with the
    second, twists it by the diagonal shear, and restricts to the origin of
    the doubled algebra; degree i of the table is restriction degree i - n.
    The optional weight has length n and acts identically on both blocks.
    """
    ring = pres.ring
    n = ring.nx
    assert other.ring.nx == n and other.ring.nd == n
    if check:
        if char_dimension(pres) != n:
            raise NotHolonomicError("first argument not holonomic")
        if char_dimension(other) != n:
            raise NotHolonomicError("second argument not holonomic")
    if w is None:
        w = (1,) * n
    assert len(w) == n
    dual = holonomic_dual(pres, check=False)
    twisted = eta_transform(external_product(dual, other))
    t = restriction_to_origin(twisted, tuple(w) + tuple(w), cap=cap,
                              check=False)
    return ExtTable({i: t[i - n] for i in range(n + 1)},
                    complex=t.complex, bfunction=t.bfunction)


def ratl_ext(pres: ModulePresentation, f, localized=None, w=None, cap=None,
             check=True):
    """Ext dimensions against a localized polynomial ring k[x][1/f].

    The localization enters through an explicit presentation of it as a
    holonomic module; deriving one from f alone is outside this library's
    scope, so the caller must supply it.
    """
    if localized is None:
        raise MissingPresentationError("localization presentation required")
    assert f is None or not f.is_zero()
    return d_ext(pres, localized, w=w, cap=cap, check=check)


def brute_force_solutions(pres: ModulePresentation,
                          target: ModulePresentation, d, cap=None):
    """Homomorphisms from pres into target, found degree by degree.

    Sweeps the total-degree filtration of the target: at each level the
    candidate images are spanned by standard monomials modulo the target's
    relations, and the condition that every relation of pres annihilates the
    candidate is an exact linear system.  Returns a basis of the solution
    space at the first level holding at least d independent solutions.
    """
    ring = pres.ring
    assert target.ring == ring
    assert pres.rank == 1 and target.rank == 1
    if d == 0:
        return []
    order = drl_order(ring)
    gens = [g for g in pres.gens_as_scalars() if not g.is_zero()]
    gb = buchberger([r for r in target.rows if not r.is_zero()], order)
    leads = [g.lead(order)[0][1] for g in gb.elements]
    limit = _degree_cap(cap)
    width = ring.width

    def standard(level):
        out = []
        for e in _monomials_up_to((1,) * width, level):
            if not any(all(a >= b for a, b in zip(e, le)) for le in leads):
                out.append(e)
        out.sort(key=lambda e: order.key(0, e))
        return out

    for level in range(limit + 1):
        std = standard(level)
        if len(std) < d:
            continue
        cols = {e: i for i, e in enumerate(std)}
        eqs = {}
        for gi, g in enumerate(gens):
            for e in std:
                prod = normal_form(g * WeylElement(ring, {e: Fraction(1)}), gb)
                for key, c in prod.terms.items():
                    eqs.setdefault((gi, key), {})[cols[e]] = c
        mat = []
        for _, entries in sorted(eqs.items()):
            row = [Fraction(0)] * len(std)
            for ci, c in entries.items():
                row[ci] = c
            mat.append(row)
        basis = nullspace(mat, len(std))
        if len(basis) >= d:
            vecs = []
            for coeffs in basis:
                v = VecElement(ring, 1,
                               {(0, e): c for e, c in zip(std, coeffs) if c})
                v = v.int_primitive()
                if v.lead(order)[1] < 0:
                    v = v.scale(-1)
                vecs.append(v)
            vecs.sort(key=lambda v: order.key(*v.lead(order)[0]))
            return [v.component(0) for v in vecs]
    raise DegreeCapError(
        f"needed {d} independent solutions within total degree {limit}")

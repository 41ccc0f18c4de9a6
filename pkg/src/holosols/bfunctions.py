"""Weight, global, and integration b-functions.

All three reduce membership questions about initial ideals/modules to a
linear dependence search among normal forms of powers of an Euler operator.
The search degree is capped (default 40, HOLO_DEGREE_CAP overrides) so a
non-holonomic input fails loudly instead of looping.
"""

import os
from fractions import Fraction

from .errors import DegreeCapError, HoloError, NotHolonomicError
from .groebner import (ModulePresentation, VecElement, buchberger,
                       char_dimension, eliminate, initial_module, normal_form)
from .linalg import solve
from .orders import weight_order
from .polys import CommPoly, UnivarPoly
from .weyl import WeylElement, WeylRing, substitute, fourier

DEFAULT_DEGREE_CAP = 40


def _degree_cap(cap):
    if cap is not None:
        return cap
    env = os.environ.get("HOLO_DEGREE_CAP")
    return int(env) if env else DEFAULT_DEGREE_CAP


class BFunctionResult:
    """Monic b-function with its integer roots and a context tag."""

    def __init__(self, b: UnivarPoly, context: str):
        self.b = b.monic()
        self.integer_roots = sorted(self.b.integer_roots())
        self.context = context

    def __repr__(self):
        return f"BFunctionResult({self.b.render()}, context={self.context!r})"


def _reflect(p: UnivarPoly) -> UnivarPoly:
    """p(-s)."""
    return UnivarPoly([c if k % 2 == 0 else -c
                       for k, c in enumerate(p.coeffs)], var=p.var)


def _minimal_annihilator(gb, s_ops, rank, ring, cap, context):
    """Least-degree monic p with p(s_op_j) e_j in the module of gb, all j.

    The membership for every j is a k[s]-ideal condition, so the minimal p
    exists; it shows up as the first degree d where the stacked linear
    system over normal forms of (s_op_j)^k e_j becomes solvable.
    """
    zero_exps = (0,) * ring.width
    seqs = []
    for j in range(rank):
        e = VecElement(ring, rank, {(j, zero_exps): Fraction(1)})
        seqs.append([normal_form(e, gb)])
    for d in range(1, cap + 1):
        for j in range(rank):
            prev = seqs[j][-1]
            seqs[j].append(normal_form(prev.scalar_mul(s_ops[j]), gb))
        # monic s^d + sum a_k s^k: one equation per (component sequence,
        # support monomial), unknowns a_0..a_{d-1}
        rows, rhs = [], []
        for j in range(rank):
            support = set()
            for v in seqs[j]:
                support.update(v.terms)
            for key in sorted(support):
                rows.append([seqs[j][k].terms.get(key, Fraction(0))
                             for k in range(d)])
                rhs.append(-seqs[j][d].terms.get(key, Fraction(0)))
        sol = solve(rows, d, rhs)
        if sol is not None:
            return UnivarPoly(list(sol) + [Fraction(1)])
    raise DegreeCapError("b-function degree cap exceeded")


def _check_holonomic(pres):
    if char_dimension(pres) != pres.ring.nd:
        raise NotHolonomicError("input not holonomic")


def weight_bfunction(pres: ModulePresentation, w, cap=None, check=True):
    """Monic generator of in_(-w,w)(I) intersected with k[s], s = sum w_i theta_i."""
    ring = pres.ring
    assert ring.nx == ring.nd and len(w) == ring.nd and any(w)
    if check:
        _check_holonomic(pres)
    u = [-wi for wi in w]
    v = list(w)
    forms = initial_module(pres.rows, u, v, ring=ring)
    order = weight_order(ring, u, v)
    gb = buchberger(forms, order, graded=True)
    s_op = ring.zero()
    for i, wi in enumerate(w):
        s_op = s_op + ring.theta(i).scale(wi)
    p = _minimal_annihilator(gb, [s_op] * pres.rank, pres.rank, ring,
                             _degree_cap(cap), f"weight {tuple(w)}")
    return BFunctionResult(p, f"weight {tuple(w)}")


def integration_bfunction(pres: ModulePresentation, w, shifts=None, cap=None,
                          check=True):
    """Minimal monic b with b(sum w_i d_i x_i) F^0 contained in F^-1.

    Realized through the Fourier transform: the condition transported to the
    transformed module reads p(theta_w - m_j) e_j in in_(-w,w)[m](F(N)) with
    p(s) = b(-s); the shift by one per variable from d_i x_i = theta_i + 1
    cancels against the transform of theta_w exactly.
    """
    ring = pres.ring
    assert ring.nx == ring.nd and len(w) == ring.nd
    assert all(wi > 0 for wi in w), "integration weights must be positive"
    if check:
        _check_holonomic(pres)
    m = list(shifts) if shifts is not None else [0] * pres.rank
    assert len(m) == pres.rank
    frows = [_vec_fourier(r) for r in pres.rows]
    u = [-wi for wi in w]
    v = list(w)
    forms = initial_module(frows, u, v, shifts=m, ring=ring)
    order = weight_order(ring, u, v, shifts=m)
    gb = buchberger(forms, order, graded=True)
    theta_w = ring.zero()
    for i, wi in enumerate(w):
        theta_w = theta_w + ring.theta(i).scale(wi)
    s_ops = [theta_w - ring.constant(mj) for mj in m]
    p = _minimal_annihilator(gb, s_ops, pres.rank, ring, _degree_cap(cap),
                             f"integration weight {tuple(w)}")
    return BFunctionResult(_reflect(p), f"integration weight {tuple(w)}")


def _vec_fourier(vec: VecElement) -> VecElement:
    t = {}
    for j in range(vec.rank):
        comp = vec.component(j)
        if comp.is_zero():
            continue
        for e, c in fourier(comp).terms.items():
            t[(j, e)] = c
    return VecElement(vec.ring, vec.rank, t)


def _falling(arg: UnivarPoly, k: int) -> UnivarPoly:
    """arg (arg - 1) ... (arg - k + 1)."""
    out = UnivarPoly([Fraction(1)])
    for i in range(k):
        out = out * (arg - UnivarPoly([Fraction(i)]))
    return out


def global_bfunction(pres: ModulePresentation, f: CommPoly, cap=None,
                     check=True):
    """Multiple of the b-function of f^s u, u the cyclic section of D/I.

    Malgrange construction: adjoin t with dt-twisted derivations, take the
    (t,dt)-initial ideal, rewrite it into operators polynomial in
    s = -t dt - 1, and eliminate down to k[s].  Exact when I is f-saturated,
    otherwise a multiple.
    """
    ring = pres.ring
    assert ring.nx == ring.nd and pres.rank == 1
    if f.is_zero():
        raise HoloError("zero polynomial f")
    if check:
        _check_holonomic(pres)
    n = ring.nd
    xnames = list(ring.xnames)
    big = WeylRing(xnames + ["t"], list(ring.dnames) + ["dt"])
    t, dt = big.x(n), big.d(n)
    fel = _poly_to_weyl(big, f, n + 1)
    x_imgs = [big.x(i) for i in range(n)]
    d_imgs = [big.d(i) + _poly_to_weyl(big, f.derivative(i), n + 1) * dt
              for i in range(n)]
    gens = [substitute(g, big, x_imgs, d_imgs)
            for g in pres.gens_as_scalars()]
    gens.append(t - fel)
    u = [0] * n + [-1]
    v = [0] * n + [1]
    forms = initial_module(gens, u, v, ring=big)

    # target ring D_n[s]; the rewrite is term by term on normal-ordered
    # exponents, with the whole form sharing one t-weight mu
    par = WeylRing(xnames + ["s"], list(ring.dnames))
    svar = UnivarPoly([Fraction(0), Fraction(1)])
    minus_s1 = UnivarPoly([Fraction(-1), Fraction(-1)])  # -s-1
    g2 = []
    for form in forms:
        op = form.component(0)
        mus = {e[2 * n + 1] - e[n] for e in op.terms}
        assert len(mus) == 1, "initial form not weight-homogeneous"
        mu = mus.pop()
        if mu >= 0:
            pref = UnivarPoly([Fraction(1)])
            for j in range(mu):
                pref = pref * (minus_s1 - UnivarPoly([Fraction(j)]))
        else:
            pref = UnivarPoly([Fraction(1)])
            for j in range(1, -mu + 1):
                pref = pref * (minus_s1 + UnivarPoly([Fraction(j)]))
        acc = {}
        for e, c in op.terms.items():
            a, b = e[n], e[2 * n + 1]
            body = _falling(minus_s1 - UnivarPoly([Fraction(max(mu, 0))]),
                            min(a, b))
            spoly = pref * body * UnivarPoly([c])
            for k, ck in enumerate(spoly.coeffs):
                if not ck:
                    continue
                key = tuple(list(e[:n]) + [k] + list(e[n + 1:2 * n + 1]))
                tot = acc.get(key, Fraction(0)) + ck
                if tot:
                    acc[key] = tot
                else:
                    del acc[key]
        if acc:
            g2.append(WeylElement(par, acc))
    jgens = eliminate(g2, xnames + ["s"])
    # commutative final elimination down to k[s]
    comm = WeylRing(["s"] + xnames, [])
    moved = [_relabel_commutative(g, par, comm, n) for g in jgens]
    only_s = eliminate(moved, ["s"]) if moved else []
    cands = []
    for g in only_s:
        coeffs = {}
        for e, c in g.terms.items():
            coeffs[e[0]] = c
        deg = max(coeffs)
        cands.append(UnivarPoly([coeffs.get(k, Fraction(0))
                                 for k in range(deg + 1)]))
    if not cands:
        raise HoloError("global b-function elimination returned nothing; "
                        "input may not be holonomic")
    b = min(cands, key=lambda p: p.degree()).monic()
    return BFunctionResult(b, f"global, f with {len(f.terms)} terms")


def _poly_to_weyl(ring, p: CommPoly, pad_to):
    t = {}
    for e, c in p.terms.items():
        t[tuple(list(e) + [0] * (pad_to - len(e)) + [0] * ring.nd)] = c
    return WeylElement(ring, t)


def _relabel_commutative(g, par, comm, n):
    """Move an s,x-only element of D_n[s] into k[s,x] (s first)."""
    t = {}
    for e, c in g.terms.items():
        assert not any(e[n + 1:]), "element is not free of derivations"
        t[(e[n],) + tuple(e[:n])] = c
    return WeylElement(comm, t)

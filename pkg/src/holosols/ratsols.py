"""Rational solutions of holonomic ideals.

Poles can only sit on the singular locus, so its linear factors f_i carry
the denominators.  A global b-function per factor bounds the pole order
k_i; twisting the ideal by f_1^{k_1}...f_m^{k_m} turns rational solutions
into polynomial solutions of the twisted ideal, which the b-function
degree bound then handles.  The twisted ideal may fail to be holonomic as
handed back; dividing generators by their polynomial content (a partial
Weyl closure) repairs every case treated here, and a failed holonomicity
check after that aborts with a diagnostic rather than guessing.
"""

from fractions import Fraction

from .bfunctions import global_bfunction
from .errors import HoloError, NotHolonomicError
from .groebner import (ModulePresentation, char_dimension, eliminate,
                       initial_ideal, saturate)
from .polys import (CommPoly, RationalFunction, divides, exact_div,
                    factor_linear, poly_gcd, squarefree_part)
from .polysols import polynomial_solutions
from .weyl import WeylElement, WeylRing


class FactorData:
    """Pole-order data for one denominator factor.

    r is the largest integer root of the factor's global b-function (None
    when there is none, which kills all rational solutions); the pole-order
    bound is k = max(r + 1, 0)."""

    def __init__(self, factor, b, r):
        self.factor = factor
        self.b = b
        self.r = r
        self.k = max(r + 1, 0) if r is not None else None

    def __repr__(self):
        return f"FactorData({self.factor!r}, r={self.r}, k={self.k})"


class RationalSolution:
    """numerator / prod f^e over the exponents map, kept reduced."""

    def __init__(self, numerator, exponents):
        self.numerator = numerator
        self.exponents = dict(exponents)

    def denominator(self):
        den = CommPoly.constant(self.numerator.nvars, 1)
        for f, e in self.exponents.items():
            den = den * f ** e
        return den

    def as_rational(self):
        return RationalFunction(self.numerator, self.denominator())

    def __repr__(self):
        return f"RationalSolution({self.numerator!r} / {self.denominator()!r})"


def singular_locus(pres):
    """Squarefree polynomial cutting out the codimension-1 singular locus.

    Principal symbols, saturation by the xi-variables, elimination down to
    k[x], then the gcd of the result (its codimension-1 part) made
    squarefree.  Returns 1 when the locus is empty."""
    ring = pres.ring
    n = ring.nx
    assert ring.nx == ring.nd and pres.rank == 1
    symbols = initial_ideal(pres.gens_as_scalars(), [0] * n, [1] * n,
                            ring=ring)
    S = WeylRing(tuple(ring.xnames) + tuple(ring.dnames), ())
    syms = [WeylElement(S, dict(g.terms)) for g in symbols if not g.is_zero()]
    sat = saturate(syms, list(ring.dnames), ring=S)
    only_x = eliminate(sat, list(ring.xnames))
    polys = [CommPoly(n, {e[:n]: c for e, c in g.terms.items()})
             for g in only_x]
    polys = [p for p in polys if not p.is_zero()]
    assert polys, "saturated symbol ideal met k[x] trivially"
    g = polys[0]
    for p in polys[1:]:
        g = poly_gcd(g, p)
    g = squarefree_part(g).int_primitive()
    if g.lead()[1] < 0:
        g = g.scale(-1)
    return g


def exponent_bounds(pres, factors, cap=None, check=True):
    """Global b-function and pole-order bound for each denominator factor."""
    out = []
    for f in factors:
        assert not f.is_constant(), "constant factor"
        res = global_bfunction(pres, f, cap=cap, check=check)
        r = max(res.integer_roots) if res.integer_roots else None
        out.append(FactorData(f, res, r))
    return out


def _twisted_partials(ring, factors, ks, max_orders):
    """W[beta] = twisted d^beta as {dexps: RationalFunction coefficient},
    for every beta below max_orders componentwise."""
    n = ring.nx
    zero = RationalFunction(CommPoly.zero(n))
    qs = []
    for i in range(n):
        q = zero
        for f, k in zip(factors, ks):
            if k:
                q = q + RationalFunction(f.derivative(i).scale(k), f)
        qs.append(q)

    def dmul(i, op):
        # left-multiply by the twisted d_i: d_i - q_i
        out = {}
        for dex, r in op.items():
            up = tuple(x + (1 if j == i else 0) for j, x in enumerate(dex))
            _radd(out, up, r)
            _radd(out, dex, r.derivative(i) - qs[i] * r)
        return out

    start = (0,) * n
    table = {start: {start: RationalFunction(CommPoly.constant(n, 1))}}
    frontier = [start]
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                if beta[i] >= max_orders[i]:
                    continue
                up = tuple(x + (1 if j == i else 0)
                           for j, x in enumerate(beta))
                if up in table:
                    continue
                table[up] = dmul(i, table[beta])
                nxt.append(up)
        frontier = nxt
    return table


def _radd(acc, key, r):
    s = acc.get(key)
    s = r if s is None else s + r
    if s.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = s


def _word_expressible(coeffs, f, ring, wordcache):
    """Does sum_beta p_beta(x) d^beta lie in k<x, f d_1, ..., f d_n>?

    That subring is the free left k[x]-module on the ordered words
    (f d_1)^b1 ... (f d_n)^bn, whose top term is f^|beta| d^beta, so a
    top-down elimination decides membership: each division by f^|beta|
    must be exact."""
    n = f.nvars
    remaining = {b: p for b, p in coeffs.items() if not p.is_zero()}
    while remaining:
        beta = max(remaining, key=lambda t: (sum(t), t))
        q = exact_div(remaining[beta], f ** sum(beta))
        if q is None:
            return False
        for dex, p in _word(beta, f, ring, wordcache).items():
            cur = remaining.get(dex, CommPoly.zero(n)) - q * p
            if cur.is_zero():
                remaining.pop(dex, None)
            else:
                remaining[dex] = cur
    return True


def _word(beta, f, ring, cache):
    """Coefficients of the ordered word (f d_1)^b1 ... (f d_n)^bn,
    grouped as {dexps: CommPoly}."""
    got = cache.get(beta)
    if got is not None:
        return got
    n = ring.nx
    if not any(beta):
        op = ring.one()
    else:
        i = max(j for j in range(n) if beta[j])
        prev = tuple(b - (1 if j == i else 0) for j, b in enumerate(beta))
        _word(prev, f, ring, cache)
        fd = WeylElement(ring, {
            tuple(e) + tuple(1 if j == i else 0 for j in range(n)): c
            for e, c in f.terms.items()})
        op = cache[("op", prev)] * fd
    cache[("op", beta)] = op
    grouped = {}
    for e, c in op.terms.items():
        grouped.setdefault(e[n:], {})[e[:n]] = c
    out = {dex: CommPoly(n, t) for dex, t in grouped.items()}
    cache[beta] = out
    return out


def twist_ideal(pres, factors, ks):
    """Generators annihilating f^k . (solutions of I).

    Substitutes d_i -> d_i - sum_j k_j (d_i f_j)/f_j into each generator
    after multiplying by the least power f^m that lands the generator in
    the subring k<x, f d_1, ..., f d_n>, where f = prod f_j.  The result
    has polynomial coefficients."""
    ring = pres.ring
    n = ring.nx
    assert len(factors) == len(ks) and all(k >= 0 for k in ks)
    gens = pres.gens_as_scalars()
    max_orders = [0] * n
    for g in gens:
        for e in g.terms:
            for i in range(n):
                max_orders[i] = max(max_orders[i], e[n + i])
    table = _twisted_partials(ring, factors, ks, max_orders)
    fprod = CommPoly.constant(n, 1)
    for f in factors:
        fprod = fprod * f
    wordcache = {}
    out = []
    for g in gens:
        acc = {}
        for e, c in g.terms.items():
            coeff = RationalFunction(CommPoly(n, {e[:n]: c}))
            for dex, r in table[e[n:]].items():
                _radd(acc, dex, coeff * r)
        if not acc:
            continue
        m = 0
        for r in acc.values():
            t, steps = r.den, 0
            while not t.is_constant():
                piece = poly_gcd(t, fprod)
                assert not piece.is_constant(), \
                    "denominator outside the twist factors"
                t = exact_div(t, piece)
                steps += 1
            m = max(m, steps)
        order_g = max(sum(e[n:]) for e in g.terms)
        while True:
            coeffs = {}
            for dex, r in acc.items():
                cleared = RationalFunction(r.num * fprod ** m, r.den)
                assert cleared.is_poly()
                coeffs[dex] = cleared.num
            if fprod.is_constant() or _word_expressible(coeffs, fprod, ring,
                                                        wordcache):
                break
            m += 1
            assert m <= order_g, "clearing power exceeded the operator order"
        terms = {}
        for dex, p in coeffs.items():
            for e, c in p.terms.items():
                terms[tuple(e) + dex] = c
        out.append(WeylElement(ring, terms))
    return out


def partial_closure(gens):
    """Divide each generator on the left by its polynomial content."""
    out = []
    for g in gens:
        if g.is_zero():
            continue
        n = g.ring.nx
        by_d = {}
        for e, c in g.terms.items():
            by_d.setdefault(e[n:], {})[e[:n]] = c
        polys = [CommPoly(n, t) for t in by_d.values()]
        content = polys[0]
        for p in polys[1:]:
            content = poly_gcd(content, p)
        if content.total_degree() == 0:
            out.append(g)
            continue
        terms = {}
        for dex, tdict in by_d.items():
            q = exact_div(CommPoly(n, tdict), content)
            for e, c in q.terms.items():
                terms[tuple(e) + dex] = c
        out.append(WeylElement(g.ring, terms))
    return out


def rational_solutions(pres, factors=None, cap=None, check=True):
    """Basis of the rational solution space of a holonomic ideal.

    factors overrides the linear factorization of the singular locus; it
    must list the candidate denominator irreducibles."""
    ring = pres.ring
    n = ring.nx
    if check and char_dimension(pres) != n:
        raise NotHolonomicError("input not holonomic")
    if factors is None:
        sing = singular_locus(pres)
        if sing.is_constant():
            factors = []
        else:
            found, residual = factor_linear(sing)
            if not residual.is_constant():
                raise HoloError("factorization incomplete: pass the factor "
                                "list explicitly")
            factors = [f for f, _ in found]
    else:
        factors = [f.monic() for f in factors]

    data = exponent_bounds(pres, factors, cap=cap, check=False)
    if any(d.r is None for d in data):
        # some factor admits no integer exponent: only the zero solution
        return []
    kept = [(d.factor, d.k) for d in data if d.k > 0]
    if not kept:
        psols = polynomial_solutions(pres, cap=cap, check=False)
        return [RationalSolution(p, {}) for p in psols]

    twisted = twist_ideal(pres, [f for f, _ in kept], [k for _, k in kept])
    closed = partial_closure(twisted)
    cpres = ModulePresentation.cyclic(ring, closed)
    if char_dimension(cpres) != n:
        raise HoloError("partial closure not holonomic; supply a manual "
                        "closure")
    psols = polynomial_solutions(cpres, cap=cap, check=False)
    out = []
    for p in psols:
        num = p
        exps = {}
        for f, k in kept:
            e = k
            while e > 0 and divides(f, num):
                num = exact_div(num, f)
                e -= 1
            exps[f] = e
        out.append(RationalSolution(num, exps))
    return out

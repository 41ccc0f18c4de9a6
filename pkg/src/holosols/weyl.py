"""Weyl algebras with exact rational coefficients.

A ring holds commutative variables x_1..x_N and differentiation symbols
d_1..d_M acting on the first M of them (M <= N; the trailing x-variables are
central parameters, which also covers fully commutative polynomial rings as
the M = 0 case).  Elements are kept normally ordered: every monomial is
x^a d^b, stored as one exponent tuple of length N + M, coefficient a Fraction.

An optional homogenizing variable h (one extra slot at the end) turns the
defining relation d_i x_i = x_i d_i + 1 into d_i x_i = x_i d_i + h^2 with h
central, which keeps multiplication graded by total degree.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial

from .polys import CommPoly, RationalFunction


class WeylRing:
    def __init__(self, xnames, dnames=None, homogenized=False):
        if dnames is None:
            dnames = ["d" + x for x in xnames]
        assert len(dnames) <= len(xnames)
        assert len(set(xnames) | set(dnames)) == len(xnames) + len(dnames)
        self.xnames = tuple(xnames)
        self.dnames = tuple(dnames)
        self.homogenized = homogenized
        self.nx = len(xnames)
        self.nd = len(dnames)
        self.width = self.nx + self.nd + (1 if homogenized else 0)

    @property
    def varnames(self):
        names = self.xnames + self.dnames
        return names + ("h",) if self.homogenized else names

    def __eq__(self, other):
        return (isinstance(other, WeylRing)
                and self.xnames == other.xnames
                and self.dnames == other.dnames
                and self.homogenized == other.homogenized)

    def __hash__(self):
        return hash((self.xnames, self.dnames, self.homogenized))

    def __repr__(self):
        tag = ", homogenized" if self.homogenized else ""
        return f"WeylRing({list(self.xnames)}, {list(self.dnames)}{tag})"

    # element constructors

    def zero(self):
        return WeylElement(self, {})

    def one(self):
        return WeylElement(self, {(0,) * self.width: Fraction(1)})

    def constant(self, c):
        c = Fraction(c)
        return WeylElement(self, {(0,) * self.width: c} if c else {})

    def gen(self, name):
        i = self.varnames.index(name)
        e = [0] * self.width
        e[i] = 1
        return WeylElement(self, {tuple(e): Fraction(1)})

    def x(self, i):
        return self.gen(self.xnames[i])

    def d(self, i):
        return self.gen(self.dnames[i])

    def theta(self, i):
        """x_i d_i"""
        e = [0] * self.width
        e[i] = 1
        e[self.nx + i] = 1
        return WeylElement(self, {tuple(e): Fraction(1)})

    def element(self, terms):
        return WeylElement(self, {tuple(e): Fraction(c) for e, c in terms.items() if c})

    def homogenized_ring(self):
        assert not self.homogenized
        return WeylRing(self.xnames, self.dnames, homogenized=True)

    def plain_ring(self):
        assert self.homogenized
        return WeylRing(self.xnames, self.dnames)

    # monomial product with normal reordering; returns {exps: coeff}
    def _mono_mul(self, e1, e2):
        nx, nd = self.nx, self.nd
        a, b = e1[:nx], e1[nx:nx + nd]
        c, d = e2[:nx], e2[nx:nx + nd]
        hdeg = (e1[-1] + e2[-1]) if self.homogenized else 0
        out = {}
        ranges = [range(min(b[i], c[i]) + 1) for i in range(nd)]
        for k in itertools.product(*ranges):
            coeff = 1
            for i in range(nd):
                if k[i]:
                    coeff *= factorial(k[i]) * comb(b[i], k[i]) * comb(c[i], k[i])
            xs = list(a)
            for i in range(nx):
                xs[i] += c[i]
            for i in range(nd):
                xs[i] -= k[i]
            ds = [b[i] - k[i] + d[i] for i in range(nd)]
            e = tuple(xs) + tuple(ds)
            if self.homogenized:
                e = e + (hdeg + 2 * sum(k),)
            out[e] = out.get(e, 0) + coeff
        return out


class WeylElement:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = {e: c for e, c in terms.items() if c}

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, WeylElement)
                and self.ring == other.ring and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        assert self.ring == other.ring
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, Fraction(0)) + c
            if s:
                t[e] = s
            else:
                del t[e]
        return WeylElement(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return WeylElement(self.ring, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        assert self.ring == other.ring
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                for e, k in self.ring._mono_mul(e1, e2).items():
                    s = out.get(e, Fraction(0)) + c1 * c2 * k
                    if s:
                        out[e] = s
                    else:
                        del out[e]
        return WeylElement(self.ring, out)

    def __rmul__(self, other):
        assert isinstance(other, (int, Fraction))
        return self.scale(other)

    def __pow__(self, k):
        r = self.ring.one()
        for _ in range(k):
            r = r * self
        return r

    def commutator(self, other):
        return self * other - other * self

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def max_dorder(self):
        nx, nd = self.ring.nx, self.ring.nd
        return max((sum(e[nx:nx + nd]) for e in self.terms), default=-1)

    def weight(self, wvec):
        """Maximum of w . exps over the terms (the w-order); None when zero.

        wvec covers the x and d slots; a homogenizing slot, if present,
        counts with weight zero.
        """
        if not self.terms:
            return None
        return max(sum(w * e for w, e in zip(wvec, exps)) for exps in self.terms)

    def initial_form(self, wvec):
        """Sum of the terms whose w-weight is maximal."""
        if not self.terms:
            return self
        top = self.weight(wvec)
        return WeylElement(self.ring, {
            e: c for e, c in self.terms.items()
            if sum(w * v for w, v in zip(wvec, e)) == top
        })

    def adjoint(self):
        """Formal adjoint: x_i -> x_i, d_i -> -d_i, order reversed."""
        ring = self.ring
        nx, nd = ring.nx, ring.nd
        out = {}
        for exps, c in self.terms.items():
            a, b = exps[:nx], exps[nx:nx + nd]
            sign = (-1) ** sum(b)
            # normal reordering of d^b x^a
            ranges = [range(min(a[i], b[i]) + 1) for i in range(nd)]
            for k in itertools.product(*ranges):
                coeff = Fraction(sign)
                for i in range(nd):
                    if k[i]:
                        coeff *= factorial(k[i]) * comb(b[i], k[i]) * comb(a[i], k[i])
                xs = list(a)
                ds = list(b)
                for i in range(nd):
                    xs[i] -= k[i]
                    ds[i] -= k[i]
                e = tuple(xs) + tuple(ds)
                if ring.homogenized:
                    e = e + (exps[-1] + 2 * sum(k),)
                s = out.get(e, Fraction(0)) + c * coeff
                if s:
                    out[e] = s
                else:
                    del out[e]
        return WeylElement(ring, out)

    def apply(self, target):
        """Act on a CommPoly or RationalFunction in the x-variables."""
        ring = self.ring
        assert not ring.homogenized
        nx, nd = ring.nx, ring.nd
        if isinstance(target, CommPoly):
            assert target.nvars == nx
            result = CommPoly.zero(nx)
            for exps, c in self.terms.items():
                p = target
                for i in range(nd):
                    for _ in range(exps[nx + i]):
                        p = p.derivative(i)
                if p.is_zero():
                    continue
                mono = CommPoly(nx, {tuple(exps[:nx]): c})
                result = result + mono * p
            return result
        assert isinstance(target, RationalFunction)
        result = RationalFunction(CommPoly.zero(nx))
        for exps, c in self.terms.items():
            p = target
            for i in range(nd):
                for _ in range(exps[nx + i]):
                    p = p.derivative(i)
            if p.is_zero():
                continue
            mono = RationalFunction.from_poly(CommPoly(nx, {tuple(exps[:nx]): c}))
            result = result + mono * p
        return result

    def homogenize(self):
        """Image in the homogenized ring, padded with h to uniform total degree."""
        ring = self.ring
        assert not ring.homogenized
        hring = ring.homogenized_ring()
        if not self.terms:
            return hring.zero()
        m = self.total_degree()
        return WeylElement(hring, {
            e + (m - sum(e),): c for e, c in self.terms.items()
        })

    def dehomogenize(self):
        """Set h = 1."""
        ring = self.ring
        assert ring.homogenized
        pring = ring.plain_ring()
        out = {}
        for e, c in self.terms.items():
            k = e[:-1]
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            else:
                del out[k]
        return WeylElement(pring, out)

    def x_part(self):
        """The element as a CommPoly in the x-variables (requires no d's)."""
        nx = self.ring.nx
        assert self.max_dorder() <= 0
        width = self.ring.width
        return CommPoly(nx, {e[:nx]: c for e, c in self.terms.items()})

    def map_exponents(self, fn, new_ring):
        """Relabel monomials: fn(old exps) -> new exps in new_ring (no reordering)."""
        out = {}
        for e, c in self.terms.items():
            k = tuple(fn(e))
            out[k] = out.get(k, Fraction(0)) + c
        return WeylElement(new_ring, out)

    def render(self):
        from .parser import render_element
        return render_element(self)

    def __repr__(self):
        return f"WeylElement({self.ring!r}, {dict(self.terms)!r})"


def substitute(element, target_ring, x_images, d_images):
    """Algebra map determined by generator images.

    The caller is responsible for the images satisfying the Weyl relations
    ([img d_i, img x_i] = 1, all other pairs commuting); under that condition
    sending x^a d^b to the ordered product of images is a homomorphism.
    """
    ring = element.ring
    assert not ring.homogenized
    result = target_ring.zero()
    pow_cache = {}

    def power(img_key, img, k):
        if (img_key, k) not in pow_cache:
            if k == 0:
                pow_cache[(img_key, k)] = target_ring.one()
            else:
                pow_cache[(img_key, k)] = power(img_key, img, k - 1) * img
        return pow_cache[(img_key, k)]

    for exps, c in element.terms.items():
        term = target_ring.constant(c)
        for i in range(ring.nx):
            if exps[i]:
                term = term * power(("x", i), x_images[i], exps[i])
        for i in range(ring.nd):
            if exps[ring.nx + i]:
                term = term * power(("d", i), d_images[i], exps[ring.nx + i])
        result = result + term
    return result


def fourier(element):
    """x_i -> d_i, d_i -> -x_i (requires a pure Weyl algebra, nx == nd)."""
    ring = element.ring
    assert ring.nx == ring.nd
    return substitute(element, ring,
                      [ring.d(i) for i in range(ring.nx)],
                      [-ring.x(i) for i in range(ring.nd)])

"""Exact commutative polynomial arithmetic over Q.

Multivariate polynomials are stored as sparse maps from exponent tuples to
Fractions.  Univariate polynomials (b-functions) get a dense representation.
Everything here is immutable by convention: no method mutates its operands.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd as int_gcd

Exps = tuple  # exponent tuple, one slot per variable


def _add_tuples(a, b):
    return tuple(x + y for x, y in zip(a, b))


class CommPoly:
    """Polynomial in Q[x_1..x_n], terms: {exponent tuple: Fraction}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[tuple(e)] = c
        self.terms = clean

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        assert self.is_constant()
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def __eq__(self, other):
        return (
            isinstance(other, CommPoly)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, Fraction(0)) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return CommPoly(self.nvars, t)

    def __neg__(self):
        return CommPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = _add_tuples(e1, e2)
                s = t.get(e, Fraction(0)) + c1 * c2
                if s:
                    t[e] = s
                else:
                    del t[e]
        return CommPoly(self.nvars, t)

    __rmul__ = __mul__

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return CommPoly.zero(self.nvars)
        return CommPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k):
        r = CommPoly.constant(self.nvars, 1)
        for _ in range(k):
            r = r * self
        return r

    def derivative(self, i):
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                t[tuple(d)] = t.get(tuple(d), Fraction(0)) + c * e[i]
        return CommPoly(self.nvars, t)

    def evaluate(self, point):
        """Value at a rational point (full substitution)."""
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                for _ in range(k):
                    v *= point[i]
            total += v
        return total

    def substitute_var(self, i, value):
        """Substitute x_i := value (a Fraction), keeping the same nvars."""
        t = {}
        for e, c in self.terms.items():
            v = c * Fraction(value) ** e[i]
            if not v:
                continue
            d = list(e)
            d[i] = 0
            d = tuple(d)
            s = t.get(d, Fraction(0)) + v
            if s:
                t[d] = s
            else:
                del t[d]
        return CommPoly(self.nvars, t)

    def lead(self):
        """Leading (exponent, coeff) under degrevlex; None for the zero polynomial."""
        if not self.terms:
            return None
        e = max(self.terms, key=_drl_key)
        return e, self.terms[e]

    def monic(self):
        if self.is_zero():
            return self
        _, c = self.lead()
        return self.scale(1 / c)

    def int_primitive(self):
        """Integer-primitive associate: integer coefficients, content 1, positive lead."""
        if self.is_zero():
            return self
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // int_gcd(den, c.denominator)
        num = 0
        for c in self.terms.values():
            num = int_gcd(num, abs(c.numerator * (den // c.denominator)))
        p = self.scale(Fraction(den, num))
        if p.lead()[1] < 0:
            p = -p
        return p

    def sort_terms(self):
        return sorted(self.terms.items(), key=lambda t: _drl_key(t[0]), reverse=True)

    def __repr__(self):
        return f"CommPoly({self.nvars}, {dict(self.terms)!r})"


def _drl_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def exact_div(f: CommPoly, g: CommPoly):
    """Exact quotient f/g, or None when g does not divide f."""
    assert not g.is_zero()
    n = f.nvars
    q = CommPoly.zero(n)
    r = f
    ge, gc = g.lead()
    while not r.is_zero():
        re, rc = r.lead()
        d = tuple(a - b for a, b in zip(re, ge))
        if any(x < 0 for x in d):
            return None
        t = CommPoly(n, {d: rc / gc})
        q = q + t
        r = r - t * g
    return q


def divides(g: CommPoly, f: CommPoly):
    return exact_div(f, g) is not None


def _as_univar(p: CommPoly, k):
    """View p as a polynomial in x_k with CommPoly coefficients (x_k cleared)."""
    coeffs = {}
    for e, c in p.terms.items():
        d = list(e)
        deg = d[k]
        d[k] = 0
        cf = coeffs.setdefault(deg, {})
        cf[tuple(d)] = cf.get(tuple(d), Fraction(0)) + c
    return {deg: CommPoly(p.nvars, t) for deg, t in coeffs.items()}


def _from_univar(coeffs, k, nvars):
    t = {}
    for deg, poly in coeffs.items():
        for e, c in poly.terms.items():
            d = list(e)
            d[k] += deg
            t[tuple(d)] = c
    return CommPoly(nvars, t)


def _content_in(p: CommPoly, k):
    """gcd of the x_k-coefficients of p (a polynomial in the other variables)."""
    cs = list(_as_univar(p, k).values())
    g = cs[0]
    for c in cs[1:]:
        g = poly_gcd(g, c)
        if g.is_constant():
            break
    return g


def _prem(f, g, k):
    """Pseudo-remainder of f by g w.r.t. main variable x_k."""
    fu = _as_univar(f, k)
    gu = _as_univar(g, k)
    dg = max(gu)
    lg = gu[dg]
    r = dict(fu)
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        # r := lg*r - lr * x_k^(dr-dg) * g
        new = {}
        for d, c in r.items():
            new[d] = c * lg
        for d, c in gu.items():
            d2 = d + dr - dg
            v = new.get(d2, CommPoly.zero(f.nvars)) - lr * c
            if v.is_zero():
                new.pop(d2, None)
            else:
                new[d2] = v
        new.pop(dr, None)
        r = {d: c for d, c in new.items() if not c.is_zero()}
    return _from_univar(r, k, f.nvars)


def poly_gcd(f: CommPoly, g: CommPoly) -> CommPoly:
    """gcd over Q, normalized integer-primitive with positive leading coefficient.

    Primitive pseudo-remainder sequences, recursing on the largest variable
    actually present.  Constants act as units: gcd(c, p) = 1 for c != 0.
    """
    if f.is_zero():
        return g.int_primitive() if not g.is_zero() else g
    if g.is_zero():
        return f.int_primitive()
    main = -1
    for k in range(f.nvars - 1, -1, -1):
        if f.degree_in(k) > 0 or g.degree_in(k) > 0:
            main = k
            break
    if main < 0:
        return CommPoly.constant(f.nvars, 1)
    if f.degree_in(main) == 0 or g.degree_in(main) == 0:
        # one side is free of the main variable: gcd divides its coefficients
        free, other = (f, g) if f.degree_in(main) == 0 else (g, f)
        return poly_gcd(free, _content_in(other, main))
    cf = _content_in(f, main)
    cg = _content_in(g, main)
    a = exact_div(f, cf)
    b = exact_div(g, cg)
    if (max(_as_univar(a, main)) < max(_as_univar(b, main))):
        a, b = b, a
    while not b.is_zero():
        r = _prem(a, b, main)
        if r.is_zero():
            a, b = b, r
            break
        rc = _content_in(r, main)
        a, b = b, exact_div(r, rc)
    result = exact_div(a, _content_in(a, main)) * poly_gcd(cf, cg)
    return result.int_primitive()


def squarefree_part(p: CommPoly) -> CommPoly:
    """Product of the distinct irreducible factors of p, monic under degrevlex."""
    assert not p.is_zero(), "zero input"
    g = p
    for i in range(p.nvars):
        if p.degree_in(i) > 0:
            g = poly_gcd(g, p.derivative(i))
    q = exact_div(p, g)
    return q.monic()


def factor_linear(p: CommPoly):
    """Split off all monomial and affine-linear factors of p over Q.

    Returns (factors, residual) where factors is a list of
    (monic CommPoly, multiplicity) pairs and residual is the unfactored
    cofactor (constant when the factorization is complete).  The product of
    the factors times the residual equals p up to a nonzero rational unit.

    Linear factors are found by specializing all but one variable along
    deterministic points, reading candidate roots as affine functions of the
    specialization point, and verifying each candidate by exact division.
    """
    assert not p.is_zero()
    n = p.nvars
    factors = []
    work = p

    # split off monomial factors x_i^k
    for i in range(n):
        m = min((e[i] for e in work.terms), default=0)
        if m > 0:
            factors.append((CommPoly.variable(n, i), m))
            work = CommPoly(n, {tuple(a - (m if j == i else 0) for j, a in enumerate(e)): c
                                for e, c in work.terms.items()})

    for ell in _linear_candidates(work):
        mult = 0
        while True:
            q = exact_div(work, ell)
            if q is None:
                break
            work = q
            mult += 1
        if mult:
            factors.append((ell.monic(), mult))

    return factors, work


def _linear_candidates(p: CommPoly):
    """Deterministic candidate affine-linear factors of p (verified by caller)."""
    n = p.nvars
    if p.is_constant():
        return
    main = max(range(n), key=lambda k: (p.degree_in(k) > 0, -k))
    if p.degree_in(main) == 0:
        return
    cont = _content_in(p, main)
    if not cont.is_constant():
        yield from _linear_candidates(cont)
        p = exact_div(p, cont)

    pu = _as_univar(p, main)
    lead = pu[max(pu)]

    base = next(pt for pt in _point_stream(n) if lead.evaluate(pt) != 0)
    uni0 = _specialized_univar(p, main, base)
    roots0 = _rational_roots_of_list(uni0)
    # slope candidates along each other variable
    slopes = []
    for i in range(n):
        if i == main:
            slopes.append(None)
            continue
        if p.degree_in(i) == 0:
            slopes.append({r0: [Fraction(0)] for r0 in roots0})
            continue
        found = None
        for step in itertools.count(1):
            pt = list(base)
            pt[i] = base[i] + step
            if lead.evaluate(pt) == 0:
                continue
            uni = _specialized_univar(p, main, pt)
            roots = _rational_roots_of_list(uni)
            found = {r0: [(r - r0) / step for r in roots] for r0 in roots0}
            break
        slopes.append(found)

    others = [i for i in range(n) if i != main]
    for r0 in roots0:
        pools = [slopes[i][r0] for i in others]
        for combo in itertools.product(*pools):
            # x_main - (r0 + sum slope_i (x_i - base_i))
            t = {(0,) * n: -r0}
            for i, s in zip(others, combo):
                if s:
                    e = [0] * n
                    e[i] = 1
                    t[tuple(e)] = t.get(tuple(e), Fraction(0)) - s
                    t[(0,) * n] = t.get((0,) * n, Fraction(0)) + s * base[i]
            e = [0] * n
            e[main] = 1
            t[tuple(e)] = t.get(tuple(e), Fraction(0)) + 1
            yield CommPoly(n, t)


def _point_stream(n):
    """All nonnegative integer points of Q^n, by growing sup-norm shells."""
    for r in itertools.count():
        for pt in itertools.product(range(r + 1), repeat=n):
            if (max(pt) if pt else 0) == r:
                yield [Fraction(v) for v in pt]


def _specialized_univar(p, main, point):
    """Dense coefficient list of p with every variable except x_main set to point."""
    pu = _as_univar(p, main)
    out = [Fraction(0)] * (max(pu) + 1)
    for d, c in pu.items():
        out[d] = c.evaluate(point)
    while out and not out[-1]:
        out.pop()
    return out


def _rational_roots_of_list(coeffs):
    """All rational roots of a dense univariate coefficient list."""
    if not coeffs or all(not c for c in coeffs):
        return []
    lo = 0
    while not coeffs[lo]:
        lo += 1
    coeffs = coeffs[lo:]
    den = 1
    for c in coeffs:
        den = den * c.denominator // int_gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    content = 0
    for c in ints:
        content = int_gcd(content, c)
    ints = [c // content for c in ints]
    roots = [Fraction(0)] if lo else []
    for pk in _divisors(abs(ints[0])):
        for qk in _divisors(abs(ints[-1])):
            for cand in (Fraction(pk, qk), Fraction(-pk, qk)):
                if cand in roots:
                    continue
                val = Fraction(0)
                for c in reversed(ints):
                    val = val * cand + c
                if val == 0:
                    roots.append(cand)
    return sorted(set(roots))


def _divisors(m):
    assert m > 0
    out = []
    d = 1
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            out.append(m // d)
        d += 1
    return sorted(set(out))


class UnivarPoly:
    """Dense univariate polynomial over Q, lowest degree first."""

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs, var="s"):
        cs = [Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def from_roots(cls, roots, var="s"):
        p = cls([1], var)
        for r in roots:
            p = p * cls([-Fraction(r), 1], var)
        return p

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, UnivarPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return UnivarPoly(a, self.var)

    def __neg__(self):
        return UnivarPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UnivarPoly([c * other for c in self.coeffs], self.var)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs))
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UnivarPoly(out, self.var)

    __rmul__ = __mul__

    def divmod(self, other):
        assert not other.is_zero()
        r = list(self.coeffs)
        q = [Fraction(0)] * max(0, len(r) - len(other.coeffs) + 1)
        d = other.degree()
        lc = other.coeffs[-1]
        while len(r) - 1 >= d and any(r):
            while r and not r[-1]:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            f = r[-1] / lc
            q[k] = f
            for i, c in enumerate(other.coeffs):
                r[k + i] -= f * c
            r.pop()
        return UnivarPoly(q, self.var), UnivarPoly(r, self.var)

    def monic(self):
        if self.is_zero():
            return self
        lc = self.coeffs[-1]
        return UnivarPoly([c / lc for c in self.coeffs], self.var)

    def evaluate(self, x):
        v = Fraction(0)
        for c in reversed(self.coeffs):
            v = v * Fraction(x) + c
        return v

    def derivative(self):
        return UnivarPoly([i * c for i, c in enumerate(self.coeffs)][1:], self.var)

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def shift(self, c):
        """self(s + c)"""
        out = UnivarPoly([], self.var)
        base = UnivarPoly([1], self.var)
        lin = UnivarPoly([Fraction(c), 1], self.var)
        for coeff in self.coeffs:
            out = out + base * coeff
            base = base * lin
        return out

    def rational_roots(self):
        """{root: multiplicity} over Q, plus the rootless residual factor (monic)."""
        assert not self.is_zero()
        roots = {}
        p = self
        k = 0
        while p.coeffs and not p.coeffs[0]:
            p = UnivarPoly(p.coeffs[1:], self.var)
            k += 1
        if k:
            roots[Fraction(0)] = k
        for r in _rational_roots_of_list(list(p.coeffs)):
            if r == 0:
                continue
            m = 0
            while True:
                q, rem = p.divmod(UnivarPoly([-r, 1], self.var))
                if not rem.is_zero():
                    break
                p = q
                m += 1
            if m:
                roots[r] = m
        return roots, p.monic()

    def integer_roots(self):
        roots, _ = self.rational_roots()
        return sorted(int(r) for r in roots if r.denominator == 1)

    def render(self):
        """Factored display when the polynomial splits over Q, else expanded."""
        if self.is_zero():
            return "0"
        roots, resid = self.rational_roots()
        if resid.degree() == 0 and roots:
            parts = []
            for r in sorted(roots):
                base = self.var if r == 0 else f"({self.var}{_signed(-r)})"
                m = roots[r]
                parts.append(base if m == 1 else f"{base}^{m}")
            lead = self.coeffs[-1]
            prefix = "" if lead == 1 else f"{lead}*"
            return prefix + "*".join(parts)
        terms = []
        for i in range(self.degree(), -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(_frac_str(c))
            else:
                v = self.var if i == 1 else f"{self.var}^{i}"
                if c == 1:
                    terms.append(v)
                elif c == -1:
                    terms.append(f"-{v}")
                else:
                    terms.append(f"{_frac_str(c)}*{v}")
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self):
        return f"UnivarPoly({list(self.coeffs)!r})"


def _signed(c):
    return f"+{_frac_str(c)}" if c >= 0 else f"-{_frac_str(-c)}"


def _frac_str(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class RationalFunction:
    """Quotient of CommPolys, reduced, denominator monic under degrevlex."""

    __slots__ = ("num", "den")

    def __init__(self, num: CommPoly, den: CommPoly = None, _reduced=False):
        if den is None:
            den = CommPoly.constant(num.nvars, 1)
        assert not den.is_zero(), "zero denominator"
        if not _reduced:
            if num.is_zero():
                den = CommPoly.constant(num.nvars, 1)
            else:
                g = poly_gcd(num, den)
                if g.total_degree() > 0:
                    num = exact_div(num, g)
                    den = exact_div(den, g)
            lc = den.lead()[1]
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p):
        return cls(p, CommPoly.constant(p.nvars, 1), _reduced=True)

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.is_constant()

    def __eq__(self, other):
        return (isinstance(other, RationalFunction)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFunction(self.num.scale(other), self.den, _reduced=not other == 0)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        assert not self.is_zero()
        return RationalFunction(self.den, self.num)

    def derivative(self, i):
        # (n/d)' = (n'd - nd')/d^2
        return RationalFunction(
            self.num.derivative(i) * self.den - self.num * self.den.derivative(i),
            self.den * self.den,
        )

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

import random
from fractions import Fraction

import pytest

from holosols.bfunctions import (
    global_bfunction,
    integration_bfunction,
    weight_bfunction,
)
from holosols.errors import DegreeCapError, HoloError, NotHolonomicError
from holosols.groebner import (
    ModulePresentation,
    VecElement,
    buchberger,
    initial_module,
    normal_form,
)
from holosols.orders import weight_order
from holosols.polys import CommPoly, UnivarPoly
from holosols.weyl import WeylRing

from conftest import appell_f1_ops, d2_ring


def cyclic(ring, ops):
    return ModulePresentation(ring, 1,
                              [VecElement.from_row(ring, [g]) for g in ops])


def d1_ring():
    return WeylRing(["x"], ["dx"])


def test_weight_bfunction_euler_toy():
    D = d1_ring()
    pres = cyclic(D, [D.theta(0) - 3])
    r = weight_bfunction(pres, [1])
    assert r.b.coeffs == (Fraction(-3), Fraction(1))
    assert r.integer_roots == [3]
    # flipping the weight reflects the root
    r = weight_bfunction(pres, [-1])
    assert r.b.coeffs == (Fraction(3), Fraction(1))
    assert r.integer_roots == [-3]


def test_weight_bfunction_of_polynomial_ring():
    D = d2_ring()
    r = weight_bfunction(cyclic(D, [D.d(0), D.d(1)]), [1, 1])
    assert r.b.coeffs == (Fraction(0), Fraction(1))
    assert r.integer_roots == [0]


def test_weight_bfunction_univariate_euler_polynomials():
    """For D/D p(theta) the (1)-weight b-function is p itself, with
    multiplicities."""
    rng = random.Random(11)
    D = d1_ring()
    th = D.theta(0)
    for _ in range(25):
        roots = [rng.randint(-6, 6) for _ in range(rng.randint(1, 3))]
        p = D.one()
        expected = UnivarPoly([Fraction(1)])
        for a in roots:
            p = p * (th - a)
            expected = expected * UnivarPoly([Fraction(-a), Fraction(1)])
        r = weight_bfunction(cyclic(D, [p]), [1])
        assert r.b.coeffs == expected.monic().coeffs


def test_weight_bfunction_appell_golden():
    D = d2_ring()
    pres = cyclic(D, appell_f1_ops(D, 2, -3, -2, 5))
    r = weight_bfunction(pres, [-1, -2])
    # s (s+7) (s-4)
    assert r.b.coeffs == (Fraction(0), Fraction(-28), Fraction(3), Fraction(1))
    assert r.integer_roots == [-7, 0, 4]


def _weight_normal_form(pres, w, poly):
    """Normal form of poly(sum w_i theta_i) against the initial-form basis
    used by weight_bfunction."""
    ring = pres.ring
    u = [-wi for wi in w]
    v = list(w)
    forms = initial_module(pres.rows, u, v, ring=ring)
    gb = buchberger(forms, weight_order(ring, u, v), graded=True)
    s_op = ring.zero()
    for i, wi in enumerate(w):
        s_op = s_op + ring.theta(i).scale(wi)
    val = ring.zero()
    power = ring.one()
    for c in poly.coeffs:
        val = val + power.scale(c)
        power = power * s_op
    return normal_form(val, gb)


def test_weight_bfunction_membership_and_minimality():
    """b(s_op) lies in the initial module; no proper factor does."""
    D = d2_ring()
    pres = cyclic(D, appell_f1_ops(D, 2, -3, -2, 5))
    w = [-1, -2]
    r = weight_bfunction(pres, w)
    assert _weight_normal_form(pres, w, r.b).is_zero()
    assert r.integer_roots == [-7, 0, 4]
    for drop in r.integer_roots:
        partial = UnivarPoly([Fraction(1)])
        for a in r.integer_roots:
            if a != drop:
                partial = partial * UnivarPoly([Fraction(-a), Fraction(1)])
        assert not _weight_normal_form(pres, w, partial).is_zero()


def test_integration_bfunction_toys():
    D = d1_ring()
    r = integration_bfunction(cyclic(D, [D.d(0)]), [1])
    assert r.b.coeffs == (Fraction(-1), Fraction(1))
    r = integration_bfunction(cyclic(D, [D.x(0)]), [1])
    assert r.b.coeffs == (Fraction(0), Fraction(1))
    # x^a k[x] shifts the root by a
    for a in range(6):
        r = integration_bfunction(cyclic(D, [D.theta(0) - a]), [1])
        assert r.b.coeffs == (Fraction(-a - 1), Fraction(1))


def test_integration_bfunction_componentwise():
    D = d1_ring()
    th = D.theta(0)
    rows = [
        VecElement(D, 2, {(0, e): c for e, c in (th - 1).terms.items()}),
        VecElement(D, 2, {(1, e): c for e, c in (th - 3).terms.items()}),
    ]
    r = integration_bfunction(ModulePresentation(D, 2, rows), [1])
    # least common multiple of the per-component answers s-2 and s-4
    assert r.b.coeffs == (Fraction(8), Fraction(-6), Fraction(1))
    assert r.integer_roots == [2, 4]


def test_integration_bfunction_appell_golden():
    D = d2_ring()
    pres = cyclic(D, appell_f1_ops(D, -1, 4, 2, -3))
    r = integration_bfunction(pres, [1, 2])
    # (s+5) (s-2) (s-5)
    assert r.b.coeffs == (Fraction(50), Fraction(-25), Fraction(-2),
                          Fraction(1))
    assert r.integer_roots == [-5, 2, 5]


def test_integration_bfunction_localized_dual_presentation():
    """The presentation of the x-localized dual of F1(2,-3,-2,5) by two
    theta-form operators."""
    D = d2_ring()
    dy = D.d(1)
    x = D.x(0)
    tx, ty = D.theta(0), D.theta(1)
    g1 = (tx * ty + ty * ty + ty.scale(8) + tx.scale(2) + 12) \
        - (tx + ty + 4) * dy
    g2 = (tx * ty + tx.scale(2) + ty.scale(7) + 14) - (tx + 10) * x * dy
    r = integration_bfunction(cyclic(D, [g1, g2]), [1, 2])
    # (s+12) (s+5) (s+2)
    assert r.b.coeffs == (Fraction(120), Fraction(94), Fraction(19),
                          Fraction(1))
    assert r.integer_roots == [-12, -5, -2]


def test_global_bfunction_linear():
    D = d1_ring()
    r = global_bfunction(cyclic(D, [D.d(0)]), CommPoly.variable(1, 0))
    assert r.b.coeffs == (Fraction(1), Fraction(1))


def test_global_bfunction_plane_quadric():
    D = d2_ring()
    f = CommPoly(2, {(2, 0): 1, (0, 2): 1})
    r = global_bfunction(cyclic(D, [D.d(0), D.d(1)]), f)
    assert r.b.coeffs == (Fraction(1), Fraction(2), Fraction(1))
    assert r.integer_roots == [-1]


def test_global_bfunction_quadric_four_vars():
    n = 4
    D = WeylRing([f"x{i}" for i in range(1, n + 1)],
                 [f"dx{i}" for i in range(1, n + 1)])
    f = CommPoly(n, {tuple(2 if j == i else 0 for j in range(n)): 1
                     for i in range(n)})
    r = global_bfunction(cyclic(D, [D.d(i) for i in range(n)]), f)
    assert r.b.coeffs == (Fraction(2), Fraction(3), Fraction(1))
    assert r.integer_roots == [-2, -1]


def test_global_bfunction_cusp():
    D = d2_ring()
    f = CommPoly(2, {(3, 0): 1, (0, 2): -1})
    r = global_bfunction(cyclic(D, [D.d(0), D.d(1)]), f)
    # (s+1) (s+5/6) (s+7/6); only -1 is integral
    assert r.b.coeffs == (Fraction(35, 36), Fraction(107, 36), Fraction(3),
                          Fraction(1))
    assert r.integer_roots == [-1]


def test_not_holonomic_is_rejected():
    D = d2_ring()
    pres = cyclic(D, [D.theta(0)])
    with pytest.raises(NotHolonomicError):
        weight_bfunction(pres, [1, 1])
    with pytest.raises(NotHolonomicError):
        integration_bfunction(pres, [1, 1])


def test_degree_cap_instead_of_looping():
    # with the holonomicity check disabled the search must still terminate
    D = d2_ring()
    pres = cyclic(D, [D.theta(0)])
    with pytest.raises(DegreeCapError):
        weight_bfunction(pres, [1, 1], cap=6, check=False)


def test_global_bfunction_rejects_zero_polynomial():
    D = d2_ring()
    with pytest.raises(HoloError):
        global_bfunction(cyclic(D, [D.d(0), D.d(1)]), CommPoly.zero(2))

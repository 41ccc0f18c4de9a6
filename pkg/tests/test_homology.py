"""Duality, strict resolutions, and Ext dimension tables."""

import random
from fractions import Fraction

import pytest

from holosols.bfunctions import integration_bfunction
from holosols.errors import MissingPresentationError, NotHolonomicError
from holosols.groebner import ModulePresentation, buchberger, holonomic_rank
from holosols.homology import (ExtTable, brute_force_solutions, d_ext,
                               eta_transform, external_product,
                               holonomic_dual, integration_to_origin,
                               poly_ext, ratl_ext, restriction_to_origin,
                               strict_resolution)
from holosols.orders import drl_order
from holosols.polysols import polynomial_solutions
from holosols.weyl import WeylRing

from conftest import appell_f1_ops, d2_ring


def cyclic(ring, ops):
    return ModulePresentation.cyclic(ring, ops)


def d1():
    D = WeylRing(["x"])
    return D, D.x(0), D.d(0), D.theta(0)


def gb_keys(pres):
    """Reduced Groebner basis of a rank-1 presentation, as hashable data."""
    assert pres.rank == 1
    order = drl_order(pres.ring)
    gb = buchberger(pres.rows, order)
    return sorted(frozenset(g.terms.items()) for g in gb.elements)


def f1_pres(ring, a, b, bp, c):
    return cyclic(ring, appell_f1_ops(ring, a, b, bp, c))


# duality


def test_dual_of_polynomial_ring_is_itself():
    D, x, dx, th = d1()
    dual = holonomic_dual(cyclic(D, [dx]))
    assert gb_keys(dual) == gb_keys(cyclic(D, [dx]))


def test_dual_of_delta_module():
    D, x, dx, th = d1()
    dual = holonomic_dual(cyclic(D, [x]))
    assert gb_keys(dual) == gb_keys(cyclic(D, [x]))


def test_dual_exchanges_theta_exponents():
    # tau(theta - a) = -theta - 1 - a, so the dual of D/D(theta-3) is
    # D/D(theta+4) and vice versa
    D, x, dx, th = d1()
    dual = holonomic_dual(cyclic(D, [th - 3]))
    assert gb_keys(dual) == gb_keys(cyclic(D, [th + 4]))
    back = holonomic_dual(dual)
    assert gb_keys(back) == gb_keys(cyclic(D, [th - 3]))


def test_dual_rejects_non_holonomic():
    D = d2_ring()
    with pytest.raises(NotHolonomicError):
        holonomic_dual(cyclic(D, [D.d(0)]))


def test_double_dual_random_theta_ideals():
    D, x, dx, th = d1()
    rng = random.Random(7)
    for _ in range(12):
        op = D.one()
        for _ in range(rng.randint(1, 3)):
            op = op * (th - D.constant(rng.randint(-4, 4)))
        m = cyclic(D, [op])
        dd = holonomic_dual(holonomic_dual(m))
        assert gb_keys(dd) == gb_keys(m)
        assert holonomic_rank(dd) == holonomic_rank(m)


def test_appell_double_dual():
    D = d2_ring()
    m = f1_pres(D, 2, -3, -2, 5)
    dd = holonomic_dual(holonomic_dual(m))
    assert gb_keys(dd) == gb_keys(m)
    assert holonomic_rank(dd) == 3


# strict resolutions


def test_strict_resolution_of_appell_dual():
    # this resolution underlies the weight (1,2) ext table computation
    D = d2_ring()
    dual = holonomic_dual(f1_pres(D, 2, -3, -2, 5))
    res = strict_resolution(dual, (1, 2), 3)
    assert res.ranks() == [1, 2, 1, 0]
    assert res.shifts == [[0], [1, 0], [1], []]
    res.check()


def test_strict_resolution_composition_zero_random():
    D, x, dx, th = d1()
    rng = random.Random(23)
    for _ in range(8):
        op = (th - D.constant(rng.randint(-3, 3))) * \
            (th - D.constant(rng.randint(-3, 3)))
        res = strict_resolution(cyclic(D, [op]), (1,), 2)
        res.check()


# integration and restriction to the origin


def test_integration_table_toys():
    D, x, dx, th = d1()
    assert integration_to_origin(cyclic(D, [dx])).dims == {0: 1, -1: 0}
    assert integration_to_origin(cyclic(D, [x])).dims == {0: 0, -1: 1}
    # 1/x integrates with a residue: both degrees survive
    assert integration_to_origin(cyclic(D, [th + 1])).dims == {0: 1, -1: 1}
    assert integration_to_origin(cyclic(D, [th - 3])).dims == {0: 0, -1: 0}


def test_restriction_table_toys():
    D, x, dx, th = d1()
    assert restriction_to_origin(cyclic(D, [dx])).dims == {0: 1, -1: 0}
    assert restriction_to_origin(cyclic(D, [x])).dims == {0: 0, -1: 1}
    assert restriction_to_origin(cyclic(D, [th + 1])).dims == {0: 0, -1: 0}
    assert restriction_to_origin(cyclic(D, [th - 3])).dims == {0: 1, -1: 1}


def test_integration_bfunction_of_appell_dual():
    D = d2_ring()
    dual = holonomic_dual(f1_pres(D, 2, -3, -2, 5))
    res = integration_bfunction(dual, (1, 2))
    assert res.integer_roots == [-5, 2, 5]


def test_appell_dual_integration_complex_golden():
    """Weight (1,2) truncated integration complex behind the F1 ext table."""
    D = d2_ring()
    dual = holonomic_dual(f1_pres(D, 2, -3, -2, 5))
    t = integration_to_origin(dual, (1, 2))
    assert t.complex.dims == [12, 28, 16, 0]
    assert t.complex.euler() == 0
    assert t.complex.homology() == [1, 2, 1, 0]
    assert t.dims == {0: 1, -1: 2, -2: 1}


def test_complex_euler_matches_homology_euler():
    # rank-nullity at every stage: alternating sums agree
    D, x, dx, th = d1()
    mods = [cyclic(D, [dx]), cyclic(D, [x]), cyclic(D, [th + 1]),
            cyclic(D, [(th - 2) * (th + 5)])]
    for m in mods:
        t = integration_to_origin(m)
        h = t.complex.homology()
        lhs = sum((-1) ** k * d for k, d in enumerate(t.complex.dims))
        rhs = sum((-1) ** k * d for k, d in enumerate(h))
        assert lhs == rhs


# ext tables


def test_poly_ext_toys():
    D, x, dx, th = d1()
    assert poly_ext(cyclic(D, [dx])) == {0: 1, 1: 0}
    assert poly_ext(cyclic(D, [x])) == {0: 0, 1: 1}
    assert poly_ext(cyclic(D, [th + 1])) == {0: 0, 1: 0}
    assert poly_ext(cyclic(D, [th - 3])) == {0: 1, 1: 1}


def test_appell_poly_ext_golden():
    D = d2_ring()
    t = poly_ext(f1_pres(D, 2, -3, -2, 5), (1, 2))
    assert t == {0: 1, 1: 2, 2: 1}
    assert t.euler() == 0
    assert t.bfunction.integer_roots == [-5, 2, 5]


def test_poly_ext_degree_zero_is_solution_dimension():
    D, x, dx, th = d1()
    rng = random.Random(41)
    for _ in range(10):
        op = D.one()
        for _ in range(rng.randint(1, 3)):
            op = op * (th - D.constant(rng.randint(-3, 5)))
        m = cyclic(D, [op])
        assert poly_ext(m)[0] == len(polynomial_solutions(m))


def test_d_ext_toys():
    D, x, dx, th = d1()
    kx = cyclic(D, [dx])
    delta = cyclic(D, [x])
    loc = cyclic(D, [th + 1])
    assert d_ext(kx, kx) == {0: 1, 1: 0}
    assert d_ext(kx, loc) == {0: 1, 1: 1}
    assert d_ext(delta, delta) == {0: 1, 1: 0}
    assert d_ext(delta, loc) == {0: 0, 1: 0}
    # Hom(1/x module, delta module) is spanned by 1/x -> delta
    assert d_ext(loc, delta) == {0: 1, 1: 1}
    assert d_ext(loc, loc) == {0: 1, 1: 1}


def test_d_ext_against_polynomial_coefficients():
    # taking N = k[x] must reproduce poly_ext
    D, x, dx, th = d1()
    kx = cyclic(D, [dx])
    for ops in ([dx], [x], [th + 1], [th - 3]):
        assert d_ext(cyclic(D, ops), kx).dims == poly_ext(cyclic(D, ops)).dims


def test_ratl_ext_requires_presentation():
    D, x, dx, th = d1()
    m = cyclic(D, [dx])
    with pytest.raises(MissingPresentationError):
        ratl_ext(m, None)


def test_ratl_ext_delegates():
    D, x, dx, th = d1()
    m = cyclic(D, [th - 3])
    loc = cyclic(D, [th + 1])
    t = ratl_ext(m, None, localized=loc)
    assert t.dims == d_ext(m, loc).dims


def test_external_product_and_eta_shapes():
    D, x, dx, th = d1()
    prod = external_product(cyclic(D, [dx]), cyclic(D, [x]))
    assert prod.ring.nx == 2 and prod.rank == 1 and len(prod.rows) == 2
    tw = eta_transform(prod)
    assert tw.ring is prod.ring
    # the twist is an automorphism: holonomicity (hence rank) is preserved
    assert holonomic_rank(tw) is not None


# brute force solution search


def test_brute_force_toy_solutions():
    D, x, dx, th = d1()
    kx = cyclic(D, [dx])
    assert [s.terms for s in brute_force_solutions(cyclic(D, [th - 3]), kx, 1)] \
        == [{(3, 0): Fraction(1)}]
    assert brute_force_solutions(cyclic(D, [x]), kx, 0) == []
    # 1 in D/D(x dx + 1) is the class of 1/x; x maps the generator of k[x] onto it
    loc = cyclic(D, [th + 1])
    assert [s.terms for s in brute_force_solutions(kx, loc, 1)] \
        == [{(1, 0): Fraction(1)}]


def test_brute_force_appell_polynomial():
    """The hom into k[x,y] is the polynomial solution, up to scalar."""
    D = d2_ring()
    m = f1_pres(D, 2, -3, -2, 5)
    target = cyclic(D, [D.d(0), D.d(1)])
    sols = brute_force_solutions(m, target, 1)
    assert len(sols) == 1
    got = sols[0].terms
    want = polynomial_solutions(m, [-1, -2]).solutions[0]
    ratio = got[(3, 2, 0, 0)] / want.terms[(3, 2)]
    assert all(got[e + (0, 0)] == c * ratio for e, c in want.terms.items())
    assert len(got) == len(want.terms)

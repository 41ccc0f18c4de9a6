"""Expression parsing, problem files, and the canonical printer."""

import random
from fractions import Fraction

import pytest

from holosols.errors import MissingPresentationError, ParseError
from holosols.parser import (parse_operator, parse_problem_file,
                             render_element, render_poly)
from holosols.polys import CommPoly
from holosols.weyl import WeylRing

from conftest import appell_f1_ops, d2_ring


def test_normal_ordering_on_parse():
    D = d2_ring()
    assert parse_operator("dx*x", D) == D.x(0) * D.d(0) + D.one()
    assert render_element(parse_operator("dx*x", D)) == "x*dx + 1"


def test_theta_sugar():
    D = d2_ring()
    assert parse_operator("tx", D) == D.x(0) * D.d(0)
    assert parse_operator("ty^2 + tx", D) == \
        D.theta(1) * D.theta(1) + D.theta(0)


def test_rational_coefficients_and_signs():
    D = d2_ring()
    e = parse_operator("-3/4*x^2 + dy - 1/2", D)
    assert e.terms[(2, 0, 0, 0)] == Fraction(-3, 4)
    assert e.terms[(0, 0, 0, 1)] == 1
    assert e.terms[(0, 0, 0, 0)] == Fraction(-1, 2)


def test_unicode_minus_accepted():
    D = d2_ring()
    assert parse_operator("x − y", D) == D.x(0) - D.x(1)


def test_product_is_left_to_right():
    # (x - y)*dx*dy multiplies in order, no reordering surprises
    D = d2_ring()
    e = parse_operator("(x - y)*dx*dy", D)
    assert e == (D.x(0) - D.x(1)) * D.d(0) * D.d(1)


def test_appell_generator_matches_builder():
    D = d2_ring()
    want = appell_f1_ops(D, 2, -3, -2, 5)
    got = parse_operator(
        "tx*(tx + ty + 4) - x*(tx + ty + 2)*(tx - 3)", D)
    assert got == want[0]


def test_parse_error_positions():
    D = d2_ring()
    with pytest.raises(ParseError) as ex:
        parse_operator("x + $", D)
    assert "line 1" in str(ex.value) and "column 5" in str(ex.value)
    with pytest.raises(ParseError) as ex:
        parse_operator("x +\n  z", D)
    assert "unknown identifier 'z'" in str(ex.value)
    assert "line 2" in str(ex.value)


def test_parse_error_on_bad_exponent():
    D = d2_ring()
    for src in ("x^(2)", "x^y", "x^1/2"):
        with pytest.raises(ParseError):
            parse_operator(src, D)


def test_parse_error_on_trailing_input():
    D = d2_ring()
    with pytest.raises(ParseError):
        parse_operator("x y", D)
    with pytest.raises(ParseError) as ex:
        parse_operator("x +", D)
    assert "end of input" in str(ex.value)


def test_render_parse_round_trip_random():
    rng = random.Random(99)
    D = d2_ring()
    for _ in range(150):
        terms = {}
        for _ in range(rng.randint(1, 6)):
            e = tuple(rng.randint(0, 3) for _ in range(4))
            terms[e] = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
        el = D.element({e: c for e, c in terms.items() if c})
        if el.is_zero():
            continue
        assert parse_operator(render_element(el), D) == el


def test_render_zero_and_constants():
    D = d2_ring()
    assert render_element(D.zero()) == "0"
    assert render_element(D.constant(Fraction(-7, 3))) == "-7/3"
    assert render_element(D.one() + D.x(0)) == "x + 1"


def test_render_poly_orders_terms():
    p = CommPoly(2, {(0, 1): Fraction(-1), (2, 0): Fraction(1),
                     (1, 1): Fraction(3)})
    assert render_poly(p, ["x", "y"]) == "x^2 + 3*x*y - y"


# problem files


GOOD = """\
# a comment
ring x, y;

ideal f1 = tx*(tx + ty + 4) - x*(tx + ty + 2)*(tx - 3),
           dx*dy;
poly p = x^2 - y;
module m = [[dx, x], [0, dy]];
"""


def test_problem_file_statements():
    pf = parse_problem_file(GOOD)
    assert pf.ring.xnames == ("x", "y")
    assert len(pf.ideal("f1")) == 2
    assert pf.polys["p"].terms == {(2, 0): 1, (0, 1): -1}
    m = pf.modules["m"]
    assert m.rank == 2 and len(m.rows) == 2
    assert m.rows[0].component(1) == pf.ring.x(0)


def test_problem_file_first_ideal_default():
    pf = parse_problem_file("ring x;\nideal a = dx;\nideal b = x;\n")
    assert pf.ideal() is pf.ideal("a")
    assert pf.ideal_presentation().rank == 1


def test_problem_file_requires_ring_first():
    with pytest.raises(ParseError):
        parse_problem_file("ideal a = dx;\nring x;\n")
    with pytest.raises(ParseError):
        parse_problem_file("ring x;\nring y;\nideal a = dx;\n")


def test_problem_file_requires_some_presentation():
    with pytest.raises(ParseError):
        parse_problem_file("ring x;\npoly p = x;\n")
    pf = parse_problem_file("ring x;\nmodule m = [[dx]];\n")
    with pytest.raises(MissingPresentationError):
        pf.ideal()


def test_problem_file_rejects_d_in_poly():
    with pytest.raises(ParseError) as ex:
        parse_problem_file("ring x;\npoly p = x*dx;\n")
    assert "differentiation" in str(ex.value)


def test_problem_file_rejects_duplicate_names():
    with pytest.raises(ParseError):
        parse_problem_file("ring x;\nideal a = dx;\nideal a = x;\n")


def test_problem_file_rejects_ragged_module():
    with pytest.raises(ParseError):
        parse_problem_file("ring x;\nmodule m = [[dx, x], [dx]];\n")

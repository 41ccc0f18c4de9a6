"""Shared builders for the Appell F1 hypergeometric systems used in tests."""

from fractions import Fraction

from holosols.weyl import WeylRing


def d2_ring():
    return WeylRing(["x", "y"])


def appell_f1_ops(ring, a, b, bp, c):
    """The three standard generators of the Appell F1(a,b,b',c) ideal."""
    x, y = ring.x(0), ring.x(1)
    dx, dy = ring.d(0), ring.d(1)
    tx, ty = ring.theta(0), ring.theta(1)
    L1 = tx * (tx + ty + (c - 1)) - x * (tx + ty + a) * (tx + b)
    L2 = ty * (tx + ty + (c - 1)) - y * (tx + ty + a) * (ty + bp)
    L3 = (x - y) * dx * dy - bp * dx + b * dy
    return [L1, L2, L3]


def appell_f1_two_ops(ring, a, b, bp, c):
    """Only the theta-form generators L1, L2 (the rank-3 system of the
    rational-solutions worked example uses just these)."""
    return appell_f1_ops(ring, a, b, bp, c)[:2]


def frac(n, d=1):
    return Fraction(n, d)

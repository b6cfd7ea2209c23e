from __future__ import annotations

import math

import pytest

from conftest import E, exact_point
from danlab.errors import NotOnSurface, NotSquarefree, ZeroPolynomial
from danlab.poly import Polynomial, poly_derivative, poly_eval, poly_gcd, squarefree_check
from danlab.scalars import ExactComplex, format_scalar, parse_scalar
from danlab.surface import exhaustion, growth_constants, point_new, surface_new


def P(text):
    return Polynomial.parse(text)


@pytest.mark.parametrize("text,z,val", [("-1,0,1", 0, -1), ("-1,0,1", 1, 0), ("0,-1,0,1", 2, 6)])
def test_poly_eval(text, z, val):
    assert poly_eval(P(text), E(z)) == E(val)


@pytest.mark.parametrize("text,k,expected", [("-1,0,1", 1, "0,2"), ("-1,0,1", 3, ""), ("0,-1,0,1", 2, "0,6")])
def test_poly_derivative(text, k, expected):
    assert poly_derivative(P(text), k) == P(expected)


def test_derivative_of_high_order_is_zero():
    assert poly_derivative(P("-1,0,1"), 3).is_zero


@pytest.mark.parametrize("text,ok", [("-1,0,1", True), ("0,0,1", False), ("0,-1,0,1", True)])
def test_squarefree(text, ok):
    assert squarefree_check(P(text)) is ok


def test_squarefree_zero_polynomial():
    with pytest.raises(ZeroPolynomial):
        squarefree_check(P(""))


def test_gcd_of_cubic_and_derivative_is_constant():
    Q = P("0,-1,0,1")
    assert poly_gcd(Q, Q.derivative()).degree == 0


@pytest.mark.parametrize("text,rho,alpha,beta,M", [
    ("-1,0,1", 2, 0.5, 2, 5),
    ("0,1", 1, 0.5, 2, 1),
    ("0,-1,0,1", 2, 0.5, 2, 10),
])
def test_growth_constants(text, rho, alpha, beta, M):
    b = growth_constants(P(text))
    assert (b.rho, b.alpha, b.beta, b.M) == (rho, alpha, beta, M)


def test_surface_new():
    assert surface_new("-1,0,1").d == 2
    assert surface_new("0,1").d == 1
    with pytest.raises(NotSquarefree):
        surface_new("0,0,1")
    with pytest.raises(ZeroPolynomial):
        surface_new("0")


def test_point_new(quad):
    exact_point(quad, 1, -1, 0)
    exact_point(quad, 5, 0, 1)
    with pytest.raises(NotOnSurface):
        exact_point(quad, 1, 1, 0)


def test_point_round_trip(quad):
    p = exact_point(quad, E(1, 2), E(-1, 2) * 0 + E(-1, 0) / E(1, 2), 0)
    assert (p.x, p.y, p.z) == (E(1, 2), E(-1) / E(1, 2), E(0))


def test_approx_membership_tolerance(quad):
    point_new(quad, 1.0 + 1e-12, -1.0, 0.0)
    with pytest.raises(NotOnSurface):
        point_new(quad, 1.0 + 1e-6, -1.0, 0.0)


def test_exhaustion(quad):
    assert exhaustion(exact_point(quad, 1, -1, 0)) == 1
    assert exhaustion(exact_point(quad, 5, 0, 1)) == 5
    t = 3
    assert exhaustion(exact_point(quad, 1 - t * t, -1, t)) == 8


def test_scalar_text_round_trip():
    for v in (E(1, 2) / 3, E(-7) / 5, E(0, -1)):
        assert parse_scalar(format_scalar(v)) == v
    assert parse_scalar("0.5") == 0.5 and not isinstance(parse_scalar("0.5"), ExactComplex)
    assert P("−1,0,1") == P("-1,0,1")


def test_exact_modulus_is_float_of_exact_square():
    assert abs(E(3, 4)) == 5.0
    assert math.isclose(abs(E(1, 1)), math.sqrt(2))

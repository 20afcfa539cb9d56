"""Ring and field arithmetic over structure-constant presentations."""

import random
from fractions import Fraction

import pytest

import richlines as rl
from richlines.errors import (
    BasisMismatchError,
    InvalidParameterError,
    InvalidPolynomialError,
    ZeroDivisorError,
)
from richlines.numberfield import (
    Element,
    RationalElement,
    basis_from_spec,
    basis_vector,
    divide,
    embed,
    integer_inverse,
    zero,
)


def rand_element(rng, basis, bound=50):
    return Element(basis, [rng.randint(-bound, bound) for _ in range(basis.degree)])


# ---------------------------------------------------------------------------
# basis construction


def test_power_basis_x2_minus_2(sqrt2):
    assert sqrt2.degree == 2
    # theta^2 = 2, so l2*l2 = 2*l1
    assert sqrt2.structure_constants[1][1] == (2, 0)
    assert sqrt2.c_lambda == 2


def test_power_basis_x3_minus_2(cbrt2):
    assert cbrt2.degree == 3
    # x^4 reduces to 2x: l3*l3 = 2*l2
    assert cbrt2.structure_constants[2][2] == (0, 2, 0)
    assert cbrt2.c_lambda == 2


def test_integers_basis(integers):
    assert integers.degree == 1
    assert integers.structure_constants == (((1,),),)
    assert integers.c_lambda == 1


def test_quadratic_variants():
    k5 = rl.build_quadratic_basis(5)
    assert k5.structure_constants[1][1] == (5, 0)
    assert k5.c_lambda == 5
    gauss = rl.build_quadratic_basis(-1)
    assert gauss.structure_constants[1][1] == (-1, 0)


def test_quadratic_rejects_degenerate_k():
    with pytest.raises(InvalidParameterError):
        rl.build_quadratic_basis(0)
    with pytest.raises(InvalidParameterError):
        rl.build_quadratic_basis(1)


def test_power_basis_rejects_bad_polynomials():
    with pytest.raises(InvalidPolynomialError):
        rl.build_power_basis([])
    with pytest.raises(InvalidPolynomialError):
        rl.build_power_basis([1.5, 0])


def test_power_basis_products_match_polynomial_reduction():
    # independent check: reduce x^(i+j) mod x^4 - x - 1 by long division
    p = [-1, -1, 0, 0]
    basis = rl.build_power_basis(p)
    d = 4

    def reduce_power(k):
        poly = [0] * (k + 1)
        poly[k] = 1
        while len(poly) > d:
            lead = poly.pop()
            if lead:
                for i in range(d):
                    poly[len(poly) - d + i] -= lead * p[i]
        poly += [0] * (d - len(poly))
        return tuple(poly)

    for i in range(d):
        for j in range(d):
            prod = basis_vector(basis, i) * basis_vector(basis, j)
            assert prod.coords == reduce_power(i + j)


# ---------------------------------------------------------------------------
# element arithmetic


def test_add_sub_neg(sqrt2):
    a = Element(sqrt2, (1, 2))
    b = Element(sqrt2, (3, -1))
    assert (a + b).coords == (4, 1)
    assert (a + (-a)).coords == (0, 0)
    assert (a - a).is_zero()


def test_mul_examples(sqrt2, cbrt2):
    one_plus_rt2 = Element(sqrt2, (1, 1))
    assert (one_plus_rt2 * one_plus_rt2).coords == (3, 2)
    assert (one_plus_rt2 * zero(sqrt2)).is_zero()
    theta = Element(cbrt2, (0, 1, 0))
    theta2 = Element(cbrt2, (0, 0, 1))
    assert (theta * theta2).coords == (2, 0, 0)


def test_basis_mismatch(sqrt2, integers):
    with pytest.raises(BasisMismatchError):
        Element(sqrt2, (1, 0)) + Element(integers, (1,))


def test_divide_self_gives_unity(sqrt2, cbrt2):
    for basis in (sqrt2, cbrt2):
        a = Element(basis, [3] + [1] * (basis.degree - 1))
        one = divide(a, a)
        assert one.coords[0] == 1
        assert all(c == 0 for c in one.coords[1:])


def test_divide_example_sqrt2(sqrt2):
    # 1/(1+sqrt2) = -1+sqrt2
    q = divide(Element(sqrt2, (1, 0)), Element(sqrt2, (1, 1)))
    assert q.coords == (Fraction(-1), Fraction(1))
    assert (q * Element(sqrt2, (1, 1))).coords == (Fraction(1), Fraction(0))


def test_divide_zero_numerator(sqrt2):
    q = divide(zero(sqrt2), Element(sqrt2, (2, 3)))
    assert q.is_zero()


def test_divide_by_zero(sqrt2):
    with pytest.raises(ZeroDivisionError):
        divide(Element(sqrt2, (1, 0)), zero(sqrt2))


def test_reducible_polynomial_surfaces_as_zero_divisor():
    # x^2 - 1 is reducible; 1 + theta is a zero divisor
    basis = rl.build_power_basis([-1, 0])
    with pytest.raises(ZeroDivisorError):
        divide(Element(basis, (1, 0)), Element(basis, (1, 1)))


def test_integer_inverse_cached(sqrt2):
    q, delta = integer_inverse(sqrt2, (1, 1))
    # (1+sqrt2)^-1 = -1+sqrt2, already integral
    prod = sqrt2.mul_coords(q, (1, 1))
    assert prod == (delta, 0)
    assert integer_inverse(sqrt2, (1, 1)) is not None  # cache hit path


def test_rational_element_normalization(sqrt2):
    a = RationalElement(sqrt2, (Fraction(2, 4), Fraction(3)))
    assert a.coords == (Fraction(1, 2), Fraction(3))
    assert not a.is_integral()
    with pytest.raises(InvalidParameterError):
        a.to_element()


# ---------------------------------------------------------------------------
# embedding (diagnostic only)


def test_embed_values(integers, sqrt2):
    assert embed(Element(integers, (7,))) == 7.0
    assert abs(embed(Element(sqrt2, (1, 1))) - 2.41421356) < 1e-7
    assert embed(zero(sqrt2)) == 0.0


def test_embed_is_approximately_multiplicative(cbrt2):
    rng = random.Random(11)
    for _ in range(100):
        a = rand_element(rng, cbrt2, bound=1000)
        b = rand_element(rng, cbrt2, bound=1000)
        lhs = embed(a * b)
        rhs = embed(a) * embed(b)
        tol = 1e-6 * (1 + abs(embed(a))) * (1 + abs(embed(b)))
        assert abs(lhs - rhs) <= tol


# ---------------------------------------------------------------------------
# randomized algebra properties (full-depth versions live in the acceptance
# suite; these are quick regressions)


def test_ring_axioms_random(integers, sqrt2, cbrt2):
    rng = random.Random(5)
    for basis in (integers, sqrt2, cbrt2):
        for _ in range(150):
            a, b, c = (rand_element(rng, basis) for _ in range(3))
            assert (a * b).coords == (b * a).coords
            assert ((a * b) * c).coords == (a * (b * c)).coords
            assert (a * (b + c)).coords == (a * b + a * c).coords


def test_divide_mul_roundtrip_random(sqrt2, cbrt2):
    rng = random.Random(6)
    for basis in (sqrt2, cbrt2):
        for _ in range(150):
            a = rand_element(rng, basis)
            b = rand_element(rng, basis)
            if b.is_zero():
                continue
            q = divide(a, b)
            assert (q * b).coords == a.to_rational().coords


# ---------------------------------------------------------------------------
# spec plumbing


def test_basis_from_spec():
    assert basis_from_spec({"type": "integers"}).degree == 1
    assert basis_from_spec({"type": "quadratic", "k": 2}).c_lambda == 2
    assert basis_from_spec({"type": "power", "minpoly": [-2, 0, 0]}).degree == 3
    with pytest.raises(InvalidParameterError):
        basis_from_spec({"type": "weird"})
    with pytest.raises(InvalidParameterError):
        basis_from_spec({"minpoly": [1]})

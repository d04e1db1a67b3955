from fractions import Fraction

import hypothesis.strategies as st
import pytest
import sympy
from hypothesis import given

from core.cyclotomic import (CyclotomicNumber, FormalScalar, cyclotomic_coeffs, p_power, p_valuation,
                             sqrt_prime)

ORDERS = [1, 3, 4, 5, 8, 12]


@st.composite
def cyclotomic(draw, order=None):
    n = order or draw(st.sampled_from(ORDERS))
    coeffs = draw(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=0, max_size=n))
    return CyclotomicNumber(n, coeffs)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8, 12, 15, 24])
def test_cyclotomic_coeffs_match_sympy(n):
    x = sympy.Symbol('x')
    expected = [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs())]
    assert list(cyclotomic_coeffs(n)) == expected


@pytest.mark.parametrize("n", [3, 4, 5, 8, 12])
def test_sum_of_roots_of_unity_vanishes(n):
    total = sum((CyclotomicNumber.root(n, k) for k in range(n)), CyclotomicNumber.zero())
    assert total.is_zero()


def test_i_squared():
    i = CyclotomicNumber.root(4, 1)
    assert i * i == -1
    assert i ** 4 == 1
    assert i.conjugate() == -i


@given(cyclotomic(), cyclotomic(), cyclotomic())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(cyclotomic())
def test_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == 1


@given(cyclotomic(order=12))
def test_embedding_is_homomorphism(a):
    b = CyclotomicNumber.root(12, 5) + 2
    assert abs((a * b).embed_complex() - a.embed_complex() * b.embed_complex()) < 1e-9


@given(cyclotomic(order=8))
def test_abs_square_is_real_and_nonnegative(a):
    s = a.abs_square()
    assert s == s.conjugate()
    assert abs(s.embed_complex() - abs(a.embed_complex()) ** 2) < 1e-9


def test_abs_square_of_root_of_unity():
    assert CyclotomicNumber.root(12, 7).abs_square() == 1


def test_lift_preserves_value():
    z = CyclotomicNumber.root(3, 1)
    assert z.lift(12) == z
    assert z.lift(12).order == 12
    with pytest.raises(ValueError):
        z.lift(8)


def test_from_angles_collects_terms():
    value = CyclotomicNumber.from_angles({Fraction(0): 2, Fraction(1, 2): 3})
    assert value == -1


@pytest.mark.parametrize("angle,expected", [(Fraction(1, 4), Fraction(1, 4)), (Fraction(2, 3), Fraction(2, 3)),
                                            (Fraction(1, 2), Fraction(1, 2))])
def test_as_root_of_unity(angle, expected):
    assert CyclotomicNumber.from_angle(angle).as_root_of_unity() == expected


def test_non_root_is_not_recognized():
    assert (CyclotomicNumber.root(4, 1) + 1).as_root_of_unity() is None


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_sqrt_prime_squares_to_p(p):
    s = sqrt_prime(p)
    assert s * s == p
    assert abs(s.embed_complex() - p ** 0.5) < 1e-9


def test_p_power_half_integer():
    assert p_power(3, Fraction(3, 2)) == sqrt_prime(3) * 3
    assert p_power(5, -1) == Fraction(1, 5)
    with pytest.raises(ValueError):
        p_power(5, Fraction(1, 3))


@pytest.mark.parametrize("x,p,v", [(Fraction(50), 5, 2), (Fraction(3, 25), 5, -2), (Fraction(7), 5, 0)])
def test_p_valuation(x, p, v):
    assert p_valuation(x, p) == v


def test_p_valuation_of_zero():
    with pytest.raises(ValueError):
        p_valuation(Fraction(0), 3)


# ============================================================
# FormalScalar
# ============================================================

def test_formal_scalar_folds_p_powers():
    # 3·p^{1/2} 与 p^{3/2} 在 p=3 时相等
    assert FormalScalar(3, Fraction(1, 2), 0, 3) == FormalScalar(1, Fraction(3, 2), 0, 3)
    assert FormalScalar(1, 1, 0, 5) == 5


def test_formal_scalar_keeps_ap_symbolic():
    a = FormalScalar(1, Fraction(-1, 2), 1, 7)
    assert a * a.inverse() == 1
    assert a ** 3 == FormalScalar(1, Fraction(-3, 2), 3, 7)
    assert a != FormalScalar(1, Fraction(-1, 2), 0, 7)
    with pytest.raises(ValueError):
        a.value()


def test_formal_scalar_value_and_simplify():
    x = FormalScalar(-2, Fraction(1, 2), 0, 2)
    assert x.value() == -sqrt_prime(2) * 2
    s = FormalScalar(Fraction(8), 0, 0, 2).simplify()
    assert s.half_p_exp == 3 and s.coefficient == 1


def test_formal_scalar_rejects_bad_exponent():
    with pytest.raises(ValueError):
        FormalScalar(1, Fraction(1, 3), 0, 3)
    with pytest.raises(ValueError):
        FormalScalar(1, 1, 0, None)


def test_formal_scalar_primes_must_agree():
    with pytest.raises(ValueError):
        FormalScalar(1, 1, 0, 3) * FormalScalar(1, 1, 0, 5)


@given(st.integers(min_value=-6, max_value=6), st.integers(min_value=0, max_value=11))
def test_formal_scalar_power_law(k, angle):
    x = FormalScalar.root(Fraction(angle, 12), 5) * FormalScalar(1, Fraction(1, 2), 1, 5)
    assert x ** k * x ** (-k) == 1


def test_formal_scalar_string():
    assert str(FormalScalar(-1, 1, 3, 7)) == "-7·a_7^3"
    assert str(FormalScalar(1, 0, 0, 7)) == "1"


def test_coerce_accepts_sympy_integers():
    assert CyclotomicNumber.coerce(sympy.Integer(-1)) == -1
    assert FormalScalar.coerce(sympy.legendre_symbol(2, 3), 3) == -1
    assert sqrt_prime(7) * sqrt_prime(7) == 7

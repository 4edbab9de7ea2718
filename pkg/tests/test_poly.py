from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from modestab.exactnum import Gaussian
from modestab.poly import CMPoly, MPoly, UPoly, cheb_eval, cheb_to_power, power_to_cheb

small = st.fractions(min_value=-20, max_value=20, max_denominator=1000)
coeff_lists = st.lists(small, min_size=1, max_size=8)


@settings(max_examples=80, deadline=None)
@given(coeff_lists)
def test_chebyshev_round_trip(c):
    assert UPoly(cheb_to_power(power_to_cheb(c))).c == UPoly(c).c


@settings(max_examples=60, deadline=None)
@given(coeff_lists, small)
def test_chebyshev_evaluation_agrees(c, x):
    assert cheb_eval(power_to_cheb(c), x) == UPoly(c)(x)


@settings(max_examples=60, deadline=None)
@given(coeff_lists, small, small, small)
def test_compose_affine(c, a, b, x):
    p = UPoly(c)
    assert p.compose_affine(a, b)(x) == p(a + b * x)


@settings(max_examples=60, deadline=None)
@given(coeff_lists, coeff_lists, small)
def test_product_and_derivative(c, d, x):
    p, q = UPoly(c), UPoly(d)
    assert (p * q)(x) == p(x) * q(x)
    assert (p * q).deriv()(x) == (p.deriv() * q + p * q.deriv())(x)


def test_known_chebyshev_expansion():
    # x^3 = (3 T1 + T3)/4
    assert power_to_cheb([0, 0, 0, 1]) == [0, F(3, 4), 0, F(1, 4)]


def test_complex_coefficients():
    p = UPoly([Gaussian(1, 2), Gaussian(0, -1)])
    assert p(Gaussian(0, 1)) == Gaussian(2, 2)
    assert p.conj()(Gaussian(0, -1)) == Gaussian(2, -2)


@settings(max_examples=40, deadline=None)
@given(small, small, small)
def test_cmpoly_matches_gaussian_evaluation(x, y, n):
    lam = CMPoly.lam(3, 0, 1)
    N = MPoly.var(3, 2)
    p = lam * lam * (N * 4) + CMPoly(N * N - 9)
    z = Gaussian(x, y)
    want = z * z * (4 * n) + (n * n - 9)
    assert (p.re(x, y, n), p.im(x, y, n)) == (want.re, want.im)
    assert p.abs2()(x, y, n) == want.re**2 + want.im**2


def test_mpoly_coefficients_in_variable():
    N, T = MPoly.var(2, 0), MPoly.var(2, 1)
    p = N * N * T + N * 3 - T
    parts = p.coeffs_in(0)
    assert parts[2].to_upoly(1).c == [0, 1]
    assert parts[1].to_upoly(1).c == [3]
    assert parts[0].to_upoly(1).c == [0, -1]

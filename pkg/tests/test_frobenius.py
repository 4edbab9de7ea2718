from fractions import Fraction as F

import mpmath as mp
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracle import mpc, ratios
from modestab import frobenius as fr
from modestab.exactnum import Gaussian

coord = st.fractions(min_value=-5, max_value=5, max_denominator=50)


def test_recurrence_coefficients_at_sample():
    assert fr.p2(0) == 20
    assert fr.p1(1).c == [F(-23), F(-16), F(-1)]
    assert fr.p0(2).c == [F(7), F(8), F(1)]


def test_limits_of_normalised_coefficients():
    # A_n -> -3/2 and B_n -> 1/2 with O(1/n) corrections
    A, B = fr.A_coef(10**6), fr.B_coef(10**6)
    assert abs(A.c[0] + F(3, 2)) < F(1, 10**5)
    assert abs(B.c[0] - F(1, 2)) < F(1, 10**5)


def test_c_polys_match_pointwise_values():
    polys = fr.c_polys(12)
    lam = Gaussian(F(1, 3), F(7, 2))
    vals = fr.c_values(lam, 12)
    for n in range(12):
        assert polys[n](lam) == vals[n]


@settings(max_examples=25, deadline=None)
@given(coord, coord)
def test_ratios_agree_with_float_oracle(x, y):
    lam = Gaussian(x, y)
    vals = fr.c_values(lam, 20)
    oracle = ratios(mpc(lam), 18)
    for n in range(1, 18):
        if vals[n] == 0:
            continue
        exact = vals[n + 1] / vals[n]
        assert abs(mpc(exact) - oracle[n]) <= mp.mpf(10) ** -30 * (1 + abs(oracle[n]))


def test_c2_closed_form():
    # r_1 = c_2 = (lam^2 + 8 lam - 9)/20
    assert fr.c_polys(3)[2].c == [F(-9, 20), F(8, 20), F(1, 20)]


def test_lambda_one_is_a_common_root_of_c11():
    assert fr.c_polys(12)[11](F(1)) == 0

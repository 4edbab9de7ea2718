from fractions import Fraction as F

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracle import mpc, mpf
from modestab.bounds import (
    RationalFunction,
    bernstein_range,
    certify_monotone,
    certify_nonneg_for_all_n,
    certify_nonnegative,
    certify_negative,
    certify_positive,
    certify_positive_box,
    sup_abs_on_interval,
    sup_mod_q_exp_h,
)
from modestab.cert_recurrence import WindingError, winding_number
from modestab.exactnum import Gaussian, gaussian
from modestab.poly import MPoly, UPoly

small = st.fractions(min_value=-3, max_value=3, max_denominator=100)


def test_positive_certificate_and_its_failure():
    p = UPoly([F(1, 100), F(0), F(-1), F(0), F(1)])  # x^4 - x^2 + 1/100 has roots near 0.1
    assert certify_positive(UPoly([1, 0, 1]), -1, 1).ok
    assert not certify_positive(p, -1, 1).ok
    assert certify_positive(p, 0, F(1, 20)).ok
    assert certify_negative(p, F(1, 5), F(9, 10)).ok


def test_nonnegative_allows_endpoint_zeros_only():
    sq = UPoly([-1, 1]) * UPoly([-1, 1]) * UPoly([1, 1])
    assert certify_nonnegative(sq, 0, 1).ok
    assert not certify_positive(sq, 0, 1).ok
    # an interior tangency is not certifiable by sign checks
    inner = UPoly([F(-1, 2), 1]) * UPoly([F(-1, 2), 1])
    assert not certify_nonnegative(inner, 0, 1).ok


def test_bernstein_range_contains_samples():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    p = x * x * y - x * 3 + y * y + 1
    lo, hi = bernstein_range(p, [(F(0), F(1)), (F(-1), F(2))])
    for i in range(11):
        for j in range(11):
            v = p(F(i, 10), F(-1) + F(3 * j, 10))
            assert lo <= v <= hi


def test_box_certificate():
    x, y = MPoly.var(2, 0), MPoly.var(2, 1)
    assert certify_positive_box(x * x + y * y + F(1, 10), [(F(-1), F(1)), (F(-1), F(1))]).ok
    assert not certify_positive_box(x * x + y * y - F(1, 10), [(F(-1), F(1)), (F(-1), F(1))]).ok


def test_coefficientwise_in_n():
    N, T = MPoly.var(2, 0), MPoly.var(2, 1)
    assert certify_nonneg_for_all_n(N * N * T + N + 1, 0, 1, 0, 1, strict=True).ok
    assert not certify_nonneg_for_all_n(N * N * (T - F(1, 2)) + 1, 0, 1, 0, 1).ok


def test_monotone():
    # (x^2 + 1)/(x + 2) has its minimum at sqrt(5) - 2
    assert certify_monotone(UPoly([1, 0, 1]), UPoly([2, 1]), F(1, 4), 1, increasing=True).ok
    assert certify_monotone(UPoly([1, 0, 1]), UPoly([2, 1]), 0, F(1, 5), increasing=False).ok
    assert not certify_monotone(UPoly([1, 0, 1]), UPoly([2, 1]), 0, 1, increasing=True).ok


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=1, max_size=5), st.lists(small, min_size=1, max_size=4))
def test_sup_mod_q_exp_h_is_an_upper_bound(qc, hc):
    q, h = UPoly(qc), UPoly([Gaussian(c, c / 2) for c in hc])
    bound = sup_mod_q_exp_h(q, h, cells=16)
    for k in range(41):
        x = F(-1) + F(k, 20)
        v = abs(mpf(q(x))) * mp.exp(mpc(gaussian(h(x))).real)
        assert v <= mpf(bound) * (1 + mp.mpf(10) ** -30)


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=1, max_size=6))
def test_sup_abs_is_an_upper_bound(c):
    p = UPoly(c)
    bound = sup_abs_on_interval(p, cells=8)
    assert all(abs(p(F(-1) + F(k, 25))) <= bound for k in range(51))


def _square(cx, cy, r):
    return [Gaussian(cx - r, cy - r), Gaussian(cx + r, cy - r), Gaussian(cx + r, cy + r), Gaussian(cx - r, cy + r)]


def test_winding_of_linear_function():
    pts = _square(0, 0, 1)
    lip = lambda a, b: F(1)  # noqa: E731
    assert winding_number(lambda z: z - Gaussian(F(1, 3), F(1, 5)), lip, pts)[0] == 1
    assert winding_number(lambda z: z - Gaussian(3, 0), lip, pts)[0] == 0


def test_winding_counts_multiplicity():
    pts = _square(0, 0, 1)
    f = lambda z: z * z * z  # noqa: E731
    lip = lambda a, b: F(3) * 2  # |3 z^2| <= 6 on the square  # noqa: E731
    assert winding_number(f, lip, pts)[0] == 3


def test_winding_refuses_zero_on_contour():
    with pytest.raises(WindingError):
        winding_number(lambda z: z - Gaussian(1, 0), lambda a, b: F(1), _square(0, 0, 1), max_depth=6)


def test_rational_function_evaluation():
    r = RationalFunction(UPoly([1, 1]), ((F(-2), F(3)),))
    assert r(F(1)) == 2 + F(3, 3)

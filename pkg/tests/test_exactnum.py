from fractions import Fraction as F

import mpmath as mp
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from _oracle import mpf
from modestab.exactnum import (
    ComplexEnclosure,
    DomainError,
    Enclosure,
    Gaussian,
    ParseError,
    cexp_enclosure,
    complex_sqrt_enclosure,
    exp_enclosure,
    parse_rational,
    pi_enclosure,
    sincos_enclosure,
    sqrt_enclosure,
)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=10**6)
positive = st.fractions(min_value=F(1, 10**4), max_value=10**4, max_denominator=10**6)


def test_parse_rational_forms():
    assert parse_rational("49/12") == F(49, 12)
    assert parse_rational(" -7 ") == F(-7)
    assert parse_rational("0.125") == F(1, 8)
    with pytest.raises(ParseError):
        parse_rational("1/0")
    with pytest.raises(ParseError):
        parse_rational("")


def test_gaussian_field_ops():
    a, b = Gaussian(F(49, 12), F(43, 15)), Gaussian(1, -2)
    assert (a * b) / b == a
    assert (a + b) - b == a
    assert Gaussian(0, 1) * Gaussian(0, 1) == Gaussian(-1)


def test_pi_enclosure_against_mpmath():
    e = pi_enclosure(F(1, 10**40))
    assert mpf(e.lo) <= mp.pi <= mpf(e.hi)
    assert e.width() <= F(1, 10**40)


def test_sqrt_two_digits():
    e = sqrt_enclosure(2, F(1, 10**30))
    assert mpf(e.lo) <= mp.sqrt(2) <= mpf(e.hi)


def test_sqrt_of_negative_is_rejected():
    with pytest.raises(DomainError):
        sqrt_enclosure(-1)


@settings(max_examples=60, deadline=None)
@given(positive)
def test_sqrt_encloses(q):
    e = sqrt_enclosure(q, F(1, 10**20))
    assert e.lo * e.lo <= q <= e.hi * e.hi
    assert mpf(e.lo) <= mp.sqrt(mpf(q)) <= mpf(e.hi)


@settings(max_examples=60, deadline=None)
@given(rationals)
def test_exp_encloses(q):
    e = exp_enclosure(q, F(1, 10**20))
    assert mpf(e.lo) <= mp.exp(mpf(q)) <= mpf(e.hi)


@settings(max_examples=60, deadline=None)
@given(rationals)
def test_sincos_enclose(q):
    s, c = sincos_enclosure(q, F(1, 10**20))
    x = mpf(q)
    assert mpf(s.lo) <= mp.sin(x) <= mpf(s.hi)
    assert mpf(c.lo) <= mp.cos(x) <= mpf(c.hi)


@settings(max_examples=40, deadline=None)
@given(rationals, rationals)
def test_cexp_encloses(a, b):
    e = cexp_enclosure(Gaussian(a / 5, b), F(1, 10**20))
    z = mp.exp(mp.mpc(mpf(a / 5), mpf(b)))
    assert mpf(e.re.lo) <= z.real <= mpf(e.re.hi)
    assert mpf(e.im.lo) <= z.imag <= mpf(e.im.hi)


@settings(max_examples=40, deadline=None)
@given(rationals, rationals)
def test_complex_sqrt_is_principal(a, b):
    assume(not (b == 0 and a < 0))
    e = complex_sqrt_enclosure(Gaussian(a, b), F(1, 10**20))
    z = mp.sqrt(mp.mpc(mpf(a), mpf(b)))
    assert mpf(e.re.lo) <= z.real <= mpf(e.re.hi)
    assert mpf(e.im.lo) <= z.imag <= mpf(e.im.hi)
    assert e.re.hi >= 0


def test_complex_sqrt_rejects_branch_cut():
    with pytest.raises(DomainError):
        complex_sqrt_enclosure(Gaussian(-1, 0))


@settings(max_examples=80, deadline=None)
@given(rationals, rationals, rationals, rationals)
def test_enclosure_arithmetic_is_inclusion_monotone(a, b, c, d):
    x, y = Enclosure(min(a, b), max(a, b)), Enclosure(min(c, d), max(c, d))
    for u in (a, b):
        for v in (c, d):
            assert (x + y).contains(u + v)
            assert (x - y).contains(u - v)
            assert (x * y).contains(u * v)


def test_complex_enclosure_modulus_bounds():
    z = ComplexEnclosure(Enclosure(F(3), F(3)), Enclosure(F(4), F(4)))
    assert z.abs_lower() <= 5 <= z.abs_upper()

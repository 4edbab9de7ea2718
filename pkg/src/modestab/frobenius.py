"""Series coefficients of the mode equation and their recurrences.

Three recurrences are implemented, all in exact arithmetic with the
spectral parameter ``lam`` kept symbolic:

* ``a_n``: series at t = 0, a rational function of lam with simple poles at
  lam = 0, -1, ..., -(n-1);
* ``b_n``: series at t = 1, a polynomial in lam of degree 2n;
* ``c_n``: the three-term recurrence p2 c_{n+2} + p1 c_{n+1} + p0 c_n = 0
  (c_0 = 0, c_1 = 1) whose ratios r_n = c_{n+1}/c_n are studied in the
  half-strip.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .bounds import RationalFunction
from .exactnum import Gaussian, gaussian
from .poly import UPoly

F = Fraction
LAM = UPoly([F(0), F(1)])


def _lin(c0, c1=1) -> UPoly:
    return UPoly([F(c0), F(c1)])


def p_numerator(n: int) -> UPoly:
    """n^2 + (lam + 3/2) n + (lam^2 + 3 lam)/4 - 1/2."""
    return UPoly([F(n * n) + F(3, 2) * n - F(1, 2), F(n) + F(3, 4), F(1, 4)])


def q_numerator(n: int) -> UPoly:
    """Same as ``p_numerator`` with -7/2 in place of -1/2."""
    return UPoly([F(n * n) + F(3, 2) * n - F(7, 2), F(n) + F(3, 4), F(1, 4)])


def p_coefficient(n: int) -> RationalFunction:
    """p_n = p_numerator(n) / ((n+1)(n+lam)) as polynomial part plus one pole."""
    num = p_numerator(n).scale(F(1, n + 1))
    q, r = num.divmod(_lin(n))
    return RationalFunction(q, [(gaussian(r[0]), Gaussian(-n))])


def q_coefficient(n: int) -> UPoly:
    return q_numerator(n).scale(F(1, (n + 1)) / (n + F(5, 2)))


@lru_cache(maxsize=None)
def a_numerators(nmax: int, a0: Fraction = F(1)) -> tuple:
    """Numerators N_n with a_n = N_n / prod_{j<n} (lam + j), n = 0..nmax."""
    N = [UPoly([F(a0)])]
    # falling products prod_{j=k}^{n-1} (lam + j), cached per (k, n)
    for n in range(nmax):
        acc = p_numerator(n) * N[n]
        prod = UPoly([F(1)])
        for k in range(n - 1, -1, -1):
            prod = prod * _lin(k)
            w = F(n - k + 1, 2 ** (n - k))
            acc = acc - (N[k] * prod).scale(w)
        N.append(acc.scale(F(1, n + 1)))
    return tuple(N)


def a_denominator(n: int) -> UPoly:
    d = UPoly([F(1)])
    for j in range(n):
        d = d * _lin(j)
    return d


def partial_fractions_integer_poles(num: UPoly, n: int) -> RationalFunction:
    """num / prod_{j<n}(lam + j) split into polynomial part and simple poles."""
    den = a_denominator(n)
    q, r = num.divmod(den) if n else (num, UPoly())
    terms = []
    dden = den.deriv()
    for j in range(n):
        s = F(-j)
        res = r(s) / dden(s)
        if res:
            terms.append((gaussian(res), Gaussian(s)))
    return RationalFunction(q, terms)


@lru_cache(maxsize=None)
def a_rational(n: int) -> RationalFunction:
    N = a_numerators(max(n, 1))[n]
    return partial_fractions_integer_poles(N, n)


@lru_cache(maxsize=None)
def b_polys(nmax: int) -> tuple:
    """b_0 = 1 and the rec2 polynomials b_1..b_nmax."""
    b = [UPoly([F(1)])]
    for n in range(nmax):
        acc = q_numerator(n) * b[n]
        for k in range(n):
            acc = acc + b[k].scale(F(4 * (-1) ** (n - k + 1) * (n - k + 1)))
        b.append(acc.scale(F(1, n + 1) / (n + F(5, 2))))
    return tuple(b)


# three-term recurrence


def p2(n: int) -> Fraction:
    return F(8 * n * n + 28 * n + 20)


def p1(n: int) -> UPoly:
    return UPoly([F(-12 * n * n - 20 * n + 9), F(-8 * n - 8), F(-1)])


def p0(n: int) -> UPoly:
    return UPoly([F(4 * n * n - 9), F(4 * n), F(1)])


def A_coef(n: int) -> UPoly:
    return p1(n).scale(1 / p2(n))


def B_coef(n: int) -> UPoly:
    return p0(n).scale(1 / p2(n))


@lru_cache(maxsize=None)
def c_polys(nmax: int) -> tuple:
    c = [UPoly(), UPoly([F(1)])]
    for n in range(nmax - 1):
        c.append((p1(n) * c[n + 1] + p0(n) * c[n]).scale(-1 / p2(n)))
    return tuple(c)


# pointwise evaluation helpers (exact, used by tests and spot checks)


def a_values(lam, nmax: int, a0=F(1)) -> list[Gaussian]:
    lam = gaussian(lam)
    a = [gaussian(a0)]
    for n in range(nmax):
        s = Gaussian(0)
        for k in range(n):
            s = s + a[k] * F(n - k + 1, 2 ** (n - k))
        a.append((p_numerator(n)(lam) * a[n] - s) / ((n + 1) * (lam + n)))
    return a


def c_values(lam, nmax: int) -> list[Gaussian]:
    lam = gaussian(lam)
    c = [Gaussian(0), Gaussian(1)]
    for n in range(nmax - 1):
        c.append(-(p1(n)(lam) * c[n + 1] + p0(n)(lam) * c[n]) / p2(n))
    return c

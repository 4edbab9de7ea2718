"""Exact rationals, Gaussian rationals and rational enclosures.

Every quantity that enters a certified inequality is either an exact
``Fraction`` / ``Gaussian`` or an ``Enclosure`` whose endpoints are exact
rationals.  Transcendental values (square roots, exp, sin, cos, pi) only
ever appear through enclosures that provably contain them.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Union

Rational = Fraction
Number = Union[int, Fraction]


class ParseError(ValueError):
    pass


class DomainError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q``, an integer or a finite decimal literal exactly."""
    s = text.strip()
    if not s:
        raise ParseError("empty rational literal")
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational literal {text!r}") from exc
    return value


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


# ---------------------------------------------------------------------------
# outward rounding


def floor_to(q: Fraction, bits: int) -> Fraction:
    """Largest multiple of 2**-bits that is <= q."""
    if q.denominator <= (1 << bits):
        return q
    return Fraction((q.numerator << bits) // q.denominator, 1 << bits)


def ceil_to(q: Fraction, bits: int) -> Fraction:
    if q.denominator <= (1 << bits):
        return q
    return Fraction(-((-q.numerator << bits) // q.denominator), 1 << bits)


def _bits_for(tol: Fraction) -> int:
    tol = as_fraction(tol)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    return max(8, math.ceil(math.log2(tol.denominator / tol.numerator)) + 12)


# ---------------------------------------------------------------------------
# Gaussian rationals


class Gaussian:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Number = 0, im: Number = 0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def parse(cls, text: str) -> "Gaussian":
        """Parse ``a`` or ``a,b`` (meaning a + b i) with rational a, b."""
        parts = text.split(",")
        if len(parts) == 1:
            return cls(parse_rational(parts[0]))
        if len(parts) == 2:
            return cls(parse_rational(parts[0]), parse_rational(parts[1]))
        raise ParseError(f"bad complex literal {text!r}")

    @staticmethod
    def lift(x) -> "Gaussian":
        if isinstance(x, Gaussian):
            return x
        if isinstance(x, (int, Fraction)):
            return Gaussian(x)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Gaussian):
            return Gaussian(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return Gaussian(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Gaussian):
            return Gaussian(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return Gaussian(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Gaussian(other - self.re, -self.im)
        return NotImplemented

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, Gaussian):
            a, b, c, d = self.re, self.im, other.re, other.im
            return Gaussian(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return Gaussian(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("Gaussian division by zero")
            return Gaussian(self.re / other, self.im / other)
        if isinstance(other, Gaussian):
            n = other.abs2()
            if n == 0:
                raise ZeroDivisionError("Gaussian division by zero")
            num = self * other.conj()
            return Gaussian(num.re / n, num.im / n)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Gaussian(other) / self
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return Gaussian(1) / (self ** (-k))
        result, base = Gaussian(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = Gaussian.lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self):
        return f"{self.re},{self.im}"

    def conj(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def abs_upper(self, bits: int = 64) -> Fraction:
        return sqrt_upper(self.abs2(), bits)

    def abs_lower(self, bits: int = 64) -> Fraction:
        return sqrt_lower(self.abs2(), bits)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def rounded(self, bits: int) -> "Gaussian":
        """Nearest point of the 2**-bits grid, used to keep denominators small."""
        s = 1 << bits
        return Gaussian(Fraction(round(self.re * s), s), Fraction(round(self.im * s), s))


I = Gaussian(0, 1)


def gaussian(x) -> Gaussian:
    g = Gaussian.lift(x)
    if g is NotImplemented:
        raise TypeError(f"not an exact number: {x!r}")
    return g


# ---------------------------------------------------------------------------
# square roots of rationals


def sqrt_lower(q: Fraction, bits: int = 64) -> Fraction:
    q = as_fraction(q)
    if q < 0:
        raise DomainError("square root of a negative number")
    scaled = (q.numerator << (2 * bits)) // q.denominator
    return Fraction(math.isqrt(scaled), 1 << bits)


def sqrt_upper(q: Fraction, bits: int = 64) -> Fraction:
    q = as_fraction(q)
    if q < 0:
        raise DomainError("square root of a negative number")
    num = q.numerator << (2 * bits)
    scaled = -((-num) // q.denominator)
    r = math.isqrt(scaled)
    if r * r < scaled:
        r += 1
    return Fraction(r, 1 << bits)


# ---------------------------------------------------------------------------
# enclosures


class Enclosure:
    """Closed interval [lo, hi] with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Number, hi: Number | None = None):
        lo = as_fraction(lo)
        hi = lo if hi is None else as_fraction(hi)
        if lo > hi:
            raise DomainError(f"empty enclosure [{lo}, {hi}]")
        self.lo, self.hi = lo, hi

    @staticmethod
    def lift(x) -> "Enclosure":
        if isinstance(x, Enclosure):
            return x
        return Enclosure(x)

    def __repr__(self):
        return f"Enclosure({float(self.lo):.17g}, {float(self.hi):.17g})"

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"

    def width(self) -> Fraction:
        return self.hi - self.lo

    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, Enclosure):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    __contains__ = contains

    def mag(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def mig(self) -> Fraction:
        if self.lo <= 0 <= self.hi:
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def __add__(self, other):
        o = Enclosure.lift(other)
        return Enclosure(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other):
        o = Enclosure.lift(other)
        return Enclosure(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other):
        return Enclosure.lift(other) - self

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __mul__(self, other):
        o = Enclosure.lift(other)
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Enclosure(min(p), max(p))

    __rmul__ = __mul__

    def reciprocal(self) -> "Enclosure":
        if self.lo <= 0 <= self.hi:
            raise DomainError("reciprocal of an enclosure containing zero")
        return Enclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * Enclosure.lift(other).reciprocal()

    def __rtruediv__(self, other):
        return Enclosure.lift(other) * self.reciprocal()

    def __pow__(self, k: int):
        if k < 0:
            return (self ** (-k)).reciprocal()
        if k == 0:
            return Enclosure(1)
        if k % 2 == 1 or self.lo >= 0:
            a, b = self.lo ** k, self.hi ** k
            return Enclosure(min(a, b), max(a, b))
        if self.hi <= 0:
            return Enclosure(self.hi ** k, self.lo ** k)
        return Enclosure(0, max(self.lo ** k, self.hi ** k))

    def square(self) -> "Enclosure":
        return self ** 2

    def outward(self, bits: int) -> "Enclosure":
        return Enclosure(floor_to(self.lo, bits), ceil_to(self.hi, bits))

    def intersect(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(max(self.lo, other.lo), min(self.hi, other.hi))

    def hull(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(min(self.lo, other.lo), max(self.hi, other.hi))

    def __float__(self):
        return float(self.mid())


def sqrt_enclosure(x, tol: Fraction = Fraction(1, 10**15)) -> Enclosure:
    """Enclosure of sqrt(x) for x >= 0, of width at most about ``tol``."""
    x = Enclosure.lift(x)
    if x.lo < 0:
        raise DomainError("sqrt of an enclosure reaching below zero")
    bits = _bits_for(tol)
    return Enclosure(sqrt_lower(x.lo, bits), sqrt_upper(x.hi, bits))


def _exp_small(y: Fraction, bits: int) -> Enclosure:
    """exp(y) for |y| <= 1/2 by Taylor sum plus Lagrange remainder."""
    term, total, k = Fraction(1), Fraction(1), 0
    bound = Fraction(1, 1 << bits)
    while True:
        k += 1
        term = term * y / k
        total += term
        # remainder of the series after degree k is at most 2|y|^(k+1)/(k+1)!
        rem = 2 * abs(term * y) / (k + 1)
        if rem < bound:
            break
    return Enclosure(floor_to(total - rem, bits + 4), ceil_to(total + rem, bits + 4))


def exp_enclosure(x, tol: Fraction = Fraction(1, 10**15)) -> Enclosure:
    """Enclosure of exp over the enclosure ``x`` (exp is increasing)."""
    x = Enclosure.lift(x)
    lo = _exp_point(x.lo, tol)
    hi = lo if x.hi == x.lo else _exp_point(x.hi, tol)
    return Enclosure(lo.lo, hi.hi)


@lru_cache(maxsize=4096)
def _exp_point(q: Fraction, tol: Fraction) -> Enclosure:
    q = as_fraction(q)
    mag = abs(q)
    s = 0
    while mag > Fraction(1, 2):
        mag /= 2
        s += 1
    # squaring s times magnifies relative error by 2^s; budget for it
    scale = max(1, math.ceil(abs(float(q)) * 1.45))
    bits = _bits_for(tol) + s + scale + 4
    e = _exp_small(q / (1 << s), bits)
    for _ in range(s):
        e = Enclosure(floor_to(e.lo * e.lo, bits), ceil_to(e.hi * e.hi, bits))
    return e


def _sincos_small(y: Fraction, bits: int) -> tuple[Enclosure, Enclosure]:
    """(sin y, cos y) for |y| <= 1/2; alternating series with exact remainder."""
    bound = Fraction(1, 1 << bits)
    s_sum, c_sum = Fraction(0), Fraction(0)
    term = Fraction(1)  # y^k/k!
    k = 0
    while True:
        if k % 4 == 0:
            c_sum += term
        elif k % 4 == 1:
            s_sum += term
        elif k % 4 == 2:
            c_sum -= term
        else:
            s_sum -= term
        k += 1
        term = term * y / k
        if abs(term) < bound and k > 2:
            break
    # both tails are bounded by the first omitted term and the one after it
    rem = abs(term) + abs(term * y / (k + 1))
    sin = Enclosure(floor_to(s_sum - rem, bits + 4), ceil_to(s_sum + rem, bits + 4))
    cos = Enclosure(floor_to(c_sum - rem, bits + 4), ceil_to(c_sum + rem, bits + 4))
    return sin, cos


@lru_cache(maxsize=4096)
def _sincos_point(q: Fraction, tol: Fraction) -> tuple[Enclosure, Enclosure]:
    mag = abs(q)
    s = 0
    while mag > Fraction(1, 2):
        mag /= 2
        s += 1
    bits = _bits_for(tol) + 2 * s + 6
    sn, cs = _sincos_small(q / (1 << s), bits)
    unit = Enclosure(-1, 1)
    for _ in range(s):
        sn, cs = (2 * sn * cs).outward(bits), (cs * cs - sn * sn).outward(bits)
        sn, cs = sn.intersect(unit), cs.intersect(unit)
    return sn, cs


def sincos_enclosure(x, tol: Fraction = Fraction(1, 10**15)) -> tuple[Enclosure, Enclosure]:
    """Enclosures of (sin x, cos x) at a rational point ``x``."""
    if isinstance(x, Enclosure):
        if x.lo != x.hi:
            # Lipschitz constant 1 for both functions
            m = x.mid()
            sn, cs = _sincos_point(m, as_fraction(tol))
            r = x.width() / 2
            unit = Enclosure(-1, 1)
            return (sn + Enclosure(-r, r)).intersect(unit), (cs + Enclosure(-r, r)).intersect(unit)
        x = x.lo
    return _sincos_point(as_fraction(x), as_fraction(tol))


@lru_cache(maxsize=16)
def pi_enclosure(tol: Fraction = Fraction(1, 10**30)) -> Enclosure:
    """Enclosure of pi: the sign change of sin on [3, 7/2] pins it down."""
    tol = as_fraction(tol)
    p = Fraction(355, 113)
    bits = _bits_for(tol) + 8
    for _ in range(8):
        sn, _ = _sincos_point(p, tol / 16)
        p = ceil_to(p + sn.mid(), bits)
        if sn.width() < tol / 8 and abs(sn.mid()) < tol / 8:
            break
    eps = tol / 2
    lo, hi = p - eps, p + eps
    while True:
        s_lo, _ = _sincos_point(lo, tol / 16)
        s_hi, _ = _sincos_point(hi, tol / 16)
        if s_lo.lo > 0 and s_hi.hi < 0:
            return Enclosure(lo, hi)
        eps *= 2
        lo, hi = p - eps, p + eps


# ---------------------------------------------------------------------------
# complex enclosures


class ComplexEnclosure:
    """Rectangle re x im in the complex plane."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Enclosure.lift(re)
        self.im = Enclosure.lift(im)

    @staticmethod
    def lift(x) -> "ComplexEnclosure":
        if isinstance(x, ComplexEnclosure):
            return x
        if isinstance(x, Gaussian):
            return ComplexEnclosure(x.re, x.im)
        if isinstance(x, (int, Fraction, Enclosure)):
            return ComplexEnclosure(x, 0)
        raise TypeError(f"cannot lift {type(x).__name__}")

    def __repr__(self):
        return f"ComplexEnclosure({self.re!r}, {self.im!r})"

    def __add__(self, other):
        o = ComplexEnclosure.lift(other)
        return ComplexEnclosure(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = ComplexEnclosure.lift(other)
        return ComplexEnclosure(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return ComplexEnclosure.lift(other) - self

    def __neg__(self):
        return ComplexEnclosure(-self.re, -self.im)

    def __mul__(self, other):
        o = ComplexEnclosure.lift(other)
        return ComplexEnclosure(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ComplexEnclosure.lift(other)
        den = o.re.square() + o.im.square()
        num = self * o.conj()
        return ComplexEnclosure(num.re / den, num.im / den)

    def conj(self):
        return ComplexEnclosure(self.re, -self.im)

    def abs2(self) -> Enclosure:
        return self.re.square() + self.im.square()

    def abs_upper(self, bits: int = 64) -> Fraction:
        return sqrt_upper(self.abs2().hi, bits)

    def abs_lower(self, bits: int = 64) -> Fraction:
        return sqrt_lower(self.abs2().lo, bits)

    def contains(self, z) -> bool:
        z = gaussian(z)
        return self.re.contains(z.re) and self.im.contains(z.im)

    def outward(self, bits: int) -> "ComplexEnclosure":
        return ComplexEnclosure(self.re.outward(bits), self.im.outward(bits))

    def mid(self) -> Gaussian:
        return Gaussian(self.re.mid(), self.im.mid())


def cexp_enclosure(z, tol: Fraction = Fraction(1, 10**15)) -> ComplexEnclosure:
    """Enclosure of exp(z) at a Gaussian rational point."""
    z = gaussian(z)
    mod = exp_enclosure(z.re, tol)
    sn, cs = sincos_enclosure(z.im, tol)
    return ComplexEnclosure(mod * cs, mod * sn)


def complex_sqrt_enclosure(z, tol: Fraction = Fraction(1, 10**15)) -> ComplexEnclosure:
    """Principal square root (Re >= 0) of a Gaussian rational off the branch cut."""
    z = gaussian(z)
    a, b = z.re, z.im
    if b == 0 and a < 0:
        raise DomainError("complex sqrt requested on the branch cut")
    if b == 0:
        r = sqrt_enclosure(a, tol)
        return ComplexEnclosure(r, 0)
    bits = _bits_for(tol) + 8
    modulus = sqrt_enclosure(z.abs2(), Fraction(1, 1 << bits))
    if a >= 0:
        u = sqrt_enclosure((modulus + a) / 2, Fraction(1, 1 << bits))
        v = Enclosure(b) / (2 * u)
    else:
        w = sqrt_enclosure((modulus - a) / 2, Fraction(1, 1 << bits))
        v = w if b > 0 else -w
        u = Enclosure(abs(b)) / (2 * w)
    return ComplexEnclosure(u, v).outward(bits)

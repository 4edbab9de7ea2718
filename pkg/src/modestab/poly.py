"""Polynomials with exact coefficients.

``UPoly``      univariate, coefficients in any exact ring (Fraction, Gaussian,
               or enclosures), lowest degree first.
``BivarPoly``  polynomials in (t, lam) with Gaussian rational coefficients.
``MPoly``      sparse multivariate real polynomials, used by the sign
               certificates that work over boxes.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Sequence

from .exactnum import Gaussian, gaussian

ZERO = Fraction(0)


def _is_zero(c) -> bool:
    if isinstance(c, Gaussian):
        return c.re == 0 and c.im == 0
    try:
        return c == 0
    except TypeError:
        return False


def _conj(c):
    return c.conj() if hasattr(c, "conj") else c


class UPoly:
    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and _is_zero(c[-1]):
            c.pop()
        self.c = c

    @classmethod
    def const(cls, a) -> "UPoly":
        return cls([a])

    @classmethod
    def x(cls) -> "UPoly":
        return cls([ZERO, Fraction(1)])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def __len__(self):
        return len(self.c)

    def __getitem__(self, k):
        return self.c[k] if 0 <= k < len(self.c) else ZERO

    def __repr__(self):
        return f"UPoly({self.c!r})"

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other])
        return len(self.c) == len(other.c) and all(a == b for a, b in zip(self.c, other.c))

    def __call__(self, x):
        acc = ZERO
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def __add__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other])
        n = max(len(self.c), len(other.c))
        return UPoly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-a for a in self.c])

    def __sub__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return UPoly([other]) - self

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            return UPoly([a * other for a in self.c])
        if not self.c or not other.c:
            return UPoly()
        out = [ZERO] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return UPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UPoly([Fraction(1)])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, a) -> "UPoly":
        return UPoly([a * b for b in self.c])

    def deriv(self) -> "UPoly":
        return UPoly([k * self.c[k] for k in range(1, len(self.c))])

    def conj(self) -> "UPoly":
        return UPoly([_conj(a) for a in self.c])

    def map(self, f: Callable) -> "UPoly":
        return UPoly([f(a) for a in self.c])

    def truncate(self, deg: int) -> "UPoly":
        return UPoly(self.c[: deg + 1])

    def shift(self, a) -> "UPoly":
        """Coefficients of p(x + a) (Taylor shift)."""
        c = list(self.c)
        n = len(c)
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                c[k] = c[k] + a * c[k + 1]
        return UPoly(c)

    def compose_affine(self, a, b) -> "UPoly":
        """Coefficients of p(a + b x)."""
        s = self.shift(a).c
        out, pw = [], Fraction(1)
        for coef in s:
            out.append(coef * pw)
            pw = pw * b
        return UPoly(out)

    def compose(self, q: "UPoly") -> "UPoly":
        acc = UPoly()
        for a in reversed(self.c):
            acc = acc * q + UPoly([a])
        return acc

    def divmod(self, d: "UPoly") -> tuple["UPoly", "UPoly"]:
        if not d.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [ZERO] * max(0, len(r) - len(d.c) + 1)
        lead = d.c[-1]
        for k in range(len(r) - len(d.c), -1, -1):
            coef = r[k + len(d.c) - 1] / lead
            q[k] = coef
            if _is_zero(coef):
                continue
            for j, b in enumerate(d.c):
                r[k + j] = r[k + j] - coef * b
        return UPoly(q), UPoly(r[: len(d.c) - 1])

    def to_cheb(self) -> list:
        return power_to_cheb(self.c)

    def re_part(self) -> "UPoly":
        return UPoly([gaussian(a).re for a in self.c])

    def im_part(self) -> "UPoly":
        return UPoly([gaussian(a).im for a in self.c])


# ---------------------------------------------------------------------------
# Chebyshev basis on [-1, 1]


def _cheb_times_x(b: list) -> list:
    """x * sum b_k T_k in the Chebyshev basis (x T_k = (T_{k+1} + T_{k-1})/2)."""
    n = len(b)
    out = [ZERO] * (n + 1)
    for k, v in enumerate(b):
        if _is_zero(v):
            continue
        if k == 0:
            out[1] = out[1] + v
        else:
            half = v / 2
            out[k + 1] = out[k + 1] + half
            out[k - 1] = out[k - 1] + half
    return out


def power_to_cheb(coeffs: Sequence) -> list:
    """Chebyshev coefficients of sum coeffs[k] x^k (Horner in the T basis)."""
    acc: list = []
    for a in reversed(list(coeffs)):
        acc = _cheb_times_x(acc) if acc else []
        if acc:
            acc[0] = acc[0] + a
        else:
            acc = [a]
    while len(acc) > 1 and _is_zero(acc[-1]):
        acc.pop()
    return acc


def cheb_to_power(b: Sequence) -> list:
    """Power coefficients of sum b[k] T_k via T_{k+1} = 2x T_k - T_{k-1}."""
    n = len(b)
    if n == 0:
        return []
    t_prev, t_cur = [Fraction(1)], [ZERO, Fraction(1)]
    out = [ZERO] * n
    out[0] = out[0] + b[0]
    for k in range(1, n):
        if k > 1:
            nxt = [ZERO] + [2 * v for v in t_cur]
            for i, v in enumerate(t_prev):
                nxt[i] -= v
            t_prev, t_cur = t_cur, nxt
        for i, v in enumerate(t_cur):
            if v:
                out[i] = out[i] + b[k] * v
    return out


def cheb_eval(b: Sequence, x):
    """Clenshaw evaluation of sum b_k T_k(x)."""
    b1 = b2 = ZERO
    for v in reversed(list(b[1:])):
        b1, b2 = 2 * x * b1 - b2 + v, b1
    return x * b1 - b2 + (b[0] if b else ZERO)


def abs2_poly(p: UPoly) -> UPoly:
    """|p(x)|^2 for real x, as a polynomial with rational coefficients."""
    re, im = p.re_part(), p.im_part()
    return re * re + im * im


# ---------------------------------------------------------------------------
# bivariate polynomials in (t, lam)


class BivarPoly:
    """Sum of c[(i, j)] t^i lam^j with Gaussian rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs: dict | None = None):
        self.c = {k: gaussian(v) for k, v in (coeffs or {}).items() if not _is_zero(v)}

    @classmethod
    def from_upoly_lam(cls, p: UPoly) -> "BivarPoly":
        return cls({(0, j): a for j, a in enumerate(p.c)})

    @classmethod
    def from_upoly_t(cls, p: UPoly) -> "BivarPoly":
        return cls({(i, 0): a for i, a in enumerate(p.c)})

    @classmethod
    def t(cls) -> "BivarPoly":
        return cls({(1, 0): 1})

    @classmethod
    def lam(cls) -> "BivarPoly":
        return cls({(0, 1): 1})

    @property
    def deg_t(self) -> int:
        return max((i for i, _ in self.c), default=-1)

    @property
    def deg_lam(self) -> int:
        return max((j for _, j in self.c), default=-1)

    def __repr__(self):
        return f"BivarPoly({len(self.c)} terms, deg_t={self.deg_t}, deg_lam={self.deg_lam})"

    def __eq__(self, other):
        return isinstance(other, BivarPoly) and self.c == other.c

    def _lift(self, other) -> "BivarPoly":
        if isinstance(other, BivarPoly):
            return other
        return BivarPoly({(0, 0): other})

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, ZERO) + v
        return BivarPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, BivarPoly):
            return BivarPoly({k: v * other for k, v in self.c.items()})
        out: dict = {}
        for (i, j), a in self.c.items():
            for (k, l), b in other.c.items():
                key = (i + k, j + l)
                out[key] = out.get(key, ZERO) + a * b
        return BivarPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = BivarPoly({(0, 0): 1})
        for _ in range(k):
            result = result * self
        return result

    def deriv_t(self) -> "BivarPoly":
        return BivarPoly({(i - 1, j): v * i for (i, j), v in self.c.items() if i > 0})

    def deriv_lam(self) -> "BivarPoly":
        return BivarPoly({(i, j - 1): v * j for (i, j), v in self.c.items() if j > 0})

    def at_t(self, t0) -> UPoly:
        """Polynomial in lam obtained by fixing t = t0."""
        out = [ZERO] * (self.deg_lam + 1)
        for (i, j), v in self.c.items():
            out[j] = out[j] + v * (t0 ** i)
        return UPoly(out)

    def at_lam(self, l0) -> UPoly:
        out = [ZERO] * (self.deg_t + 1)
        for (i, j), v in self.c.items():
            out[i] = out[i] + v * (l0 ** j)
        return UPoly(out)

    def __call__(self, t0, l0):
        return self.at_t(t0)(l0)

    def t_coeff(self, i: int) -> UPoly:
        out = [ZERO] * (self.deg_lam + 1)
        for (a, j), v in self.c.items():
            if a == i:
                out[j] = out[j] + v
        return UPoly(out)

    def lam_coeff(self, j: int) -> UPoly:
        out = [ZERO] * (self.deg_t + 1)
        for (i, b), v in self.c.items():
            if b == j:
                out[i] = out[i] + v
        return UPoly(out)

    def substitute_t(self, a, b) -> "BivarPoly":
        """Replace t by a + b x; the result is a polynomial in (x, lam)."""
        out: dict = {}
        for j in range(self.deg_lam + 1):
            q = self.lam_coeff(j).compose_affine(a, b)
            for i, v in enumerate(q.c):
                out[(i, j)] = out.get((i, j), ZERO) + v
        return BivarPoly(out)

    def recenter_lam(self, l0) -> "BivarPoly":
        """Coefficients in (t, mu) where lam = l0 + mu."""
        out: dict = {}
        for i in range(self.deg_t + 1):
            q = self.t_coeff(i).shift(l0)
            for j, v in enumerate(q.c):
                out[(i, j)] = out.get((i, j), ZERO) + v
        return BivarPoly(out)

    def divide_t(self) -> "BivarPoly":
        """Exact division by t; raises if the t^0 part is not zero."""
        if any(i == 0 for (i, _) in self.c):
            raise ValueError("polynomial is not divisible by t")
        return BivarPoly({(i - 1, j): v for (i, j), v in self.c.items()})


# ---------------------------------------------------------------------------
# sparse multivariate real polynomials


class MPoly:
    """Real polynomial in ``nvars`` variables: {exponent tuple: Fraction}."""

    __slots__ = ("n", "c")

    def __init__(self, nvars: int, coeffs: dict | None = None):
        self.n = nvars
        self.c = {k: Fraction(v) for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def var(cls, nvars: int, k: int) -> "MPoly":
        e = [0] * nvars
        e[k] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def const(cls, nvars: int, a) -> "MPoly":
        return cls(nvars, {(0,) * nvars: a})

    def __repr__(self):
        return f"MPoly(n={self.n}, terms={len(self.c)})"

    def _lift(self, other) -> "MPoly":
        return other if isinstance(other, MPoly) else MPoly.const(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.c)
        for k, v in other.c.items():
            out[k] = out.get(k, ZERO) + v
        return MPoly(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.n, {k: -v for k, v in self.c.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return MPoly(self.n, {k: v * other for k, v in self.c.items()})
        out: dict = {}
        for ka, a in self.c.items():
            for kb, b in other.c.items():
                key = tuple(x + y for x, y in zip(ka, kb))
                out[key] = out.get(key, ZERO) + a * b
        return MPoly(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = MPoly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.n == other.n and self.c == other.c

    def degree(self, k: int) -> int:
        return max((e[k] for e in self.c), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.c), default=-1)

    def diff(self, k: int) -> "MPoly":
        out = {}
        for e, v in self.c.items():
            if e[k]:
                f = list(e)
                f[k] -= 1
                out[tuple(f)] = v * e[k]
        return MPoly(self.n, out)

    def __call__(self, *point):
        total = ZERO
        for e, v in self.c.items():
            term = v
            for x, p in zip(point, e):
                if p:
                    term = term * x ** p
            total = total + term
        return total

    def subs(self, k: int, value) -> "MPoly":
        """Fix variable k to a rational value; the variable count is unchanged."""
        out: dict = {}
        for e, v in self.c.items():
            f = list(e)
            p = f[k]
            f[k] = 0
            key = tuple(f)
            out[key] = out.get(key, ZERO) + v * Fraction(value) ** p
        return MPoly(self.n, out)

    def affine(self, k: int, a, b) -> "MPoly":
        """Substitute x_k -> a + b x_k."""
        out = MPoly(self.n)
        xk = MPoly.const(self.n, a) + MPoly.var(self.n, k) * b
        by_power: dict = {}
        for e, v in self.c.items():
            f = list(e)
            p = f[k]
            f[k] = 0
            by_power.setdefault(p, {})[tuple(f)] = v
        cache = {0: MPoly.const(self.n, 1)}
        for p in sorted(by_power):
            if p not in cache:
                cache[p] = xk ** p
            out = out + MPoly(self.n, by_power[p]) * cache[p]
        return out

    def coeffs_in(self, k: int) -> dict:
        """Split as sum_p w_p * x_k^p; returns {p: w_p} with x_k removed."""
        out: dict = {}
        for e, v in self.c.items():
            f = list(e)
            p = f[k]
            f[k] = 0
            out.setdefault(p, {})[tuple(f)] = v
        return {p: MPoly(self.n, d) for p, d in out.items()}

    def to_upoly(self, k: int) -> UPoly:
        """View as a univariate polynomial in x_k (all other exponents must be 0)."""
        deg = self.degree(k)
        out = [ZERO] * (deg + 1)
        for e, v in self.c.items():
            if any(p for i, p in enumerate(e) if i != k):
                raise ValueError("polynomial depends on other variables")
            out[e[k]] += v
        return UPoly(out)


def complex_upoly_to_real(p: UPoly, nvars: int = 2, xv: int = 0, yv: int = 1) -> tuple[MPoly, MPoly]:
    """Real and imaginary parts of p(x + i y) as polynomials in (x, y)."""
    x = MPoly.var(nvars, xv)
    y = MPoly.var(nvars, yv)
    re, im = MPoly(nvars), MPoly(nvars)
    for a in reversed(p.c):
        a = gaussian(a)
        re, im = re * x - im * y + a.re, re * y + im * x + a.im
    return re, im


def binomial_row(n: int) -> list[int]:
    return [comb(n, k) for k in range(n + 1)]


class CMPoly:
    """Complex-valued polynomial in real variables, kept as (real, imaginary)."""

    __slots__ = ("re", "im")

    def __init__(self, re: MPoly, im: MPoly | None = None):
        self.re = re
        self.im = im if im is not None else MPoly(re.n)

    @classmethod
    def lam(cls, nvars: int, xv: int = 0, yv: int = 1) -> "CMPoly":
        """lambda = x + i y."""
        return cls(MPoly.var(nvars, xv), MPoly.var(nvars, yv))

    def _lift(self, other) -> "CMPoly":
        if isinstance(other, CMPoly):
            return other
        if isinstance(other, MPoly):
            return CMPoly(other)
        g = gaussian(other)
        n = self.re.n
        return CMPoly(MPoly.const(n, g.re), MPoly.const(n, g.im))

    def __add__(self, other):
        o = self._lift(other)
        return CMPoly(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return CMPoly(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return CMPoly(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self._lift(1)
        for _ in range(k):
            out = out * self
        return out

    def conj(self) -> "CMPoly":
        return CMPoly(self.re, -self.im)

    def abs2(self) -> MPoly:
        return self.re * self.re + self.im * self.im

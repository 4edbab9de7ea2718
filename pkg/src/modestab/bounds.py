"""Rigorous modulus bounds and sign certificates for exact polynomials.

All functions return exact rationals (or tuples of them) that are proven
bounds; no floating point value ever decides an inequality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

from .exactnum import (
    ComplexEnclosure,
    Enclosure,
    Gaussian,
    ceil_to,
    exp_enclosure,
    gaussian,
    sqrt_enclosure,
    sqrt_lower,
    sqrt_upper,
)
from .poly import BivarPoly, MPoly, UPoly, abs2_poly, cheb_to_power, power_to_cheb

BITS = 80


def abs_up(z) -> Fraction:
    """Upper bound for |z| with z a Gaussian, rational or complex enclosure."""
    if isinstance(z, ComplexEnclosure):
        return z.abs_upper(BITS)
    if isinstance(z, Enclosure):
        return z.mag()
    z = gaussian(z)
    if z.im == 0:
        return abs(z.re)
    if z.re == 0:
        return abs(z.im)
    return sqrt_upper(z.abs2(), BITS)


def abs_low(z) -> Fraction:
    if isinstance(z, ComplexEnclosure):
        return z.abs_lower(BITS)
    z = gaussian(z)
    if z.im == 0:
        return abs(z.re)
    if z.re == 0:
        return abs(z.im)
    return sqrt_lower(z.abs2(), BITS)


def sum_abs(coeffs: Sequence) -> Fraction:
    return sum((abs_up(c) for c in coeffs), Fraction(0))


# ---------------------------------------------------------------------------
# box bound on disk x [-1, 1]


def box_bound(p: BivarPoly, lam0, radius: Fraction) -> Fraction:
    """Upper bound of |p(x, lam)| for x in [-1, 1], |lam - lam0| <= radius.

    ``p`` is a polynomial in (x, lam).  After recentring at lam0 each
    coefficient of (lam - lam0)^j is a polynomial in x whose Chebyshev
    coefficients are summed in modulus.
    """
    q = p.recenter_lam(gaussian(lam0))
    total = Fraction(0)
    for j in range(q.deg_lam + 1):
        cheb = power_to_cheb(q.lam_coeff(j).c)
        total += sum_abs(cheb) * radius ** j
    return total


# ---------------------------------------------------------------------------
# cubic extrema on [-1, 1]


def _horner_enc(coeffs: Sequence[Fraction], x: Enclosure) -> Enclosure:
    acc = Enclosure(0)
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def cubic_range(cheb: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """(lower, upper) bounds of sum_{k<=3} cheb[k] T_k on [-1, 1]."""
    c = list(cheb) + [Fraction(0)] * (4 - len(cheb))
    a = cheb_to_power(c[:4])
    a = list(a) + [Fraction(0)] * (4 - len(a))
    vals = [Enclosure(sum(a)), Enclosure(a[0] - a[1] + a[2] - a[3])]
    crit: list[Enclosure] = []
    A, B, C = 3 * a[3], 2 * a[2], a[1]
    if A == 0:
        if B != 0:
            crit.append(Enclosure(-C / B))
    else:
        disc = B * B - 4 * A * C
        if disc >= 0:
            s = sqrt_enclosure(disc, Fraction(1, 1 << BITS))
            for sign in (1, -1):
                crit.append((Enclosure(-B) + s * sign) / (2 * A))
    for x in crit:
        if x.hi < -1 or x.lo > 1:
            continue
        x = x.intersect(Enclosure(-1, 1))
        vals.append(_horner_enc(a, x))
    return min(v.lo for v in vals), max(v.hi for v in vals)


# ---------------------------------------------------------------------------
# segment bounds


@dataclass(frozen=True)
class Segment:
    d0: Gaussian
    d1: Gaussian

    @property
    def center(self) -> Gaussian:
        return (self.d0 + self.d1) / 2

    @property
    def half(self) -> Gaussian:
        return (self.d1 - self.d0) / 2

    def point(self, x: Fraction) -> Gaussian:
        return self.center + self.half * x


def partition_segments(points: Sequence) -> list[Segment]:
    pts = [gaussian(p) for p in points]
    return [Segment(pts[k], pts[(k + 1) % len(pts)]) for k in range(len(pts))]


def split_segment(seg: Segment, pieces: int) -> list[Segment]:
    out = []
    for k in range(pieces):
        a = seg.d0 + (seg.d1 - seg.d0) * Fraction(k, pieces)
        b = seg.d0 + (seg.d1 - seg.d0) * Fraction(k + 1, pieces)
        out.append(Segment(a, b))
    return out


@dataclass
class RationalFunction:
    """poly(lam) + sum residue / (lam - pole); poles outside the region of use."""

    poly: UPoly
    terms: list  # [(residue, pole)]

    def __call__(self, lam):
        lam = gaussian(lam)
        v = self.poly(lam)
        for a, s in self.terms:
            v = v + gaussian(a) / (lam - s)
        return gaussian(v)

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        merged: dict = {}
        for a, s in list(self.terms) + list(other.terms):
            s = gaussian(s)
            merged[s] = merged.get(s, Gaussian(0)) + a
        return RationalFunction(self.poly + other.poly, [(a, s) for s, a in merged.items() if a])

    def scale(self, c) -> "RationalFunction":
        return RationalFunction(self.poly.scale(c), [(a * c, s) for a, s in self.terms])

    def mul_poly(self, P: UPoly) -> "RationalFunction":
        """Product with a polynomial, returned again in partial-fraction form."""
        poly = self.poly * P
        terms = []
        for a, s in self.terms:
            s = gaussian(s)
            q, r = P.divmod(UPoly([-s, Fraction(1)]))
            poly = poly + q.scale(a)
            terms.append((gaussian(a) * r[0], s))
        return RationalFunction(poly, terms)

    def deriv(self) -> "RationalFunction":
        raise NotImplementedError("derivatives of pole terms are not simple poles")


@dataclass
class SegmentBound:
    lower: Fraction
    upper: Fraction
    seg: Segment
    detail: dict = field(default_factory=dict)


def _modulus_from_head(F1: UPoly, err: Fraction, keep: int = 3) -> tuple[Fraction, Fraction, dict]:
    """Bounds of |F1(x)| +- err on [-1,1] via the Chebyshev head of |F1|^2."""
    sq = abs2_poly(F1)
    cheb = power_to_cheb(sq.c) if sq.c else [Fraction(0)]
    head = list(cheb[: keep + 1])
    tail = sum((abs(c) for c in cheb[keep + 1:]), Fraction(0))
    lo1, hi1 = cubic_range(head)
    upper = sqrt_upper(max(hi1 + tail, Fraction(0)), BITS) + err
    low_sq = lo1 - tail
    lower = (sqrt_lower(low_sq, BITS) if low_sq > 0 else Fraction(0)) - err
    return lower, upper, {"tail": tail, "head_range": (lo1, hi1)}


def rational_bound_on_segment(F: RationalFunction, seg: Segment, m0: int) -> SegmentBound:
    """Bounds of |F| on a segment: geometric tails of the poles beyond m0
    terms, then the Chebyshev head of |F1|^2 with its cubic extrema."""
    c, r = seg.center, seg.half
    F1 = F.poly.compose_affine(c, r)
    E1 = Fraction(0)
    for a, s in F.terms:
        a, s = gaussian(a), gaussian(s)
        base = a / (c - s)
        ratio = -(r / (c - s))
        rho = abs_up(ratio)
        if rho >= 1:
            raise ValueError("pole too close to the segment for the geometric expansion")
        coeffs, term = [], base
        for _ in range(m0 + 1):
            coeffs.append(term)
            term = term * ratio
        F1 = F1 + UPoly(coeffs)
        E1 += abs_up(base) * rho ** (m0 + 1) / (1 - rho)
    lower, upper, detail = _modulus_from_head(F1, E1)
    detail["E1"] = E1
    return SegmentBound(lower, upper, seg, detail)


def poly_bound_on_segment(P: UPoly, seg: Segment, head_deg: int = 5) -> SegmentBound:
    """Bounds of |P| on a segment keeping a degree-5 Chebyshev head of P."""
    Px = P.compose_affine(seg.center, seg.half)
    cheb = power_to_cheb(Px.c) if Px.c else [Fraction(0)]
    E1 = sum_abs(cheb[head_deg + 1:])
    head = UPoly(cheb_to_power(cheb[: head_deg + 1]))
    lower, upper, detail = _modulus_from_head(head, E1)
    detail["E1"] = E1
    return SegmentBound(lower, upper, seg, detail)


def bound_on_boundary(fn, points: Sequence, **kw) -> tuple[Fraction, Fraction, list[SegmentBound]]:
    """Apply a segment bound to every edge of a closed partition."""
    segs = partition_segments(points)
    res = [fn(seg, **kw) for seg in segs]
    return min(b.lower for b in res), max(b.upper for b in res), res


# ---------------------------------------------------------------------------
# sup |q e^h| on [-1, 1]


def _taylor_spread(p: UPoly, m: Fraction, w: Fraction):
    """Value at m and sum_{k>=1} |coeff_k| w^k of p around m (complex p)."""
    s = p.shift(m).c
    val = s[0] if s else Fraction(0)
    spread = Fraction(0)
    pw = w
    for a in s[1:]:
        spread += abs_up(a) * pw
        pw *= w
    return val, spread


def sup_mod_q_exp_h(q: UPoly, h: UPoly, cells: int = 64) -> Fraction:
    """Upper bound of |q(x)| exp(Re h(x)) on [-1, 1] by uniform subdivision."""
    reh = h.re_part()
    best = Fraction(0)
    w = Fraction(1, cells)
    bound_cache: list[tuple[Fraction, Fraction]] = []
    for k in range(cells):
        m = -1 + (2 * k + 1) * w
        qv, qs = _taylor_spread(q, m, w)
        hv, hs = _taylor_spread(reh, m, w)
        bound_cache.append((abs_up(qv) + qs, gaussian(hv).re + hs))
    for qb, hb in bound_cache:
        if qb == 0:
            continue
        e = exp_enclosure(_round_up(hb), Fraction(1, 10**12)).hi
        best = max(best, qb * e)
    return best


def _round_up(x: Fraction, bits: int = 40) -> Fraction:
    return ceil_to(x, bits)


def sup_abs_on_interval(p: UPoly, cells: int = 32) -> Fraction:
    """Upper bound of |p(x)| on [-1, 1] for complex p."""
    w = Fraction(1, cells)
    best = Fraction(0)
    for k in range(cells):
        m = -1 + (2 * k + 1) * w
        v, s = _taylor_spread(p, m, w)
        best = max(best, abs_up(v) + s)
    return best


# ---------------------------------------------------------------------------
# sign certificates


@dataclass
class SignCertificate:
    ok: bool
    method: str
    cells: int = 0
    note: str = ""


def bernstein_coeffs(p: Sequence[Fraction], a: Fraction, b: Fraction) -> list[Fraction]:
    """Bernstein coefficients of p on [a, b]."""
    q = UPoly(p).compose_affine(a, b - a).c
    n = len(q) - 1
    if n < 0:
        return [Fraction(0)]
    out = []
    for k in range(n + 1):
        s = Fraction(0)
        for j in range(k + 1):
            if q[j]:
                s += Fraction(comb(k, j), comb(n, j)) * q[j]
        out.append(s)
    return out


def _cheb_positive(p: UPoly, a: Fraction, b: Fraction) -> bool:
    q = p.compose_affine((a + b) / 2, (b - a) / 2)
    cheb = power_to_cheb(q.c) if q.c else [Fraction(0)]
    return cheb[0] - sum((abs(c) for c in cheb[1:]), Fraction(0)) > 0


def certify_positive(p: UPoly, a, b, max_depth: int = 24) -> SignCertificate:
    """p > 0 on [a, b] (closed) via Chebyshev head/tail, then Bernstein with bisection."""
    a, b = Fraction(a), Fraction(b)
    stack = [(a, b, 0)]
    cells = 0
    while stack:
        lo, hi, depth = stack.pop()
        cells += 1
        if _cheb_positive(p, lo, hi):
            continue
        bc = bernstein_coeffs(p.c, lo, hi)
        if min(bc) > 0:
            continue
        if bc[0] <= 0 or bc[-1] <= 0 or depth >= max_depth:
            return SignCertificate(False, "bernstein", cells, f"fails near [{float(lo)}, {float(hi)}]")
        mid = (lo + hi) / 2
        stack.append((lo, mid, depth + 1))
        stack.append((mid, hi, depth + 1))
    return SignCertificate(True, "chebyshev+bernstein", cells)


def certify_nonnegative(p: UPoly, a, b, max_depth: int = 24) -> SignCertificate:
    """p >= 0 on [a, b]; exact roots at the endpoints are divided out first."""
    a, b = Fraction(a), Fraction(b)
    if not p.c:
        return SignCertificate(True, "zero polynomial")
    q = p
    stripped = 0
    while q.c and q(a) == 0:
        q, r = q.divmod(UPoly([-a, Fraction(1)]))
        stripped += 1
    while q.c and q(b) == 0:
        q, r = q.divmod(UPoly([b, Fraction(-1)]))
        stripped += 1
    cert = certify_positive(q, a, b, max_depth)
    if stripped:
        cert.method += f"+{stripped} endpoint roots"
    return cert


def certify_negative(p: UPoly, a, b, max_depth: int = 24) -> SignCertificate:
    return certify_positive(-p, a, b, max_depth)


def certify_nonpositive(p: UPoly, a, b, max_depth: int = 24) -> SignCertificate:
    return certify_nonnegative(-p, a, b, max_depth)


def certify_derivative_chain(p: UPoly, a, b, max_order: int = 8) -> SignCertificate:
    """p > 0 on [a, b] from p(a) > 0, p(b) > 0 and a derivative of fixed sign.

    If p' has constant sign the minimum is at an endpoint; p' is in turn
    certified either directly or by the same argument one order higher.
    """
    a, b = Fraction(a), Fraction(b)
    if p(a) <= 0 or p(b) <= 0:
        return SignCertificate(False, "derivative-chain", note="endpoint sign")
    d = p.deriv()
    for _ in range(max_order):
        if not d.c:
            return SignCertificate(True, "derivative-chain")
        if certify_positive(d, a, b, 8).ok or certify_negative(d, a, b, 8).ok:
            return SignCertificate(True, "derivative-chain")
        d = d.deriv()
    return SignCertificate(False, "derivative-chain")


# multivariate boxes


def _bernstein_tensor(p: MPoly, box: Sequence[tuple[Fraction, Fraction]]):
    """Bernstein coefficients of p over a box, as a dict keyed by multi-index."""
    q = p
    for k, (lo, hi) in enumerate(box):
        q = q.affine(k, lo, hi - lo)
    degs = [max(q.degree(k), 0) for k in range(p.n)]
    coeffs = dict(q.c)
    for k in range(p.n):
        n = degs[k]
        out: dict = {}
        groups: dict = {}
        for e, v in coeffs.items():
            rest = e[:k] + (0,) + e[k + 1:]
            groups.setdefault(rest, {})[e[k]] = v
        for rest, row in groups.items():
            for i in range(n + 1):
                s = Fraction(0)
                for j, v in row.items():
                    if j <= i:
                        s += Fraction(comb(i, j), comb(n, j)) * v
                if s:
                    key = rest[:k] + (i,) + rest[k + 1:]
                    out[key] = s
        coeffs = out
    total = 1
    for n in degs:
        total *= n + 1
    return coeffs, degs, total


def bernstein_range(p: MPoly, box) -> tuple[Fraction, Fraction]:
    coeffs, degs, total = _bernstein_tensor(p, box)
    vals = list(coeffs.values())
    if len(vals) < total:
        vals.append(Fraction(0))
    return min(vals), max(vals)


def certify_positive_box(p: MPoly, box, max_cells: int = 4096, strict: bool = True) -> SignCertificate:
    """p > 0 (or p >= 0 with ``strict=False``) on a box.

    Bernstein enclosures with bisection of the widest side.
    """
    box = [(Fraction(lo), Fraction(hi)) for lo, hi in box]
    stack = [box]
    cells = 0
    while stack:
        b = stack.pop()
        cells += 1
        if cells > max_cells:
            return SignCertificate(False, "bernstein-box", cells, "cell budget exhausted")
        lo, _ = bernstein_range(p, b)
        if lo > 0 or (not strict and lo >= 0):
            continue
        corner = p(*[x for x, _ in b])
        if corner < 0 or (strict and corner == 0):
            return SignCertificate(False, "bernstein-box", cells, f"nonpositive value at {b}")
        k = max(range(len(b)), key=lambda i: b[i][1] - b[i][0])
        m = (b[k][0] + b[k][1]) / 2
        left, right = list(b), list(b)
        left[k] = (b[k][0], m)
        right[k] = (m, b[k][1])
        stack.extend([left, right])
    return SignCertificate(True, "bernstein-box", cells)


def certify_nonnegative_box(p: MPoly, box, max_cells: int = 4096) -> SignCertificate:
    return certify_positive_box(p, box, max_cells, strict=False)


def certify_nonneg_for_all_n(p: MPoly, nvar: int, tvar: int, t_lo, t_hi, strict: bool = False) -> SignCertificate:
    """p(N, t) >= 0 for all N >= 0 and t in [t_lo, t_hi].

    ``p`` has two live variables; each coefficient of N^k must be
    nonnegative on the t-interval, and the N^0 coefficient positive when
    ``strict``.
    """
    parts = p.coeffs_in(nvar)
    cells = 0
    for k, w in sorted(parts.items()):
        u = w.to_upoly(tvar)
        if strict and k == 0:
            c = certify_positive(u, t_lo, t_hi)
        else:
            c = certify_nonnegative(u, t_lo, t_hi)
        cells += c.cells
        if not c.ok:
            return SignCertificate(False, "coefficientwise-in-n", cells, f"coefficient of N^{k}: {c.note}")
    return SignCertificate(True, "coefficientwise-in-n", cells)


def certify_monotone(num: UPoly, den: UPoly, a, b, increasing: bool) -> SignCertificate:
    """num/den monotone on [a, b] (den != 0 there) from the sign of num' den - num den'."""
    d = num.deriv() * den - num * den.deriv()
    c = certify_nonnegative(d, a, b) if increasing else certify_nonpositive(d, a, b)
    c.method = "monotone:" + c.method
    return c

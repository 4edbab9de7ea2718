"""Certificates for the regions S3 and S4, both driven by the three-term
recurrence p2(n) c_{n+2} + p1(n) c_{n+1} + p0(n) c_n = 0.

S3 (0 <= Re lam <= 1/2, 4 <= Im lam <= 10): the continued-fraction operator
N[(a_n)]_n = -B_n / (A_n + a_{n+1}) is a contraction on a ball, and the
anchor N(0)_10 - r_10 is bounded away from zero on the boundary and has no
roots inside.

S4 (0 <= Re lam <= 1/2, 10 <= Im lam <= 380): quasi-solutions of the ratio
recurrence with certified relative errors.
"""
from __future__ import annotations

from fractions import Fraction as F

from . import frobenius as fr
from .bounds import (
    certify_nonneg_for_all_n,
    RationalFunction,
    abs_low,
    abs_up,
    bound_on_boundary,
    certify_monotone,
    certify_nonnegative,
    certify_positive_box,
    partition_segments,
    rational_bound_on_segment,
    sup_mod_q_exp_h,
)
from .certificate import Certificate
from .data import DataBundle
from .exactnum import (
    Enclosure,
    Gaussian,
    ceil_to,
    ComplexEnclosure,
    cexp_enclosure,
    complex_sqrt_enclosure,
    exp_enclosure,
    floor_to,
    gaussian,
    pi_enclosure,
    sqrt_enclosure,
    sqrt_lower,
    sqrt_upper,
)
from .poly import CMPoly, MPoly, UPoly, cheb_to_power, power_to_cheb

BITS = 64
TOL = F(1, 10**20)

# ---------------------------------------------------------------------------
# S3: contraction of the continued-fraction operator

S3_BOX = [(F(0), F(1, 2)), (F(4), F(10)), (F(0), F(1, 10))]
BALL = F(3, 5)
CONTRACTION = F(4, 5)
N0 = 10


def _scaled_recurrence_polys():
    """z^2 p0, z^2 p1, z^2 p2 with z = 1/n, lam = x + i y, variables (x, y, z)."""
    lam = CMPoly.lam(3)
    z = MPoly.var(3, 2)
    one = MPoly.const(3, 1)
    q0 = lam * z * 4 + (lam * lam - 9) * (z * z) + 4
    q1 = (lam * 8 + 20) * z * (-1) + (lam * lam + lam * 8 - 9) * (z * z) * (-1) - 12
    q2 = one * 8 + z * 28 + z * z * 20
    return q0, q1, q2


def _div_var(p: MPoly, k: int) -> MPoly:
    """Exact division by the variable x_k (all terms must contain it)."""
    out = {}
    for e, v in p.c.items():
        if e[k] == 0:
            raise ValueError("not divisible")
        f = list(e)
        f[k] -= 1
        out[tuple(f)] = v
    return MPoly(p.n, out)


def _strip_var(p: MPoly, k: int) -> MPoly:
    while p.c and all(e[k] for e in p.c):
        p = _div_var(p, k)
    return p


def _quotient_derivative(P: MPoly, Q: MPoly, k: int) -> MPoly:
    """Numerator of d/dx_k (P/Q), i.e. P_k Q - P Q_k."""
    return P.diff(k) * Q - P * Q.diff(k)


def _ratio_sq_z(num: MPoly, den: MPoly, x, y) -> tuple[UPoly, UPoly]:
    return num.subs(0, x).subs(1, y).to_upoly(2), den.subs(0, x).subs(1, y).to_upoly(2)


def _zvalue(pair: tuple[UPoly, UPoly], n: int) -> F:
    num, den = pair
    z = F(1, n)
    return num(z) / den(z)


class ZBounds:
    """Closed forms Z1_n^2 = M1(1/2, 10, 1/n), Z2_n^2 = M2(0, 4, 1/n) and
    the squares M_{4,j}(1/n), j = 4..9, whose max is Z3(n)^2."""

    def __init__(self):
        q0, q1, q2 = _scaled_recurrence_polys()
        self.P0, self.P1, self.P2 = q0.abs2(), q1.abs2(), q2 * q2
        self.m1 = _ratio_sq_z(self.P0, self.P1, F(1, 2), F(10))
        self.m2 = _ratio_sq_z(self.P1, self.P2, F(0), F(4))
        self.m4 = {}
        for j in range(4, 10):
            a_num, a_den = _ratio_sq_z(self.P0, self.P1, F(0), F(j + 1))
            b_num, b_den = _ratio_sq_z(self.P1, self.P2, F(0), F(j))
            self.m4[j] = (a_num * b_den, a_den * b_num)

    def z1_sq(self, n: int) -> F:
        return _zvalue(self.m1, n)

    def z2_sq(self, n: int) -> F:
        return _zvalue(self.m2, n)

    def z3_sq(self, n: int) -> F:
        return max(_zvalue(m, n) for m in self.m4.values())

    def z1_up(self, n: int) -> F:
        return sqrt_upper(self.z1_sq(n), BITS)

    def z2_low(self, n: int) -> F:
        return sqrt_lower(self.z2_sq(n), BITS)

    def z3_up(self, n: int) -> F:
        return sqrt_upper(self.z3_sq(n), BITS)


def certify_z_monotonicity(cert: Certificate, zb: ZBounds) -> bool:
    """Locate the extremal points of |B_n/A_n|, |A_n| and |B_n/A_n^2| on S3."""
    ok = True
    box = S3_BOX
    # |B/A|^2 = P0/P1 increases in x and y on the whole box
    for k, tag in ((0, "x"), (1, "y")):
        d = _strip_var(_quotient_derivative(zb.P0, zb.P1, k), 2)
        c = certify_positive_box(d, box)
        ok &= cert.holds(f"Z1/d{tag}>0", c.ok, f"d/d{tag} |B_n/A_n|^2 > 0 on S3 x [0,1/10]", c.cells)
    # |A|^2 = P1/P2 increases in x everywhere and in y on Re lam = 0
    d = _strip_var(zb.P1.diff(0), 2)
    c = certify_positive_box(d, box)
    ok &= cert.holds("Z2/dx>0", c.ok, "d/dx |A_n|^2 > 0 on S3 x [0,1/10]", c.cells)
    d = _strip_var(zb.P1.diff(1).subs(0, 0), 2)
    c = certify_positive_box(d, box)
    ok &= cert.holds("Z2/dy>0", c.ok, "d/dy |A_n|^2 > 0 on Re lam = 0", c.cells)
    # |B/A^2|^2 = P0 P2 / P1^2 decreases in x; P2 does not depend on x
    d = _strip_var(zb.P0.diff(0) * zb.P1 - zb.P0 * zb.P1.diff(0) * 2, 2)
    c = certify_positive_box(-d, box)
    ok &= cert.holds("Z3/dx<0", c.ok, "d/dx |B_n/A_n^2|^2 < 0 on S3 x [0,1/10]", c.cells)

    zlo, zhi = F(0), F(1, 10)
    num, den = zb.m1
    c = certify_nonnegative(den.scale(F(1, 9)) - num, zlo, zhi)
    ok &= cert.holds("Z1<=1/3", c.ok, "Z1_n <= 1/3 for all n >= 10", c.method)
    num, den = zb.m2
    c = certify_monotone(num, den, zlo, zhi, increasing=False)
    ok &= cert.holds("Z2/increasing-in-n", c.ok, "Z2_n increases with n for n >= 10", c.method)
    for j, (num, den) in zb.m4.items():
        c = certify_monotone(num, den, zlo, zhi, increasing=True)
        ok &= cert.holds(f"M4,{j}/decreasing-in-n", c.ok, "M_{4,%d}(1/n) decreases with n for n >= 10" % j, c.method)
    return ok


def certify_s3_contraction(cert: Certificate, zb: ZBounds) -> tuple[bool, F]:
    """Ball invariance and contraction factor for every n >= 10."""
    ok = True
    # Z1_n <= 1/3 and Z2_n increasing: beyond the last checked index the
    # ratio is at most (1/3) / (1 - 0.6/Z2_16)
    last = 16
    worst = F(0)
    for n in range(N0, last):
        r = zb.z1_up(n) / (1 - BALL / zb.z2_low(n))
        worst = max(worst, r)
    tail = F(1, 3) / (1 - BALL / zb.z2_low(last))
    worst = max(worst, tail)
    ok &= cert.le("ball", worst, BALL, "sup_n Z1_n / (1 - 0.6/Z2_n) <= 0.6 for n >= 10")
    cert.le("ball/tail", tail, BALL, "(1/3) / (1 - 0.6/Z2_16) <= 0.6 covers n >= 16")
    # Z3 decreasing and Z2 increasing: n = 10 is the worst case
    factor = zb.z3_up(N0) / (1 - BALL / zb.z2_low(N0)) ** 2
    ok &= cert.lt("contraction", factor, CONTRACTION, "Z3(10) / (1 - 0.6/Z2_10)^2 < 0.8")
    return ok, factor


def certify_s3_gap(cert: Certificate, zb: ZBounds) -> tuple[bool, F]:
    """sup_n |N(0)_n - N^2(0)_n| < 0.106 on S3."""
    worst = F(0)
    for n in range(N0, 21):
        v = zb.z1_up(n) * zb.z1_up(n + 1) / (zb.z2_low(n) - zb.z1_up(n + 1))
        worst = max(worst, v)
    ok = cert.lt("gap/n<=20", worst, F(106, 1000), "Z1_n Z1_{n+1} / (Z2_n - Z1_{n+1}) < 0.106, 10 <= n <= 20")
    tail = F(1, 9) / (zb.z2_low(21) - F(1, 3))
    ok &= cert.lt("gap/n>20", tail, F(106, 1000), "(1/3)^2 / (Z2_21 - 1/3) < 0.106")
    return ok, max(worst, tail)


# ---------------------------------------------------------------------------
# S3: the anchor N(0)_10 - r_10

S3_CENTER = Gaussian(F(1, 4), F(7))
S3_RADIUS_SQ = F(145, 16)          # |corner - center|^2
S3_LAMMAX_SQ = F(1, 4) + 100       # max |lam|^2 on S3


def anchor_exact() -> tuple[UPoly, UPoly]:
    """N(0)_10 = -B_10/A_10 as numerator / denominator polynomials."""
    return -fr.p0(10), fr.p1(10)


def _root_product(roots) -> UPoly:
    out = UPoly([F(1)])
    for s in roots:
        out = out * UPoly([-F(s), F(1)])
    return out


def _disk_sum_bound(P: UPoly, center, radius_up: F) -> F:
    shifted = P.shift(gaussian(center))
    total, pw = F(0), F(1)
    for a in shifted.c:
        total += abs_up(a) * pw
        pw *= radius_up
    return total


def anchor_function(data: DataBundle) -> RationalFunction:
    """F = 1 - P~~_1 + sum d~_i / (lam - s~_i), the explicit approximant of
    N(0)_10 - r_10 (both the Q poles and the seventeen r_10 poles)."""
    poly = UPoly([F(1)]) - data.anchor_poly
    terms = [(Gaussian(d), Gaussian(s)) for s, d in data.anchor_poles]
    terms += [(Gaussian(d), Gaussian(s)) for s, d in data.anchor_roots]
    return RationalFunction(poly, terms)


def certify_anchor(cert: Certificate, data: DataBundle, m0: int = 2) -> tuple[bool, F, RationalFunction]:
    ok = True
    num10, den10 = anchor_exact()
    lam_max = sqrt_upper(S3_LAMMAX_SQ, BITS)
    R = sqrt_upper(S3_RADIUS_SQ, BITS)

    # link 1: N(0)_10 = 1 + sum e_i/(lam - s_i), s = -44 +- sqrt 545
    r545 = sqrt_enclosure(545, TOL)
    s_true = [r545 - 44, -r545 - 44]
    e_true = [
        (r545 * (-139) + r545 * r545 * 6) * F(-4, 545),
        (r545 * 139 + r545 * r545 * 6) * F(-4, 545),
    ]
    link1 = F(0)
    for (s_t, d_t), s, e in zip(data.anchor_poles, s_true, e_true):
        s_t, d_t = F(s_t), F(d_t)
        numer = (e - d_t).mag() * lam_max + (e * s_t - s * d_t).mag()
        # Re lam >= 0, Im lam >= 4 and s, s~ < 0, so |lam - s|^2 >= s^2 + 16
        denom = sqrt_lower((s * s).lo + 16, BITS) * sqrt_lower(s_t * s_t + 16, BITS)
        link1 += numer / denom
    ok &= cert.lt("anchor/link1", link1, F(1, 312500), "|N(0)_10 - Q| < 1/312500 on S3")
    # link 2: |c_11| on the disk around 1/4 + 7i covering S3
    c = fr.c_polys(12)
    c10, c11 = c[10], c[11]
    b2 = _disk_sum_bound(c11, S3_CENTER, R)
    ok &= cert.lt("anchor/link2", b2, F(37209, 50), "|c_11| < 37209/50 on S3")

    # link 3: |c_10 - c~_10| with c~_10 = l1 (lam - 1) prod (lam - s~_i)
    l1 = c10.c[-1]
    s_tilde = [F(s) for s, _ in data.anchor_roots]
    ct10 = _root_product([F(1)] + s_tilde).scale(l1)
    b3 = _disk_sum_bound(c10 - ct10, S3_CENTER, R)
    ok &= cert.lt("anchor/link3", b3, F(3, 250000), "|c_10 - c~_10| < 3/250000 on S3")

    # link 4: |c~_10| >= |l1| |4i - 1/2| prod |4i - s~_i|  (all s~_i < 0)
    ok &= cert.holds("anchor/roots-negative", all(s < 0 for s in s_tilde), "every s~_i < 0", len(s_tilde))
    sq = l1 * l1 * (F(1, 4) + 16)
    for s in s_tilde:
        sq *= s * s + 16
    b4 = sqrt_lower(sq, BITS)
    ok &= cert.gt("anchor/link4", b4, F(786187, 1000000), "|c~_10| > 786187/1000000 on S3")

    # link 5: |c11/c10 - c11/c~10|, using the printed constants
    k2, k3, k4 = F(37209, 50), F(3, 250000), F(786187, 1000000)
    b5 = k2 * k3 / ((k4 - k3) * k4)
    ok &= cert.lt("anchor/link5", b5, F(145, 10000), "|c11/c10 - c11/c~10| < 0.0145")

    # link 6: rounding of P~_1 and of the residues e~_i into d~_i
    q_, r_ = c11.divmod(ct10)
    dct = ct10.deriv()
    pole_err = F(0)
    for s, d in data.anchor_roots:
        s, d = F(s), F(d)
        e_exact = -r_(s) / dct(s)           # c11/c~10 = P~1 + sum -e~_i/(lam - s~_i)
        pole_err += abs(F(d) - e_exact) / sqrt_lower(s * s + 16, BITS)
    poly_err = F(0)
    diff = data.anchor_poly - q_
    pw = F(1)
    for a in diff.c:
        poly_err += abs_up(a) * pw
        pw *= lam_max
    b6 = pole_err + poly_err
    ok &= cert.lt("anchor/link6", b6, F(3, 10**7), "|r~_10 - c11/c~10| < 3e-7 on S3")
    # the residue at lam = 1 vanishes since c_11(1) = 0
    ok &= cert.equals("anchor/common-root", c11(F(1)), F(0), "c_11(1) = 0, so lam = 1 is not a pole")

    # link 7: |F| on the boundary of S3
    Fa = anchor_function(data)
    pts = data.partitions["PF"]
    low, _, _ = bound_on_boundary(lambda seg: rational_bound_on_segment(Fa, seg, m0), pts)
    ok &= cert.gt("anchor/link7", low, F(6098, 10000), "|F| > 0.6098 on the boundary of S3")

    final = F(6098, 10000) - F(1, 312500) - F(145, 10000) - F(3, 10**7)
    ok &= cert.gt("anchor/gap", final, F(595, 1000), "0.6098 - 1/312500 - 0.0145 - 3e-7 > 0.595")
    links = link1 + b5 + b6
    cert.gt("anchor/gap-computed", low - links, F(595, 1000), "same chain with computed links")
    return ok, links, Fa


# ---------------------------------------------------------------------------
# winding numbers by quadrant counting


def _quadrant(z: Gaussian) -> int:
    """Half-open quadrants 0..3 covering C minus 0."""
    if z.re > 0 and z.im >= 0:
        return 0
    if z.re <= 0 and z.im > 0:
        return 1
    if z.re < 0 and z.im <= 0:
        return 2
    if z.re >= 0 and z.im < 0:
        return 3
    raise ZeroDivisionError("value is zero")


class WindingError(RuntimeError):
    pass


def winding_number(fn, lipschitz, points, max_depth: int = 20) -> tuple[int, int]:
    """Winding number of fn around 0 along the closed polygon ``points``.

    ``lipschitz(a, b)`` must bound |fn'| on the segment [a, b].  A segment is
    accepted when fn stays in a disk that avoids 0 (so its argument moves by
    less than pi) and its endpoint quadrants are not opposite; the quadrant
    steps then sum to 4 * winding.  Returns (winding, pieces).
    """
    steps = 0
    pieces = 0
    for seg in partition_segments(points):
        stack = [(seg.d0, seg.d1, 0)]
        while stack:
            a, b, depth = stack.pop()
            m = (a + b) / 2
            fm = gaussian(fn(m))
            half = abs_up(b - a) / 2
            radius = lipschitz(a, b) * half
            fa, fb = gaussian(fn(a)), gaussian(fn(b))
            if fa == 0 or fb == 0:
                raise WindingError(f"function vanishes on the contour near {m}")
            qa, qb = _quadrant(fa), _quadrant(fb)
            diff = (qb - qa) % 4
            if abs_low(fm) > radius and diff != 2:
                steps += {0: 0, 1: 1, 3: -1}[diff]
                pieces += 1
                continue
            if depth >= max_depth:
                raise WindingError(f"refinement cap reached near {m}")
            # push the second half first so the first half is processed first
            stack.append((m, b, depth + 1))
            stack.append((a, m, depth + 1))
    if steps % 4:
        raise WindingError("quadrant steps do not close up")
    return steps // 4, pieces


def rational_lipschitz(Fr: RationalFunction):
    """|F'| on a segment: |P'| by coefficient sums, poles by distance."""
    dP = Fr.poly.deriv()

    def bound(a: Gaussian, b: Gaussian) -> F:
        m = (a + b) / 2
        w = abs_up(b - a) / 2
        total = F(0)
        shifted = dP.shift(m)
        pw = F(1)
        for c in shifted.c:
            total += abs_up(c) * pw
            pw *= w
        for res, s in Fr.terms:
            dist = abs_low(m - s) - w
            if dist <= 0:
                raise WindingError("pole on the contour")
            total += abs_up(res) / (dist * dist)
        return total

    return bound


def certify_s3_rootfree(cert: Certificate, Fa: RationalFunction, data: DataBundle, links: F) -> bool:
    """Winding number 0 of F on the boundary of S3; Rouché transfers it."""
    pts = data.partitions["PF"]
    try:
        w, pieces = winding_number(Fa, rational_lipschitz(Fa), pts)
    except WindingError as exc:
        return cert.holds("winding/F", False, "winding number of F on the boundary of S3 is 0", str(exc))
    ok = cert.equals("winding/F", w, 0, f"winding number of F on the boundary of S3 ({pieces} pieces)")
    ok &= cert.holds(
        "winding/poles-outside",
        all(gaussian(s).im == 0 and gaussian(s).re < 0 for _, s in Fa.terms),
        "all poles of F are real and negative, outside S3",
        len(Fa.terms),
    )
    ok &= cert.lt(
        "winding/rouche-F",
        links,
        F(6098, 10000),
        "|(N(0)_10 - r_10) - F| <= links 1, 5, 6 < |F| on the boundary, same winding",
    )
    ok &= cert.holds(
        "winding/c10-nonzero",
        True,
        "c_10 != 0 on S3 since |c~_10| - |c_10 - c~_10| > 0 (links 3, 4)",
        "links 3-4",
    )
    return ok


def certify_s3(data: DataBundle, cert: Certificate | None = None) -> Certificate:
    cert = cert or Certificate("S3")
    zb = ZBounds()
    with cert.group("monotonicity"):
        certify_z_monotonicity(cert, zb)
    with cert.group("contraction"):
        _, factor = certify_s3_contraction(cert, zb)
    with cert.group("gaps"):
        _, gap = certify_s3_gap(cert, zb)
        ok_anchor, links, Fa = certify_anchor(cert, data)
    with cert.group("rouche"):
        fixed = F(106, 1000) / (1 - CONTRACTION)
        cert.lt(
            "fixed-point-distance",
            fixed,
            F(595, 1000),
            "||N(0) - N^inf(0)|| <= 0.106 / (1 - 0.8) < 0.595 < |N(0)_10 - r_10|",
        )
        certify_s3_rootfree(cert, Fa, data, links)
    cert.conclusion.append("no eigenvalues in S3 (and its conjugate)")
    return cert


# ---------------------------------------------------------------------------
# S4: quasi-solutions r1_n = exp(W_n) for n <= 50

SEAM = F(70)
D1 = F(19, 1000)
D2 = F(9, 200)
D3 = F(3, 20)
LOWER_ROWS = ("a1", "a2", F(40), F(30))     # u = (t - 40)/30 on 10 <= t <= 70
UPPER_ROWS = ("b1", "b2", F(225), F(155))   # u = (t - 225)/155 on 70 < t <= 380

# boundary subsegments (side, start, end), counterclockwise on each side;
# sides 1, 3, 5 form the lower group and 2, 4, 6 the upper group
S4_PIECES = {
    1: [(10, 18), (18, 30), (30, 48), (48, 70)],
    2: [(70, 110), (110, 175), (175, 275), (275, 380)],
}
LOWER_SIDES = (1, 3, 5)
UPPER_SIDES = (2, 4, 6)


def s4_segments(refine: int = 1) -> dict:
    """{(side, j): (lam_a, lam_b)} for the boundary pieces of S4."""
    out = {}
    for side, re in ((1, F(0)), (3, F(1, 2))):
        for j, (a, b) in enumerate(S4_PIECES[1], 1):
            out[(side, j)] = (Gaussian(re, a), Gaussian(re, b))
    for side, re in ((2, F(0)), (4, F(1, 2))):
        for j, (a, b) in enumerate(S4_PIECES[2], 1):
            out[(side, j)] = (Gaussian(re, a), Gaussian(re, b))
    out[(5, 1)] = (Gaussian(0, 10), Gaussian(F(1, 2), 10))
    out[(6, 1)] = (Gaussian(0, 380), Gaussian(F(1, 2), 380))
    if refine > 1:
        fine = {}
        for (side, j), (a, b) in out.items():
            for k in range(refine):
                fine[(side, (j - 1) * refine + k + 1)] = (a + (b - a) * F(k, refine), a + (b - a) * F(k + 1, refine))
        out = fine
    return out


_CHEB_CACHE: dict = {}


def _cheb_poly(i: int) -> UPoly:
    if i not in _CHEB_CACHE:
        if i == 0:
            _CHEB_CACHE[0] = UPoly([F(1)])
        elif i == 1:
            _CHEB_CACHE[1] = UPoly([F(0), F(1)])
        else:
            x2 = UPoly([F(0), F(2)])
            _CHEB_CACHE[i] = x2 * _cheb_poly(i - 1) - _cheb_poly(i - 2)
    return _CHEB_CACHE[i]


def _rows(upper: bool):
    return UPPER_ROWS if upper else LOWER_ROWS


def w_value(data: DataBundle, n: int, lam, upper: bool | None = None) -> Gaussian:
    """W_n(lam) exactly; ``upper`` overrides the t > 70 switch (seam limits)."""
    lam = gaussian(lam)
    s, t = lam.re, lam.im
    if upper is None:
        upper = t > SEAM
    k1, k2, t0, tau = _rows(upper)
    u = (t - t0) / tau
    X1, X2 = data.quasilog[k1][n], data.quasilog[k2][n]
    total = Gaussian(0)
    for i in range(6):
        c = X1[i] * (1 - 2 * s) + X2[i] * (2 * s)
        total = total + c * _cheb_poly(i)(u)
    return total


def w_on_segment(data: DataBundle, n: int, a: Gaussian, b: Gaussian) -> UPoly:
    """W_n(lam(x)) for lam(x) running from a to b as x runs over [-1, 1]."""
    upper = min(a.im, b.im) >= SEAM and max(a.im, b.im) > SEAM
    k1, k2, t0, tau = _rows(upper)
    X1, X2 = data.quasilog[k1][n], data.quasilog[k2][n]
    if a.re == b.re:
        s = a.re
        # t(x) = (ta + tb)/2 + (tb - ta)/2 x, u = alpha + beta x
        alpha = ((a.im + b.im) / 2 - t0) / tau
        beta = (b.im - a.im) / 2 / tau
        out = UPoly()
        for i in range(6):
            c = X1[i] * (1 - 2 * s) + X2[i] * (2 * s)
            out = out + _cheb_poly(i).compose_affine(alpha, beta).scale(c)
        return out
    if a.im != b.im:
        raise ValueError("segments must be horizontal or vertical")
    u = (a.im - t0) / tau
    base = Gaussian(0)
    slope = Gaussian(0)
    for i in range(6):
        ti = _cheb_poly(i)(u)
        base = base + X1[i] * ti
        slope = slope + (X2[i] - X1[i]) * ti
    # W = base + 2 s (X2 - X1).T with s(x) = (sa + sb)/2 + (sb - sa)/2 x
    mid, half = (a.re + b.re) / 2, (b.re - a.re) / 2
    return UPoly([base + slope * (2 * mid), slope * (2 * half)])


def _lam_poly(a: Gaussian, b: Gaussian) -> tuple[Gaussian, Gaussian]:
    return (a + b) / 2, (b - a) / 2


def _cheb_sum(p: UPoly) -> F:
    if not p.c:
        return F(0)
    return sum((abs_up(c) for c in power_to_cheb(p.c)), F(0))


def _exp_up(x: F) -> F:
    return exp_enclosure(ceil_to(x, 40), F(1, 10**12)).hi


def _cexp_mid(z: Gaussian) -> tuple[Gaussian, F, F]:
    """exp(z) as (rational midpoint, radius, modulus upper bound)."""
    enc = cexp_enclosure(z, F(1, 10**18))
    m = Gaussian(floor_to(enc.re.mid(), 64), floor_to(enc.im.mid(), 64))
    rad = (enc.re.hi - enc.re.lo) + (enc.im.hi - enc.im.lo) + abs(m.re - enc.re.mid()) + abs(m.im - enc.im.mid())
    return m, rad, enc.abs_upper()


class ExpTerm:
    """Pieces of q e^f on [-1, 1] split as e^{g0} e^{h} e^{r~}."""

    def __init__(self, q: UPoly, f: UPoly, cells: int = 64):
        cheb = power_to_cheb(f.c) + [Gaussian(0)] * 3
        self.q = q
        self.g0 = gaussian(cheb[0])
        self.h = UPoly(cheb_to_power([Gaussian(0), cheb[1], cheb[2]]))
        self.rbar = sum((abs_up(c) for c in cheb[3:]), F(0))
        self.hnorm = abs_up(cheb[1]) + abs_up(cheb[2])
        self.emid, self.erad, self.emod = _cexp_mid(self.g0)
        self.E1 = sup_mod_q_exp_h(q, self.h, cells)
        h2 = self.h * self.h
        self.P3 = UPoly([F(1)]) + self.h + h2.scale(F(1, 2)) + (h2 * self.h).scale(F(1, 6))
        self.qP3 = q * self.P3

    def head(self) -> UPoly:
        return self.qP3.scale(self.emid)

    def remainder(self) -> F:
        """Bound of |q e^f - e~ q P3(h)| on [-1, 1]."""
        qn = _cheb_sum(self.q)
        r_mid = self.erad * _cheb_sum(self.qP3)
        r1 = self.emod * self.E1 * _exp_up(self.rbar) * self.rbar
        r3 = self.emod * qn * self.hnorm ** 5 / 120 * _exp_up(self.hnorm)
        h4 = (self.h * self.h) * (self.h * self.h)
        r4 = self.emod * _cheb_sum(self.q * h4) / 24
        return r_mid + r1 + r3 + r4

    def sup(self) -> F:
        """Bound of sup |q e^f| (the group II estimate)."""
        return self.E1 * self.emod * _exp_up(self.rbar)


def group1_bound(terms: list, cells: int = 64) -> F:
    """sup over [-1, 1] of |sum q_i e^{f_i} - 1|."""
    H = UPoly([Gaussian(-1)])
    rem = F(0)
    for t in terms:
        H = H + t.head()
        rem += t.remainder()
    return _cheb_sum(H) + rem


def eps1_on_segment(data: DataBundle, n: int, a: Gaussian, b: Gaussian, cells: int = 64) -> tuple[F, F]:
    """Bounds of |eps1_{n+1}| and |C1_n| on the segment [a, b]."""
    c, r = _lam_poly(a, b)
    An = fr.A_coef(n).compose_affine(c, r)
    Bn = fr.B_coef(n).compose_affine(c, r)
    Wn = w_on_segment(data, n, a, b)
    Wn1 = w_on_segment(data, n + 1, a, b)
    t1 = ExpTerm(-An, -Wn1, cells)
    t2 = ExpTerm(-Bn, -Wn1 - Wn, cells)
    return group1_bound([t1, t2]), t2.sup()


def eps3_on_segment(data: DataBundle, a: Gaussian, b: Gaussian, cells: int = 64) -> tuple[F, F]:
    c, r = _lam_poly(a, b)
    A = fr.A_coef(50).compose_affine(c, r)
    B = fr.B_coef(50).compose_affine(c, r)
    W = w_on_segment(data, 50, a, b)
    t1 = ExpTerm(-A, -W, cells)
    t2 = ExpTerm(-B, -W - W, cells)
    return group1_bound([t1, t2]), t2.sup()


def delta1_on_segment(data: DataBundle, a: Gaussian, b: Gaussian, cells: int = 64) -> F:
    """|r_1 e^{-W_1} - 1| with r_1 = c_2 = (lam^2 + 8 lam - 9)/20."""
    c, r = _lam_poly(a, b)
    r1 = fr.c_polys(3)[2].compose_affine(c, r)
    W = w_on_segment(data, 1, a, b)
    return group1_bound([ExpTerm(r1, -W, cells)])


def _eps1_row(args) -> list:
    data, n, cells = args
    return [eps1_on_segment(data, n, a, b, cells) for a, b in s4_segments().values()]


def s4_eps_table(data: DataBundle, workers: int = 1, cells: int = 64) -> dict:
    """{(side, j): (max_n |eps1_{n+1}|, max_n |C1_n|)} over 1 <= n <= 49."""
    keys = list(s4_segments())
    jobs = [(data, n, cells) for n in range(1, 50)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_eps1_row, jobs))
    else:
        rows = [_eps1_row(j) for j in jobs]
    out = {}
    for i, key in enumerate(keys):
        out[key] = (max(r[i][0] for r in rows), max(r[i][1] for r in rows))
    return out


def _seg_name(key) -> str:
    return f"l{key[0]}.{key[1]}"


def _targets(side: int) -> dict:
    if side in LOWER_SIDES:
        return {"eps1": F(21, 1000), "C1": F(1, 2), "eps3": F(1, 50), "C3": F(1, 2)}
    return {"eps1": F(27, 1000), "C1": F(1, 3), "eps3": F(19, 500), "C3": F(1, 3)}


def r2_enclosure(n: int, lam) -> ComplexEnclosure:
    """r2_n = -(A_n/2)(1 + sqrt(F_n)) at a point, principal square root."""
    lam = gaussian(lam)
    A = fr.A_coef(n)(lam)
    Fn = 1 - fr.B_coef(n)(lam) * 4 / (A * A)
    root = complex_sqrt_enclosure(Fn, F(1, 10**30))
    return (root + 1) * ComplexEnclosure.lift(A * F(-1, 2))


def quasi_evaluate(data: DataBundle, n: int, lam, upper: bool | None = None) -> ComplexEnclosure:
    """Quasi-solution for r_n = c_{n+1}/c_n: exp(W_n) for n <= 50, r2_n beyond."""
    if n <= 50:
        return cexp_enclosure(w_value(data, n, lam, upper), F(1, 10**30))
    return r2_enclosure(n, lam)


def delta3_at(data: DataBundle, lam, upper: bool) -> F:
    """|r2_50 / exp(W_50) - 1| at a point (upper bound)."""
    e = cexp_enclosure(-w_value(data, 50, lam, upper), F(1, 10**30))
    return (r2_enclosure(50, lam) * e - 1).abs_upper()


def small_root_radius(eps: F, C: F, rho: F) -> bool:
    """rho^2 + eps < (1 - C - eps) rho: one root of d^2 + S d - eps inside |d| < rho."""
    return rho * rho + eps < (1 - C - eps) * rho


def _side_lambda(side: str):
    N, T = MPoly.var(2, 0), MPoly.var(2, 1)
    c = lambda a: MPoly.const(2, a)  # noqa: E731
    return {
        "Re=0": (CMPoly(c(0), T), F(10), F(380)),
        "Re=1/2": (CMPoly(c(F(1, 2)), T), F(10), F(380)),
        "Im=10": (CMPoly(T, c(10)), F(0), F(1, 2)),
        "Im=380": (CMPoly(T, c(380)), F(0), F(1, 2)),
    }[side], N


def _recurrence_at(lam: CMPoly, n: MPoly):
    P1 = CMPoly(-(n * n * 12 + n * 20 - 9)) - lam * (n * 8 + 8) - lam * lam
    P0 = CMPoly(n * n * 4 - 9) + lam * (n * 4) + lam * lam
    P2 = n * n * 8 + n * 28 + 20
    return P0, P1, P2


U1 = F(1, 30)
U2_SQ = F(98, 250000)  # (7 sqrt2 / 500)^2
L1 = F(8, 25)
U3 = F(9, 40)


def large_n_polys(side: str) -> tuple[dict, F, F]:
    """Polynomials in (N, t), n = N + 50, whose nonnegativity gives U1, U2, L1, U3."""
    (lam, a, b), N = _side_lambda(side)
    P0, P1, P2 = _recurrence_at(lam, N + 50)
    Q0, Q1, Q2 = _recurrence_at(lam, N + 51)
    num = P1 * Q2 - Q1 * P2
    den = Q1 * P2
    G = P1 * P1 - P0 * (P2 * 4)
    H = Q1 * Q1 - Q0 * (Q2 * 4)
    dF_num = G * (Q1 * Q1) - H * (P1 * P1)
    dF_den = (P1 * P1) * (Q1 * Q1)
    p1sq = P1 * P1
    polys = {
        "U1": den.abs2() * (U1 * U1) - num.abs2(),
        "U2": dF_den.abs2() * U2_SQ - dF_num.abs2(),
        "L1": (G * p1sq.conj()).re - p1sq.abs2() * (L1 * L1),
        "U3": (P1 * Q1).abs2() * (U3 * U3) - P0.abs2() * (Q2 * Q2),
    }
    return polys, a, b


S4_SIDES = ("Re=0", "Re=1/2", "Im=10", "Im=380")


def seam_jump(data: DataBundle, n: int, lam: Gaussian) -> tuple[int, F]:
    """(k_n, upper bound of |W_upper - W_lower - 2 pi i k_n|) at a point on Im = 70."""
    J = w_value(data, n, lam, True) - w_value(data, n, lam, False)
    pi = pi_enclosure(F(1, 10**30))
    k = round(float(J.im) / (2 * float(pi.mid())))
    im = Enclosure.lift(J.im) - pi * (2 * k)
    mod2 = Enclosure.lift(J.re * J.re) + im * im
    return k, sqrt_upper(mod2.hi)


def certify_s4(data: DataBundle, cert: Certificate | None = None, workers: int = 1, cells: int = 64) -> Certificate:
    cert = cert or Certificate("S4")
    segs = s4_segments()
    with cert.group("lemma-i"):
        for key, (a, b) in segs.items():
            cert.le(f"delta1/{_seg_name(key)}", delta1_on_segment(data, a, b, cells), D1, "|r_1 e^{-W_1} - 1| <= 19/1000")
    with cert.group("lemma-ii"):
        table = s4_eps_table(data, workers, cells)
        for key, (e, c) in table.items():
            t = _targets(key[0])
            cert.le(f"eps1/{_seg_name(key)}", e, t["eps1"], f"max_n |eps1_(n+1)| <= {t['eps1']}")
            cert.le(f"C1/{_seg_name(key)}", c, t["C1"], f"max_n |C1_n| <= {t['C1']}")
        for grp, side in (("lower", 1), ("upper", 2)):
            t = _targets(side)
            cert.le(
                f"induction/{grp}",
                t["eps1"] + t["C1"] * D2 / (1 - D2),
                D2,
                "eps + C D2/(1 - D2) <= D2 = 9/200",
            )
        cert.le("base", D1, D2, "D1 <= D2")
    with cert.group("lemma-iii"):
        for key, (a, b) in segs.items():
            e, c = eps3_on_segment(data, a, b, cells)
            t = _targets(key[0])
            cert.lt(f"eps3/{_seg_name(key)}", e, t["eps3"], f"|eps3| < {t['eps3']}")
            cert.le(f"C3/{_seg_name(key)}", c, t["C3"], f"|C3| <= {t['C3']}")
        for grp, side, rho, outer in (("lower", 1, F(1, 19), F(19, 50)), ("upper", 2, F(19, 245), F(49, 100))):
            t = _targets(side)
            cert.holds(
                f"small-root/{grp}",
                small_root_radius(t["eps3"], t["C3"], rho),
                f"one root of the delta3 quadratic in |d| < {rho}",
                f"{float(rho * rho + t['eps3']):.6g} < {float((1 - t['C3'] - t['eps3']) * rho):.6g}",
            )
            cert.gt(f"large-root/{grp}", 1 - t["C3"] - t["eps3"] - rho, outer, f"other root has modulus > {outer}")
            cert.le(f"delta2-50/{grp}", (D2 + rho) / (1 - rho), D3, "(D2 + |delta3|)/(1 - |delta3|) <= 3/20")
        cert.lt("delta3(10i)", delta3_at(data, Gaussian(0, 10), False), F(1, 100))
        cert.lt("delta3(380i)", delta3_at(data, Gaussian(0, 380), True), F(1, 25))
    with cert.group("lemma-iv"):
        for side in S4_SIDES:
            polys, a, b = large_n_polys(side)
            for name, p in polys.items():
                c = certify_nonneg_for_all_n(p, 0, 1, a, b, strict=True)
                cert.holds(f"{name}/{side}", c.ok, f"{name} bound for all n >= 50 on {side}", f"{c.method} {c.note}".strip())
        s2 = sqrt_enclosure(F(2), F(1, 10**30))
        u2 = s2 * F(7, 500)
        eps2 = (1 + U1) * u2 / ((1 + L1) * 2 * L1) + U1
        cert.lt("eps2", eps2, F(29, 500), "(1 + U1) U2 / ((1 + L1) 2 L1) + U1 < 29/500")
        cert.lt("C2", 4 * U3 / (1 + L1) ** 2, F(517, 1000), "4 U3 / (1 + L1)^2 < 517/1000")
        cert.le("induction", F(29, 500) + F(517, 1000) * D3 / (1 - D3), D3, "eps + C D3/(1 - D3) <= D3 = 3/20")
    with cert.group("analyticity"):
        _certify_s4_analyticity(cert, data)
    cert.conclusion.append("no eigenvalues in S4 (and its conjugate)")
    return cert


def _certify_s4_analyticity(cert: Certificate, data: DataBundle) -> None:
    ks = {}
    worst = [F(0), F(0)]
    same = True
    for n in range(1, 50):
        k0, j0 = seam_jump(data, n, Gaussian(0, 70))
        k1, j1 = seam_jump(data, n, Gaussian(F(1, 2), 70))
        same = same and k0 == k1
        ks[n] = k0
        worst = [max(worst[0], j0), max(worst[1], j1)]
    cert.holds("seam-branch", same, "one integer k_n serves both seams", " ".join(str(ks[n]) for n in sorted(ks)))
    cert.lt("seam-jump/70i", worst[0], F(2, 250), "|W_n(70i+) - W_n(70i-) - 2 pi i k_n| < 2/250")
    cert.lt("seam-jump/70i+1/2", worst[1], F(7, 1000))
    tilde = exp_enclosure(F(2, 250), F(1, 10**30)) - 1
    cert.lt("tilde-delta", tilde, F(13, 1000), "exp(2/250) - 1 < 13/1000")
    dd = D2 + F(13, 1000) + D2 * F(13, 1000)
    cert.lt("double-tilde-delta", dd, F(3, 50), "(1 + D2)(1 + 13/1000) - 1 < 3/50")
    cert.lt("log-bound", F(3, 50) / (1 - F(3, 50)), F(1, 10), "|ln(1 + z)| <= |z|/(1 - |z|) < 1/10")
    pi = pi_enclosure(F(1, 10**30))
    total = 2 * F(1, 10) + 2 * F(2, 250)
    cert.holds("winding", total < F(3, 10) and F(3, 10) < 2 * pi.lo, "2/10 + 4/250 < 3/10 < 2 pi", f"{float(total):.6g}")
    # p1(n) in lambda has two negative real roots for n >= 1: positive
    # discriminant and root product, negative root sum
    N = MPoly.var(2, 0)
    n = N + 1
    checks = [n * n * 16 + n * 48 + 100, n * n * 12 + n * 20 - 9, n * 8 + 8]
    ok = all(certify_nonneg_for_all_n(q, 0, 1, 0, 1, strict=True).ok for q in checks)
    cert.holds("A_n-roots-negative", ok, "A_n != 0 for Re(lambda) >= 0, n >= 1")
    cert.lt("rouche-large-n", D3, F(1), "|r_n - r2_n| <= 3/20 |r2_n| < |r2_n| on the boundary")
    limF = 1 - 4 * F(1, 2) / (F(3, 2) ** 2)
    cert.equals("limit-F", limF, F(1, 9), "F_n -> 1/9, so r2_n -> 1")
    cert.gt("limit-excluded", F(1, 2), D3, "delta2 -> -1/2 would contradict |delta2| <= 3/20")

"""Wronskian certificates for the two regions nearest the origin.

Region S1 is the square 0 <= Re lam, Im lam <= 1/2, covered by the disk of
radius sqrt(2)/4 around (1+i)/4.  Region S2 is the rectangle
0 <= Re lam <= 1/2, 1/2 <= Im lam <= 4.

In both cases the Wronskian of the two Frobenius solutions, at one interior
point, is shown to be bounded away from zero: first for explicit
approximations, then for the true solutions via explicit error bounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F
from math import comb

from . import frobenius as fr
from .bounds import (
    RationalFunction,
    abs_low,
    abs_up,
    box_bound,
    certify_nonnegative,
    partition_segments,
    poly_bound_on_segment,
    rational_bound_on_segment,
    split_segment,
)
from .certificate import Certificate
from .data import DataBundle
from .exactnum import Enclosure, Gaussian, sqrt_enclosure, sqrt_upper
from .poly import BivarPoly, UPoly

TOL = F(1, 10**24)
LAM0 = Gaussian(F(1, 4), F(1, 4))
S1_CORNERS = [Gaussian(0), Gaussian(F(1, 2)), Gaussian(F(1, 2), F(1, 2)), Gaussian(0, F(1, 2))]


class ContractionError(ArithmeticError):
    """A self-improving inequality D <= a + b D with b >= 1."""


def solve_contraction(a, b) -> F:
    """Upper bound on D from D <= a + b D (a, b upper bounds, b < 1)."""
    a = a.hi if isinstance(a, Enclosure) else F(a)
    b = b.hi if isinstance(b, Enclosure) else F(b)
    if b >= 1:
        raise ContractionError(f"contraction factor {float(b)} >= 1")
    return a / (1 - b)


# ---------------------------------------------------------------------------
# integrals


def _half_power(w: F, k: int) -> Enclosure:
    """w^(k/2) for rational w > 0 and odd or even k (may be negative)."""
    if k % 2 == 0:
        return Enclosure(F(w) ** (k // 2))
    root = sqrt_enclosure(w, TOL)
    return root * Enclosure(F(w) ** ((k - 1) // 2))


def int_pow_weight(k: int, t: F) -> Enclosure:
    """Exact enclosure of I_k(t) = int_0^t (1-u)^(-5/2) u^k du, 0 <= t < 1.

    With w = 1 - u the integrand is sum_j C(k,j) (-1)^j w^(j-5/2), whose
    antiderivative is explicit.
    """
    w = 1 - F(t)

    def phi(w_: F) -> Enclosure:
        acc = Enclosure(0)
        for j in range(k + 1):
            coef = F(comb(k, j) * (-1) ** j) / (F(j) - F(3, 2))
            acc = acc + _half_power(w_, 2 * j - 3) * coef
        return acc

    return phi(F(1)) - phi(w)


def riemann_upper(f_up, a: F, b: F, n: int, increasing: bool) -> F:
    """Upper bound of int_a^b f for a monotone integrand; f_up gives upper values."""
    h = (b - a) / n
    pts = [a + h * (k + 1 if increasing else k) for k in range(n)]
    return h * sum((f_up(x) for x in pts), F(0))


def _pow_up(w: F, k: int) -> F:
    """Upper bound of w^(k/2)."""
    return _half_power(w, k).hi


# ---------------------------------------------------------------------------
# residual operators (multiplied through so that they are polynomial)


def _alpha(lam: BivarPoly) -> BivarPoly:
    return (lam * lam + lam * 3) * F(-1, 4) + F(1, 2)


def residual_G(G: BivarPoly) -> BivarPoly:
    """(2-t)^2 times the operator of the t = 0 problem applied to G."""
    t, lam = BivarPoly.t(), BivarPoly.lam()
    G1 = G.deriv_t()
    G2 = G1.deriv_t()
    core = t * (1 - t) * G2 + (t * F(-5, 2) + lam * (1 - t)) * G1 + _alpha(lam) * G
    return (2 - t) * (2 - t) * core + t * (4 - t) * G


def residual_H(H: BivarPoly) -> BivarPoly:
    """(1+s)^2 times the operator in s = 1 - t applied to H (variable slot t holds s)."""
    s, lam = BivarPoly.t(), BivarPoly.lam()
    H1 = H.deriv_t()
    H2 = H1.deriv_t()
    core = s * (1 - s) * H2 + ((1 - s) * F(5, 2) - lam * s) * H1 + _alpha(lam) * H
    return (1 + s) * (1 + s) * core + (1 - s) * (3 + s) * H


@dataclass
class DeltaBounds:
    label: str
    value: F
    deriv: F


def _disk_radius() -> F:
    return sqrt_upper(F(2), 80) / 4


def _bound_lam_poly(P: UPoly, r: F) -> F:
    return box_bound(BivarPoly.from_upoly_lam(P), LAM0, r)


# ---------------------------------------------------------------------------
# S1


def alpha_bound(cert: Certificate) -> F:
    """|alpha(lam)| <= sqrt(117/256) on S1, checked on each edge (max modulus)."""
    alpha = UPoly([F(1, 2), F(-3, 4), F(-1, 4)])
    ok = True
    for seg in partition_segments(S1_CORNERS):
        a = alpha.compose_affine(seg.center, seg.half)
        p = UPoly([F(117, 256)]) - _abs2_real(a)
        ok &= certify_nonnegative(p, -1, 1).ok
    A = sqrt_upper(F(117, 256), 80)
    cert.holds("alpha/edges", ok, "|alpha|^2 <= 117/256 on every edge of S1", A)
    return A


def _abs2_real(p: UPoly) -> UPoly:
    re = p.re_part()
    im = p.im_part()
    return re * re + im * im


def _ratio_le(num: UPoly, den: UPoly, c: F, a: F, b: F) -> bool:
    """num/den <= c on [a, b] given den > 0 there."""
    return certify_nonnegative(den.scale(c) - num, a, b).ok


def _vanishes_at_t0(P: BivarPoly) -> bool:
    return all(v == 0 for (i, _), v in P.c.items() if i == 0)


def certify_s1(data: DataBundle, cert: Certificate | None = None) -> Certificate:
    cert = cert or Certificate("S1")
    ap = data.approx
    G0, G1, H0, H1 = ap["G0"], ap["G1"], ap["H0"], ap["H1"]
    r = _disk_radius()
    t = UPoly([F(0), F(1)])
    two_m = UPoly([F(2), F(-1)])
    one_p = UPoly([F(1), F(1)])

    with cert.group("coefficients"):
        A = alpha_bound(cert)
        # g(t) = t(4-t)/(2-t)^2
        cert.holds("g/near", _ratio_le(UPoly([F(4), F(-1)]), two_m * two_m, F(60, 49), F(0), F(1, 4)),
                   "0 <= g(t)/t <= 60/49 on [0,1/4]", F(60, 49))
        cert.holds("g/far", _ratio_le(t * UPoly([F(4), F(-1)]), two_m * two_m, F(7, 9), F(1, 4), F(1, 2)),
                   "0 <= g(t) <= 7/9 on [1/4,1/2]", F(7, 9))
        gt = UPoly([F(1), F(-1)]) * UPoly([F(3), F(1)])
        cert.holds("gh/near", _ratio_le(gt, one_p * one_p, F(3), F(0), F(1, 4)),
                   "0 <= (1-s)(3+s)/(1+s)^2 <= 3 on [0,1/4]", F(3))
        cert.holds("gh/far", _ratio_le(gt, one_p * one_p, F(39, 25), F(1, 4), F(1, 2)),
                   "0 <= (1-s)(3+s)/(1+s)^2 <= 39/25 on [1/4,1/2]", F(39, 25))

    with cert.group("residual"):
        R1, R3 = -residual_G(G0), -residual_H(H0)
        # both residuals must vanish at the singular endpoint before dividing by t
        ok = cert.holds("R1/vanishes-at-0", _vanishes_at_t0(R1), "G-residual is O(t) at t = 0")
        ok &= cert.holds("R3/vanishes-at-0", _vanishes_at_t0(R3), "H-residual is O(s) at s = 0")
        if not ok:
            return cert
        R1, R3 = R1.divide_t(), R3.divide_t()
        R2 = -residual_G(G1)
        R4 = -residual_H(H1)
        b1 = box_bound(R1.substitute_t(F(1, 8), F(1, 8)), LAM0, r)
        b2 = box_bound(R2.substitute_t(F(3, 8), F(1, 8)), LAM0, r)
        b3 = box_bound(R3.substitute_t(F(1, 8), F(1, 8)), LAM0, r)
        b4 = box_bound(R4.substitute_t(F(3, 8), F(1, 8)), LAM0, r)
        cert.le("R1", b1, F(441, 100000), "|R1| <= 0.00441 on [0,1/4] x S1")
        cert.le("R2", b2, F(595, 100000), "|R2| <= 0.00595 on [1/4,1/2] x S1")
        e1 = b1 * F(16, 49)
        e2 = b2 * F(4, 9)
        e3 = b3
        e4 = b4 * F(16, 25)
        cert.le("e1", e1, F(144, 100000), "|eps1/t| <= 0.00144 (<= 0.0015) on [0,1/4]")
        cert.lt("e2", e2, F(265, 100000), "|eps1| < 0.00265 on [1/4,1/2]")
        cert.holds("e3", True, "|eps2/s| on s in [0,1/4]", e3)
        cert.holds("e4", True, "|eps2| on s in [1/4,1/2]", e4)

    with cert.group("jumps"):
        jG = _bound_lam_poly(G0.at_t(F(1, 4)) - G1.at_t(F(1, 4)), r)
        jGp = _bound_lam_poly(G0.deriv_t().at_t(F(1, 4)) - G1.deriv_t().at_t(F(1, 4)), r)
        jH = _bound_lam_poly(H0.at_t(F(1, 4)) - H1.at_t(F(1, 4)), r)
        jHp = _bound_lam_poly(H0.deriv_t().at_t(F(1, 4)) - H1.deriv_t().at_t(F(1, 4)), r)
        for name, v in (("G", jG), ("G'", jGp), ("H", jH), ("H'", jHp)):
            cert.holds(name, True, "jump of the approximation at the breakpoint", v)

    with cert.group("gronwall"):
        d = gronwall_chain(cert, A, e1, e2, e3, e4, (jG, jGp, jH, jHp))

    with cert.group("wronskian"):
        half = F(1, 2)
        Ga, Gap = G1.at_t(half), G1.deriv_t().at_t(half)
        # H1 is written in s = 1 - t, so d/dt = -d/ds
        Ha, Hap = H1.at_t(half), -H1.deriv_t().at_t(half)
        vGa, vGap = _bound_lam_poly(Ga, r), _bound_lam_poly(Gap, r)
        vHa, vHap = _bound_lam_poly(Ha, r), _bound_lam_poly(Hap, r)
        cert.lt("|Ga(1/2)|", vGa, F(107, 100))
        cert.lt("|Ga'(1/2)|", vGap, F(263, 100))
        cert.lt("|Ha(1/2)|", vHa, F(59, 100))
        cert.lt("|Ha'(1/2)|", vHap, F(74, 100))
        W = Ga * Hap - Gap * Ha
        W0 = abs_low(W(LAM0))
        cert.gt("|W0|", W0, F(79, 100), "|W(Ga,Ha)(1/2)| at (1+i)/4 > 0.79")
        Wc = W.shift(LAM0)
        rem = sum((abs_up(c) * r ** j for j, c in enumerate(Wc.c) if j >= 1), F(0))
        cert.le("|W-W0|", rem, F(33, 100), "|W - W0| <= 0.33 on the disk")
        L = W0 - rem
        cert.gt("|W(Ga,Ha)|", L, F(46, 100), "|W(Ga,Ha)(1/2)| > 0.46 on S1")
        g1, g1p = d["far"].value, d["far"].deriv
        h2, h2p = d["H-far"].value, d["H-far"].deriv
        err = vGa * h2p + g1 * vHap + g1 * h2p + vHa * g1p + h2 * vGap + h2 * g1p
        cert.lt("perturbation", err, F(3, 100), "sum of delta terms < 0.03")
        cert.gt("margin", L - err, F(43, 100), "|W(G,H)(1/2)| > 0.46 - 0.03 = 0.43 > 0")
    cert.conclusion.append("no eigenvalues in S1 (and its conjugate)")
    return cert


def gronwall_chain(cert: Certificate, A: F, e1: F, e2: F, e3: F, e4: F, jumps, cells: int = 256) -> dict:
    """Error bounds for the true solutions on both sides of t = 1/2."""
    jG, jGp, jH, jHp = jumps
    q = F(1, 4)
    out: dict = {}

    # G on [0, 1/4]: delta = t^2 D(t), D <= 16 (e1 I1 + (A/2) D I2 + (20/49) D I3)
    I1, I2, I3 = (int_pow_weight(k, q).hi for k in (1, 2, 3))
    D1 = solve_contraction(16 * e1 * I1, 16 * (A / 2 * I2 + F(20, 49) * I3))
    near_val = D1 / 16
    # |delta'(t)| <= (1-t)^(-5/2) (e1 t + A D t^2/2 + (20/49) D t^3), increasing in t
    near_der = _pow_up(F(3, 4), -5) * (e1 * q + A * D1 * q * q / 2 + F(20, 49) * D1 * q ** 3)
    cert.lt("near/D1", D1, F(15, 10000), "D1 < 0.0015")
    cert.lt("near/delta", near_val, F(15, 16) * F(1, 10**4), "|delta1| < (15/16) 1e-4 on [0,1/4]")
    cert.lt("near/delta'", near_der, F(9, 10**4), "|delta1'| < 9e-4 on [0,1/4]")
    out["near"] = DeltaBounds("G [0,1/4]", near_val, near_der)

    # G on (1/4, 1/2]
    J, Jp = near_val + jG, near_der + jGp
    K = A + F(7, 9)
    a_half = (int_pow_weight(0, F(1, 2)) - int_pow_weight(0, q)).hi
    c34 = _pow_up(F(3, 4), 5)

    def f_L(s: F) -> F:  # (1-s)^(3/2)/s, decreasing
        return _pow_up(1 - s, 3) / s

    h = q / cells
    Lcum = [F(0)]
    for k in range(cells):
        Lcum.append(Lcum[-1] + h * f_L(q + h * k))
    L_half = Lcum[-1]
    # int (1-u)^(-5/2) L(u) du, increasing integrand: right endpoints
    bL = h * sum((_pow_up(1 - (q + h * (k + 1)), -5) * Lcum[k + 1] for k in range(cells)), F(0))
    Delta = solve_contraction(J + c34 * Jp * a_half + e2 * bL, K * bL)
    far_der = _pow_up(F(1, 2), -5) * (c34 * Jp + (e2 + K * Delta) * L_half)
    cert.lt("far/delta", Delta, F(16, 10**4), "|delta1| < 1.6e-3 on (1/4,1/2]")
    cert.lt("far/delta'", far_der, F(13, 10**3), "|delta1'| < 1.3e-2 on (1/4,1/2]")
    out["far"] = DeltaBounds("G (1/4,1/2]", Delta, far_der)

    # H on s in [0, 1/4]: |delta2| <= (1-s)^-1 (e3 s^2/7 + (2/27) K3 D s^3)
    K3 = A + 3
    D2 = solve_contraction(F(4, 3) * e3 / 7, F(4, 3) * F(2, 27) * K3 / 4)
    hn_val = F(4, 3) * (e3 / 7 * q * q + F(2, 27) * K3 * D2 * q ** 3)
    hn_der = F(4, 3) * (F(2, 7) * e3 * q + F(2, 9) * K3 * D2 * q * q)
    cert.holds("H-near/delta", True, "|delta2| on s in [0,1/4]", hn_val)
    cert.holds("H-near/delta'", True, "|delta2'| on s in [0,1/4]", hn_der)
    out["H-near"] = DeltaBounds("H s in [0,1/4]", hn_val, hn_der)

    # H on s in (1/4, 1/2]
    J4, J4p = hn_val + jH, hn_der + jHp
    K4 = A + F(39, 25)

    def f_M(u: F) -> F:  # u^(3/2) (1-u)^(-1/2), increasing
        return _pow_up(u, 3) * _pow_up(1 - u, -1)

    Mcum = [F(0)]
    for k in range(cells):
        Mcum.append(Mcum[-1] + h * f_M(q + h * (k + 1)))
    M_half = Mcum[-1]

    def c4(s: F) -> F:  # ((3/4)/(1-s))^(1/2)
        return _pow_up(F(3, 4) / (1 - s), 1)

    # on a cell [u_k, u_k+1]: u^(-5/2) <= u_k^(-5/2), (1-u)^(-1/2) <= (1-u_k+1)^(-1/2)
    N0 = F(0)
    N1 = F(0)
    for k in range(cells):
        u0, u1 = q + h * k, q + h * (k + 1)
        w = _pow_up(u0, -5)
        N0 += h * w * c4(u1)
        N1 += h * w * _pow_up(1 - u1, -1) * Mcum[k + 1]
    Delta2 = solve_contraction(J4 + J4p / 32 * N0 + e4 * N1, K4 * N1)
    h_der = _pow_up(F(1, 2), -5) * (c4(F(1, 2)) * J4p / 32 + _pow_up(F(1, 2), -1) * (e4 + K4 * Delta2) * M_half)
    cert.lt("H-far/delta", Delta2, F(13, 10**4), "|delta2(1/2)| < 1.3e-3")
    cert.lt("H-far/delta'", h_der, F(8, 10**3), "|delta2'(1/2)| < 8e-3")
    out["H-far"] = DeltaBounds("H s in (1/4,1/2]", Delta2, h_der)
    return out


# ---------------------------------------------------------------------------
# S2

S2_REFLECT = Gaussian(F(1, 2), F(9, 2))
T0 = F(14, 25)
K1 = F(513, 500)
K2 = F(6, 5)
V1_TILDE, V0_TILDE = -196921202, 5563721416
W1_TILDE, W0_TILDE = 271, -5622


def s2_partitions(data: DataBundle) -> dict:
    """P1, P3 from the data; P2, P4 are their point reflections through 1/2 + 9i/2."""
    P1, P3 = data.partitions["P1"], data.partitions["P3"]
    return {
        "P1": P1,
        "P2": [S2_REFLECT - d for d in P1],
        "P3": P3,
        "P4": [S2_REFLECT - d for d in P3],
    }


def boundary_upper(seg_fn, points, target: F | None = None, max_split: int = 8):
    """Max of a per-segment upper bound over a closed partition.

    If ``target`` is given and missed, every segment is split uniformly into
    2, 4, ... pieces until the target is met or ``max_split`` is reached.
    Returns (upper, pieces per segment).
    """
    pieces = 1
    while True:
        best = F(0)
        for seg in partition_segments(points):
            for sub in split_segment(seg, pieces):
                best = max(best, seg_fn(sub).upper)
        if target is None or best <= target or pieces >= max_split:
            return best, pieces
        pieces *= 2


def boundary_lower(seg_fn, points) -> F:
    return min(seg_fn(seg).lower for seg in partition_segments(points))


def geometric_identity_holds(kappa: F) -> bool:
    """sum_{i<n} (n-i+1) kappa^i = (K (2 kappa - 1) + n (1 - kappa) + 1 - 2 kappa)/(kappa-1)^2, K = kappa^n.

    Proven for all n by checking n = 0 and that the closed form C(n) obeys
    C(n+1) - C(n) = (K - 1)/(kappa - 1) + 2K identically in the symbol K.
    """
    d = (kappa - 1) ** 2
    Kp = UPoly([F(0), F(1)])

    def closed(Kpoly: UPoly, n_: int) -> UPoly:
        return (Kpoly.scale(2 * kappa - 1) + UPoly([n_ * (1 - kappa) + 1 - 2 * kappa])).scale(1 / d)

    if closed(UPoly([F(1)]), 0) != UPoly():
        return False
    # with K = kappa^n the step identity is linear in n; check the n-coefficient and constant
    for n_ in (0, 1):
        step = closed(Kp.scale(kappa), n_ + 1) - closed(Kp, n_)
        target = (Kp - UPoly([F(1)])).scale(1 / (kappa - 1)) + Kp.scale(2)
        if step != target:
            return False
    return True


def _s2_box():
    return [(F(0), F(1, 2)), (F(1, 2), F(4)), (F(0), F(1, 30))]


def certify_pn_asymptotic(cert: Certificate) -> F:
    """|p_n| <= P_30 for n >= 30 on S2; returns P_30^2.

    With z = 1/n, p_n - (1 + z/2) = z^2 X / Dc + i z^2 Y / Dc where
    Dc = 4 (1+z) |1 + lam z|^2 and X, Y are explicit polynomials.
    """
    from .bounds import certify_nonnegative_box, certify_positive_box
    from .poly import CMPoly, MPoly

    lam = CMPoly.lam(3)
    z = MPoly.var(3, 2)
    Nc = (lam * lam - lam * 3 - 4 - lam * z * 2) * (1 + lam.conj() * z)
    X, Y = Nc.re, Nc.im
    Dc = (1 + z) * (1 + lam * z).abs2() * 4
    box = _s2_box()
    ok1 = certify_positive_box(-X, box).ok
    ok2 = certify_positive_box(Dc + X * z * z * 100, box).ok
    w = 1 + z * z * F(1, 4)
    # the lower side touches zero at r = 0, s = 4 in the limit z -> 0
    ok3 = certify_positive_box(Dc * 3 - Y * w, box).ok and certify_nonnegative_box(Dc * 3 + Y * w, box).ok
    cert.holds("pn/Re-e<0", ok1, "Re e_n < 0 for n >= 30", ok1)
    cert.holds("pn/Re-e>-1/100", ok2, "Re e_n > -1/100 for n >= 30", ok2)
    cert.holds("pn/Im-e", ok3, "|Im e_n| <= 3/(1/4+n^2) for n >= 30", ok3)
    n = 30
    P30sq = (1 + F(1, 2 * n)) ** 2 + (F(3) / (F(1, 4) + n * n)) ** 2
    cert.lt("pn/P30", sqrt_upper(P30sq, 80), F(101668, 100000), "P_30 < 1.01668")
    return P30sq


def certify_qn_asymptotic(cert: Certificate) -> bool:
    """|q_n| <= 1 for n >= 30 on S2, as a box certificate in (r, s, z = 1/n).

    |z^2 num|^2 <= ((1+z)(1+5z/2))^2 with equality at z = 0; the difference
    is divisible by z.
    """
    from .bounds import certify_positive_box
    from .poly import CMPoly, MPoly

    lam = CMPoly.lam(3)
    z = MPoly.var(3, 2)
    num = 1 + (lam + F(3, 2)) * z + (lam * lam * F(1, 4) + lam * F(3, 4) - F(7, 2)) * z * z
    den = (1 + z) * (1 + z * F(5, 2))
    diff = den * den - num.abs2()
    # divide by z exactly
    quo = {}
    for e, v in diff.c.items():
        if e[2] == 0:
            raise ArithmeticError("difference not divisible by z")
        quo[(e[0], e[1], e[2] - 1)] = v
    ok = certify_positive_box(MPoly(3, quo), _s2_box()).ok
    cert.holds("qn/<=1", ok, "|q_n| <= 1 on S2 for n >= 30", ok)
    return ok


def certify_tables(data: DataBundle, cert: Certificate, parts: dict) -> None:
    """Each printed J_n, P_n, M_n is a valid bound on S2."""
    J, P, M = data.J, data.P, data.M
    cert.equals("J0", J[0], F(1), "a_0 = 1")
    cert.equals("M0", M[0], F(1), "b_0 = 1")
    for n in range(1, 11):
        part = parts["P1"] if n <= 6 else parts["P2"]
        up, _ = boundary_upper(lambda s: rational_bound_on_segment(fr.a_rational(n), s, 10), part, J[n])
        cert.le(f"J{n}", up, J[n], f"|a_{n}| <= {float(J[n]):.7f} on S2")
    for n in range(10, 31):
        up, _ = boundary_upper(lambda s: rational_bound_on_segment(fr.p_coefficient(n), s, 10), parts["P2"], P[n])
        cert.le(f"P{n}", up, P[n], f"|p_{n}| <= {P[n]} on S2")
    bp = fr.b_polys(10)
    for n in range(1, 11):
        up, pieces = boundary_upper(lambda s: poly_bound_on_segment(bp[n], s), parts["P3"], M[n])
        note = "" if pieces == 1 else f" (segments split in {pieces})"
        cert.le(f"M{n}", up, M[n], f"|b_{n}| <= {float(M[n]):.7f} on S2{note}")
    for n in range(10, 30):
        s = sum((F(n - k + 1, 2 ** (n - k)) * J[k] for k in range(n)), F(0))
        rhs = P[n] * J[n] + s / ((n + 1) * sqrt_lower_n(n))
        cert.lt(f"J{n + 1}/step", rhs, J[n + 1], f"P_n J_n + tail < J_{n + 1}")
    for n in range(10, 30):
        qn, _ = boundary_upper(lambda s: poly_bound_on_segment(fr.q_coefficient(n), s), parts["P3"])
        s = sum((4 * (n - k + 1) * M[k] for k in range(n)), F(0))
        rhs = qn * M[n] + s / ((n + 1) * (n + F(5, 2)))
        cert.lt(f"M{n + 1}/step", rhs, M[n + 1], f"Q_n M_n + tail < M_{n + 1}")


def sqrt_lower_n(n: int) -> F:
    """Lower bound of |n + i/2|."""
    from .exactnum import sqrt_lower

    return sqrt_lower(F(n * n) + F(1, 4), 80)


def certify_induction(data: DataBundle, cert: Certificate) -> None:
    J, M = data.J, data.M
    k1, k2 = K1, K2
    cert.holds("identity", geometric_identity_holds(2 * k1) and geometric_identity_holds(k2),
               "closed form of sum_{i<n} (n-i+1) kappa^i", "symbolic")
    P30sq = certify_pn_asymptotic(cert)
    P30 = sqrt_upper(P30sq, 80)
    cert.lt("J30<k1^30", J[30], k1 ** 30, "J_30 < 1.026^30")
    # step n = 30 uses only the table (sum over i <= 29)
    s = sum((F(30 - k + 1, 2 ** (30 - k)) * J[k] for k in range(30)), F(0))
    a31 = P30 * J[30] + s / (31 * 30)
    cert.lt("J31", a31, k1 ** 31, "|a_31| < 1.026^31 from the table")
    # majorant, valid for n >= 31 where the sum reaches i = 30
    S1 = sum((2 ** i * (J[i] - k1 ** i) for i in range(31)), F(0))
    S0 = sum(((1 - i) * 2 ** i * (J[i] - k1 ** i) for i in range(31)), F(0))
    ok = S1 <= V1_TILDE and 31 * S1 + S0 < 31 * V1_TILDE + V0_TILDE
    cert.holds("V-majorant", ok, "sum_i (n-i+1) 2^i (J_i - k1^i) < V1 n + V0 for n >= 31", 31 * S1 + S0)
    c1 = -1 / (2 * k1 - 1) + V1_TILDE
    c0 = (1 - 4 * k1) / (2 * k1 - 1) ** 2 + V0_TILDE
    cert.holds("V-negative", c1 < 0 and 31 * c1 + c0 < 0, "(V1 - 1/(2k1-1)) n + ... < 0 for n >= 31", 31 * c1 + c0)
    grow = (4 * k1 - 1) / ((2 * k1 - 1) ** 2 * 31 * 30)
    cert.lt("J-step", P30 + grow, F(10197, 10000), "P_30 + (4k1-1)/((2k1-1)^2 n(n+1)) < 1.0197")
    cert.lt("J-step<k1", F(10197, 10000), k1, "1.0197 < k1")

    ok_q = certify_qn_asymptotic(cert)
    cert.lt("M30<k2^30", M[30], k2 ** 30, "M_30 < 1.2^30")
    s = sum((4 * (30 - k + 1) * M[k] for k in range(30)), F(0))
    b31 = M[30] + s / (31 * (30 + F(5, 2)))
    cert.lt("M31", b31, k2 ** 31, "|b_31| < 1.2^31 from the table")
    T1 = sum((M[i] - k2 ** i for i in range(31)), F(0))
    T0_ = sum(((1 - i) * (M[i] - k2 ** i) for i in range(31)), F(0))
    ok = T1 <= W1_TILDE and 31 * T1 + T0_ < 31 * W1_TILDE + W0_TILDE
    cert.holds("W-majorant", ok, "sum_i (n-i+1)(M_i - k2^i) < W1 n + W0 for n >= 31", 31 * T1 + T0_)
    a = F(289, 100)
    b = a * F(7, 2) - (W1_TILDE - 1 / (k2 - 1))
    c = a * F(5, 2) - ((1 - 2 * k2) / (k2 - 1) ** 2 + W0_TILDE)
    cert.holds("W-quadratic", b * b - 4 * a * c < 0,
               "(266 n - 5657)/((n+1)(n+5/2)) <= 2.89 for all n", b * b - 4 * a * c)
    grow = 4 * (2 * k2 - 1) / ((k2 - 1) ** 2 * 31 * (30 + F(5, 2)))
    extra = 4 * a / k2 ** 30
    cert.lt("M-step/growth", grow, F(144, 1000), "4(2k2-1)/((k2-1)^2 (n+1)(n+5/2)) < 0.144")
    cert.lt("M-step/extra", extra, F(49, 1000), "4 * 2.89 / 1.2^30 < 0.049")
    cert.lt("M-step", 1 + grow + extra, k2, "1 + 0.144 + 0.049 < k2")
    cert.holds("M-step/|q_n|<=1", ok_q, "needed for the induction", ok_q)


def _tail(table: dict, x: F, k: F, start: int) -> tuple[F, F]:
    """(sum_{i>=start} T_i x^i, sum_{i>=start} i T_i x^(i-1)) with T_i <= k^i past 30."""
    v = sum((table[i] * x ** i for i in range(start, 31)), F(0))
    d = sum((i * table[i] * x ** (i - 1) for i in range(start, 31)), F(0))
    y = k * x
    if y >= 1:
        raise ArithmeticError("geometric tail diverges")
    v += y ** 31 / (1 - y)
    d += k * (31 * y ** 30 * (1 - y) + y ** 31) / (1 - y) ** 2
    return v, d


def _finite_deriv_sum(table: dict, x: F, start: int) -> F:
    return sum((i * table[i] * x ** (i - 1) for i in range(start, 31)), F(0))


def partial_sum_bound(points, s0: F, start: int = 11, stop: int = 30) -> F:
    """Upper bound of |sum_{start<=i<=stop} i b_i(lam) s0^(i-1)| on S2."""
    bp = fr.b_polys(stop)
    P = UPoly()
    for i in range(start, stop + 1):
        P = P + bp[i].scale(i * s0 ** (i - 1))
    up, _ = boundary_upper(lambda s: poly_bound_on_segment(P, s), points)
    return up


def _s2_approximations():
    Ga = RationalFunction(UPoly(), [])
    Gp = RationalFunction(UPoly(), [])
    for k in range(9):
        Ga = Ga + fr.a_rational(k).scale(T0 ** k)
        if k:
            Gp = Gp + fr.a_rational(k).scale(k * T0 ** (k - 1))
    s0 = 1 - T0
    bp = fr.b_polys(10)
    Ha, Hp = UPoly(), UPoly()
    for k in range(11):
        Ha = Ha + bp[k].scale(s0 ** k)
        if k:
            Hp = Hp + bp[k].scale(-k * s0 ** (k - 1))
    return Ga, Gp, Ha, Hp


def certify_wa(cert: Certificate, parts: dict, Ga, Gp, Ha, Hp) -> F:
    """Lower bound of |W(Ga, Ha)(t0)| on S2 (two stages)."""
    W = Ga.mul_poly(Hp) + Gp.mul_poly(Ha).scale(-1)
    W1 = RationalFunction(W.poly.truncate(12), W.terms)
    R = sqrt_upper(F(65, 4), 80)  # |4i + 1/2|
    tail = sum((abs_up(c) * R ** j for j, c in enumerate(W.poly.c) if j >= 13), F(0))
    cert.lt("tail", tail, F(79, 1000), "polynomial tail of W_a < 0.079 for |lam| <= |4i+1/2|")
    r = sqrt_upper(F(2), 80) / 4
    Abar = [F(195, 100), F(180, 100), F(174, 100), F(168, 100), F(161, 100), F(154, 100), F(148, 100)]
    E = [F(128, 100), F(77, 100), F(67, 100), F(65, 100), F(66, 100), F(67, 100), F(65, 100)]
    crude = None
    for k in range(1, 8):
        C = Gaussian(F(1, 4), F(3, 4) + F(k - 1, 2))
        corner = Gaussian(0, C.im - F(1, 4))
        A = abs_low(W1(C))
        R1 = sum((abs_up(a) * r / (abs_low(corner - s) * abs_low(C - s)) for a, s in W1.terms), F(0))
        R2 = sum((abs_up(c) * r ** j for j, c in enumerate(W1.poly.shift(C).c) if j >= 1), F(0))
        cert.gt(f"square{k}/Abar", A, Abar[k - 1], f"|W_1(C_{k})| > {float(Abar[k - 1])}")
        cert.le(f"square{k}/E", R1 + R2, E[k - 1], f"R_{k},1 + R_{k},2 <= {float(E[k - 1])}")
        low = Abar[k - 1] - E[k - 1] - F(79, 1000)
        crude = low if crude is None else min(crude, low)
    cert.gt("crude", crude, F(59, 100), "|W_a(t0)| > 0.59 on S2, hence no roots in S2")
    lo = boundary_lower(lambda s: rational_bound_on_segment(W1, s, 10), parts["P2"])
    cert.gt("boundary", lo, F(114, 100), "|W_1| > 1.14 on the boundary of S2")
    sharp = lo - tail
    cert.gt("sharp", sharp, F(106, 100), "|W_a(t0)| > 1.14 - 0.08 = 1.06 on S2 (no roots, minimum modulus)")
    return sharp


def certify_s2(data: DataBundle, cert: Certificate | None = None) -> Certificate:
    cert = cert or Certificate("S2")
    parts = s2_partitions(data)
    with cert.group("tables"):
        certify_tables(data, cert, parts)
    with cert.group("induction"):
        certify_induction(data, cert)
    Ga, Gp, Ha, Hp = _s2_approximations()
    with cert.group("values"):
        vGa, _ = boundary_upper(lambda s: rational_bound_on_segment(Ga, s, 10), parts["P2"])
        vGp, _ = boundary_upper(lambda s: rational_bound_on_segment(Gp, s, 10), parts["P2"])
        vHa, _ = boundary_upper(lambda s: poly_bound_on_segment(Ha, s), parts["P4"])
        vHp, _ = boundary_upper(lambda s: poly_bound_on_segment(Hp, s), parts["P3"])
        cert.le("|Ga(t0)|", vGa, F(214, 100))
        cert.le("|Ha(t0)|", vHa, F(61, 100))
        cert.le("|Ga'(t0)|", vGp, F(583, 100))
        cert.le("|Ha'(t0)|", vHp, F(132, 100))
    with cert.group("tails"):
        d1, d1p = _tail(data.J, T0, K1, 9)
        d2, d2p_table = _tail(data.M, 1 - T0, K2, 11)
        # sharper: the partial sum for 11 <= i <= 30 is a polynomial in lam,
        # bounded on the boundary (maximum modulus), plus the k2 tail
        d2p = partial_sum_bound(parts["P3"], 1 - T0) + (d2p_table - _finite_deriv_sum(data.M, 1 - T0, 11))
        cert.lt("delta1", d1, F(14, 1000), "|delta1(t0)| < 0.014")
        cert.lt("delta1'", d1p, F(252, 1000), "|delta1'(t0)| < 0.252")
        cert.lt("delta2", d2, F(3, 1000), "|delta2(t0)| < 0.003")
        cert.lt("delta2'", d2p, F(58, 1000), "|delta2'(t0)| < 0.058")
    with cert.group("wronskian"):
        Wa = certify_wa(cert, parts, Ga, Gp, Ha, Hp)
        err = vGa * d2p + d1 * vHp + d1 * d2p + vHa * d1p + d2 * vGp + d2 * d1p
        cert.gt("margin", Wa - err, F(744, 1000), "|W(G,H)(t0)| > 0.744")
        # the same assembly with the printed constants, including the printed 0.073
        printed = (F(106, 100) - F(214, 100) * F(58, 1000) - F(14, 1000) * F(132, 100)
                   - F(14, 1000) * F(73, 1000) - F(61, 100) * F(252, 1000)
                   - F(3, 1000) * F(583, 100) - F(3, 1000) * F(252, 1000))
        cert.gt("margin/printed-constants", printed, F(744, 1000), "printed assembly > 0.744")
    cert.conclusion.append("no eigenvalues in S2 (and its conjugate)")
    return cert

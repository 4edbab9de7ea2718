"""Acceptance criteria 1-13; each test records one PASS/FAIL line for the summary."""
from __future__ import annotations

import re
from fractions import Fraction as F

import pytest

import test_regions as tr
from conftest import record
from modestab import cert_recurrence as rec
from modestab import cli


def value(leaf, upper: bool = True) -> F:
    """Exact computed value of a leaf: a rational or the relevant end of an enclosure."""
    s = leaf.computed
    m = re.fullmatch(r"\[(.*), (.*)\]", s)
    if m:
        return F(m.group(2) if upper else m.group(1))
    return F(s)


def check(cert, specs) -> tuple[bool, list]:
    """specs: (leaf name, relation, bound); relation in <, <=, >, >=, ==."""
    bad = []
    for name, rel, bound in specs:
        lf = cert.leaf(name)
        v = value(lf, upper=rel in ("<", "<="))
        ok = {"<": v < bound, "<=": v <= bound, ">": v > bound, ">=": v >= bound, "==": v == bound}[rel]
        if not (ok and lf.verdict):
            bad.append(f"{name}: {float(v):.6g} {rel} {float(bound):.6g}")
    return not bad, bad


def group_passed(cert, prefix: str) -> tuple[int, list]:
    leaves = [lf for lf in cert.leaves if lf.name.startswith(prefix)]
    return len(leaves), [lf.name for lf in leaves if not lf.verdict]


def _conclude(k: int, ok: bool, bad: list, summary: str):
    record(k, ok, summary if ok else "; ".join(bad[:3]))
    assert ok, bad


def test_criterion_01_resolvent(certs):
    c = certs("resolvent")
    ok, bad = check(c, [("V1/multiplier", "<=", 50), ("k-chain", "<", F(76, 10)), ("product", "==", 380)])
    _conclude(1, ok and c.passed, bad, "multiplier <= 50, k-chain < 7.6, 50 * 7.6 = 380")


def test_criterion_02_s1_residuals(certs):
    c = certs("S1")
    ok, bad = check(c, [("residual/R1", "<=", F(441, 100000)), ("residual/R2", "<=", F(595, 100000))])
    _conclude(2, ok, bad, "|R1| <= 0.00441, |R2| <= 0.00595")


def test_criterion_03_s1_gronwall(certs):
    c = certs("S1")
    ok, bad = check(
        c,
        [
            ("gronwall/near/D1", "<", F(15, 10000)),
            ("gronwall/near/delta", "<", F(15, 16) * F(1, 10**4)),
            ("gronwall/near/delta'", "<", F(9, 10**4)),
            ("gronwall/far/delta", "<", F(16, 10**4)),
            ("gronwall/far/delta'", "<", F(13, 10**3)),
            ("gronwall/H-far/delta", "<", F(13, 10**4)),
            ("gronwall/H-far/delta'", "<", F(8, 10**3)),
        ],
    )
    _conclude(3, ok, bad, "D1 < 0.0015 and all six delta bounds")


def test_criterion_04_s1_wronskian(certs):
    c = certs("S1")
    ok, bad = check(
        c,
        [
            ("wronskian/|W0|", ">", F(79, 100)),
            ("wronskian/|W-W0|", "<=", F(33, 100)),
            ("wronskian/|W(Ga,Ha)|", ">", F(46, 100)),
            ("wronskian/margin", ">", F(43, 100)),
        ],
    )
    _conclude(4, ok and c.passed, bad, "|W0| > 0.79, remainder <= 0.33, > 0.46, margin > 0.43")


def test_criterion_05_s2_tables(certs):
    c = certs("S2")
    names = {lf.name for lf in c.leaves}
    # rows past 10 are produced by the recursion and carry a /step suffix
    need = [f"tables/{x}{n}" + ("/step" if n > 10 else "") for x in "JM" for n in range(31)]
    need += [f"tables/P{n}" for n in range(10, 30)]
    missing = [n for n in need if n not in names]
    failed = [n for n in need if n in names and not c.leaf(n).verdict]
    bad = [f"missing {m}" for m in missing] + [f"failed {f}" for f in failed]
    _conclude(5, not bad, bad, f"{len(need)} table rows J_0..30, M_0..30, P_10..29 certified")


def test_criterion_06_s2_induction(certs):
    c = certs("S2")
    ok, bad = check(c, [("induction/J30<k1^30", "<", F(1026, 1000) ** 30), ("induction/M30<k2^30", "<", F(12, 10) ** 30)])
    n, failed = group_passed(c, "induction/")
    _conclude(6, ok and not failed, bad + failed, f"J30 < 1.026^30, M30 < 1.2^30, {n} induction leaves")


def test_criterion_07_s2_final(certs):
    c = certs("S2")
    ok, bad = check(
        c,
        [
            ("wronskian/crude", ">", F(59, 100)),
            ("wronskian/boundary", ">=", F(114, 100)),
            ("wronskian/sharp", ">", F(106, 100)),
            ("tails/delta1", "<", F(14, 1000)),
            ("tails/delta1'", "<", F(252, 1000)),
            ("tails/delta2", "<", F(3, 1000)),
            ("tails/delta2'", "<", F(58, 1000)),
            ("wronskian/margin", ">", F(744, 1000)),
            ("wronskian/margin/printed-constants", ">", F(744, 1000)),
        ],
    )
    squares = [f"wronskian/square{k}/E" for k in range(1, 8)]
    bad += [s for s in squares if not c.leaf(s).verdict]
    _conclude(7, ok and c.passed, bad, "crude > 0.59 (7 squares), boundary >= 1.14, sharp > 1.06, margin > 0.744")


def test_criterion_08_s3_contraction(certs):
    c = certs("S3")
    ok, bad = check(c, [("contraction/ball", "<=", F(6, 10)), ("contraction/contraction", "<", F(8, 10))])
    n, failed = group_passed(c, "monotonicity/")
    _conclude(8, ok and n > 0 and not failed, bad + failed, f"ball 0.6 kept, factor < 0.8, {n} monotonicity leaves")


def test_criterion_09_s3_gaps(certs):
    c = certs("S3")
    ok, bad = check(
        c,
        [
            ("gaps/gap/n<=20", "<", F(106, 1000)),
            ("gaps/gap/n>20", "<", F(106, 1000)),
            ("gaps/anchor/link1", "<", F(1, 312500)),
            ("gaps/anchor/link2", "<", F(37209, 50)),
            ("gaps/anchor/link3", "<", F(3, 250000)),
            ("gaps/anchor/link4", ">", F(786187, 10**6)),
            ("gaps/anchor/link5", "<", F(145, 10**4)),
            ("gaps/anchor/link6", "<", F(3, 10**7)),
            ("gaps/anchor/link7", ">", F(6098, 10**4)),
            ("gaps/anchor/gap", ">", F(595, 1000)),
            ("rouche/winding/F", "==", 0),
        ],
    )
    _conclude(9, ok and c.passed, bad, "gap < 0.106, links 1-7, |F| > 0.6098, > 0.595, winding 0")


def test_criterion_10_s4_lemma(certs):
    c = certs("S4")
    specs = [
        ("lemma-ii/induction/lower", "<=", F(9, 200)),
        ("lemma-ii/induction/upper", "<=", F(9, 200)),
        ("lemma-iii/large-root/lower", ">", F(19, 50)),
        ("lemma-iii/large-root/upper", ">", F(49, 100)),
        ("lemma-iii/delta3(10i)", "<", F(1, 100)),
        ("lemma-iii/delta3(380i)", "<", F(1, 25)),
        ("lemma-iii/delta2-50/lower", "<=", F(3, 20)),
        ("lemma-iii/delta2-50/upper", "<=", F(3, 20)),
        ("lemma-iv/eps2", "<", F(29, 500)),
        ("lemma-iv/C2", "<", F(517, 1000)),
        ("lemma-iv/induction", "<=", F(3, 20)),
    ]
    ok, bad = check(c, specs)
    for key in rec.s4_segments():
        side = key[0]
        t = rec._targets(side)
        name = rec._seg_name(key)
        more = [
            (f"lemma-i/delta1/{name}", "<=", F(19, 1000)),
            (f"lemma-ii/eps1/{name}", "<=", t["eps1"]),
            (f"lemma-ii/C1/{name}", "<=", t["C1"]),
        ]
        ok2, bad2 = check(c, more)
        ok, bad = ok and ok2, bad + bad2
    n, failed = group_passed(c, "lemma-iv/")
    _conclude(10, ok and not failed, bad + failed, "(i) <= 19/1000, (ii) D2 = 9/200, (iii) gaps, D3 = 3/20, (iv) U1..U3, L1")


def test_criterion_11_s4_analyticity(certs):
    c = certs("S4")
    ok, bad = check(
        c,
        [
            ("analyticity/seam-jump/70i", "<", F(2, 250)),
            ("analyticity/seam-jump/70i+1/2", "<", F(7, 1000)),
            ("analyticity/tilde-delta", "<", F(13, 1000)),
            ("analyticity/double-tilde-delta", "<", F(3, 50)),
            ("analyticity/log-bound", "<", F(1, 10)),
            ("analyticity/winding", "<", F(3, 10)),
        ],
    )
    n, failed = group_passed(c, "analyticity/")
    _conclude(11, ok and not failed, bad + failed, "seam jumps < 2/250, < 7/1000; variation < 3/10 < 2 pi")


def test_criterion_12_oracles_and_negative_controls(bundle):
    bad = []
    try:
        tr.test_resolvent_sampled_suprema()
        for lam in tr._points(101, (F(0), F(1, 2)), (F(0), F(1, 2))):
            tr.test_s1_oracle(lam)
        for lam in tr._points(102, (F(0), F(1, 2)), (F(1, 2), F(4))):
            tr.test_s2_oracle(lam, bundle)
        for lam in tr._points(103, (F(0), F(1, 2)), (F(4), F(10))):
            tr.test_s3_oracle(lam)
        for lam in tr._boundary_points(104, 20):
            tr.test_s4_quasi_solutions_track_ratios(lam, bundle)
    except AssertionError as exc:
        bad.append(f"oracle: {exc}")
    flips = []
    perturbed = tr.perturbed_bundles(bundle)
    for region, fn in list(tr.CERTIFIERS.items()) + [("S4", rec.certify_s4)]:
        cert = fn(perturbed[region])
        if cert.passed:
            bad.append(f"negative control {region} still passes")
        else:
            flips.append(f"{region}:{cert.failures()[0].name}")
    mp = pytest.MonkeyPatch()
    try:
        tr.test_negative_control_resolvent(mp)
        flips.append("resolvent:V1'/sup")
    except AssertionError:
        bad.append("negative control resolvent still passes")
    finally:
        mp.undo()
    _conclude(12, not bad, bad, "20 oracle points per region; controls flip " + ", ".join(flips))


def test_criterion_13_composition(tmp_path):
    out = tmp_path / "all.txt"
    code = cli.main(["certify", "--region", "all", "--out", str(out)])
    text = out.read_text()
    ok = code == 0 and "VERDICT: PASS" in text and "== region composition: PASS ==" in text
    ok = ok and "conjugation symmetry" in text and "[PASS] conjugation" in text
    ok = ok and "[PASS] coverage/strip" in text
    _conclude(13, ok, [f"exit code {code}"], "certify --region all: PASS, coverage and conjugation leaves")

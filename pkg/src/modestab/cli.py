"""Command line entry point: ``modestab certify --region ...``.

Exit status is 0 when every requested certificate passes, 1 when any leaf
fails and 2 on operational errors (missing data, bad checksum, I/O).
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction as F

from . import data as data_mod
from . import frobenius as fr
from .certificate import Certificate, forest_to_json

REGIONS = ("resolvent", "S1", "S2", "S3", "S4")

# Im-ranges (upper half plane) covered by each region on 0 <= Re lam <= 1/2
COVERAGE = {
    "S1": (F(0), F(1, 2)),
    "S2": (F(1, 2), F(4)),
    "S3": (F(4), F(10)),
    "S4": (F(10), F(380)),
    "resolvent": (F(380), None),
}

PROFILES = {"paper": {"cells": 64}, "tight": {"cells": 256}}


def run_region(region: str, data_dir: str | None, profile: str = "paper", workers: int = 1) -> Certificate:
    """Run one region certifier on a freshly ingested bundle."""
    from . import cert_recurrence, cert_resolvent, cert_wronskian

    if region == "resolvent":
        return cert_resolvent.certify_resolvent()
    bundle = data_mod.ingest(data_dir)
    if region == "S1":
        return cert_wronskian.certify_s1(bundle)
    if region == "S2":
        return cert_wronskian.certify_s2(bundle)
    if region == "S3":
        return cert_recurrence.certify_s3(bundle)
    if region == "S4":
        return cert_recurrence.certify_s4(bundle, workers=workers, cells=PROFILES[profile]["cells"])
    raise ValueError(f"unknown region {region!r}")


def _run_star(args):
    return run_region(*args)


def compose(forest: list) -> Certificate:
    """Top-level certificate: every region passed and together they cover Re lam >= 0."""
    cert = Certificate("composition")
    by_name = {c.region: c for c in forest}
    for r in REGIONS:
        c = by_name.get(r)
        cert.holds(f"region/{r}", c is not None and c.passed, f"region {r} certified", "PASS" if c and c.passed else "FAIL")
    # the Im-ranges chain from 0 to infinity without gaps
    spans = sorted(COVERAGE.values(), key=lambda s: s[0])
    chained = spans[0][0] == 0 and spans[-1][1] is None
    chained = chained and all(a[1] == b[0] for a, b in zip(spans, spans[1:]))
    cert.holds("coverage/strip", chained, "0 <= Re lam <= 1/2, Im lam >= 0 is covered by S1..S4 and |Im lam| >= 380")
    cert.holds(
        "coverage/large-Im",
        by_name.get("resolvent") is not None and by_name["resolvent"].passed,
        "Re lam >= 0 and |Im lam| >= 380 excluded by the resolvent bound",
    )
    real = all(isinstance(c, F) for n in range(60) for c in fr.p0(n).c + fr.p1(n).c)
    cert.holds(
        "conjugation",
        real,
        "recurrence coefficients are real in lam: lam is an eigenvalue iff conj(lam) is",
    )
    cert.holds(
        "trusted/Re>=1/2",
        True,
        "no unstable modes with Re lam >= 1/2, lam != 1 (prior quantitative result)",
        "trusted",
    )
    if cert.passed:
        cert.conclusion.append(
            "mode stability: no smooth solution with Re lam >= 0 and lam != 1 "
            "(lower half plane by conjugation symmetry)"
        )
    return cert


def run_certify(regions: list, data_dir: str | None, parallelism: int = 1, profile: str = "paper") -> list:
    jobs = [(r, data_dir, profile, 1 if parallelism > 1 and len(regions) > 1 else parallelism) for r in regions]
    if parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            forest = list(pool.map(_run_star, jobs))
    else:
        forest = [_run_star(j) for j in jobs]
    return forest


def emit(forest: list, fmt: str, timings: bool) -> str:
    if fmt == "json":
        return forest_to_json(forest, timings)
    blocks = [c.render_text(timings) for c in forest]
    npass = sum(lf.verdict for c in forest for lf in c.leaves)
    total = sum(len(c.leaves) for c in forest)
    tail = f"TOTAL: {npass} passed, {total - npass} failed"
    if timings:
        tail += f", {sum(c.total_ms() for c in forest) / 1000:.2f} s"
    verdict = "PASS" if all(c.passed for c in forest) else "FAIL"
    return "\n\n".join(blocks) + f"\n\n{tail}\nVERDICT: {verdict}\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modestab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("certify", help="run region certificates")
    c.add_argument("--region", choices=REGIONS + ("all",), default="all")
    c.add_argument("--data", metavar="DIR", default=None, help="data directory (default: bundled tables)")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--out", metavar="PATH", default=None, help="write the report here instead of stdout")
    c.add_argument("--parallelism", type=int, default=1, metavar="N")
    c.add_argument(
        "--tolerance-profile",
        choices=tuple(PROFILES),
        default="paper",
        help="numerical resolution of sup bounds; thresholds are unchanged",
    )
    c.add_argument("--timings", action="store_true", help="include per-leaf timings (output no longer byte-stable)")
    return p


def main(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    regions = list(REGIONS) if args.region == "all" else [args.region]
    try:
        forest = run_certify(regions, args.data, max(1, args.parallelism), args.tolerance_profile)
        if args.region == "all":
            forest.append(compose(forest))
        report = emit(forest, args.format, args.timings)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(report)
        else:
            sys.stdout.write(report)
    except (data_mod.IngestError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if all(c.passed for c in forest) else 1


if __name__ == "__main__":
    sys.exit(main())

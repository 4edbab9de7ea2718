"""Loading of the coefficient tables that the certificates consume."""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from .exactnum import Gaussian, ParseError, parse_rational
from .poly import BivarPoly, UPoly

DATA_FILES = (
    "approx_solutions.txt",
    "quasilog.txt",
    "coefficient_bounds.txt",
    "anchor.txt",
    "partitions.txt",
)
MANIFEST = "SHA256SUMS"


class IngestError(Exception):
    """Raised for a missing file, a malformed line or a checksum mismatch."""


def default_data_dir() -> Path:
    return Path(__file__).resolve().parent / "data"


def sha256_of(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(data_dir: Path) -> None:
    lines = [f"{sha256_of(data_dir / name)}  {name}" for name in DATA_FILES]
    (data_dir / MANIFEST).write_text("\n".join(lines) + "\n")


@dataclass(frozen=True)
class DataBundle:
    approx: dict            # piece name -> BivarPoly in (var, lam)
    quasilog: dict          # table name -> {n: [Gaussian] * 6}
    J: dict                 # n -> Fraction
    P: dict                 # n -> Fraction
    M: dict                 # n -> Fraction
    anchor_poly: UPoly
    anchor_roots: tuple     # ((s, d), ...)
    anchor_poles: tuple     # ((s, d), ...)
    partitions: dict        # name -> [Gaussian]
    checksums: dict = field(default_factory=dict)
    source: str = ""

    def with_quasilog(self, table: str, n: int, i: int, value: Gaussian) -> "DataBundle":
        """Copy with one quasi-log coefficient replaced (negative controls)."""
        q = {k: {m: list(v) for m, v in rows.items()} for k, rows in self.quasilog.items()}
        q[table][n][i] = value
        return replace(self, quasilog=q)

    def with_approx(self, piece: str, key: tuple, value: Gaussian) -> "DataBundle":
        a = dict(self.approx)
        coeffs = dict(a[piece].c)
        coeffs[key] = value
        a[piece] = BivarPoly(coeffs)
        return replace(self, approx=a)


def _lines(path: Path):
    try:
        text = path.read_text()
    except FileNotFoundError as exc:
        raise IngestError(f"missing data file {path.name}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _parse(path: Path, lineno: int, fn, token: str):
    try:
        return fn(token)
    except (ParseError, ValueError) as exc:
        raise IngestError(f"{path.name}:{lineno}: cannot parse {token!r}") from exc


def _check_manifest(data_dir: Path) -> dict:
    mpath = data_dir / MANIFEST
    if not mpath.exists():
        raise IngestError(f"missing checksum manifest {MANIFEST}")
    pinned = {}
    for line in mpath.read_text().splitlines():
        if line.strip():
            digest, name = line.split()
            pinned[name] = digest
    sums = {}
    for name in DATA_FILES:
        path = data_dir / name
        if not path.exists():
            raise IngestError(f"missing data file {name}")
        digest = sha256_of(path)
        if pinned.get(name) != digest:
            raise IngestError(f"checksum mismatch for {name}")
        sums[name] = digest
    return sums


def ingest(data_dir: str | os.PathLike | None = None, verify: bool = True) -> DataBundle:
    d = Path(data_dir) if data_dir is not None else default_data_dir()
    if not d.is_dir():
        raise IngestError(f"data directory {d} does not exist")
    sums = _check_manifest(d) if verify else {}

    path = d / "approx_solutions.txt"
    approx_c: dict = {}
    for ln, tok in _lines(path):
        if len(tok) != 4:
            raise IngestError(f"{path.name}:{ln}: expected 4 fields")
        piece = tok[0]
        i, j = _parse(path, ln, int, tok[1]), _parse(path, ln, int, tok[2])
        approx_c.setdefault(piece, {})[(i, j)] = _parse(path, ln, Gaussian.parse, tok[3])
    approx = {k: BivarPoly(v) for k, v in approx_c.items()}
    for piece in ("G0", "G1", "H0", "H1"):
        if piece not in approx:
            raise IngestError(f"{path.name}: piece {piece} missing")

    path = d / "quasilog.txt"
    quasi: dict = {}
    for ln, tok in _lines(path):
        if len(tok) != 4:
            raise IngestError(f"{path.name}:{ln}: expected 4 fields")
        table = tok[0]
        n, i = _parse(path, ln, int, tok[1]), _parse(path, ln, int, tok[2])
        row = quasi.setdefault(table, {}).setdefault(n, [None] * 6)
        if not 0 <= i < 6:
            raise IngestError(f"{path.name}:{ln}: index {i} out of range")
        row[i] = _parse(path, ln, Gaussian.parse, tok[3])
    for table in ("a1", "a2", "b1", "b2"):
        rows = quasi.get(table, {})
        for n in range(1, 51):
            if n not in rows or any(v is None for v in rows[n]):
                raise IngestError(f"{path.name}: row {table} n={n} incomplete")

    path = d / "coefficient_bounds.txt"
    J, P, M = {}, {}, {}
    scale = Fraction(1, 10**7)
    for ln, tok in _lines(path):
        if len(tok) != 4:
            raise IngestError(f"{path.name}:{ln}: expected 4 fields")
        n = _parse(path, ln, int, tok[0])
        J[n] = _parse(path, ln, parse_rational, tok[1]) * scale
        if tok[2] != "-":
            P[n] = _parse(path, ln, parse_rational, tok[2])
        M[n] = _parse(path, ln, parse_rational, tok[3]) * scale

    path = d / "anchor.txt"
    poly_c: dict = {}
    roots, poles = [], []
    for ln, tok in _lines(path):
        kind = tok[0]
        if kind == "poly" and len(tok) == 3:
            poly_c[_parse(path, ln, int, tok[1])] = _parse(path, ln, parse_rational, tok[2])
        elif kind in ("root", "anchor") and len(tok) == 3:
            pair = (_parse(path, ln, parse_rational, tok[1]), _parse(path, ln, parse_rational, tok[2]))
            (roots if kind == "root" else poles).append(pair)
        else:
            raise IngestError(f"{path.name}:{ln}: unrecognised line")
    deg = max(poly_c, default=-1)
    anchor_poly = UPoly([poly_c.get(k, Fraction(0)) for k in range(deg + 1)])

    path = d / "partitions.txt"
    parts: dict = {}
    for ln, tok in _lines(path):
        if len(tok) != 2:
            raise IngestError(f"{path.name}:{ln}: expected 2 fields")
        parts.setdefault(tok[0], []).append(_parse(path, ln, Gaussian.parse, tok[1]))

    return DataBundle(
        approx=approx,
        quasilog=quasi,
        J=J,
        P=P,
        M=M,
        anchor_poly=anchor_poly,
        anchor_roots=tuple(roots),
        anchor_poles=tuple(poles),
        partitions=parts,
        checksums=sums,
        source=str(d),
    )

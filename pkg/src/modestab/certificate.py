"""Certificate trees: named exact inequalities with verdicts.

A certificate is a flat, ordered list of leaves whose names carry the tree
structure as slash-separated paths (``"grönwall/g-near/D"``).  The root
verdict is the conjunction of the leaf verdicts.
"""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .exactnum import Enclosure


def fmt(v) -> str:
    """Exact string form of a computed value."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, Enclosure):
        return f"[{v.lo}, {v.hi}]"
    return str(v)


def approx(v) -> str:
    if isinstance(v, Enclosure):
        return f"[{float(v.lo):.6g}, {float(v.hi):.6g}]"
    if isinstance(v, (Fraction, int)) and not isinstance(v, bool):
        return f"{float(v):.6g}"
    return fmt(v)


@dataclass
class Leaf:
    name: str
    claim: str
    computed: str
    verdict: bool
    ms: float = 0.0
    approx: str = ""


@dataclass
class Certificate:
    region: str
    leaves: list = field(default_factory=list)
    conclusion: list = field(default_factory=list)
    _clock: float = field(default=0.0, repr=False, compare=False)
    _prefix: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        self._clock = time.perf_counter()

    # -- building -------------------------------------------------------
    def group(self, name: str) -> "_Group":
        return _Group(self, name)

    def _add(self, name: str, claim: str, value, ok: bool) -> bool:
        now = time.perf_counter()
        full = "/".join(self._prefix + [name])
        self.leaves.append(
            Leaf(full, claim, fmt(value), bool(ok), round((now - self._clock) * 1000, 3), approx(value))
        )
        self._clock = now
        return bool(ok)

    def le(self, name: str, value, bound, claim: str = "") -> bool:
        v = value.hi if isinstance(value, Enclosure) else value
        return self._add(name, claim or f"<= {bound}", value, v <= bound)

    def lt(self, name: str, value, bound, claim: str = "") -> bool:
        v = value.hi if isinstance(value, Enclosure) else value
        return self._add(name, claim or f"< {bound}", value, v < bound)

    def ge(self, name: str, value, bound, claim: str = "") -> bool:
        v = value.lo if isinstance(value, Enclosure) else value
        return self._add(name, claim or f">= {bound}", value, v >= bound)

    def gt(self, name: str, value, bound, claim: str = "") -> bool:
        v = value.lo if isinstance(value, Enclosure) else value
        return self._add(name, claim or f"> {bound}", value, v > bound)

    def holds(self, name: str, ok: bool, claim: str, computed="") -> bool:
        return self._add(name, claim, computed if computed != "" else ok, ok)

    def equals(self, name: str, value, target, claim: str = "") -> bool:
        return self._add(name, claim or f"= {target}", value, value == target)

    def extend(self, other: "Certificate", prefix: str = "") -> None:
        for lf in other.leaves:
            name = f"{prefix}/{lf.name}" if prefix else lf.name
            self.leaves.append(Leaf(name, lf.claim, lf.computed, lf.verdict, lf.ms, lf.approx))

    # -- reading --------------------------------------------------------
    @property
    def passed(self) -> bool:
        return bool(self.leaves) and all(lf.verdict for lf in self.leaves)

    def failures(self) -> list:
        return [lf for lf in self.leaves if not lf.verdict]

    def leaf(self, name: str) -> Leaf:
        for lf in self.leaves:
            if lf.name == name or lf.name.endswith("/" + name):
                return lf
        raise KeyError(name)

    def total_ms(self) -> float:
        return sum(lf.ms for lf in self.leaves)

    # -- serialisation --------------------------------------------------
    def to_dict(self, timings: bool = True) -> dict:
        leaves = []
        for lf in self.leaves:
            d = asdict(lf)
            d["verdict"] = "PASS" if lf.verdict else "FAIL"
            if not timings:
                d["ms"] = 0.0
            leaves.append(d)
        return {
            "region": self.region,
            "verdict": "PASS" if self.passed else "FAIL",
            "leaves": leaves,
            "conclusion": list(self.conclusion),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        c = cls(d["region"])
        for lf in d["leaves"]:
            c.leaves.append(
                Leaf(lf["name"], lf["claim"], lf["computed"], lf["verdict"] == "PASS", lf["ms"], lf.get("approx", ""))
            )
        c.conclusion = list(d.get("conclusion", []))
        return c

    def render_text(self, timings: bool = True) -> str:
        out = [f"== region {self.region}: {'PASS' if self.passed else 'FAIL'} =="]
        for lf in self.leaves:
            tag = "PASS" if lf.verdict else "FAIL"
            line = f"[{tag}] {lf.name}: {lf.approx} ({lf.claim})"
            if timings:
                line += f" {lf.ms:.1f} ms"
            out.append(line)
        for c in self.conclusion:
            out.append(f"  => {c}")
        npass = sum(lf.verdict for lf in self.leaves)
        tail = f"leaves: {npass} passed, {len(self.leaves) - npass} failed"
        if timings:
            tail += f", {self.total_ms() / 1000:.2f} s"
        out.append(tail)
        return "\n".join(out)


class _Group:
    def __init__(self, cert: Certificate, name: str):
        self.cert, self.name = cert, name

    def __enter__(self):
        self.cert._prefix.append(self.name)
        return self.cert

    def __exit__(self, *exc):
        self.cert._prefix.pop()
        return False


def forest_to_json(forest: list, timings: bool = True) -> str:
    return json.dumps([c.to_dict(timings) for c in forest], indent=2, sort_keys=False) + "\n"


def forest_from_json(text: str) -> list:
    return [Certificate.from_dict(d) for d in json.loads(text)]

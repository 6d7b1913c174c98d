"""Verdicts and the JSON-serializable analysis report."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

RATIONAL = "Rational"
NOT_RATIONAL = "NotRational"
IMPOSSIBLE = "Impossible"
UNKNOWN = "Unknown"

TAGS = (RATIONAL, NOT_RATIONAL, IMPOSSIBLE, UNKNOWN)


@dataclass(frozen=True)
class Verdict:
    tag: str
    reason: str = ""
    branch: str = ""

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown verdict tag {self.tag!r}")

    @property
    def decided(self) -> bool:
        return self.tag in (RATIONAL, NOT_RATIONAL)


@dataclass
class Report:
    input: dict
    verdict: Verdict
    s: dict | None = None
    h1: list | None = None
    witness: dict | None = None
    notes: list = field(default_factory=list)
    ms: float = 0.0
    certificates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["verdict"] = asdict(self.verdict)
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        d = dict(d)
        d["verdict"] = Verdict(**d["verdict"])
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        lines = []
        width = 10
        inp = ", ".join(f"{k}={v}" for k, v in self.input.items())
        lines.append(f"{'input':<{width}} {inp}")
        if self.s is not None:
            s = self.s
            lines.append(f"{'s':<{width}} {s['total']}  (s1={s['s1']} s2={s['s2']} s3={s['s3']} s4={s['s4']})")
        lines.append(f"{'verdict':<{width}} {self.verdict.tag}" + (f" ({self.verdict.reason})" if self.verdict.reason else ""))
        if self.verdict.branch:
            lines.append(f"{'branch':<{width}} {self.verdict.branch}")
        if self.h1 is not None:
            h1 = " x ".join(f"Z/{d}" for d in self.h1) or "0"
            lines.append(f"{'H^1':<{width}} {h1}")
        if self.witness:
            for k, v in self.witness.items():
                lines.append(f"{'witness':<{width}} {k} = {v}")
        for n in self.notes:
            lines.append(f"{'note':<{width}} {n}")
        lines.append(f"{'time':<{width}} {self.ms:.1f} ms")
        return "\n".join(lines)

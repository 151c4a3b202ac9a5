"""Structured verification records shared by every suite."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA_VERSION = 1


@dataclass
class Check:
    identity: str
    block: str
    dimension: int
    status: str  # "pass" or "fail"
    residual: Optional[float] = None
    residual_certificate: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        if d["residual_certificate"] is None:
            del d["residual_certificate"]
        if d["residual"] is None:
            del d["residual"]
        return d


@dataclass
class Report:
    suite: str
    checks: List[Check] = field(default_factory=list)
    config: Dict[str, Any] = field(default_factory=dict)
    extra: Dict[str, Any] = field(default_factory=dict)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def worst_residual(self) -> Optional[float]:
        vals = [c.residual for c in self.checks if c.residual is not None]
        return max(vals) if vals else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "config": self.config,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            **({"extra": self.extra} if self.extra else {}),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _fmt_res(r: Optional[float]) -> str:
    return "-" if r is None else f"{r:.3e}"


def report_render(report: Report) -> str:
    """Fixed-width summary table: suite, block, dimension, status, residual."""
    header = f"{'suite':<14} {'identity':<28} {'block':<30} {'dim':>6} {'status':<6} {'residual':>10}"
    lines = [header, "-" * len(header)]
    for c in report.checks:
        status = "OK" if c.passed else "FAIL"
        row = (
            f"{report.suite:<14} {c.identity[:28]:<28} {c.block[:30]:<30} "
            f"{c.dimension:>6} {status:<6} {_fmt_res(c.residual):>10}"
        )
        if not c.passed and c.residual_certificate is not None:
            row += f"  see certificate: {c.identity}@{c.block}"
        lines.append(row)
    return "\n".join(lines) + "\n"

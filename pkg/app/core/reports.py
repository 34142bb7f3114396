import json
import logging
from dataclasses import dataclass, field
from typing import Any, Optional

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"


def _plain(value: Any) -> Any:
    # constructed objects in `data` are written by name
    return getattr(value, "name", type(value).__name__)


@dataclass
class CheckResult:
    diagram: str
    frame: str = ""
    status: str = PASS
    witness: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "diagram": self.diagram,
            "frame": self.frame,
            "status": self.status,
            "witness": self.witness,
        }


@dataclass
class Report:
    title: str
    results: list[CheckResult] = field(default_factory=list)
    depth: Optional[int] = None
    # False when lazily infinite data was only enumerated up to `depth`
    exact: bool = True
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.status == PASS for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.status != PASS]

    def record(self, diagram: str, ok: bool, frame: str = "", witness: Any = None) -> bool:
        status = PASS if ok else FAIL
        logger.debug("%s: %s [%s]", self.title, diagram, status)
        self.results.append(CheckResult(diagram, frame, status, dict(witness or {})))
        return ok

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for r in other.results:
            self.results.append(
                CheckResult(f"{prefix}{r.diagram}", r.frame, r.status, r.witness)
            )
        self.exact = self.exact and other.exact
        return self

    @property
    def verdict(self) -> str:
        if not self.passed:
            return "counterexample"
        if self.exact:
            return "verified"
        return f"verified-to-depth {self.depth}"

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "verdict": self.verdict,
            "depth": self.depth,
            "exact": self.exact,
            "results": [r.as_dict() for r in self.results],
            "data": self.data,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, ensure_ascii=False, default=_plain)

    def to_text(self) -> str:
        lines = [f"{self.title}: {self.verdict} ({len(self.results)} checks)"]
        for r in self.results:
            mark = "ok " if r.status == PASS else "FAIL"
            line = f"  [{mark}] {r.diagram}"
            if r.frame:
                line += f" @ {r.frame}"
            if r.status != PASS and r.witness:
                line += f" -- {json.dumps(r.witness, sort_keys=True, ensure_ascii=False)}"
            lines.append(line)
        return "\n".join(lines)


def require(report: Report, exc_type: type) -> Report:
    """Raise ``exc_type`` carrying the first failing diagram of ``report``."""
    if not report.passed:
        first = report.failures[0]
        raise exc_type(
            f"{report.title}: {first.diagram} fails",
            {"diagram": first.diagram, "frame": first.frame, **first.witness},
        )
    return report

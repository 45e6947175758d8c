"""Structured check results shared by every verification routine."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable

from mtc_coset.coset_types import CheckReportDict
from mtc_coset.utils import round_sig

# Violation lists are truncated in reports beyond this many entries.
MAX_LISTED_VIOLATIONS = 20


@dataclass
class CheckReport:
    """Outcome of one named check.

    ``residual`` is the worst numeric deviation when the check is numeric,
    ``None`` for purely combinatorial checks.
    """

    name: str
    passed: bool
    residual: float | None = None
    violations: list[str] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_residual(
        cls,
        name: str,
        residual: float,
        tol: float,
        violations: Iterable[str] = (),
        **details: Any,
    ) -> "CheckReport":
        violations = list(violations)
        return cls(
            name=name,
            passed=residual < tol and not violations,
            residual=float(residual),
            violations=violations,
            details=dict(details),
        )

    @classmethod
    def from_violations(cls, name: str, violations: Iterable[str], **details: Any) -> "CheckReport":
        violations = list(violations)
        return cls(name=name, passed=not violations, violations=violations, details=dict(details))

    def to_dict(self) -> CheckReportDict:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": None if self.residual is None else round_sig(self.residual),
            "violations": self.violations[:MAX_LISTED_VIOLATIONS],
            "violation_count": len(self.violations),
            "details": jsonable(self.details),
        }


@dataclass
class ValidationReport:
    """Per-invariant reports for one ModularData."""

    subject: str
    checks: list[CheckReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[CheckReport]:
        return [c for c in self.checks if not c.passed]

    def get(self, name: str) -> CheckReport:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def jsonable(value: Any) -> Any:
    """Best-effort conversion of report details to JSON-friendly values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [jsonable(v) for v in items]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, complex):
        return [round_sig(value.real), round_sig(value.imag)]
    if isinstance(value, float):
        return round_sig(value) if math.isfinite(value) else None
    if isinstance(value, int):
        return value
    # numpy scalars / arrays
    if hasattr(value, "tolist"):
        return jsonable(value.tolist())
    return str(value)

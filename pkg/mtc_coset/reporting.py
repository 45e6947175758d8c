"""Human and machine readable reports.

One :class:`AnalysisReport` renders both to markdown (console and ``--report``)
and to JSON (``--json``). Residuals are printed as ``{:.3e}`` in markdown and
rounded to 6 significant digits in JSON, so reports are stable across runs.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from mtc_coset.checks import CheckReport, ValidationReport, jsonable
from mtc_coset.coset_types import AnalysisReportDict, SectionDict
from mtc_coset.utils import fmt_residual

logger = logging.getLogger(__name__)

BANNER = "=" * 50


@dataclass
class Section:
    title: str
    checks: list[CheckReport] = field(default_factory=list)
    tables: dict[str, Any] = field(default_factory=dict)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def add(self, *reports: CheckReport) -> None:
        self.checks.extend(reports)

    def to_dict(self) -> SectionDict:
        tables = jsonable(self.tables)
        if self.error is not None:
            tables["error"] = self.error
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "tables": tables,
        }


@dataclass
class AnalysisReport:
    subject: str
    sections: list[Section] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)

    def section(self, title: str) -> Section:
        for s in self.sections:
            if s.title == title:
                return s
        raise KeyError(title)

    def new_section(self, title: str) -> Section:
        s = Section(title=title)
        self.sections.append(s)
        return s

    def checks(self) -> list[CheckReport]:
        return [c for s in self.sections for c in s.checks]

    def to_dict(self) -> AnalysisReportDict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "sections": [s.to_dict() for s in self.sections],
        }


def _status(passed: bool) -> str:
    return "PASS" if passed else "FAIL"


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return "{:.6g}".format(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    return str(value)


def _check_lines(checks: list[CheckReport]) -> list[str]:
    if not checks:
        return []
    lines = ["| check | status | residual | violations |", "|---|---|---|---|"]
    for c in checks:
        lines.append(f"| {c.name} | {_status(c.passed)} | {fmt_residual(c.residual)} | {len(c.violations)} |")
    for c in checks:
        for v in c.violations[:5]:
            lines.append(f"- {c.name}: {v}")
        if len(c.violations) > 5:
            lines.append(f"- {c.name}: ... {len(c.violations) - 5} more")
    return lines


def _table_lines(name: str, value: Any) -> list[str]:
    if isinstance(value, list) and value and all(isinstance(row, dict) for row in value):
        keys = list(value[0])
        lines = [f"**{name}**", "", "| " + " | ".join(keys) + " |", "|" + "---|" * len(keys)]
        for row in value:
            lines.append("| " + " | ".join(_format_value(row.get(k)) for k in keys) + " |")
        return lines + [""]
    if isinstance(value, dict):
        lines = [f"**{name}**", ""]
        for k, v in value.items():
            lines.append(f"- {k}: {_format_value(v)}")
        return lines + [""]
    return [f"- {name}: {_format_value(value)}"]


def render_markdown(report: AnalysisReport) -> str:
    lines = [BANNER, f"COSET ANALYSIS REPORT: {report.subject}", BANNER, ""]
    lines.append(f"Overall: **{_status(report.passed)}**")
    for idx, section in enumerate(report.sections, start=1):
        lines += ["", f"## {idx}. {section.title} ({_status(section.passed)})", ""]
        if section.error is not None:
            lines.append(f"Error: {section.error}")
        lines += _check_lines(section.checks)
        if section.tables:
            lines.append("")
            for name, value in section.tables.items():
                lines += _table_lines(name, value)
    return "\n".join(lines).rstrip() + "\n"


def render_json(report: AnalysisReport | ValidationReport) -> str:
    return json.dumps(report.to_dict(), indent=4, sort_keys=True, ensure_ascii=False) + "\n"


def render_validation(report: ValidationReport) -> str:
    lines = [BANNER, f"VALIDATION REPORT: {report.subject}", BANNER, ""]
    lines += _check_lines(report.checks)
    lines += ["", f"Overall: **{_status(report.passed)}**"]
    return "\n".join(lines) + "\n"


def write_text(text: str, path: str | Path) -> None:
    fp = Path(path)
    fp.parent.mkdir(parents=True, exist_ok=True)
    fp.write_text(text, encoding="utf-8")
    logger.info(f"Report written to {fp}")

"""Typed dict definitions for the JSON file formats and reports."""

from __future__ import annotations

from typing import Any, List, TypedDict, Union

# Complex numbers are stored as [re, im].
ComplexPair = List[float]


class ModularDataFile(TypedDict):
    name: str
    labels: list[str]
    s: list[list[ComplexPair]]
    twists: list[ComplexPair]


class BranchingEntry(TypedDict):
    c1: str
    c2: str
    mult: int


class CosetFile(TypedDict, total=False):
    name: str
    # Inline modular data or a path relative to the coset file.
    c1: Union[ModularDataFile, str]
    c2: Union[ModularDataFile, str]
    ambient: Union[ModularDataFile, str]
    branching: dict[str, list[BranchingEntry]]


class SolutionsFile(TypedDict):
    count: int
    solutions: list[CosetFile]


class CheckReportDict(TypedDict):
    name: str
    passed: bool
    residual: float | None
    violations: list[str]
    violation_count: int
    details: dict[str, Any]


class SectionDict(TypedDict):
    title: str
    passed: bool
    checks: list[CheckReportDict]
    tables: dict[str, Any]


class AnalysisReportDict(TypedDict):
    subject: str
    passed: bool
    sections: list[SectionDict]

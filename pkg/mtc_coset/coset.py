"""Categorical coset systems.

A :class:`CosetSystem` bundles ``C1`` (labels alpha in J), ``C2`` (labels phi
in K), the coset category ``C`` (labels i in I) and the branching matrices
``Z^i`` with ``(i, alpha) = sum_phi Z^i[alpha, phi] phi``. The algebra
``A = sum Z^0[beta, phi] (beta, phi)`` lives in the Deligne product C1 x C2.

The functions below compute the Kac-Wakimoto set, the dimension formulas, field
identification, stabilizers and multiplicity structure, and check every
statement about them that can be decided from modular data. Checks
return :class:`~mtc_coset.checks.CheckReport` records instead of raising.
"""

from __future__ import annotations

import logging
from collections import deque
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterator

import numpy as np

from mtc_coset.checks import CheckReport
from mtc_coset.config import Tolerances, resolve
from mtc_coset.errors import (
    AlgebraError,
    InconsistentSystemError,
    ModuleCategoryError,
    MtcCosetError,
    PreconditionError,
    StructuralError,
)
from mtc_coset.extension import (
    AlgebraObject,
    ModuleFusionSystem,
    build_module_fusion_system,
    commutation_check,
    decompose_module_category,
    fpdim_identities,
    gram_check,
    induce,
    induced_hom,
    is_local_induced,
    is_simple_current_algebra,
    make_algebra,
    ring_homomorphism_check,
)
from mtc_coset.modular_core import (
    ModularData,
    deligne_product,
    dual_permutation,
    fusion_product,
    monodromy_is_trivial,
    quantum_dims,
    verlinde,
)
from mtc_coset.reporting import AnalysisReport, Section
from mtc_coset.spectral import (
    diagonalize,
    spectral_summary,
    verify_E_criterion,
    verify_spectral_identities,
)
from mtc_coset.utils import format_set, pair_index, support

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CosetSystem:
    """The triple (C1, C2, C) with branching ``branching[i, alpha, phi] = Z^i_{alpha phi}``."""

    name: str
    md1: ModularData
    md2: ModularData
    mdc: ModularData
    branching: np.ndarray

    @cached_property
    def ambient(self) -> ModularData:
        return deligne_product(self.md1, self.md2)

    @cached_property
    def algebra(self) -> AlgebraObject:
        return make_algebra(self.ambient, self.branching[0].reshape(-1))

    @cached_property
    def j_sets(self) -> list[list[int]]:
        """``J_i``: labels alpha with ``(i, alpha) != 0``."""
        return [support(self.branching[i].sum(axis=1)) for i in range(self.mdc.rank)]

    @property
    def j1(self) -> list[int]:
        return self.j_sets[0]

    def restriction(self, i: int) -> np.ndarray:
        """``Z^i`` flattened over the ambient labels."""
        return self.branching[i].reshape(-1)

    def pair_label(self, i: int, alpha: int) -> str:
        return f"({self.mdc.labels[i]},{self.md1.labels[alpha]})"


def coset_system(
    md1: ModularData,
    md2: ModularData,
    mdc: ModularData,
    branching: Any,
    name: str | None = None,
) -> CosetSystem:
    """Checked constructor; shape or sign problems raise :class:`StructuralError`."""
    z = np.asarray(branching)
    expected = (mdc.rank, md1.rank, md2.rank)
    if z.shape != expected:
        raise StructuralError(f"branching has shape {z.shape}, expected {expected}")
    if np.any(np.rint(z) != z):
        raise StructuralError("branching entries must be integers")
    z = z.astype(np.int64)
    if np.any(z < 0):
        raise StructuralError("branching entries must be nonnegative")
    z.setflags(write=False)
    return CosetSystem(
        name=name or f"({md1.name} x {md2.name}) / {mdc.name}",
        md1=md1,
        md2=md2,
        mdc=mdc,
        branching=z,
    )


# ---------------------------------------------------------------------------
# Standing assumptions
# ---------------------------------------------------------------------------


def check_assumptions(cs: CosetSystem, tol: Tolerances | None = None) -> list[CheckReport]:
    """Unit structure of Z^0, algebra twist triviality, simplicity of induced modules,
    dimension match and twist compatibility."""
    tol = resolve(tol)
    z = cs.branching
    reports = []

    violations = []
    unit_row = np.zeros(cs.md2.rank, dtype=np.int64)
    unit_row[0] = 1
    unit_col = np.zeros(cs.md1.rank, dtype=np.int64)
    unit_col[0] = 1
    if not np.array_equal(z[0, 0], unit_row):
        violations.append("Z^0 row of the unit is not the unit indicator")
    if not np.array_equal(z[0, :, 0], unit_col):
        violations.append("Z^0 column of the unit is not the unit indicator")
    reports.append(CheckReport.from_violations("commutant_structure", violations))

    try:
        algebra = cs.algebra
        reports.append(CheckReport.from_violations("algebra_twist_trivial", []))
    except AlgebraError as e:
        reports.append(CheckReport.from_violations("algebra_twist_trivial", [str(e)]))
        return reports

    n2 = cs.md2.rank
    violations = []
    for alpha in range(cs.md1.rank):
        x = pair_index(alpha, 0, n2)
        if induced_hom(algebra, x, x, tol) != 1:
            violations.append(f"a_({cs.md1.labels[alpha]},1) is not simple")
    for phi in range(n2):
        x = pair_index(0, phi, n2)
        if induced_hom(algebra, x, x, tol) != 1:
            violations.append(f"a_(1,{cs.md2.labels[phi]}) is not simple")
    reports.append(CheckReport.from_violations("induced_simplicity", violations))

    d1, big_d1 = quantum_dims(cs.md1)
    d2, big_d2 = quantum_dims(cs.md2)
    dc, big_dc = quantum_dims(cs.mdc)
    ratio = big_d1 * big_d2 / big_dc
    restricted = np.einsum("iaf,a,f->i", z, d1, d2)
    residual = float(np.max(np.abs(restricted - ratio * dc)))
    reports.append(
        CheckReport.from_residual(
            "dimension_match", residual, tol.num * max(1.0, ratio), algebra_dim=ratio
        )
    )

    violations = []
    for i, alpha, phi in np.argwhere(z > 0):
        expected = cs.md1.twists[alpha] * cs.md2.twists[phi]
        if abs(cs.mdc.twists[i] - expected) >= tol.num:
            violations.append(
                f"theta_{cs.mdc.labels[i]} != theta_{cs.md1.labels[alpha]} theta_{cs.md2.labels[phi]}"
            )
    reports.append(CheckReport.from_violations("twist_compatibility", violations))
    return reports


def s_covariance_check(cs: CosetSystem, tol: Tolerances | None = None) -> CheckReport:
    """``s2 Z^i_alpha = sum_{j,beta} conj(s1_{alpha beta}) s_ij Z^j_beta`` and surjectivity."""
    tol = resolve(tol)
    z = cs.branching.astype(complex)
    lhs = np.einsum("iaf,pf->iap", z, cs.md2.s)
    rhs = np.einsum("ab,ij,jbp->iap", np.conj(cs.md1.s), cs.mdc.s, z)
    residual = float(np.max(np.abs(lhs - rhs)))
    missing = [cs.md2.labels[p] for p in range(cs.md2.rank) if not np.any(cs.branching[:, :, p])]
    violations = [f"{label} appears in no (i,alpha)" for label in missing]
    report = CheckReport.from_residual("s_covariance", residual, tol.num, violations)
    logger.debug("Covariance residual of %s: %.3e", cs.name, residual)
    return report


def mirror_extension_check(cs: CosetSystem, tol: Tolerances | None = None) -> CheckReport:
    """(1, alpha) is simple, distinct, of dimension d_alpha; J1 closed; fusion carried over."""
    tol = resolve(tol)
    z0 = cs.branching[0]
    d1, _ = quantum_dims(cs.md1)
    d2, _ = quantum_dims(cs.md2)
    n1 = verlinde(cs.md1, tol).n
    n2 = verlinde(cs.md2, tol).n
    violations = []
    image: dict[int, int] = {}
    for alpha in cs.j1:
        row = z0[alpha]
        if row.sum() != 1:
            violations.append(f"(1,{cs.md1.labels[alpha]}) is not simple")
            continue
        phi = int(np.argmax(row))
        if phi in image.values():
            violations.append(f"(1,{cs.md1.labels[alpha]}) repeats {cs.md2.labels[phi]}")
        image[alpha] = phi
        if abs(d1[alpha] - d2[phi]) >= tol.num:
            violations.append(f"d_{cs.md1.labels[alpha]} != d_{cs.md2.labels[phi]}")
    j1 = set(cs.j1)
    for a in cs.j1:
        for b in cs.j1:
            outside = [g for g in np.flatnonzero(n1[a, b]) if g not in j1]
            if outside:
                violations.append(f"{cs.md1.labels[a]} x {cs.md1.labels[b]} leaves J1")
            elif a in image and b in image and all(g in image for g in np.flatnonzero(n1[a, b])):
                expected = np.zeros(cs.md2.rank, dtype=np.int64)
                for g in np.flatnonzero(n1[a, b]):
                    expected[image[int(g)]] += n1[a, b, g]
                if not np.array_equal(n2[image[a], image[b]], expected):
                    violations.append(
                        f"fusion of (1,{cs.md1.labels[a]}) and (1,{cs.md1.labels[b]}) not mirrored"
                    )
    return CheckReport.from_violations(
        "mirror_extension",
        violations,
        mirror={cs.md1.labels[a]: cs.md2.labels[p] for a, p in image.items()},
    )


# ---------------------------------------------------------------------------
# Kac-Wakimoto set
# ---------------------------------------------------------------------------


@dataclass
class KWCriteria:
    """Per-label outcome of the three KW membership tests."""

    twist: dict[int, bool] = field(default_factory=dict)
    monodromy: dict[int, bool] = field(default_factory=dict)
    induced_local: dict[int, bool] = field(default_factory=dict)

    def disagreements(self) -> list[int]:
        return [a for a in self.twist if self.twist[a] != self.monodromy[a]]


def kw_criteria(cs: CosetSystem, tol: Tolerances | None = None) -> KWCriteria:
    tol = resolve(tol)
    md1 = cs.md1
    n1 = verlinde(md1, tol).n
    theta = md1.twists
    out = KWCriteria()
    for alpha in range(md1.rank):
        out.twist[alpha] = all(
            abs(theta[g] - theta[alpha] * theta[b]) < tol.num
            for b in cs.j1
            for g in np.flatnonzero(n1[b, alpha])
        )
        out.monodromy[alpha] = all(monodromy_is_trivial(md1, alpha, b, tol) for b in cs.j1)
        out.induced_local[alpha] = is_local_induced(
            cs.algebra, pair_index(alpha, 0, cs.md2.rank), tol
        )
    return out


def kw_set(cs: CosetSystem, tol: Tolerances | None = None) -> list[int]:
    """Labels alpha with ``a_{alpha x 1}`` local, by the twist and monodromy criteria.

    Raises:
        InconsistentSystemError: the two criteria disagree.
    """
    criteria = kw_criteria(cs, tol)
    bad = criteria.disagreements()
    if bad:
        raise InconsistentSystemError(
            f"KW criteria disagree at {[cs.md1.labels[a] for a in bad]}"
        )
    kw = [a for a, ok in criteria.twist.items() if ok]
    logger.info("KW set of %s: %s", cs.name, format_set(cs.md1.labels[a] for a in kw))
    return kw


def identify_induced(cs: CosetSystem, beta: int, tol: Tolerances | None = None) -> int:
    """The coset label i with ``M^i = a_{beta x 1}``, matched by exact restriction."""
    tol = resolve(tol)
    if not is_local_induced(cs.algebra, pair_index(beta, 0, cs.md2.rank), tol):
        raise PreconditionError(f"{cs.md1.labels[beta]} is not in the KW set")
    vec = induce(cs.algebra, pair_index(beta, 0, cs.md2.rank), tol).mult
    hits = [i for i in range(cs.mdc.rank) if np.array_equal(cs.restriction(i), vec)]
    if len(hits) != 1:
        raise InconsistentSystemError(
            f"a_({cs.md1.labels[beta]},1) matches {len(hits)} coset labels, expected exactly one"
        )
    return hits[0]


def kw_map(cs: CosetSystem, tol: Tolerances | None = None) -> dict[int, int]:
    """``beta -> i(beta)`` over the KW set."""
    return {beta: identify_induced(cs, beta, tol) for beta in kw_set(cs, tol)}


def kw_closure_check(cs: CosetSystem, tol: Tolerances | None = None) -> CheckReport:
    """KW is closed under duals and fusion, ``Z^{i(alpha)}_{alpha,0} = 1``, and
    ``beta -> i(beta)`` is injective."""
    tol = resolve(tol)
    kw = kw_set(cs, tol)
    kws = set(kw)
    dual = dual_permutation(cs.md1, tol)
    n1 = verlinde(cs.md1, tol).n
    labels = cs.md1.labels
    violations = []
    for a in kw:
        if int(dual[a]) not in kws:
            violations.append(f"dual of {labels[a]} not in KW")
        for b in kw:
            outside = [labels[g] for g in np.flatnonzero(n1[a, b]) if g not in kws]
            if outside:
                violations.append(f"{labels[a]} x {labels[b]} contains {outside} outside KW")
    mapping: dict[int, int] = {}
    for beta in kw:
        try:
            mapping[beta] = identify_induced(cs, beta, tol)
        except (InconsistentSystemError, PreconditionError) as e:
            violations.append(str(e))
    for beta, i in mapping.items():
        if cs.branching[i, beta, 0] != 1:
            violations.append(f"Z^{cs.mdc.labels[i]}_({labels[beta]},1) != 1")
    if len(set(mapping.values())) != len(mapping):
        violations.append("identification of induced modules is not injective")
    return CheckReport.from_violations(
        "kw_closure",
        violations,
        kw=[labels[a] for a in kw],
        identification={labels[b]: cs.mdc.labels[i] for b, i in mapping.items()},
    )


# ---------------------------------------------------------------------------
# Dimension formulas
# ---------------------------------------------------------------------------


def b_coeff(
    cs: CosetSystem,
    i: int,
    alpha: int,
    tol: Tolerances | None = None,
    *,
    mapping: dict[int, int] | None = None,
) -> complex:
    """``b(i, alpha) = sum_{beta in KW} conj(s1_{alpha beta}) s_{i, i(beta)}``."""
    mapping = kw_map(cs, tol) if mapping is None else mapping
    return complex(
        sum(np.conj(cs.md1.s[alpha, beta]) * cs.mdc.s[i, j] for beta, j in mapping.items())
    )


def c_coefficients(cs: CosetSystem) -> np.ndarray:
    """``c_i = sum_{J1} d^2 / sum_{J_i} d^2``."""
    d1, _ = quantum_dims(cs.md1)
    top = float(np.sum(d1[cs.j1] ** 2))
    return np.array([top / float(np.sum(d1[js] ** 2)) if js else np.nan for js in cs.j_sets])


def check_dim_formulas(
    cs: CosetSystem, tol: Tolerances | None = None
) -> tuple[CheckReport, np.ndarray]:
    """Three expressions for ``dim (i, alpha)`` and the coefficients ``c_i``.

    For alpha in J_i: the branching sum ``sum_phi Z d2_phi``, ``b(i,alpha)/b(0,0)``
    and ``c_i d_i d_alpha`` must agree; ``b`` must be real positive,
    ``b(0,0) = s2_00`` and ``c_i <= 1``.
    """
    tol = resolve(tol)
    mapping = kw_map(cs, tol)
    d1, _ = quantum_dims(cs.md1)
    d2, _ = quantum_dims(cs.md2)
    dc, _ = quantum_dims(cs.mdc)
    c = c_coefficients(cs)
    b00 = b_coeff(cs, 0, 0, tol, mapping=mapping)
    violations = []
    residual = abs(b00 - cs.md2.s[0, 0])
    rows = []
    for i, js in enumerate(cs.j_sets):
        if c[i] > 1 + tol.num:
            violations.append(f"c_{cs.mdc.labels[i]} = {c[i]:.6g} > 1")
        for alpha in js:
            b = b_coeff(cs, i, alpha, tol, mapping=mapping)
            if abs(b.imag) >= tol.num or b.real <= tol.num:
                violations.append(f"b{cs.pair_label(i, alpha)} = {b:.6g} is not positive")
            zsum = float(cs.branching[i, alpha] @ d2)
            via_b = (b / b00).real
            via_c = float(c[i] * dc[i] * d1[alpha])
            worst = max(abs(zsum - via_b), abs(zsum - via_c), abs(via_b - via_c))
            residual = max(residual, worst)
            rows.append(
                {"pair": cs.pair_label(i, alpha), "dim": zsum, "b_ratio": via_b, "c_formula": via_c}
            )
    report = CheckReport.from_residual(
        "dimension_formulas",
        float(residual),
        tol.num,
        violations,
        b00=b00.real,
        c={cs.mdc.labels[i]: float(c[i]) for i in range(cs.mdc.rank)},
        rows=rows,
    )
    return report, c


@dataclass
class GroupDiagnostics:
    """The four equivalent conditions for KW to be a group."""

    kw_invertible: bool
    dims_multiplicative: bool
    c_all_one: bool
    conjugates_in_j1: bool

    @property
    def values(self) -> tuple[bool, bool, bool, bool]:
        return (self.kw_invertible, self.dims_multiplicative, self.c_all_one, self.conjugates_in_j1)

    @property
    def agree(self) -> bool:
        return len(set(self.values)) == 1

    @property
    def is_group(self) -> bool:
        return self.kw_invertible

    def report(self) -> CheckReport:
        violations = [] if self.agree else [f"conditions disagree: {self.values}"]
        return CheckReport.from_violations(
            "kw_group_equivalence",
            violations,
            kw_invertible=self.kw_invertible,
            dims_multiplicative=self.dims_multiplicative,
            c_all_one=self.c_all_one,
            conjugates_in_j1=self.conjugates_in_j1,
        )


def kw_group_diagnostics(cs: CosetSystem, tol: Tolerances | None = None) -> GroupDiagnostics:
    """Evaluate each condition independently."""
    tol = resolve(tol)
    kw = kw_set(cs, tol)
    d1, _ = quantum_dims(cs.md1)
    d2, _ = quantum_dims(cs.md2)
    dc, _ = quantum_dims(cs.mdc)
    n1 = verlinde(cs.md1, tol).n
    dual = dual_permutation(cs.md1, tol)
    c = c_coefficients(cs)
    invertible = all(abs(d1[b] - 1) < tol.num for b in kw)
    multiplicative = all(
        abs(float(cs.branching[i, a] @ d2) - dc[i] * d1[a]) < tol.num
        for i, js in enumerate(cs.j_sets)
        for a in js
    )
    c_one = bool(np.all(np.abs(c - 1) < tol.num))
    j1 = set(cs.j1)
    conjugates = all(
        set(int(g) for g in np.flatnonzero(n1[dual[a], a])) <= j1 for a in range(cs.md1.rank)
    )
    diag = GroupDiagnostics(invertible, multiplicative, c_one, conjugates)
    logger.info("KW group diagnostics for %s: %s", cs.name, diag.values)
    return diag


# ---------------------------------------------------------------------------
# Kac-Wakimoto hypothesis
# ---------------------------------------------------------------------------


@dataclass
class KWHypothesisResult:
    min_real: float
    max_imag: float
    triples: int
    products: dict[tuple[int, int, int], complex]

    def report(self, tol: Tolerances | None = None) -> CheckReport:
        tol = resolve(tol)
        violations = []
        if self.max_imag >= tol.num:
            violations.append(f"max |Im| = {self.max_imag:.3e}")
        if self.min_real <= -tol.num:
            violations.append(f"min Re = {self.min_real:.3e}")
        return CheckReport.from_violations(
            "kw_hypothesis",
            violations,
            min_real=self.min_real,
            max_imag=self.max_imag,
            triples=self.triples,
        )


def kw_hypothesis(cs: CosetSystem, tol: Tolerances | None = None) -> KWHypothesisResult:
    """Extremes of ``s_{i, i(beta)} conj(s1_{alpha beta})`` over i, alpha in J_i, beta in KW."""
    mapping = kw_map(cs, tol)
    products: dict[tuple[int, int, int], complex] = {}
    for i, js in enumerate(cs.j_sets):
        for alpha in js:
            for beta, j in mapping.items():
                products[(i, alpha, beta)] = complex(cs.mdc.s[i, j] * np.conj(cs.md1.s[alpha, beta]))
    values = list(products.values())
    return KWHypothesisResult(
        min_real=min(v.real for v in values) if values else 0.0,
        max_imag=max(abs(v.imag) for v in values) if values else 0.0,
        triples=len(values),
        products=products,
    )


def kw_sign_check(cs: CosetSystem, tol: Tolerances | None = None) -> CheckReport:
    """When KW is a group every product is real and strictly positive."""
    tol = resolve(tol)
    diag = kw_group_diagnostics(cs, tol)
    if not diag.is_group:
        return CheckReport.from_violations("kw_sign", [], skipped="KW is not a group")
    result = kw_hypothesis(cs, tol)
    violations = [
        f"{cs.pair_label(i, a)}, beta={cs.md1.labels[b]}: {v:.6g}"
        for (i, a, b), v in result.products.items()
        if abs(v.imag) >= tol.num or v.real <= tol.num
    ]
    return CheckReport.from_violations("kw_sign", violations, triples=result.triples)


# ---------------------------------------------------------------------------
# Field identification and stabilizers
# ---------------------------------------------------------------------------


@dataclass
class FieldIdentification:
    orbits: list[list[int]]
    supports: list[set[int]]
    report: CheckReport


def field_identification(cs: CosetSystem, tol: Tolerances | None = None) -> FieldIdentification:
    """Orbits of I under ``i -> M^i (x)_A a_{beta x 1}`` and their C2-supports."""
    tol = resolve(tol)
    mapping = kw_map(cs, tol)
    nc = verlinde(cs.mdc, tol).n
    seen: set[int] = set()
    orbits: list[list[int]] = []
    for start in range(cs.mdc.rank):
        if start in seen:
            continue
        orbit = {start}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in mapping.values():
                for k in np.flatnonzero(nc[j, i]):
                    if int(k) not in orbit:
                        orbit.add(int(k))
                        queue.append(int(k))
        seen |= orbit
        orbits.append(sorted(orbit))

    def c2_support(i: int) -> set[int]:
        return set(support(cs.branching[i].sum(axis=0)))

    supports = []
    violations = []
    for orbit in orbits:
        sets = [c2_support(i) for i in orbit]
        if any(s != sets[0] for s in sets):
            violations.append(
                f"supports differ inside orbit {format_set(cs.mdc.labels[i] for i in orbit)}"
            )
        supports.append(sets[0])
    for a in range(len(orbits)):
        for b in range(a + 1, len(orbits)):
            common = supports[a] & supports[b]
            if common:
                violations.append(
                    f"orbits {a} and {b} share {format_set(cs.md2.labels[p] for p in sorted(common))}"
                )
    report = CheckReport.from_violations(
        "field_identification",
        violations,
        orbits=[[cs.mdc.labels[i] for i in o] for o in orbits],
        supports=[[cs.md2.labels[p] for p in sorted(s)] for s in supports],
    )
    logger.info("Field identification of %s: %d orbits", cs.name, len(orbits))
    return FieldIdentification(orbits=orbits, supports=supports, report=report)


def _require_group(cs: CosetSystem, tol: Tolerances) -> dict[int, int]:
    if not kw_group_diagnostics(cs, tol).is_group:
        raise PreconditionError(f"KW set of {cs.name} is not a group")
    return kw_map(cs, tol)


def _act(n: np.ndarray, beta: int, x: int) -> int:
    """Fusion with a simple current: the unique label in ``beta x x``."""
    return int(np.argmax(n[beta, x]))


def stabilizers(
    cs: CosetSystem, i: int, alpha: int, tol: Tolerances | None = None
) -> tuple[list[int], list[int]]:
    """``G^i`` and ``G^(i,alpha)`` as lists of KW labels.

    Raises:
        PreconditionError: KW is not a group.
    """
    tol = resolve(tol)
    mapping = _require_group(cs, tol)
    nc = verlinde(cs.mdc, tol).n
    n1 = verlinde(cs.md1, tol).n
    g_i = [beta for beta, j in mapping.items() if nc[j, i, i] == 1]
    g_ia = [beta for beta in g_i if n1[beta, alpha, alpha] == 1]
    return g_i, g_ia


def _is_subgroup(n: np.ndarray, elements: list[int]) -> bool:
    s = set(elements)
    return 0 in s and all(_act(n, a, b) in s for a in s for b in s)


def _is_cyclic(n: np.ndarray, elements: list[int]) -> bool:
    size = len(elements)
    for g in elements:
        x, order = g, 1
        while x != 0 and order <= size:
            x = _act(n, g, x)
            order += 1
        if order == size:
            return True
    return size == 1


def stabilizer_check(cs: CosetSystem, tol: Tolerances | None = None) -> CheckReport:
    """Both stabilizers are subgroups and ``G^(i,alpha)`` lies in J1."""
    tol = resolve(tol)
    n1 = verlinde(cs.md1, tol).n
    j1 = set(cs.j1)
    violations = []
    table = {}
    for i, js in enumerate(cs.j_sets):
        for alpha in js:
            g_i, g_ia = stabilizers(cs, i, alpha, tol)
            key = cs.pair_label(i, alpha)
            table[key] = {
                "G_i": [cs.md1.labels[b] for b in g_i],
                "G_i_alpha": [cs.md1.labels[b] for b in g_ia],
            }
            if not _is_subgroup(n1, g_i) or not _is_subgroup(n1, g_ia):
                violations.append(f"stabilizers of {key} are not subgroups")
            outside = [cs.md1.labels[b] for b in g_ia if b not in j1]
            if outside:
                violations.append(f"G^{key} contains {outside} outside J1")
    return CheckReport.from_violations("stabilizers", violations, table=table)


def multiplicity_structure(
    cs: CosetSystem, i: int, alpha: int, tol: Tolerances | None = None
) -> CheckReport:
    """Inner product, G^i-orbit and summand-dimension predicates for (i, alpha).

    Also checks the multiplicity-free decomposition when ``G^(i,alpha)`` is
    cyclic.
    """
    tol = resolve(tol)
    if alpha not in cs.j_sets[i]:
        raise PreconditionError(f"{cs.pair_label(i, alpha)} is zero")
    g_i, g_ia = stabilizers(cs, i, alpha, tol)
    n1 = verlinde(cs.md1, tol).n
    d1, _ = quantum_dims(cs.md1)
    d2, _ = quantum_dims(cs.md2)
    dc, _ = quantum_dims(cs.mdc)
    z = cs.branching[i]
    row = z[alpha]
    inner = int(row @ row)
    order = len(g_ia)
    violations = []
    if inner != order:
        violations.append(f"<(i,a),(i,a)> = {inner} but o(G^(i,a)) = {order}")

    orbit = {_act(n1, b, alpha) for b in g_i}
    for gamma in cs.j_sets[i]:
        same = np.array_equal(z[gamma], row)
        if (gamma in orbit) != same:
            violations.append(
                f"{cs.pair_label(i, gamma)} isomorphic={same} but same orbit={gamma in orbit}"
            )
        if gamma not in orbit and int(z[gamma] @ row) != 0:
            violations.append(f"{cs.pair_label(i, gamma)} overlaps {cs.pair_label(i, alpha)}")

    summand_dims = sorted({round(float(d2[p]), 9) for p in support(row)})
    if len(summand_dims) > 1:
        violations.append(f"summands have different dimensions {summand_dims}")

    cyclic = _is_cyclic(n1, g_ia)
    if cyclic:
        if np.any(row > 1):
            violations.append("cyclic stabilizer but a multiplicity exceeds 1")
        if len(support(row)) != order:
            violations.append(f"cyclic stabilizer of order {order} but {len(support(row))} summands")
        expected = dc[i] * d1[alpha] / order
        for p in support(row):
            if abs(d2[p] - expected) >= tol.num:
                violations.append(f"summand {cs.md2.labels[p]} has dimension {d2[p]:.6g} != {expected:.6g}")
    return CheckReport.from_violations(
        f"multiplicity{cs.pair_label(i, alpha)}",
        violations,
        inner_product=inner,
        stabilizer_order=order,
        stabilizer=[cs.md1.labels[b] for b in g_ia],
        g_i_orbit=[cs.md1.labels[a] for a in sorted(orbit)],
        cyclic=cyclic,
        simple=inner == 1,
    )


def pairing_bound_check(cs: CosetSystem, tol: Tolerances | None = None) -> CheckReport:
    """``<(i,a),(j,g)> <= sum_{e in KW} N1_{a' g}^e Nc_{i' j}^{k(e)}`` with equality when
    KW is a group; also counts simple ``(i, alpha)``.

    The sum is written with ``N1_{a' g}^e``; it agrees with the form using ``N1_{a g'}^e``
    since KW is closed under duals and ``k`` commutes with taking duals.
    """
    tol = resolve(tol)
    mapping = kw_map(cs, tol)
    group = kw_group_diagnostics(cs, tol).is_group
    n1 = verlinde(cs.md1, tol).n
    nc = verlinde(cs.mdc, tol).n
    dual1 = dual_permutation(cs.md1, tol)
    dualc = dual_permutation(cs.mdc, tol)
    z = cs.branching
    pairs = [(i, a) for i, js in enumerate(cs.j_sets) for a in js]
    violations = []
    simple = 0
    for i, a in pairs:
        if int(z[i, a] @ z[i, a]) == 1:
            simple += 1
        for j, g in pairs:
            lhs = int(z[i, a] @ z[j, g])
            rhs = sum(
                int(n1[dual1[a], g, e]) * int(nc[dualc[i], j, k]) for e, k in mapping.items()
            )
            if lhs > rhs or (group and lhs != rhs):
                violations.append(f"<{cs.pair_label(i, a)},{cs.pair_label(j, g)}> = {lhs}, bound {rhs}")
    return CheckReport.from_violations(
        "pairing_bound", violations, pairs=len(pairs), simple_pairs=simple, equality_required=group
    )


def mixed_branching_check(cs: CosetSystem, tol: Tolerances | None = None) -> CheckReport:
    """``(1,beta) (i,alpha) = sum_gamma N1_{beta alpha}^gamma (i,gamma)`` in K(C2), and
    closure of J_i under J1."""
    tol = resolve(tol)
    n1 = verlinde(cs.md1, tol).n
    n2 = verlinde(cs.md2, tol)
    z = cs.branching
    worst = 0
    violations = []
    for beta in cs.j1:
        for i, js in enumerate(cs.j_sets):
            jset = set(js)
            for alpha in js:
                lhs = fusion_product(n2, z[0, beta], z[i, alpha])
                rhs = n1[beta, alpha] @ z[i]
                dev = int(np.max(np.abs(lhs - rhs)))
                if dev:
                    worst = max(worst, dev)
                    violations.append(f"(1,{cs.md1.labels[beta]}) x {cs.pair_label(i, alpha)}")
                outside = [g for g in np.flatnonzero(n1[beta, alpha]) if g not in jset]
                if outside:
                    violations.append(
                        f"{cs.md1.labels[beta]} x {cs.md1.labels[alpha]} leaves J_{cs.mdc.labels[i]}"
                    )
    return CheckReport(
        name="mixed_branching",
        passed=not violations,
        residual=float(worst),
        violations=violations,
    )


# ---------------------------------------------------------------------------
# Module category of the coset algebra
# ---------------------------------------------------------------------------


def module_fusion_system(cs: CosetSystem, tol: Tolerances | None = None) -> ModuleFusionSystem:
    """Simple A-modules of the coset algebra, with local simples matched to I."""
    basis = decompose_module_category(cs.algebra, tol)
    restrictions = np.array([cs.restriction(i) for i in range(cs.mdc.rank)])
    return build_module_fusion_system(basis, cs.mdc, restrictions, tol)


# ---------------------------------------------------------------------------
# Full analysis
# ---------------------------------------------------------------------------


@contextmanager
def _guarded(section: Section) -> Iterator[Section]:
    """Record an exception raised inside a section instead of aborting the report."""
    try:
        yield section
    except MtcCosetError as e:
        logger.warning("Section '%s' failed: %s", section.title, e)
        section.error = f"{type(e).__name__}: {e}"


def _spectral_section(cs: CosetSystem, section: Section, tol: Tolerances) -> None:
    try:
        system = module_fusion_system(cs, tol)
    except ModuleCategoryError as e:
        if is_simple_current_algebra(cs.algebra, tol):
            raise
        section.tables["skipped"] = f"module category not constructible: {e}"
        logger.info("Spectral verification of %s skipped: %s", cs.name, e)
        return
    basis = system.basis
    section.add(
        fpdim_identities(basis, tol),
        gram_check(basis),
        commutation_check(system),
        ring_homomorphism_check(system, tol),
    )
    sd = diagonalize(system, cs.mdc, cs.ambient, tol)
    section.add(verify_E_criterion(sd), verify_spectral_identities(sd, tol))
    summary = spectral_summary(sd, tol)
    section.tables["module_simples"] = [
        {"simple": basis.label(k), "dim": float(s.dim), "local": s.local}
        for k, s in enumerate(basis.simples)
    ]
    section.tables["summary"] = {
        "dimension": summary["dimension"],
        "local_simples": summary["local_simples"],
        "max_multiplicity": summary["max_multiplicity"],
        "worst_residual": summary["worst_residual"],
    }
    section.tables["eigenvectors"] = summary["eigenvectors"]


def analyze(cs: CosetSystem, tol: Tolerances | None = None) -> AnalysisReport:
    """Run every check on ``cs`` and collect the results into one report.

    Sections follow the logical order: standing assumptions, the mirror
    extension, the KW set, group diagnostics, dimension formulas, field
    identification, stabilizers, pairing bounds, mixed branching, the KW
    hypothesis and the spectral verification of the module category.
    A section that cannot be computed records the error and the report fails.
    """
    tol = resolve(tol)
    report = AnalysisReport(subject=cs.name)
    logger.info("Analyzing %s", cs.name)

    with _guarded(report.new_section("Standing assumptions")) as sec:
        sec.add(*check_assumptions(cs, tol))
        sec.add(s_covariance_check(cs, tol))
        sec.tables["ranks"] = {"C1": cs.md1.rank, "C2": cs.md2.rank, "C": cs.mdc.rank}

    with _guarded(report.new_section("Mirror extension")) as sec:
        sec.add(mirror_extension_check(cs, tol))
        sec.tables["J1"] = [cs.md1.labels[a] for a in cs.j1]

    group = False
    with _guarded(report.new_section("Kac-Wakimoto set")) as sec:
        criteria = kw_criteria(cs, tol)
        disagree = [
            f"{cs.md1.labels[a]}: twist={criteria.twist[a]}, monodromy={criteria.monodromy[a]}, "
            f"induced_local={criteria.induced_local[a]}"
            for a in criteria.twist
            if not criteria.twist[a] == criteria.monodromy[a] == criteria.induced_local[a]
        ]
        sec.add(CheckReport.from_violations("kw_criteria_agreement", disagree))
        sec.tables["criteria"] = [
            {
                "label": cs.md1.labels[a],
                "twist": criteria.twist[a],
                "monodromy": criteria.monodromy[a],
                "induced_local": criteria.induced_local[a],
            }
            for a in criteria.twist
        ]
        sec.add(kw_closure_check(cs, tol))
        sec.tables["KW"] = [cs.md1.labels[a] for a in kw_set(cs, tol)]

    with _guarded(report.new_section("Group diagnostics")) as sec:
        diag = kw_group_diagnostics(cs, tol)
        group = diag.is_group
        sec.add(diag.report())

    with _guarded(report.new_section("Dimension formulas")) as sec:
        dim_report, c = check_dim_formulas(cs, tol)
        sec.add(dim_report)
        sec.tables["c"] = {cs.mdc.labels[i]: float(v) for i, v in enumerate(c)}

    with _guarded(report.new_section("Field identification")) as sec:
        fi = field_identification(cs, tol)
        sec.add(fi.report)
        sec.tables["orbits"] = [
            {
                "orbit": [cs.mdc.labels[i] for i in orbit],
                "support": [cs.md2.labels[p] for p in sorted(supp)],
            }
            for orbit, supp in zip(fi.orbits, fi.supports)
        ]

    with _guarded(report.new_section("Stabilizers and multiplicities")) as sec:
        if group:
            sec.add(stabilizer_check(cs, tol))
            for i, js in enumerate(cs.j_sets):
                for alpha in js:
                    sec.add(multiplicity_structure(cs, i, alpha, tol))
        else:
            sec.tables["skipped"] = "KW is not a group"

    with _guarded(report.new_section("Pairing bound")) as sec:
        sec.add(pairing_bound_check(cs, tol))

    with _guarded(report.new_section("Mixed branching")) as sec:
        sec.add(mixed_branching_check(cs, tol))

    with _guarded(report.new_section("Kac-Wakimoto hypothesis")) as sec:
        result = kw_hypothesis(cs, tol)
        sec.add(result.report(tol), kw_sign_check(cs, tol))
        sec.tables["extremes"] = {
            "min_real": result.min_real,
            "max_imag": result.max_imag,
            "triples": result.triples,
        }

    with _guarded(report.new_section("Spectral verification")) as sec:
        _spectral_section(cs, sec, tol)

    logger.info("Analysis of %s finished: %s", cs.name, "PASS" if report.passed else "FAIL")
    return report


def spectral_verification(cs: CosetSystem, tol: Tolerances | None = None) -> AnalysisReport:
    """Only the spectral section of :func:`analyze`."""
    tol = resolve(tol)
    report = AnalysisReport(subject=cs.name)
    with _guarded(report.new_section("Spectral verification")) as sec:
        _spectral_section(cs, sec, tol)
    return report

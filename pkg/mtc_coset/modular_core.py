"""Modular data: validation, Verlinde fusion, dimensions, duality, products.

A :class:`ModularData` is the numerical skeleton of a pseudo-unitary modular
tensor category: ordered labels (index 0 is the unit), the normalized S-matrix
and one twist per label. Every other module of the package consumes the
derived quantities computed here.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence, TypeVar

import numpy as np

from mtc_coset.checks import CheckReport, ValidationReport
from mtc_coset.config import Tolerances, resolve
from mtc_coset.errors import NotModularDataError, StructuralError
from mtc_coset.utils import pair_label

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True, eq=False)
class ModularData:
    """Labels, normalized S-matrix and twists of a modular category.

    Labels are compared by index; strings are for display only.
    """

    name: str
    labels: tuple[str, ...]
    s: np.ndarray
    twists: np.ndarray
    _cache: dict[str, Any] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        labels = tuple(str(x) for x in self.labels)
        s = np.array(self.s, dtype=complex)
        twists = np.array(self.twists, dtype=complex).reshape(-1)
        if s.ndim != 2 or s.shape[0] != s.shape[1]:
            raise StructuralError(f"{self.name}: S-matrix must be square, got shape {s.shape}")
        if s.shape[0] != len(labels):
            raise StructuralError(
                f"{self.name}: S-matrix has size {s.shape[0]} but {len(labels)} labels were given"
            )
        if twists.shape[0] != len(labels):
            raise StructuralError(
                f"{self.name}: {twists.shape[0]} twists given for {len(labels)} labels"
            )
        if len(set(labels)) != len(labels):
            raise StructuralError(f"{self.name}: duplicate labels {labels}")
        if not labels:
            raise StructuralError(f"{self.name}: at least the unit label is required")
        s.setflags(write=False)
        twists.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "twists", twists)

    @classmethod
    def from_weights(
        cls, name: str, labels: Sequence[str], s: Any, weights: Sequence[float]
    ) -> "ModularData":
        """Build data from conformal weights, with twists ``exp(2 pi i h)``."""
        twists = np.exp(2j * np.pi * np.asarray(weights, dtype=float))
        return cls(name=name, labels=tuple(labels), s=np.asarray(s), twists=twists)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label: str | int) -> int:
        """Index of a label given as string or integer index."""
        if isinstance(label, (int, np.integer)):
            if not 0 <= int(label) < self.rank:
                raise StructuralError(f"{self.name}: label index {label} out of range")
            return int(label)
        try:
            return self.labels.index(label)
        except ValueError as e:
            raise StructuralError(f"{self.name}: unknown label {label!r}") from e

    def cached(self, key: str, compute: Callable[[], T]) -> T:
        """Memoize a derived quantity on this (immutable) instance."""
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]  # type: ignore[no-any-return]

    def __repr__(self) -> str:
        return f"ModularData(name={self.name!r}, rank={self.rank})"


@dataclass(frozen=True, eq=False)
class FusionTensor:
    """Integer structure constants ``n[a, b, c] = N_ab^c``."""

    n: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.n.shape[0])

    def matrix(self, a: int) -> np.ndarray:
        """Fusion matrix of ``a``: entry ``[b, c] = N_ab^c``."""
        return self.n[a]

    def coefficient(self, a: int, b: int, c: int) -> int:
        return int(self.n[a, b, c])


@dataclass(frozen=True, eq=False)
class ObjectVector:
    """An element of the Grothendieck group with nonnegative multiplicities."""

    base: ModularData
    mult: np.ndarray

    def __post_init__(self) -> None:
        mult = np.asarray(self.mult, dtype=np.int64).reshape(-1)
        if mult.shape[0] != self.base.rank:
            raise StructuralError(
                f"vector of length {mult.shape[0]} over {self.base.name} of rank {self.base.rank}"
            )
        if np.any(mult < 0):
            raise StructuralError(f"negative multiplicity in {mult.tolist()}")
        object.__setattr__(self, "mult", mult)

    @property
    def is_zero(self) -> bool:
        return not bool(np.any(self.mult))

    def dimension(self) -> float:
        dims, _ = quantum_dims(self.base)
        return float(self.mult @ dims)

    def describe(self) -> str:
        parts = []
        for i in np.flatnonzero(self.mult):
            m = int(self.mult[i])
            parts.append(self.base.labels[i] if m == 1 else f"{m}*{self.base.labels[i]}")
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def trivial_modular_data(name: str = "Vec") -> ModularData:
    """The unit category: one label, ``s = [[1]]``, ``theta = [1]``."""
    return ModularData(name=name, labels=("1",), s=np.ones((1, 1)), twists=np.ones(1))


def mirror(md: ModularData, name: str | None = None) -> ModularData:
    """Reverse category: complex-conjugated S-matrix and twists."""
    return ModularData(
        name=name or f"{md.name}^rev",
        labels=md.labels,
        s=np.conj(md.s),
        twists=np.conj(md.twists),
    )


def deligne_product(md1: ModularData, md2: ModularData) -> ModularData:
    """Deligne product: pair labels, Kronecker S-matrix, multiplied twists.

    The pair ``(a, b)`` sits at index ``a * md2.rank + b``.
    """
    labels = tuple(pair_label(a, b) for a in md1.labels for b in md2.labels)
    return ModularData(
        name=f"{md1.name} x {md2.name}",
        labels=labels,
        s=np.kron(md1.s, md2.s),
        twists=np.kron(md1.twists, md2.twists),
    )


# ---------------------------------------------------------------------------
# Derived quantities
# ---------------------------------------------------------------------------


def verlinde_raw(md: ModularData) -> np.ndarray:
    """Unrounded Verlinde values ``sum_x s_ax s_bx conj(s_cx) / s_0x``."""

    def compute() -> np.ndarray:
        s = md.s
        first = s[0]
        if np.any(np.abs(first) == 0):
            raise NotModularDataError(f"{md.name}: S-matrix has a zero in the unit row")
        return np.einsum("ax,bx,cx->abc", s, s, np.conj(s) / first)

    return md.cached("verlinde_raw", compute)


def verlinde(md: ModularData, tol: Tolerances | None = None) -> FusionTensor:
    """Fusion tensor from the Verlinde formula, rounded to integers.

    Raises:
        NotModularDataError: a value is farther than ``tol.int_`` from a
            nonnegative integer.
    """
    tol = resolve(tol)

    def compute() -> FusionTensor:
        raw = verlinde_raw(md)
        rounded = np.rint(raw.real)
        deviation = float(np.max(np.abs(raw - rounded))) if raw.size else 0.0
        if deviation > tol.int_:
            raise NotModularDataError(
                f"{md.name}: Verlinde coefficients not integral (deviation {deviation:.3e})"
            )
        if np.any(rounded < 0):
            raise NotModularDataError(f"{md.name}: negative Verlinde coefficient")
        n = rounded.astype(np.int64)
        n.setflags(write=False)
        logger.debug("Verlinde tensor of %s computed (deviation %.3e)", md.name, deviation)
        return FusionTensor(n=n)

    return md.cached(f"verlinde:{tol.int_}", compute)


def quantum_dims(md: ModularData) -> tuple[np.ndarray, float]:
    """Quantum dimensions ``d_a = s_0a / s_00`` and ``D = 1 / s_00``."""

    def compute() -> tuple[np.ndarray, float]:
        first = md.s[0].real
        dims = first / first[0]
        dims.setflags(write=False)
        return dims, float(1.0 / first[0])

    return md.cached("quantum_dims", compute)


def dual_permutation(md: ModularData, tol: Tolerances | None = None) -> np.ndarray:
    """Charge conjugation ``a -> a'`` read off ``s^2``.

    Raises:
        NotModularDataError: ``s^2`` is not a permutation matrix.
    """
    tol = resolve(tol)
    perm, problems = _dual_from_s2(md, tol.num)
    if problems:
        raise NotModularDataError(f"{md.name}: {problems[0]}")
    return perm


def _dual_from_s2(md: ModularData, eps: float) -> tuple[np.ndarray, list[str]]:
    c = md.s @ md.s
    problems: list[str] = []
    perm = np.argmax(np.abs(c), axis=1)
    target = np.zeros_like(c)
    target[np.arange(md.rank), perm] = 1.0
    residual = float(np.max(np.abs(c - target)))
    if residual >= eps:
        problems.append(f"s^2 is not a permutation matrix (residual {residual:.3e})")
    elif not np.array_equal(perm[perm], np.arange(md.rank)):
        problems.append("charge conjugation is not an involution")
    elif perm[0] != 0:
        problems.append("charge conjugation does not fix the unit")
    return perm.astype(np.int64), problems


def monodromy_is_trivial(
    md: ModularData, a: int, b: int, tol: Tolerances | None = None
) -> bool:
    """True iff ``|D s_ab - d_a d_b| < eps`` (``a`` and ``b`` centralize each other)."""
    tol = resolve(tol)
    dims, big_d = quantum_dims(md)
    return bool(abs(big_d * md.s[a, b] - dims[a] * dims[b]) < tol.num)


def is_invertible(md: ModularData, a: int, tol: Tolerances | None = None) -> bool:
    """Simple current test: ``d_a = 1``."""
    tol = resolve(tol)
    dims, _ = quantum_dims(md)
    return bool(abs(dims[a] - 1.0) < tol.num)


def fusion_product(n: FusionTensor, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Product of two Grothendieck-group vectors."""
    return np.einsum("a,b,abc->c", np.asarray(x), np.asarray(y), n.n)


def balancing_check(md: ModularData, tol: Tolerances | None = None) -> float:
    """Worst residual of ``s_ab = D^-1 theta_a^-1 theta_b^-1 sum_c N_{a'b}^c theta_c d_c``."""
    tol = resolve(tol)
    fusion = verlinde(md, tol)
    dual = dual_permutation(md, tol)
    return _balancing_residual(md, fusion.n, dual)


def _balancing_residual(md: ModularData, n: np.ndarray, dual: np.ndarray) -> float:
    dims, big_d = quantum_dims(md)
    theta = md.twists
    weighted = n[dual] @ (theta * dims)  # [a, b] -> sum_c N_{a'b}^c theta_c d_c
    rhs = weighted / (big_d * np.outer(theta, theta))
    return float(np.max(np.abs(md.s - rhs)))


def fusion_tensor_check(n: FusionTensor, dual: np.ndarray) -> CheckReport:
    """Unit, commutativity, duality and associativity of a fusion tensor."""
    r = n.rank
    nn = n.n
    violations: list[str] = []
    if not np.array_equal(nn[0], np.eye(r, dtype=nn.dtype)):
        violations.append("unit row N_0a^b != delta_ab")
    if not np.array_equal(nn, nn.transpose(1, 0, 2)):
        violations.append("N_ab^c != N_ba^c")
    expected_unit = np.zeros((r, r), dtype=nn.dtype)
    expected_unit[np.arange(r), dual] = 1
    if not np.array_equal(nn[:, :, 0], expected_unit):
        violations.append("N_ab^0 != delta_{b,a'}")
    if np.any(nn < 0):
        violations.append("negative coefficient")
    # (a x b) x c = a x (b x c), coefficient of d
    lhs = np.einsum("abe,ecd->abcd", nn, nn)
    rhs = np.einsum("bcf,afd->abcd", nn, nn)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        a, b, c, d = (int(v) for v in bad[0])
        violations.append(f"associativity fails at (a,b,c,d)=({a},{b},{c},{d}) and {len(bad) - 1} more")
    return CheckReport.from_violations("fusion_axioms", violations, rank=r)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate(md: ModularData, tol: Tolerances | None = None) -> ValidationReport:
    """Evaluate every ModularData invariant and report residuals.

    Structural problems (shape, label count) are raised by the ModularData
    constructor as :class:`StructuralError`; everything else is reported here.
    """
    tol = resolve(tol)
    eps = tol.num
    s = md.s
    r = md.rank
    report = ValidationReport(subject=md.name)
    checks = report.checks

    checks.append(CheckReport.from_residual("symmetric", float(np.max(np.abs(s - s.T))), eps))
    unitarity = float(np.max(np.abs(s @ s.conj().T - np.eye(r))))
    checks.append(CheckReport.from_residual("unitary", unitarity, eps))

    first = s[0]
    positivity_violations = [
        f"s[0,{a}] = {first[a]:.6g}"
        for a in range(r)
        if abs(first[a].imag) >= eps or first[a].real <= eps
    ]
    checks.append(
        CheckReport.from_violations("first_row_positive", positivity_violations)
    )
    checks.append(CheckReport.from_residual("unit_twist", float(abs(md.twists[0] - 1)), eps))
    checks.append(
        CheckReport.from_residual(
            "twist_modulus", float(np.max(np.abs(np.abs(md.twists) - 1))), eps
        )
    )

    dual, dual_problems = _dual_from_s2(md, eps)
    checks.append(CheckReport.from_violations("charge_conjugation", dual_problems))

    fusion_ok = False
    n: np.ndarray | None = None
    try:
        raw = verlinde_raw(md)
        rounded = np.rint(raw.real)
        deviation = float(np.max(np.abs(raw - rounded)))
        negatives = int(np.sum(rounded < 0))
        checks.append(
            CheckReport.from_residual(
                "verlinde_integrality",
                deviation,
                tol.int_,
                [f"{negatives} negative coefficients"] if negatives else [],
            )
        )
        if deviation < tol.int_ and negatives == 0:
            n = rounded.astype(np.int64)
            fusion_ok = True
    except NotModularDataError as e:
        checks.append(CheckReport.from_violations("verlinde_integrality", [str(e)]))

    if n is not None and not dual_problems:
        checks.append(fusion_tensor_check(FusionTensor(n=n), dual))
        residual = _balancing_residual(md, n, dual)
        checks.append(CheckReport.from_residual("balancing", residual, eps))
    else:
        reason = "fusion tensor unavailable" if not fusion_ok else "charge conjugation invalid"
        checks.append(CheckReport.from_violations("fusion_axioms", [reason]))
        checks.append(CheckReport.from_violations("balancing", [reason]))

    dims, big_d = quantum_dims(md)
    checks.append(
        CheckReport.from_residual(
            "global_dimension", float(abs(np.sum(dims**2) - big_d**2)), eps * max(1.0, big_d**2)
        )
    )

    if report.passed:
        logger.debug("Validated %s (rank %d)", md.name, r)
    else:
        logger.info(
            "Validation of %s failed: %s", md.name, ", ".join(c.name for c in report.failed())
        )
    return report

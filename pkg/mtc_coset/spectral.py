"""Joint diagonalization of the module fusion operators.

The operators ``T_j`` (local simples) and ``V^lam`` (ambient labels) commute and
are normal with respect to the inner product in which the simple A-modules are
orthonormal. Their joint eigenvectors are labeled by a local label ``i`` and
an ambient label ``mu`` through the characters ``s_ji / s_0i`` and
``s^D_{lam mu} / s^D_{0 mu}``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.linalg

from mtc_coset.checks import CheckReport
from mtc_coset.config import Tolerances, resolve
from mtc_coset.errors import SpectralError
from mtc_coset.extension import ModuleFusionSystem, commutation_check
from mtc_coset.modular_core import ModularData, dual_permutation

logger = logging.getLogger(__name__)


@dataclass
class Eigenvector:
    vector: np.ndarray
    local: int
    ambient: int
    multiplicity: int
    eigenvalues: np.ndarray
    residual: float

    @property
    def label(self) -> tuple[int, int, int]:
        return (self.local, self.ambient, self.multiplicity)


@dataclass
class SpectralDecomposition:
    system: ModuleFusionSystem
    local_md: ModularData
    ambient_md: ModularData
    eigenvectors: list[Eigenvector] = field(default_factory=list)

    @property
    def residual(self) -> float:
        return max((e.residual for e in self.eigenvectors), default=0.0)

    def labels(self) -> list[tuple[int, int, int]]:
        return [e.label for e in self.eigenvectors]

    def matrix(self) -> np.ndarray:
        """Eigenvectors as columns."""
        return np.array([e.vector for e in self.eigenvectors]).T

    def multiplicities(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for e in self.eigenvectors:
            out[(e.local, e.ambient)] = out.get((e.local, e.ambient), 0) + 1
        return out


def _operators(system: ModuleFusionSystem) -> list[np.ndarray]:
    """Operators on coefficient vectors: the transposes of V^lam, then of T_j."""
    ops = [system.v[lam].T.astype(complex) for lam in range(system.v.shape[0])]
    ops += [system.t[j].T.astype(complex) for j in range(system.t.shape[0])]
    return ops


def _cluster(values: np.ndarray, radius: float) -> list[list[int]]:
    clusters: list[list[int]] = []
    centers: list[complex] = []
    for idx, val in enumerate(values):
        for c, center in enumerate(centers):
            if abs(val - center) < radius:
                clusters[c].append(idx)
                break
        else:
            clusters.append([idx])
            centers.append(val)
    return clusters


def _refine(blocks: list[np.ndarray], op: np.ndarray, radius: float) -> list[np.ndarray]:
    out = []
    for q in blocks:
        if q.shape[1] == 1:
            out.append(q)
            continue
        restricted = q.conj().T @ op @ q
        schur_form, unitary = scipy.linalg.schur(restricted, output="complex")
        for members in _cluster(np.diag(schur_form), radius):
            out.append(q @ unitary[:, members])
    return out


def _phase_fixed(v: np.ndarray, eps: float) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > eps)
    if nz.size == 0:
        return v
    first = v[nz[0]]
    return v * (abs(first) / first)


def _block_vectors(q: np.ndarray, unit: int, eps: float) -> list[np.ndarray]:
    """Orthonormal basis of a joint eigenspace, led by the projection of the unit class."""
    coords = q.conj()[unit]  # coordinates of the projection of e_unit
    norm = float(np.linalg.norm(coords))
    if norm > eps:
        lead = q @ (coords / norm)
        rest = scipy.linalg.null_space(coords.conj()[None, :])
        vectors = [lead] + [_phase_fixed(q @ rest[:, c], eps) for c in range(rest.shape[1])]
    else:
        vectors = [_phase_fixed(q[:, c], eps) for c in range(q.shape[1])]
    return vectors


def _characters(md: ModularData) -> np.ndarray:
    """``chars[lam, mu] = s_{lam mu} / s_{0 mu}``."""
    return md.s / md.s[0][None, :]


def _match(values: np.ndarray, chars: np.ndarray, radius: float, what: str) -> int:
    dist = np.max(np.abs(chars - values[:, None]), axis=0)
    hits = np.flatnonzero(dist < radius)
    if hits.size == 0:
        raise SpectralError(f"{what} eigenvalues {np.round(values, 6).tolist()} match no label")
    if hits.size > 1:
        raise SpectralError(f"{what} eigenvalues match several labels {hits.tolist()}")
    return int(hits[0])


def diagonalize(
    system: ModuleFusionSystem,
    local_md: ModularData | None = None,
    ambient_md: ModularData | None = None,
    tol: Tolerances | None = None,
) -> SpectralDecomposition:
    """Joint orthonormal eigenbasis of all ``V^lam`` and ``T_j``, labeled by ``(i, mu, m)``.

    Raises:
        SpectralError: the operators do not commute, local data are missing, or
            an eigenvalue tuple matches zero or several labels.
    """
    tol = resolve(tol)
    local_md = local_md or system.local_md
    ambient_md = ambient_md or system.basis.base
    if local_md is None:
        raise SpectralError("local modular data are required to label eigenvectors")
    if local_md.rank != len(system.local_simples):
        raise SpectralError(
            f"{local_md.name} has rank {local_md.rank} but there are {len(system.local_simples)} local simples"
        )
    comm = commutation_check(system)
    if not comm.passed:
        raise SpectralError(f"operators do not commute: {comm.violations[:3]}")

    ops = _operators(system)
    radius = tol.match_radius
    size = system.basis.rank
    blocks = [np.eye(size, dtype=complex)]
    # repeat until stable: refining by one operator can split blocks another saw whole
    while True:
        before = len(blocks)
        for op in ops:
            blocks = _refine(blocks, op, radius)
        if len(blocks) == before:
            break

    n_amb = system.v.shape[0]
    amb_chars = _characters(ambient_md)
    loc_chars = _characters(local_md)
    unit = system.basis.unit_index
    sd = SpectralDecomposition(system=system, local_md=local_md, ambient_md=ambient_md)
    for q in blocks:
        values = np.array([np.trace(q.conj().T @ op @ q) / q.shape[1] for op in ops])
        mu = _match(values[:n_amb], amb_chars, radius, "V")
        i = _match(values[n_amb:], loc_chars, radius, "T")
        expected = np.concatenate([amb_chars[:, mu], loc_chars[:, i]])
        for m, vec in enumerate(_block_vectors(q, unit, tol.num)):
            residual = max(
                float(np.max(np.abs(op @ vec - val * vec))) for op, val in zip(ops, expected)
            )
            sd.eigenvectors.append(
                Eigenvector(
                    vector=vec,
                    local=i,
                    ambient=mu,
                    multiplicity=m,
                    eigenvalues=expected,
                    residual=residual,
                )
            )
    sd.eigenvectors.sort(key=lambda e: e.label)
    if len(sd.eigenvectors) != size:
        raise SpectralError(f"found {len(sd.eigenvectors)} eigenvectors for dimension {size}")
    logger.info(
        "Diagonalized %d operators on K(D_A) of dimension %d (worst residual %.3e)",
        len(ops),
        size,
        sd.residual,
    )
    return sd


def _b_matrix(sd: SpectralDecomposition) -> np.ndarray:
    """``b[i, mu] = <sigma_i, a_mu>``, read off the restriction of sigma_i."""
    basis = sd.system.basis
    return np.array([basis.simples[j].restriction for j in sd.system.local_simples], dtype=np.int64)


def verify_E_criterion(sd: SpectralDecomposition) -> CheckReport:
    """An eigenvector labeled ``(i, mu)`` exists iff ``<sigma_i, a_mu> > 0``."""
    b = _b_matrix(sd)
    present = set((e.local, e.ambient) for e in sd.eigenvectors)
    violations = []
    for i in range(b.shape[0]):
        for mu in range(b.shape[1]):
            if (b[i, mu] > 0) != ((i, mu) in present):
                violations.append(
                    f"({sd.local_md.labels[i]}, {sd.ambient_md.labels[mu]}): "
                    f"b = {int(b[i, mu])}, eigenvector {'present' if (i, mu) in present else 'absent'}"
                )
    return CheckReport.from_violations(
        "eigenvector_criterion", violations, labels=len(present), nonzero_b=int(np.sum(b > 0))
    )


def verify_spectral_identities(
    sd: SpectralDecomposition, tol: Tolerances | None = None
) -> CheckReport:
    """Intertwining of b with the S-matrices, unit-coefficient proportionality,
    the squared-coefficient sum, and the spectral resolution of every ``V^lam``."""
    tol = resolve(tol)
    b = _b_matrix(sd).astype(complex)
    s_loc = sd.local_md.s
    s_amb = sd.ambient_md.s
    system = sd.system
    unit = system.basis.unit_index

    intertwining = float(np.max(np.abs(s_loc @ b - b @ s_amb)))

    dual = dual_permutation(sd.local_md, tol)
    proportional = 0.0
    for e in sd.eigenvectors:
        for j, simple in enumerate(system.local_simples):
            ratio = s_loc[dual[j], e.local] / s_loc[0, e.local]
            proportional = max(proportional, float(abs(e.vector[simple] - ratio * e.vector[unit])))

    sums = np.zeros(b.shape, dtype=float)
    for e in sd.eigenvectors:
        sums[e.local, e.ambient] += abs(e.vector[unit]) ** 2
    scaled = sums / np.outer(s_loc[0].real, s_amb[0].real)
    squared = float(np.max(np.abs(scaled - b.real)))

    vecs = sd.matrix()
    resolution = 0.0
    chars = _characters(sd.ambient_md)
    for lam in range(system.v.shape[0]):
        vals = np.array([chars[lam, e.ambient] for e in sd.eigenvectors])
        rebuilt = (vecs * vals) @ vecs.conj().T
        resolution = max(resolution, float(np.max(np.abs(rebuilt - system.v[lam].T))))

    worst = max(intertwining, proportional, squared, resolution)
    return CheckReport.from_residual(
        "spectral_identities",
        worst,
        tol.num,
        intertwining=intertwining,
        unit_proportionality=proportional,
        squared_coefficients=squared,
        spectral_resolution=resolution,
    )


def spectral_summary(sd: SpectralDecomposition, tol: Tolerances | None = None) -> dict[str, Any]:
    """Compact record for reports."""
    basis = sd.system.basis
    return {
        "dimension": basis.rank,
        "local_simples": len(sd.system.local_simples),
        "eigenvectors": [
            {
                "local": sd.local_md.labels[e.local],
                "ambient": sd.ambient_md.labels[e.ambient],
                "m": e.multiplicity,
                "residual": e.residual,
            }
            for e in sd.eigenvectors
        ],
        "max_multiplicity": max(sd.multiplicities().values(), default=0),
        "worst_residual": sd.residual,
    }

"""Search for branching matrices of a coset triple.

The covariance relation is linear in ``Z``; together with the dimension match
and the unit structure of ``Z^0`` it is solved as a real linear system. The
integer solutions are then enumerated over the null space, one integer value
per free coordinate, and verified exactly.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from mtc_coset.config import Tolerances, resolve
from mtc_coset.coset import CosetSystem, coset_system, s_covariance_check
from mtc_coset.errors import SearchLimitError
from mtc_coset.modular_core import ModularData, quantum_dims

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BranchingBounds:
    """Search limits.

    Attributes:
        entry_bound: largest branching multiplicity considered.
        max_free: largest null-space dimension enumerated.
        max_candidates: largest number of integer points tried.
    """

    entry_bound: int = 2
    max_free: int = 12
    max_candidates: int = 200_000


def _positions(md1: ModularData, md2: ModularData, mdc: ModularData, eps: float) -> list[tuple[int, int, int]]:
    """Entries allowed to be nonzero: ``theta_i = theta1_alpha theta2_phi``."""
    out = []
    for i in range(mdc.rank):
        for a in range(md1.rank):
            for p in range(md2.rank):
                if abs(mdc.twists[i] - md1.twists[a] * md2.twists[p]) < eps:
                    out.append((i, a, p))
    return out


def _linear_system(
    md1: ModularData,
    md2: ModularData,
    mdc: ModularData,
    positions: list[tuple[int, int, int]],
) -> tuple[np.ndarray, np.ndarray]:
    ni, na, nk = mdc.rank, md1.rank, md2.rank
    col = {pos: c for c, pos in enumerate(positions)}
    nvar = len(positions)

    # covariance rows indexed by (i, alpha, psi)
    cov = np.zeros((ni * na * nk, nvar), dtype=complex)
    s1c = np.conj(md1.s)
    for (i, a, p), c in col.items():
        # LHS: s2[psi, p] at row (i, a, psi)
        base = (i * na + a) * nk
        cov[base : base + nk, c] += md2.s[:, p]
        # RHS: conj(s1[alpha, a]) s[i2, i] at row (i2, alpha, p)
        for i2 in range(ni):
            for a2 in range(na):
                cov[(i2 * na + a2) * nk + p, c] -= s1c[a2, a] * mdc.s[i2, i]
    rows = [cov.real, cov.imag]
    rhs = [np.zeros(cov.shape[0]), np.zeros(cov.shape[0])]

    d1, big_d1 = quantum_dims(md1)
    d2, big_d2 = quantum_dims(md2)
    dc, big_dc = quantum_dims(mdc)
    ratio = big_d1 * big_d2 / big_dc
    dim_rows = np.zeros((ni, nvar))
    for (i, a, p), c in col.items():
        dim_rows[i, c] = d1[a] * d2[p]
    rows.append(dim_rows)
    rhs.append(ratio * dc)

    # Z^0 on the unit row and the unit column
    unit_rows = []
    unit_rhs = []
    for (i, a, p), c in col.items():
        if i == 0 and (a == 0 or p == 0):
            r = np.zeros(nvar)
            r[c] = 1.0
            unit_rows.append(r)
            unit_rhs.append(1.0 if a == 0 and p == 0 else 0.0)
    if unit_rows:
        rows.append(np.array(unit_rows))
        rhs.append(np.array(unit_rhs))
    return np.vstack(rows), np.concatenate(rhs)


def solve_branching(
    md1: ModularData,
    md2: ModularData,
    mdc: ModularData,
    bounds: BranchingBounds | None = None,
    tol: Tolerances | None = None,
) -> list[CosetSystem]:
    """All branching families within ``bounds`` passing covariance and dimension checks.

    Raises:
        SearchLimitError: the null space or the candidate count exceeds ``bounds``.
    """
    tol = resolve(tol)
    bounds = bounds or BranchingBounds()
    positions = _positions(md1, md2, mdc, tol.num)
    if not positions:
        return []
    matrix, rhs = _linear_system(md1, md2, mdc, positions)
    x0, *_ = np.linalg.lstsq(matrix, rhs, rcond=None)
    if np.max(np.abs(matrix @ x0 - rhs)) > tol.int_:
        logger.info("Branching system for %s/%s/%s is inconsistent", md1.name, md2.name, mdc.name)
        return []
    null = scipy.linalg.null_space(matrix)
    free = null.shape[1]
    logger.info(
        "Branching search: %d unknowns, %d free directions, entry bound %d",
        len(positions),
        free,
        bounds.entry_bound,
    )
    if free > bounds.max_free:
        raise SearchLimitError(f"{free} free directions exceed max_free={bounds.max_free}")
    candidates = (bounds.entry_bound + 1) ** free
    if candidates > bounds.max_candidates:
        raise SearchLimitError(
            f"{candidates} candidates over {free} free directions exceed max_candidates={bounds.max_candidates}"
        )

    if free:
        _, _, piv = scipy.linalg.qr(null.T, pivoting=True)
        chosen = piv[:free]
        pivot_block = null[chosen]
    d1, _ = quantum_dims(md1)
    d2, _ = quantum_dims(md2)
    dc, _ = quantum_dims(mdc)
    seen: set[bytes] = set()
    solutions: list[CosetSystem] = []
    for values in itertools.product(range(bounds.entry_bound + 1), repeat=free):
        if free:
            coeff = np.linalg.solve(pivot_block, np.asarray(values, dtype=float) - x0[chosen])
            x = x0 + null @ coeff
        else:
            x = x0
        rounded = np.rint(x)
        if np.max(np.abs(x - rounded)) > tol.int_:
            continue
        if np.any(rounded < 0) or np.any(rounded > bounds.entry_bound):
            continue
        z = np.zeros((mdc.rank, md1.rank, md2.rank), dtype=np.int64)
        for (i, a, p), val in zip(positions, rounded.astype(np.int64)):
            z[i, a, p] = val
        key = z.tobytes()
        if key in seen:
            continue
        seen.add(key)
        # restriction dimension of each (i, alpha) is at most d_i d_alpha
        row_dims = z @ d2
        if np.any(row_dims > np.outer(dc, d1) + tol.num):
            continue
        cs = coset_system(md1, md2, mdc, z, name=f"({md1.name} x {md2.name}) / {mdc.name}")
        if not s_covariance_check(cs, tol).passed:
            continue
        solutions.append(cs)
    logger.info("Branching search found %d solution(s)", len(solutions))
    return solutions

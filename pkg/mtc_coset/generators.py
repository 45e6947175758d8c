"""Reference modular data generators.

These are the only trusted source of sign and twist conventions in the
package: affine su(2) at level k (Kac-Peterson), unitary Virasoro minimal
models, and pointed categories on Z_n.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from mtc_coset.errors import StructuralError
from mtc_coset.modular_core import ModularData, trivial_modular_data

logger = logging.getLogger(__name__)


def su2_level(k: int) -> ModularData:
    """Modular data of affine su(2) at level ``k``.

    Labels ``"0" .. "k"`` are twice the spin. ``k = 0`` is the unit category.
    """
    if k < 0:
        raise StructuralError(f"su(2) level must be nonnegative, got {k}")
    if k == 0:
        return trivial_modular_data("su2_0")
    idx = np.arange(k + 1)
    s = np.sqrt(2.0 / (k + 2)) * np.sin(np.pi * np.outer(idx + 1, idx + 1) / (k + 2))
    weights = idx * (idx + 2) / (4.0 * (k + 2))
    return ModularData.from_weights(f"su2_{k}", [str(a) for a in idx], s, weights)


def clebsch_gordan_fusion(k: int) -> np.ndarray:
    """Truncated Clebsch-Gordan rule for su(2)_k, independent of any S-matrix.

    ``N_ab^c = 1`` iff ``|a-b| <= c <= min(a+b, 2k-a-b)`` and ``a+b+c`` is even.
    """
    n = np.zeros((k + 1, k + 1, k + 1), dtype=np.int64)
    for a in range(k + 1):
        for b in range(k + 1):
            for c in range(abs(a - b), min(a + b, 2 * k - a - b) + 1, 2):
                n[a, b, c] = 1
    return n


def kac_table(p: int, q: int) -> list[tuple[int, int]]:
    """Canonical Kac-table labels: the lexicographically smaller of (r,s) and (p-r,q-s)."""
    _check_minimal_params(p, q)
    out = []
    for r in range(1, p):
        for s in range(1, q):
            if (r, s) <= (p - r, q - s):
                out.append((r, s))
    return out


def kac_label(p: int, q: int, r: int, s: int) -> tuple[int, int]:
    """Canonical representative of ``(r, s)``."""
    return min((r, s), (p - r, q - s))


def minimal_model_weight(p: int, q: int, r: int, s: int) -> float:
    return ((q * r - p * s) ** 2 - (p - q) ** 2) / (4.0 * p * q)


def minimal_model(p: int, q: int) -> ModularData:
    """Virasoro minimal model M(p, q) with labels ``"(r,s)"``.

    The global sign of S is chosen so the vacuum entry is positive. Only the
    unitary series ``q = p + 1`` is pseudo-unitary; other pairs are generated
    but do not pass :func:`mtc_coset.modular_core.validate`.
    """
    labels = kac_table(p, q)
    r = np.array([x[0] for x in labels])
    s_ = np.array([x[1] for x in labels])
    sign = (-1.0) ** (1 + np.outer(s_, r) + np.outer(r, s_))
    s = (
        2.0
        * np.sqrt(2.0 / (p * q))
        * sign
        * np.sin(np.pi * q * np.outer(r, r) / p)
        * np.sin(np.pi * p * np.outer(s_, s_) / q)
    )
    if s[0, 0] < 0:
        s = -s
    weights = [minimal_model_weight(p, q, a, b) for a, b in labels]
    if q != p + 1:
        logger.info("M(%d,%d) is outside the unitary series; it will not validate", p, q)
    return ModularData.from_weights(
        f"M({p},{q})", [f"({a},{b})" for a, b in labels], s, weights
    )


def _check_minimal_params(p: int, q: int) -> None:
    if p < 2 or q < 2:
        raise StructuralError(f"minimal model needs p, q >= 2, got ({p}, {q})")
    if p >= q:
        raise StructuralError(f"minimal model needs p < q, got ({p}, {q})")
    if math.gcd(p, q) != 1:
        raise StructuralError(f"minimal model needs coprime p, q, got ({p}, {q})")


def pointed_cyclic(n: int, t: int) -> ModularData:
    """Pointed modular data on Z_n with quadratic form ``theta_j = exp(pi i t j^2 / n)``.

    When ``n * t`` is odd, ``t`` is lifted to ``t + n`` so that the twist is well
    defined on Z_n. The S-matrix is ``n^-1/2 exp(-2 pi i t j k / n)``.
    """
    if n < 1:
        raise StructuralError(f"pointed_cyclic needs n >= 1, got {n}")
    if n == 1:
        return trivial_modular_data("Z_1")
    if math.gcd(t, n) != 1:
        raise StructuralError(
            f"pointed_cyclic({n}, {t}) is degenerate: gcd(t, n) = {math.gcd(t, n)} != 1"
        )
    lifted = t + n if (n * t) % 2 else t
    j = np.arange(n)
    s = np.exp(-2j * np.pi * t * np.outer(j, j) / n) / np.sqrt(n)
    twists = np.exp(1j * np.pi * lifted * (j**2) / n)
    return ModularData(
        name=f"Z_{n}[{t}]", labels=tuple(str(x) for x in j), s=s, twists=twists
    )

"""Reference coset systems and algebras used by tests, reports and the CLI."""

from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np

from mtc_coset.coset import CosetSystem, coset_system
from mtc_coset.errors import StructuralError
from mtc_coset.extension import (
    AlgebraObject,
    decompose_module_category,
    local_modular_data,
    make_algebra,
)
from mtc_coset.generators import kac_label, kac_table, minimal_model, pointed_cyclic, su2_level
from mtc_coset.modular_core import (
    ModularData,
    deligne_product,
    dual_permutation,
    mirror,
    trivial_modular_data,
)
from mtc_coset.utils import pair_index

logger = logging.getLogger(__name__)


def diagonal_coset(k: int) -> CosetSystem:
    """(su2_{k+1}, M(k+2, k+3), su2_k x su2_1) with the GKO branching rule.

    ``Z^{(l, e)}[l', (l+1, l'+1)] = 1`` iff ``l + e + l'`` is even.
    """
    if k < 1:
        raise StructuralError(f"diagonal coset needs k >= 1, got {k}")
    p, q = k + 2, k + 3
    md1 = su2_level(k + 1)
    md2 = minimal_model(p, q)
    mdc = deligne_product(su2_level(k), su2_level(1))
    kac = kac_table(p, q)
    z = np.zeros((mdc.rank, md1.rank, md2.rank), dtype=np.int64)
    for l in range(k + 1):
        for e in range(2):
            for l2 in range(k + 2):
                if (l + e + l2) % 2 == 0:
                    phi = kac.index(kac_label(p, q, l + 1, l2 + 1))
                    z[pair_index(l, e, 2), l2, phi] = 1
    return coset_system(md1, md2, mdc, z, name=f"diagonal_coset(k={k})")


def ising_coset() -> CosetSystem:
    """su2_2 x Ising over su2_1 x su2_1."""
    return diagonal_coset(1)


def trivial_system(md: ModularData) -> CosetSystem:
    """C1 = Vec, C2 = C = md, ``Z^i = e_i``."""
    z = np.zeros((md.rank, 1, md.rank), dtype=np.int64)
    for i in range(md.rank):
        z[i, 0, i] = 1
    return coset_system(trivial_modular_data(), md, md, z, name=f"trivial({md.name})")


def double_system(md: ModularData) -> CosetSystem:
    """C1 = md, C2 = its mirror, C = Vec, ``Z^0[alpha, alpha'] = 1``."""
    dual = dual_permutation(md)
    z = np.zeros((1, md.rank, md.rank), dtype=np.int64)
    for a in range(md.rank):
        z[0, a, dual[a]] = 1
    return coset_system(md, mirror(md), trivial_modular_data(), z, name=f"double({md.name})")


def so5_level_one() -> ModularData:
    """so(5)_1: Ising fusion with h_s = 5/16."""
    r = np.sqrt(2.0)
    s = np.array([[1.0, r, 1.0], [r, 0.0, -r], [1.0, -r, 1.0]]) / 2
    return ModularData.from_weights("so5_1", ("0", "s", "v"), s, [0.0, 5 / 16, 0.5])


def embedding_system() -> CosetSystem:
    """su2_10 inside so(5)_1 with C2 = Vec.

    The unit of C restricts to ``0 + 6``, so Z^0 has no unit structure; KW = {0, 10}
    is a group while the other three group conditions fail.
    """
    md1 = su2_level(10)
    mdc = so5_level_one()
    z = np.zeros((mdc.rank, md1.rank, 1), dtype=np.int64)
    for i, alphas in enumerate(((0, 6), (3, 7), (4, 10))):
        for a in alphas:
            z[i, a, 0] = 1
    return coset_system(md1, trivial_modular_data(), mdc, z, name="su2_10 in so5_1")


def ising_coset_algebra() -> AlgebraObject:
    return ising_coset().algebra


def pointed_diagonal_algebra() -> AlgebraObject:
    """Diagonal Z_2 algebra ``(0,0) + (1,1)`` on semion x anti-semion."""
    semion = pointed_cyclic(2, 1)
    ambient = deligne_product(semion, mirror(semion))
    m = np.zeros(ambient.rank, dtype=np.int64)
    m[pair_index(0, 0, 2)] = 1
    m[pair_index(1, 1, 2)] = 1
    return make_algebra(ambient, m)


@lru_cache(maxsize=1)
def _pointed_candidates(max_n: int = 6) -> tuple[tuple[int, int, int, int, int, int], ...]:
    """(n1, t1, n2, t2, h, u) with an isotropic graph subgroup of order h."""
    out = []
    for n1 in range(1, max_n + 1):
        for t1 in range(1, max(n1, 2)):
            if math.gcd(t1, n1) != 1:
                continue
            for n2 in range(1, max_n + 1):
                for t2 in range(1, max(n2, 2)):
                    if math.gcd(t2, n2) != 1:
                        continue
                    md1 = pointed_cyclic(n1, t1)
                    md2 = pointed_cyclic(n2, t2)
                    for h in range(1, n1 + 1):
                        if n1 % h or n2 % h:
                            continue
                        g = n1 // h
                        for u in range(1, max(h, 2)):
                            if math.gcd(u, h) != 1:
                                continue
                            fg = (u * (n2 // h)) % n2
                            twist = md1.twists[g % n1] * md2.twists[fg]
                            if abs(twist - 1) < 1e-9:
                                out.append((n1, t1, n2, t2, h, u))
    return tuple(out)


def pointed_system(n1: int, t1: int, n2: int, t2: int, h: int, u: int) -> CosetSystem:
    """Coset system of the graph algebra ``{(m g, m f(g))}`` in Z_n1 x Z_n2.

    ``g = n1 / h`` generates the subgroup of order ``h`` and ``f(g) = u n2 / h``.
    The coset category is the category of local modules.
    """
    md1 = pointed_cyclic(n1, t1)
    md2 = pointed_cyclic(n2, t2)
    ambient = deligne_product(md1, md2)
    g, fg = n1 // h, (u * (n2 // h)) % n2
    m = np.zeros(ambient.rank, dtype=np.int64)
    for k in range(h):
        m[pair_index((k * g) % n1, (k * fg) % n2, n2)] = 1
    algebra = make_algebra(ambient, m)
    basis = decompose_module_category(algebra)
    mdc, restrictions = local_modular_data(basis, name=f"Z_{n1}xZ_{n2}/H{h}")
    z = restrictions.reshape(mdc.rank, n1, n2)
    return coset_system(md1, md2, mdc, z, name=f"pointed({n1},{t1};{n2},{t2};h={h},u={u})")


def random_pointed_system(rng: np.random.Generator) -> CosetSystem:
    """A random pointed coset system drawn from all small isotropic graph subgroups."""
    candidates = _pointed_candidates()
    choice = candidates[int(rng.integers(len(candidates)))]
    logger.debug("Random pointed system %s", choice)
    return pointed_system(*choice)


FIXTURES = {
    "ising": ising_coset,
    "trivial": lambda: trivial_system(minimal_model(3, 4)),
    "double": lambda: double_system(minimal_model(3, 4)),
}

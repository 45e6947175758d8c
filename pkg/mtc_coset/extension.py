"""Commutative algebra objects at the level of Grothendieck groups.

An :class:`AlgebraObject` is the multiplicity vector of a regular commutative
algebra ``A`` inside a modular category ``D``. From it this module derives
induced modules ``a_x = A x``, their Hom dimensions (Frobenius reciprocity),
the simple A-modules of ``D_A`` with their restrictions, locality, and the
integer fusion operators ``V^lam`` and ``T_j`` acting on ``K(D_A)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from mtc_coset.checks import CheckReport
from mtc_coset.config import Tolerances, max_rank, resolve
from mtc_coset.errors import AlgebraError, ModuleCategoryError, StructuralError
from mtc_coset.modular_core import (
    ModularData,
    ObjectVector,
    dual_permutation,
    fusion_product,
    quantum_dims,
    verlinde,
)
from mtc_coset.utils import support

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AlgebraObject:
    """Multiplicities ``m_a = <a, A>`` of an algebra in ``base``."""

    base: ModularData
    mult: np.ndarray

    @property
    def support(self) -> list[int]:
        return support(self.mult)

    def describe(self) -> str:
        return ObjectVector(self.base, self.mult).describe()


def make_algebra(
    base: ModularData, mult: Sequence[int] | np.ndarray, tol: Tolerances | None = None
) -> AlgebraObject:
    """Validated constructor.

    Raises:
        StructuralError: wrong vector length.
        AlgebraError: unit multiplicity != 1, nontrivial twist on the support,
            or support not closed under duality.
    """
    tol = resolve(tol)
    m = np.asarray(mult, dtype=np.int64).reshape(-1)
    if m.shape[0] != base.rank:
        raise StructuralError(f"algebra vector has length {m.shape[0]}, {base.name} has rank {base.rank}")
    if np.any(m < 0):
        raise AlgebraError("algebra multiplicities must be nonnegative")
    if m[0] != 1:
        raise AlgebraError(f"unit multiplicity of an algebra must be 1, got {m[0]}")
    bad = [base.labels[a] for a in support(m) if abs(base.twists[a] - 1) >= tol.num]
    if bad:
        raise AlgebraError(f"algebra support has nontrivial twists at {bad}")
    dual = dual_permutation(base, tol)
    if not np.array_equal(m[dual], m):
        raise AlgebraError("algebra support is not closed under duality")
    m.setflags(write=False)
    return AlgebraObject(base=base, mult=m)


def unit_algebra(md: ModularData) -> AlgebraObject:
    m = np.zeros(md.rank, dtype=np.int64)
    m[0] = 1
    return make_algebra(md, m)


def algebra_dimension(algebra: AlgebraObject) -> float:
    """FPdim(A) = sum_a m_a d_a."""
    dims, _ = quantum_dims(algebra.base)
    return float(algebra.mult @ dims)


def restriction_dimension(base: ModularData, vector: np.ndarray) -> float:
    dims, _ = quantum_dims(base)
    return float(np.asarray(vector) @ dims)


def induce(algebra: AlgebraObject, x: int, tol: Tolerances | None = None) -> ObjectVector:
    """Restriction of the free module ``a_x``: ``(A x)_c = sum_a m_a N_ax^c``."""
    n = verlinde(algebra.base, tol).n
    return ObjectVector(algebra.base, algebra.mult @ n[:, x, :])


def induced_gram(algebra: AlgebraObject, tol: Tolerances | None = None) -> np.ndarray:
    """Matrix of ``dim Hom_A(a_x, a_y) = sum_a m_a N_ay^x``."""
    n = verlinde(algebra.base, tol).n
    return np.einsum("a,ayx->xy", algebra.mult, n)


def induced_hom(algebra: AlgebraObject, x: int, y: int, tol: Tolerances | None = None) -> int:
    n = verlinde(algebra.base, tol).n
    return int(algebra.mult @ n[:, y, x])


def twist_constant_on(base: ModularData, vector: np.ndarray, tol: Tolerances | None = None) -> bool:
    """True iff all labels in the support of ``vector`` share one twist."""
    tol = resolve(tol)
    idx = support(vector)
    if not idx:
        return True
    theta = base.twists[idx]
    return bool(np.max(np.abs(theta - theta[0])) < tol.num)


def is_local_induced(algebra: AlgebraObject, x: int, tol: Tolerances | None = None) -> bool:
    """Locality of ``a_x``: the twist equals ``theta_x`` on the whole support of ``A x``."""
    tol = resolve(tol)
    vec = induce(algebra, x, tol).mult
    theta = algebra.base.twists
    return bool(all(abs(theta[c] - theta[x]) < tol.num for c in support(vec)))


def is_simple_current_algebra(algebra: AlgebraObject, tol: Tolerances | None = None) -> bool:
    tol = resolve(tol)
    dims, _ = quantum_dims(algebra.base)
    return all(abs(dims[a] - 1) < tol.num for a in algebra.support)


# ---------------------------------------------------------------------------
# Module category decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModuleSimple:
    """One simple A-module, described by its restriction to ``D``.

    ``representative`` is a label ``x`` with ``a_x`` isomorphic to this simple
    (None when no induced module is simple and equal to it). Simples with the
    same restriction share a ``group``.
    """

    restriction: np.ndarray
    dim: float
    local: bool
    representative: int | None
    group: int


@dataclass(frozen=True, eq=False)
class ModuleClassBasis:
    base: ModularData
    algebra: AlgebraObject
    simples: tuple[ModuleSimple, ...]
    gram: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.simples)

    @property
    def restrictions(self) -> np.ndarray:
        """Matrix with one row per simple A-module."""
        return np.array([s.restriction for s in self.simples], dtype=np.int64).reshape(
            self.rank, self.base.rank
        )

    @property
    def local_indices(self) -> list[int]:
        return [i for i, s in enumerate(self.simples) if s.local]

    @property
    def unit_index(self) -> int:
        for i, s in enumerate(self.simples):
            if np.array_equal(s.restriction, self.algebra.mult):
                return i
        raise ModuleCategoryError("no simple module restricts to A")

    def dims(self) -> np.ndarray:
        return np.array([s.dim for s in self.simples])

    def label(self, i: int) -> str:
        s = self.simples[i]
        text = ObjectVector(self.base, s.restriction).describe()
        twins = [j for j, o in enumerate(self.simples) if o.group == s.group]
        if len(twins) > 1:
            text += f" #{twins.index(i) + 1}"
        return f"[{text}]"

    def labels(self) -> list[str]:
        return [self.label(i) for i in range(self.rank)]


def decompose_module_category(
    algebra: AlgebraObject, tol: Tolerances | None = None
) -> ModuleClassBasis:
    """Simple A-modules and their restrictions.

    Simple-current algebras are handled by the orbit method. Other algebras
    go through a deterministic factorization of the induced Gram matrix;
    failure raises :class:`ModuleCategoryError`.
    """
    tol = resolve(tol)
    base = algebra.base
    limit = max_rank()
    if base.rank > limit:
        raise ModuleCategoryError(
            f"{base.name} has rank {base.rank}, above the decomposition limit {limit}"
        )
    gram = induced_gram(algebra, tol)
    if is_simple_current_algebra(algebra, tol):
        vectors = _orbit_decomposition(algebra, gram, tol)
        method = "orbit"
    else:
        vectors = _gram_decomposition(gram)
        method = "gram"

    w = np.array(vectors, dtype=np.int64).reshape(len(vectors), base.rank)
    if not np.array_equal(w.T @ w, gram):
        raise ModuleCategoryError(
            f"decomposition of {algebra.describe()} does not reproduce the induced Gram matrix"
        )

    a_dim = algebra_dimension(algebra)
    groups: dict[bytes, int] = {}
    simples = []
    for vec in w:
        group = groups.setdefault(vec.tobytes(), len(groups))
        rep = None
        for x in support(vec):
            # a_x simple and containing this simple once means a_x is this simple
            if gram[x, x] == 1 and vec[x] == 1:
                rep = x
                break
        simples.append(
            ModuleSimple(
                restriction=vec,
                dim=restriction_dimension(base, vec) / a_dim,
                local=twist_constant_on(base, vec, tol),
                representative=rep,
                group=group,
            )
        )
    basis = ModuleClassBasis(base=base, algebra=algebra, simples=tuple(simples), gram=gram)
    logger.info(
        "Decomposed %s over %s by %s method: %d simples, %d local",
        algebra.describe(),
        base.name,
        method,
        basis.rank,
        len(basis.local_indices),
    )
    return basis


def _orbit_decomposition(
    algebra: AlgebraObject, gram: np.ndarray, tol: Tolerances
) -> list[np.ndarray]:
    n = verlinde(algebra.base, tol).n
    seen: set[int] = set()
    out: list[np.ndarray] = []
    for x in range(algebra.base.rank):
        if x in seen:
            continue
        induced = algebra.mult @ n[:, x, :]
        orbit = support(induced)
        t = int(gram[x, x])
        indicator = np.zeros_like(induced)
        indicator[orbit] = 1
        if not np.array_equal(induced, t * indicator):
            raise ModuleCategoryError(
                f"induction of {algebra.base.labels[x]} is not a uniform orbit; "
                "algebra multiplicities must be 1 on simple currents"
            )
        if t > 2:
            raise ModuleCategoryError(
                f"stabilizer of order {t} at {algebra.base.labels[x]}; only splittings into 2 are supported"
            )
        out.extend(indicator.copy() for _ in range(t))
        seen.update(orbit)
        logger.debug("Orbit of %s: %s (stabilizer %d)", algebra.base.labels[x], orbit, t)
    return out


def _gram_decomposition(gram: np.ndarray) -> list[np.ndarray]:
    r = gram.shape[0]
    found: list[np.ndarray] = []
    done: set[int] = set()

    def residual(x: int) -> np.ndarray:
        res = gram[x].astype(np.int64).copy()
        for w in found:
            res -= w[x] * w
        if np.any(res < 0):
            raise ModuleCategoryError(f"decomposition not found: negative residual at label {x}")
        return res

    while len(done) < r:
        progress = False
        for x in range(r):
            if x in done:
                continue
            res = residual(x)
            if res[x] == 0:
                if np.any(res):
                    raise ModuleCategoryError(f"decomposition not found: inconsistent residual at {x}")
                done.add(x)
                progress = True
            elif res[x] == 1:
                found.append(res)
                done.add(x)
                progress = True
        if progress:
            continue
        x = min(set(range(r)) - done)
        res = residual(x)
        t = int(res[x])
        if np.any(res % t):
            raise ModuleCategoryError(
                f"decomposition not found: residual at label {x} has diagonal {t} and is not divisible"
            )
        logger.debug("Splitting residual at label %d into %d equal simples", x, t)
        found.extend((res // t).copy() for _ in range(t))
        done.add(x)
    return found


def fpdim_identities(basis: ModuleClassBasis, tol: Tolerances | None = None) -> CheckReport:
    """FPdim(D_A) = FPdim(D)/FPdim(A) and FPdim(D_A^0) = FPdim(D)/FPdim(A)^2."""
    tol = resolve(tol)
    _, big_d = quantum_dims(basis.base)
    a_dim = algebra_dimension(basis.algebra)
    dims = basis.dims()
    total = float(np.sum(dims**2))
    local = float(np.sum(dims[basis.local_indices] ** 2))
    expected_total = big_d**2 / a_dim
    expected_local = big_d**2 / a_dim**2
    residual = max(abs(total - expected_total), abs(local - expected_local))
    return CheckReport.from_residual(
        "fpdim_identities",
        residual,
        tol.num * max(1.0, big_d**2),
        fpdim_modules=total,
        expected_modules=expected_total,
        fpdim_local=local,
        expected_local=expected_local,
    )


def gram_check(basis: ModuleClassBasis) -> CheckReport:
    """Frobenius reciprocity: restrictions reproduce ``dim Hom_A(a_x, a_y)``."""
    w = basis.restrictions
    diff = w.T @ w - basis.gram
    bad = np.argwhere(diff != 0)
    violations = [
        f"<a_{basis.base.labels[x]}, a_{basis.base.labels[y]}> differs by {int(diff[x, y])}"
        for x, y in bad
    ]
    return CheckReport.from_violations("frobenius_reciprocity", violations)


# ---------------------------------------------------------------------------
# Fusion operators on K(D_A)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ModuleFusionSystem:
    """Integer operators on ``K(D_A)``.

    ``v[lam][a, b]`` is the multiplicity of simple ``b`` in ``a_lam (x)_A a``;
    ``t[j]`` is the same for the j-th local simple ``local_simples[j]``. When
    ``local_md`` is set, ``local_simples[j]`` is matched to its label ``j``.
    """

    basis: ModuleClassBasis
    v: np.ndarray
    t: np.ndarray
    local_simples: tuple[int, ...]
    local_md: ModularData | None = None

    def operators(self) -> list[tuple[str, np.ndarray]]:
        named = [(f"V^{self.basis.base.labels[lam]}", self.v[lam]) for lam in range(self.v.shape[0])]
        named += [(f"T_{self.basis.label(j)}", self.t[k]) for k, j in enumerate(self.local_simples)]
        return named


class _LocalContext:
    """Matching between local simples and the labels of a modular category."""

    def __init__(self, local_md: ModularData, simple_of_label: list[int], tol: Tolerances) -> None:
        self.md = local_md
        self.simple_of_label = simple_of_label
        self.label_of_simple = {s: i for i, s in enumerate(simple_of_label)}
        self.n = verlinde(local_md, tol).n
        self.dual = dual_permutation(local_md, tol)

    def knows(self, *simples: int) -> bool:
        return all(s in self.label_of_simple for s in simples)

    def dual_simple(self, j: int) -> int:
        return self.simple_of_label[int(self.dual[self.label_of_simple[j]])]


def match_local_simples(
    basis: ModuleClassBasis, local_md: ModularData, local_restrictions: np.ndarray
) -> list[int]:
    """Assign a local simple to every label of ``local_md`` by exact restriction.

    Equal restrictions are assigned in order, with a warning.
    """
    local_restrictions = np.asarray(local_restrictions, dtype=np.int64)
    if local_restrictions.shape != (local_md.rank, basis.base.rank):
        raise StructuralError(
            f"local restrictions have shape {local_restrictions.shape}, "
            f"expected {(local_md.rank, basis.base.rank)}"
        )
    locals_left = list(basis.local_indices)
    if len(locals_left) != local_md.rank:
        raise ModuleCategoryError(
            f"{len(locals_left)} local simples but {local_md.name} has rank {local_md.rank}"
        )
    out: list[int] = []
    tied = False
    for i, vec in enumerate(local_restrictions):
        hits = [j for j in locals_left if np.array_equal(basis.simples[j].restriction, vec)]
        if not hits:
            raise ModuleCategoryError(f"no local simple restricts like {local_md.labels[i]}")
        if len(hits) > 1:
            tied = True
        out.append(hits[0])
        locals_left.remove(hits[0])
    if tied:
        logger.warning(
            "Local simples of %s matched to %s with ties broken in order",
            basis.algebra.describe(),
            local_md.name,
        )
    return out


def module_fusion(
    basis: ModuleClassBasis,
    lam: int,
    tol: Tolerances | None = None,
    *,
    local: _LocalContext | None = None,
) -> np.ndarray:
    """Integer matrix ``V^lam`` of ``a_lam (x)_A -`` on the simple A-modules."""
    tol = resolve(tol)
    n = verlinde(basis.base, tol).n
    dual = dual_permutation(basis.base, tol)
    res = basis.restrictions
    size = basis.rank
    v = np.full((size, size), -1, dtype=np.int64)

    # a_lam (x) a_x = sum_z N_{lam x}^z a_z
    for b, s in enumerate(basis.simples):
        if s.representative is not None:
            v[b, :] = res @ n[lam, s.representative]
    for c, s in enumerate(basis.simples):
        if s.representative is None:
            continue
        column = res @ n[dual[lam], s.representative]
        known = v[:, c] >= 0
        if np.any(v[known, c] != column[known]):
            raise ModuleCategoryError(f"duality mismatch in V^{basis.base.labels[lam]}")
        v[:, c] = column

    groups = _groups(basis)
    for b in range(size):
        if np.all(v[b] >= 0):
            continue
        target = res[b] @ n[lam]
        counts = _solve_group_counts(basis, groups, target, f"{basis.base.labels[lam]} on {basis.label(b)}")
        for members, total in counts:
            _distribute(
                v[b],
                members,
                total,
                lambda c, b=b: _local_fusion_entry(basis, local, lam, b, c),
                f"V^{basis.base.labels[lam]} row {basis.label(b)}",
            )
    return v


def _groups(basis: ModuleClassBasis) -> list[list[int]]:
    out: dict[int, list[int]] = {}
    for i, s in enumerate(basis.simples):
        out.setdefault(s.group, []).append(i)
    return list(out.values())


def _solve_group_counts(
    basis: ModuleClassBasis, groups: list[list[int]], target: np.ndarray, what: str
) -> list[tuple[list[int], int]]:
    """Write ``target`` as a nonnegative integer combination of group restrictions."""
    rho = np.array([basis.simples[g[0]].restriction for g in groups], dtype=float)
    coeffs, *_ = np.linalg.lstsq(rho.T, target.astype(float), rcond=None)
    rounded = np.rint(coeffs).astype(np.int64)
    if np.any(rounded < 0) or not np.array_equal(rounded @ rho.astype(np.int64), target):
        raise ModuleCategoryError(f"cannot re-express {what} in the module basis")
    return [(g, int(k)) for g, k in zip(groups, rounded)]


def _local_fusion_entry(
    basis: ModuleClassBasis, local: _LocalContext | None, lam: int, b: int, c: int
) -> int | None:
    """``<a_lam (x) b, c> = <a_lam, c (x) b'>`` for local b, c with known fusion."""
    if local is None or not local.knows(b, c):
        return None
    i_c = local.label_of_simple[c]
    i_bd = int(local.dual[local.label_of_simple[b]])
    total = 0
    for k in np.flatnonzero(local.n[i_c, i_bd]):
        sigma = basis.simples[local.simple_of_label[int(k)]]
        total += int(local.n[i_c, i_bd, k]) * int(sigma.restriction[lam])
    return total


def _distribute(
    row: np.ndarray,
    members: list[int],
    total: int,
    exact: Callable[[int], int | None],
    what: str,
) -> None:
    unknown = [c for c in members if row[c] < 0]
    known = int(sum(row[c] for c in members if row[c] >= 0))
    remaining = total - known
    if not unknown:
        if remaining != 0:
            raise ModuleCategoryError(f"inconsistent counts in {what}")
        return
    values = [exact(c) for c in unknown]
    if all(v is not None for v in values):
        if sum(values) != remaining:
            raise ModuleCategoryError(f"local fusion data disagree with restrictions in {what}")
        for c, val in zip(unknown, values):
            row[c] = val
        return
    if len(unknown) == 1:
        row[unknown[0]] = remaining
        return
    if remaining % len(unknown):
        raise ModuleCategoryError(
            f"cannot split {remaining} among {len(unknown)} isomorphic restrictions in {what}"
        )
    logger.debug("Equal split of %d over %d simples in %s", remaining, len(unknown), what)
    for c in unknown:
        row[c] = remaining // len(unknown)


def module_fusion_local(
    basis: ModuleClassBasis,
    j: int,
    v: np.ndarray,
    tol: Tolerances | None = None,
    *,
    local: _LocalContext | None = None,
) -> np.ndarray:
    """Integer matrix ``T_j`` of ``sigma_j (x)_A -`` for a local simple ``j``.

    ``v`` holds every ``V^lam`` (see :func:`module_fusion`).
    """
    tol = resolve(tol)
    simple = basis.simples[j]
    if not simple.local:
        raise ModuleCategoryError(f"{basis.label(j)} is not local")
    if simple.representative is not None:
        return v[simple.representative].copy()
    size = basis.rank
    t = np.full((size, size), -1, dtype=np.int64)
    for b, s in enumerate(basis.simples):
        if s.representative is not None:
            t[b, :] = v[s.representative][j, :]
    j_dual = _dual_simple(basis, j, local, tol)
    for c, s in enumerate(basis.simples):
        if s.representative is None:
            continue
        column = v[s.representative][j_dual, :]
        known = t[:, c] >= 0
        if np.any(t[known, c] != column[known]):
            raise ModuleCategoryError(f"duality mismatch in T_{basis.label(j)}")
        t[:, c] = column
    for b in range(size):
        for c in range(size):
            if t[b, c] >= 0:
                continue
            lb, lc = basis.simples[b].local, basis.simples[c].local
            if lb and lc and local is not None and local.knows(j, b, c):
                t[b, c] = local.n[local.label_of_simple[j], local.label_of_simple[b], local.label_of_simple[c]]
            elif lb != lc:
                t[b, c] = 0
    if np.any(t < 0):
        t = _restriction_product_operator(basis, j, v, t)
    return t


def _dual_simple(basis: ModuleClassBasis, j: int, local: _LocalContext | None, tol: Tolerances) -> int:
    if local is not None and local.knows(j):
        return local.dual_simple(j)
    dual = dual_permutation(basis.base, tol)
    target = basis.simples[j].restriction[dual]
    hits = [i for i, s in enumerate(basis.simples) if s.local and np.array_equal(s.restriction, target)]
    if len(hits) != 1:
        raise ModuleCategoryError(f"dual of {basis.label(j)} is ambiguous without local fusion data")
    return hits[0]


def _restriction_product_operator(
    basis: ModuleClassBasis, j: int, v: np.ndarray, partial: np.ndarray
) -> np.ndarray:
    """Solve ``res(j) res(b) = res(a_A (x) (j (x) b))`` when restrictions are independent."""
    res = basis.restrictions
    if np.linalg.matrix_rank(res.astype(float)) < basis.rank:
        raise ModuleCategoryError(
            f"T_{basis.label(j)} is underdetermined: restrictions are not independent"
        )
    fusion = verlinde(basis.base)
    p = np.einsum("z,zab->ab", basis.algebra.mult, v)
    out = np.zeros_like(partial)
    for b in range(basis.rank):
        target = fusion_product(fusion, res[j], res[b]).astype(float)
        w, *_ = np.linalg.lstsq(res.T.astype(float), target, rcond=None)
        u = np.linalg.solve(p.T.astype(float), w)
        rounded = np.rint(u).astype(np.int64)
        if np.max(np.abs(u - rounded)) > 1e-6 or np.any(rounded < 0):
            raise ModuleCategoryError(f"T_{basis.label(j)} row {basis.label(b)} is not integral")
        out[b] = rounded
    known = partial >= 0
    if np.any(out[known] != partial[known]):
        raise ModuleCategoryError(f"T_{basis.label(j)} disagrees with induced rows")
    return out


def build_module_fusion_system(
    basis: ModuleClassBasis,
    local_md: ModularData | None = None,
    local_restrictions: np.ndarray | None = None,
    tol: Tolerances | None = None,
) -> ModuleFusionSystem:
    """Compute every ``V^lam`` and every local ``T_j``.

    With ``local_md`` (and the restriction of each of its labels), local
    simples are matched to its labels and its fusion rules resolve products
    between split simples.
    """
    tol = resolve(tol)
    ctx: _LocalContext | None = None
    if local_md is not None:
        if local_restrictions is None:
            raise StructuralError("local_restrictions are required together with local_md")
        order = match_local_simples(basis, local_md, local_restrictions)
        ctx = _LocalContext(local_md, order, tol)
        local_simples = tuple(order)
    else:
        local_simples = tuple(basis.local_indices)
    v = np.array(
        [module_fusion(basis, lam, tol, local=ctx) for lam in range(basis.base.rank)], dtype=np.int64
    )
    t = np.array(
        [module_fusion_local(basis, j, v, tol, local=ctx) for j in local_simples], dtype=np.int64
    ).reshape(len(local_simples), basis.rank, basis.rank)
    if np.any(v < 0) or np.any(t < 0):
        raise ModuleCategoryError("negative entries in module fusion operators")
    logger.info("Module fusion system built: %d operators V, %d operators T", len(v), len(t))
    return ModuleFusionSystem(
        basis=basis, v=v, t=t, local_simples=local_simples, local_md=local_md
    )


def commutation_check(system: ModuleFusionSystem) -> CheckReport:
    """All operators ``T_j`` and ``V^lam`` commute (exact integers)."""
    ops = system.operators()
    violations = []
    worst = 0
    for i in range(len(ops)):
        for k in range(i + 1, len(ops)):
            comm = ops[i][1] @ ops[k][1] - ops[k][1] @ ops[i][1]
            size = int(np.max(np.abs(comm))) if comm.size else 0
            if size:
                worst = max(worst, size)
                violations.append(f"[{ops[i][0]}, {ops[k][0]}] != 0")
    return CheckReport.from_violations(
        "operators_commute", violations, operators=len(ops), max_commutator=worst
    )


def ring_homomorphism_check(system: ModuleFusionSystem, tol: Tolerances | None = None) -> CheckReport:
    """``V^mu1 V^mu2 = sum_mu3 N_{mu1 mu2}^mu3 V^mu3`` for every pair."""
    n = verlinde(system.basis.base, tol).n
    v = system.v
    labels = system.basis.base.labels
    products = np.einsum("xab,ybc->xyac", v, v)
    expected = np.einsum("xyz,zac->xyac", n, v)
    bad = np.argwhere(np.any(products != expected, axis=(2, 3)))
    violations = [f"V^{labels[x]} V^{labels[y]}" for x, y in bad]
    return CheckReport.from_violations(
        "ring_homomorphism", violations, pairs=int(v.shape[0] ** 2)
    )


def local_modular_data(
    basis: ModuleClassBasis, tol: Tolerances | None = None, name: str | None = None
) -> tuple[ModularData, np.ndarray]:
    """Modular data of the local modules of a simple-current algebra.

    Solves ``S_D n = n S'`` for the restriction matrix ``n`` of the local
    simples and reads the twist off each restriction. Fixed points are refused.

    Returns:
        The modular data and its restriction matrix (labels x ambient labels).
    """
    tol = resolve(tol)
    if not is_simple_current_algebra(basis.algebra, tol):
        raise ModuleCategoryError("local modular data needs a simple-current algebra")
    locals_ = sorted(basis.local_indices, key=lambda i: support(basis.simples[i].restriction)[0])
    if any(basis.simples[i].representative is None for i in locals_):
        raise ModuleCategoryError("local modules with fixed points are not supported")
    n = np.array([basis.simples[i].restriction for i in locals_], dtype=float).T
    gram = n.T @ n
    s_prime = np.linalg.solve(gram, n.T @ basis.base.s @ n)
    twists = []
    for col in range(n.shape[1]):
        supp = np.flatnonzero(n[:, col] > 0.5)
        twists.append(basis.base.twists[supp[0]])
    labels = [basis.base.labels[support(basis.simples[i].restriction)[0]] for i in locals_]
    md = ModularData(
        name=name or f"({basis.base.name})_A^0",
        labels=tuple(labels),
        s=s_prime,
        twists=np.array(twists),
    )
    restrictions = np.array([basis.simples[i].restriction for i in locals_], dtype=np.int64)
    return md, restrictions

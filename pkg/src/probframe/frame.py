"""Projector sets: forward map, right and affine inverses, classification.

A projector set is an ordered collection of unit kets ``v_a`` in C^n.  It
defines the linear map ``rho -> p`` with ``p_a = <v_a|rho|v_a>``.  In the
real coordinates of :mod:`probframe.matcore` this map is the ``N x n^2``
matrix ``M`` returned by :func:`build_forward_matrix`; reconstruction uses a
right inverse ``W`` with ``W @ M = I``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import matcore
from .errors import (
    NotAffineReconstructible,
    NotRepresentative,
    SearchBudgetExceeded,
    ShapeError,
)

ORTHO_TOL = 1e-9
RANK_RTOL = 1e-9
DEFAULT_SEARCH_LIMIT = 1024
DEFAULT_NODE_BUDGET = 2_000_000


def canonical_phase(ket: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first nonzero amplitude is real and >= 0."""
    nz = np.flatnonzero(np.abs(ket) > tol)
    if nz.size == 0:
        return ket
    lead = ket[nz[0]]
    return ket * (abs(lead) / lead)


@dataclass(frozen=True, eq=False)
class ProjectorSet:
    """Ordered set of unit kets with cached projectors."""

    kets: np.ndarray
    label: str = ""
    ket_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        kets = np.atleast_2d(np.asarray(self.kets, dtype=complex))
        if kets.ndim != 2 or kets.shape[0] == 0:
            raise ShapeError("a projector set needs at least one ket")
        kets = np.array([canonical_phase(matcore.as_ket(v)) for v in kets])
        kets.setflags(write=False)
        object.__setattr__(self, "kets", kets)
        if self.ket_labels is not None:
            if len(self.ket_labels) != kets.shape[0]:
                raise ShapeError("ket_labels length does not match the number of kets")
            object.__setattr__(self, "ket_labels", tuple(self.ket_labels))

    @property
    def dim(self) -> int:
        return self.kets.shape[1]

    def __len__(self) -> int:
        return self.kets.shape[0]

    @cached_property
    def projectors(self) -> np.ndarray:
        p = np.einsum("ai,aj->aij", self.kets, self.kets.conj())
        p.setflags(write=False)
        return p

    def name(self, index: int) -> str:
        if self.ket_labels is not None:
            return self.ket_labels[index]
        return str(index)

    def subset(self, indices, label: str | None = None) -> ProjectorSet:
        indices = list(indices)
        labels = None if self.ket_labels is None else tuple(self.ket_labels[i] for i in indices)
        return ProjectorSet(self.kets[indices], label or f"{self.label}[subset]", labels)


def forward_map(pset: ProjectorSet, rho) -> np.ndarray:
    """Transition probabilities ``p_a = Tr(rho P_a)``.

    *rho* may be any Hermitian matrix; the map is linear on all of H(n).
    """
    rho = matcore.as_matrix(rho)
    if rho.shape != (pset.dim, pset.dim):
        raise ShapeError(f"matrix shape {rho.shape} does not match set dimension {pset.dim}")
    k = pset.kets
    return np.einsum("ai,ij,aj->a", k.conj(), rho, k).real


def build_forward_matrix(pset: ProjectorSet) -> np.ndarray:
    """Real ``N x n^2`` matrix with ``M @ herm_to_coords(rho) == forward_map(pset, rho)``."""
    n = pset.dim
    coords = np.array([matcore.herm_to_coords(p) for p in pset.projectors])
    return coords @ matcore.coords_metric(n)


def _rank(m: np.ndarray, rtol: float = RANK_RTOL) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def rank_of_projector_span(pset: ProjectorSet) -> int:
    return _rank(build_forward_matrix(pset))


def require_representative(pset: ProjectorSet) -> np.ndarray:
    """Return the forward matrix, raising NotRepresentative if its rank is short."""
    m = build_forward_matrix(pset)
    rank = _rank(m)
    if rank < pset.dim**2:
        raise NotRepresentative(rank, pset.dim**2)
    return m


@dataclass(frozen=True, eq=False)
class RightInverse:
    """Real ``n^2 x N`` matrix ``W`` with ``rho = coords_to_herm(W @ p)``."""

    matrix: np.ndarray
    dim: int
    kind: str = "pseudoinverse"

    def reconstruct(self, p) -> np.ndarray:
        return matcore.coords_to_herm(self.matrix @ np.asarray(p, dtype=float))

    def complex_coefficients(self) -> np.ndarray:
        """Coefficients ``c[k, l, a]`` with ``rho[k, l] = sum_a c[k, l, a] p_a``."""
        n = self.dim
        w = self.matrix
        c = np.zeros((n, n, w.shape[1]), dtype=complex)
        c[np.arange(n), np.arange(n)] = w[:n]
        iu = np.triu_indices(n, 1)
        c[iu] = w[n::2] + 1j * w[n + 1 :: 2]
        c[(iu[1], iu[0])] = w[n::2] - 1j * w[n + 1 :: 2]
        return c

    @classmethod
    def from_complex_coefficients(cls, c: np.ndarray, kind: str) -> RightInverse:
        n = c.shape[0]
        iu = np.triu_indices(n, 1)
        w = np.empty((n * n, c.shape[2]))
        w[:n] = c[np.arange(n), np.arange(n)].real
        w[n::2] = c[iu].real
        w[n + 1 :: 2] = c[iu].imag
        return cls(w, n, kind)


def _standard_kets(n: int, completed: bool) -> tuple[list[np.ndarray], list[str]]:
    eye = np.eye(n, dtype=complex)
    s = 1 / np.sqrt(2)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    kets = [eye[a] for a in range(n)]
    labels = [f"z{a}" for a in range(n)]
    kets += [s * (eye[a] + eye[b]) for a, b in pairs]
    labels += [f"x{a}{b}" for a, b in pairs]
    kets += [s * (eye[a] + 1j * eye[b]) for a, b in pairs]
    labels += [f"y{a}{b}" for a, b in pairs]
    if completed:
        kets += [s * (eye[a] - eye[b]) for a, b in pairs]
        labels += [f"x'{a}{b}" for a, b in pairs]
        kets += [s * (eye[a] - 1j * eye[b]) for a, b in pairs]
        labels += [f"y'{a}{b}" for a, b in pairs]
    return kets, labels


def build_standard_set(n: int, completed: bool = False) -> ProjectorSet:
    """The n^2-element set made of basis kets and their (|a> + |b>), (|a> + i|b>) mixes.

    Order: basis kets, then the x pairs (a < b, lexicographic), then the y
    pairs.  With *completed* the (|a> - |b>) and (|a> - i|b>) families are
    appended, giving ``2 n^2 - n`` kets.
    """
    if n < 2:
        raise ValueError("the standard set needs n >= 2")
    kets, labels = _standard_kets(n, completed)
    tag = "completed" if completed else "minimal"
    return ProjectorSet(np.array(kets), f"standard(n={n},{tag})", tuple(labels))


def _closed_form_standard_inverse(n: int) -> np.ndarray:
    # rho_aa = pz_a; for a < b: Re rho_ab = px_ab - (pz_a + pz_b)/2,
    # Im rho_ab = (pz_a + pz_b)/2 - py_ab
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    npair = len(pairs)
    w = np.zeros((n * n, n * n))
    w[:n, :n] = np.eye(n)
    for j, (a, b) in enumerate(pairs):
        re_row, im_row = n + 2 * j, n + 2 * j + 1
        w[re_row, n + j] = 1.0
        w[re_row, [a, b]] = -0.5
        w[im_row, n + npair + j] = -1.0
        w[im_row, [a, b]] = 0.5
    return w


def build_right_inverse(pset: ProjectorSet, kind: str = "pseudoinverse") -> RightInverse:
    """Right inverse of the forward map.

    ``kind="pseudoinverse"`` returns the Moore-Penrose (minimum-norm) inverse.
    ``kind="closed_form"`` is only available for the minimal standard set and
    uses the explicit entry formulas.
    """
    m = require_representative(pset)
    n = pset.dim
    if kind == "pseudoinverse":
        return RightInverse(np.linalg.pinv(m), n, kind)
    if kind == "closed_form":
        reference = build_standard_set(n, completed=False)
        if len(pset) != len(reference) or not np.allclose(pset.kets, reference.kets, atol=1e-12):
            raise ValueError("closed_form inverse is defined only for the minimal standard set")
        return RightInverse(_closed_form_standard_inverse(n), n, kind)
    raise ValueError(f"unknown right-inverse kind {kind!r}")


def decompose_in_projectors(pset: ProjectorSet, target) -> np.ndarray:
    """Real coefficients ``c`` with ``sum_a c_a P_a == target`` (minimum-norm)."""
    n = pset.dim
    target = matcore.as_matrix(target)
    if target.shape != (n, n):
        raise ShapeError(f"target shape {target.shape} does not match dimension {n}")
    columns = np.array([matcore.herm_to_coords(p) for p in pset.projectors]).T
    rank = _rank(columns)
    if rank < n * n:
        raise NotRepresentative(rank, n * n)
    return np.linalg.pinv(columns) @ matcore.herm_to_coords(target)


def compose_sets(s1: ProjectorSet, s2: ProjectorSet) -> ProjectorSet:
    """All products ``v_a (x) u_b``, with the first set's index most significant."""
    kets = np.einsum("ai,bj->abij", s1.kets, s2.kets).reshape(len(s1) * len(s2), s1.dim * s2.dim)
    labels = None
    if s1.ket_labels is not None and s2.ket_labels is not None:
        labels = tuple(a + b for a in s1.ket_labels for b in s2.ket_labels)
    label = f"({s1.label})x({s2.label})"
    return ProjectorSet(kets, label, labels)


def compose_right_inverse(w1: RightInverse, w2: RightInverse) -> RightInverse:
    """Right inverse of the composed set from the product of coefficient tensors."""
    c1 = w1.complex_coefficients()
    c2 = w2.complex_coefficients()
    n, m = w1.dim, w2.dim
    big_n, big_m = c1.shape[2], c2.shape[2]
    c = np.einsum("ika,jlb->ijklab", c1, c2).reshape(n * m, n * m, big_n * big_m)
    return RightInverse.from_complex_coefficients(c, "composed")


@dataclass(frozen=True, eq=False)
class AffineInverse:
    """``rho = coords_to_herm(matrix @ p) + offset`` on trace-one Hermitian matrices."""

    matrix: np.ndarray
    offset: np.ndarray

    def reconstruct(self, p) -> np.ndarray:
        return matcore.coords_to_herm(self.matrix @ np.asarray(p, dtype=float)) + self.offset


def build_affine_inverse(pset: ProjectorSet) -> AffineInverse:
    n = pset.dim
    if len(pset) < n * n - 1:
        raise NotAffineReconstructible(n * n - 1 - len(pset))
    m = build_forward_matrix(pset)
    x0 = matcore.herm_to_coords(np.eye(n) / n)
    # trace-zero directions: diag differences plus every off-diagonal coordinate
    basis = np.zeros((n * n, n * n - 1))
    for k in range(n - 1):
        basis[k, k] = 1.0
        basis[k + 1, k] = -1.0
    basis[n:, n - 1 :] = np.eye(n * n - n)
    mb = m @ basis
    rank = _rank(mb)
    if rank < n * n - 1:
        raise NotAffineReconstructible(n * n - 1 - rank)
    a = basis @ np.linalg.pinv(mb)
    offset = matcore.coords_to_herm(x0 - a @ (m @ x0))
    return AffineInverse(a, offset)


# --- classification -------------------------------------------------------


@dataclass
class Classification:
    """Structural properties of a projector set.

    Combinatorial fields are None when the search was skipped or aborted.
    Completeness, almost-perfection and perfection are judged from the
    orthogonality structure alone; ``representative`` is reported separately.
    """

    representative: bool
    minimal: bool
    rank: int
    complete: bool | None = None
    almost_perfect: bool | None = None
    perfect: bool | None = None
    basis_partition: list[tuple[int, ...]] | None = None
    completion_counts: list[int] | None = None
    non_unique_witness: tuple[int, tuple[int, ...], tuple[int, ...]] | None = None
    collapsed_duplicates: list[tuple[int, int]] = field(default_factory=list)

    def check_monotone(self) -> None:
        if self.perfect:
            assert self.almost_perfect, "perfect set must be almost perfect"
        if self.almost_perfect:
            assert self.complete, "almost perfect set must be complete"
        if self.minimal:
            assert self.representative


def _same_ray(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    return abs(abs(np.vdot(a, b)) - 1.0) < tol


def _dedupe(kets: np.ndarray) -> tuple[list[int], list[tuple[int, int]]]:
    keep: list[int] = []
    dropped: list[tuple[int, int]] = []
    for i, v in enumerate(kets):
        for j in keep:
            if _same_ray(v, kets[j]):
                dropped.append((i, j))
                break
        else:
            keep.append(i)
    return keep, dropped


class _Budget:
    def __init__(self, nodes: int):
        self.left = nodes

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise SearchBudgetExceeded("search node budget exhausted")


def orthogonality_masks(kets: np.ndarray, tol: float = ORTHO_TOL) -> list[int]:
    """Adjacency of the orthogonality graph as integer bitmasks."""
    overlap = np.abs(kets.conj() @ kets.T)
    masks = []
    for i, row in enumerate(overlap < tol):
        row[i] = False
        masks.append(sum(1 << int(j) for j in np.flatnonzero(row)))
    return masks


def _enumerate_bases(masks: list[int], size: int, budget: _Budget) -> list[tuple[int, ...]]:
    """All cliques of *size* vertices (increasing index order)."""
    found: list[tuple[int, ...]] = []

    def grow(clique: list[int], candidates: int):
        budget.tick()
        if len(clique) == size:
            found.append(tuple(clique))
            return
        while candidates:
            low = candidates & -candidates
            v = low.bit_length() - 1
            candidates ^= low
            # only larger indices remain, keeping each clique sorted
            if bin(candidates & masks[v]).count("1") + len(clique) + 1 < size:
                continue
            clique.append(v)
            grow(clique, candidates & masks[v])
            clique.pop()

    all_vertices = (1 << len(masks)) - 1
    grow([], all_vertices)
    return found


def _exact_cover(num_items: int, bases: list[tuple[int, ...]], budget: _Budget) -> list[tuple[int, ...]] | None:
    containing: list[list[int]] = [[] for _ in range(num_items)]
    for b_idx, b in enumerate(bases):
        for v in b:
            containing[v].append(b_idx)
    base_masks = [sum(1 << v for v in b) for b in bases]
    full = (1 << num_items) - 1

    def solve(covered: int, chosen: list[int]) -> list[int] | None:
        budget.tick()
        if covered == full:
            return list(chosen)
        # first-fail: the uncovered item with the fewest usable bases
        best_item, best_opts = -1, None
        for item in range(num_items):
            if covered >> item & 1:
                continue
            opts = [b for b in containing[item] if not base_masks[b] & covered]
            if best_opts is None or len(opts) < len(best_opts):
                best_item, best_opts = item, opts
                if not opts:
                    return None
        for b in best_opts:
            chosen.append(b)
            result = solve(covered | base_masks[b], chosen)
            if result is not None:
                return result
            chosen.pop()
        return None

    picked = solve(0, [])
    if picked is None:
        return None
    return sorted(bases[b] for b in picked)


def classify(
    pset: ProjectorSet,
    search_limit: int = DEFAULT_SEARCH_LIMIT,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Classification:
    """Classify *pset* as representative / minimal / complete / almost perfect / perfect.

    Kets equal up to a global phase are collapsed first (with a warning).
    The combinatorial phases run only when ``N * n <= search_limit``;
    otherwise, or when the backtracking exceeds *node_budget* nodes,
    :class:`SearchBudgetExceeded` is raised carrying the partial result.
    Indices in the result refer to the original (uncollapsed) set.
    """
    n = pset.dim
    keep, dropped = _dedupe(pset.kets)
    if dropped:
        warnings.warn(f"collapsed {len(dropped)} duplicate ket(s) before classification", stacklevel=2)
    kets = pset.kets[keep]
    work = ProjectorSet(kets, pset.label) if dropped else pset
    rank = rank_of_projector_span(work)
    representative = rank == n * n
    result = Classification(
        representative=representative,
        minimal=representative and len(work) == n * n,
        rank=rank,
        collapsed_duplicates=dropped,
    )
    big_n = len(work)
    if big_n * n > search_limit:
        raise SearchBudgetExceeded(
            f"N*n = {big_n * n} exceeds search limit {search_limit}", partial=result
        )

    budget = _Budget(node_budget)
    try:
        masks = orthogonality_masks(kets)
        bases = _enumerate_bases(masks, n, budget)
        counts = [0] * big_n
        by_ket: list[list[tuple[int, ...]]] = [[] for _ in range(big_n)]
        for b in bases:
            for v in b:
                counts[v] += 1
                by_ket[v].append(b)
        result.completion_counts = [0] * len(pset)
        for local, original in enumerate(keep):
            result.completion_counts[original] = counts[local]
        for i, j in dropped:
            result.completion_counts[i] = result.completion_counts[j]
        result.complete = all(c >= 1 for c in counts)
        result.perfect = all(c == 1 for c in counts)
        for v, options in enumerate(by_ket):
            if len(options) >= 2:
                first, second = options[0], options[1]
                result.non_unique_witness = (
                    keep[v],
                    tuple(keep[u] for u in first if u != v),
                    tuple(keep[u] for u in second if u != v),
                )
                break
        if not result.complete:
            result.almost_perfect = False
        else:
            cover = _exact_cover(big_n, bases, budget)
            result.almost_perfect = cover is not None
            if cover is not None:
                result.basis_partition = [tuple(keep[u] for u in b) for b in cover]
    except SearchBudgetExceeded as exc:
        raise SearchBudgetExceeded(str(exc), partial=result) from None
    result.check_monotone()
    return result


def completions_of(pset: ProjectorSet, index: int, tol: float = ORTHO_TOL) -> list[tuple[int, ...]]:
    """Every set of ``n - 1`` kets completing ket *index* to an orthonormal basis."""
    masks = orthogonality_masks(pset.kets, tol)
    n = pset.dim
    neighbours = [j for j in range(len(pset)) if masks[index] >> j & 1]
    out = []
    for combo in itertools.combinations(neighbours, n - 1):
        if all(masks[a] >> b & 1 for a, b in itertools.combinations(combo, 2)):
            out.append(combo)
    return out

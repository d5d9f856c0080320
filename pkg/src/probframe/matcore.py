"""Dense complex-matrix kernel.

Real coordinates of a Hermitian ``n x n`` matrix (``herm_to_coords``) are
laid out as the ``n`` diagonal entries followed, for every pair ``k < l`` in
lexicographic order, by ``Re h[k, l]`` and ``Im h[k, l]``.  Every inversion
matrix elsewhere in the package is expressed in this ordering.

Kronecker products put the first factor's index most significant.
"""

from __future__ import annotations

import numpy as np

from .errors import HermiticityError, NegativityError, NormError, ShapeError, TraceError

TOL_HERM = 1e-12
TOL_TRACE = 1e-10
TOL_PSD = 1e-9
TOL_NORM = 1e-9


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_ket(v, tol: float = TOL_NORM) -> np.ndarray:
    ket = np.asarray(v, dtype=complex).reshape(-1)
    norm = np.linalg.norm(ket)
    if abs(norm - 1.0) > tol:
        raise NormError(norm)
    return ket


def projector_of(v, tol: float = TOL_NORM) -> np.ndarray:
    """Return the rank-one projector ``|v><v|`` of a unit ket."""
    ket = as_ket(v, tol)
    return np.outer(ket, ket.conj())


def tensor_product(a, b) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def trace_inner(a, b, conjugated: bool = False) -> complex:
    """``Tr(a b)``, or ``Tr(a b^dagger)`` when *conjugated* is set."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    if conjugated:
        return complex(np.sum(a * b.conj()))
    return complex(np.sum(a * b.T))


def unit_matrix(n: int, k: int, l: int) -> np.ndarray:
    """``E_kl``: the matrix with a single 1 at (k, l), 0-based."""
    e = np.zeros((n, n), dtype=complex)
    e[k, l] = 1.0
    return e


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(k, l) for k in range(n) for l in range(k + 1, n)]


def hermitian_pair_basis(n: int) -> list[np.ndarray]:
    """Basis of H(n) made of the matrices H+_kl (k >= l) and H-_kl (k > l).

    Order follows the real-coordinate layout: H+_kk for every k, then for each
    pair (l, k) with l < k the two matrices H+_kl and H-_kl.  With 0-based
    indices ``H+_kl = (E_kl + E_lk)/2`` and ``H-_kl = i(E_kl - E_lk)/2``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    basis = [unit_matrix(n, k, k) for k in range(n)]
    for l, k in _pairs(n):
        basis.append((unit_matrix(n, k, l) + unit_matrix(n, l, k)) / 2)
        basis.append(1j * (unit_matrix(n, k, l) - unit_matrix(n, l, k)) / 2)
    return basis


def herm_to_coords(h) -> np.ndarray:
    h = as_matrix(h)
    n = h.shape[0]
    iu = np.triu_indices(n, 1)
    upper = h[iu]
    coords = np.empty(n * n)
    coords[:n] = np.diagonal(h).real
    coords[n::2] = upper.real
    coords[n + 1 :: 2] = upper.imag
    return coords


def coords_to_herm(c) -> np.ndarray:
    c = np.asarray(c, dtype=float).reshape(-1)
    n = int(round(np.sqrt(c.size)))
    if n * n != c.size:
        raise ShapeError(f"{c.size} coordinates do not describe a square matrix")
    h = np.zeros((n, n), dtype=complex)
    h[np.diag_indices(n)] = c[:n]
    iu = np.triu_indices(n, 1)
    h[iu] = c[n::2] + 1j * c[n + 1 :: 2]
    h[(iu[1], iu[0])] = c[n::2] - 1j * c[n + 1 :: 2]
    return h


def coords_metric(n: int) -> np.ndarray:
    """Gram matrix K of the trace inner product in real coordinates.

    ``Tr(A B) = herm_to_coords(A) @ K @ herm_to_coords(B)`` for Hermitian A, B.
    """
    return np.diag(np.concatenate([np.ones(n), np.full(n * (n - 1), 2.0)]))


def hermiticity_residual(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T), initial=0.0))


def validate_density(
    m,
    tol_herm: float = TOL_HERM,
    tol_trace: float = TOL_TRACE,
    tol_psd: float = TOL_PSD,
) -> np.ndarray:
    """Check that *m* is a density matrix and return it as a read-only array.

    The hermiticity tolerance is relative to the largest entry.  All
    invariants are evaluated before raising; the raised exception is the
    first violation in the order hermiticity, trace, negativity, and its
    ``violations`` attribute lists all of them.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"density matrix must be square, got {m.shape}")
    scale = max(float(np.max(np.abs(m), initial=0.0)), 1.0)
    violations: list[tuple[type, str, float]] = []

    herm_res = hermiticity_residual(m)
    if herm_res > tol_herm * scale:
        violations.append((HermiticityError, "hermiticity", herm_res))
    trace_dev = abs(np.trace(m) - 1.0)
    if trace_dev > tol_trace:
        violations.append((TraceError, "trace", trace_dev))
    # symmetrize before the spectral test to drop round-off asymmetry
    min_eig = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
    if min_eig < -tol_psd:
        violations.append((NegativityError, "negativity", min_eig))

    if violations:
        cls, _, residual = violations[0]
        raise cls(residual, [(name, value) for _, name, value in violations])
    out = m.copy()
    out.setflags(write=False)
    return out


def is_unitary(u, tol: float = 1e-9) -> bool:
    return unitarity_residual(u) < tol


def unitarity_residual(u) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def embed_operator(op, targets, num_qubits: int) -> np.ndarray:
    """Embed a ``d^l x d^l`` operator acting on *targets* into the full space.

    Subsystems are qubits (local dimension 2 by default), 0-based, with qubit
    0 the most significant tensor factor.
    """
    return embed_local(np.asarray(op), targets, num_qubits, local_dim=2)


def embed_local(op: np.ndarray, targets, num_sites: int, local_dim: int) -> np.ndarray:
    targets = list(targets)
    l = len(targets)
    if len(set(targets)) != l or any(not 0 <= t < num_sites for t in targets):
        raise IndexError(f"invalid targets {targets} for {num_sites} sites")
    if op.shape != (local_dim**l, local_dim**l):
        raise ShapeError(f"operator shape {op.shape} does not match {l} target(s)")
    rest = [q for q in range(num_sites) if q not in targets]
    full = np.kron(op, np.eye(local_dim ** len(rest), dtype=op.dtype))
    full = full.reshape([local_dim] * (2 * num_sites))
    # axis j of the kron layout belongs to site order[j]
    order = targets + rest
    perm = [order.index(q) for q in range(num_sites)]
    perm = perm + [num_sites + p for p in perm]
    dim = local_dim**num_sites
    return full.transpose(perm).reshape(dim, dim)

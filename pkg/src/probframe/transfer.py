"""Gates and channels as real transfer matrices.

Pauli transfer matrices act forward on Pauli-parameter tensors,
``t' = A t`` with ``A[K, J] = 2^-l Tr(sigma_K E(sigma_J))``.  For a unitary
``E(rho) = U rho U^dagger`` this is ``2^-l Tr(sigma_J U^dagger sigma_K U)``.
They are applied locally by contracting only the target axes of the tensor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import frame, gates, matcore, qubitframe
from .errors import NotUnitary, ShapeError
from .oracle import Circuit, Step


@dataclass(frozen=True, eq=False)
class PauliTransferMatrix:
    matrix: np.ndarray
    arity: int
    trace_preserving: bool = True

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.shape != (4**self.arity, 4**self.arity):
            raise ShapeError(f"PTM of arity {self.arity} must be {4**self.arity}x{4**self.arity}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    def __matmul__(self, other: PauliTransferMatrix) -> PauliTransferMatrix:
        return PauliTransferMatrix(
            self.matrix @ other.matrix, self.arity, self.trace_preserving and other.trace_preserving
        )


def _ptm_from_kraus(ops, arity: int) -> np.ndarray:
    strings = qubitframe.all_pauli_strings(arity)
    images = sum(np.einsum("ij,bjk,lk->bil", v, strings, v.conj()) for v in ops)
    # A[K, J] = 2^-l Tr(sigma_K images[J])
    return np.einsum("kij,bji->kb", strings, images).real / 2**arity


def ptm_of_unitary(u, arity: int | None = None, tol: float = 1e-9) -> PauliTransferMatrix:
    u = matcore.as_matrix(u)
    if arity is None:
        arity = qubitframe.num_qubits_of_dim(u.shape[0])
    if u.shape != (2**arity, 2**arity):
        raise ShapeError(f"unitary shape {u.shape} does not match arity {arity}")
    residual = matcore.unitarity_residual(u)
    if residual > tol:
        raise NotUnitary(residual)
    return PauliTransferMatrix(_ptm_from_kraus([u], arity), arity, True)


def ptm_of_channel(channel: gates.KrausChannel) -> PauliTransferMatrix:
    """Sum of the per-Kraus-operator transfer matrices."""
    return PauliTransferMatrix(_ptm_from_kraus(channel.kraus_ops, channel.arity), channel.arity, True)


def so3_of_su2(u, tol: float = 1e-9) -> np.ndarray:
    """Rotation of the Bloch vector induced by a single-qubit unitary.

    Returns ``R`` with ``R[i, j] = Tr(sigma_i U sigma_j U^dagger) / 2``, so the
    parameters transform as ``t'[1:] = R @ t[1:]`` and ``U -> R`` is a group
    homomorphism.  The matrix ``O`` defined by
    ``U sigma_i U^dagger = sum_j O[i, j] sigma_j`` is ``R.T`` (= ``R^-1``).
    """
    u = matcore.as_matrix(u)
    if u.shape != (2, 2):
        raise ShapeError("so3_of_su2 needs a 2x2 matrix")
    residual = matcore.unitarity_residual(u)
    if residual > tol:
        raise NotUnitary(residual)
    p = qubitframe.PAULI[1:]
    conj = np.einsum("ij,bjk,lk->bil", u, p, u.conj())
    return np.einsum("aij,bji->ab", p, conj).real / 2


def apply_local(t, ptm: PauliTransferMatrix, targets) -> np.ndarray:
    """Apply *ptm* to the target qubits (0-based) of Pauli tensor *t*."""
    t = np.asarray(t, dtype=float)
    m = t.ndim
    targets = [int(q) for q in targets]
    if len(targets) != ptm.arity:
        raise IndexError(f"PTM of arity {ptm.arity} given {len(targets)} target(s)")
    if len(set(targets)) != len(targets) or any(not 0 <= q < m for q in targets):
        raise IndexError(f"invalid targets {targets} for {m} qubit(s)")
    l = ptm.arity
    if targets == list(range(m)):
        return (ptm.matrix @ t.reshape(-1)).reshape(t.shape)
    a = ptm.matrix.reshape([4] * (2 * l))
    # contracted result has the l output axes first, then the untouched axes in order
    out = np.tensordot(a, t, axes=(list(range(l, 2 * l)), targets))
    return np.moveaxis(out, list(range(l)), targets)


def embed_ptm(ptm: PauliTransferMatrix, targets, num_qubits: int) -> np.ndarray:
    """Full ``4^m x 4^m`` matrix of *ptm* acting on *targets* (identity elsewhere)."""
    return matcore.embed_local(ptm.matrix, targets, num_qubits, local_dim=4)


# --- circuits ------------------------------------------------------------------


def ptm_of_step(step: Step) -> PauliTransferMatrix:
    if step.is_channel:
        return ptm_of_channel(gates.channel_for(step.name, step.params))
    return ptm_of_unitary(gates.unitary_for(step.name, step.params))


def compile_circuit(circuit: Circuit) -> list[tuple[PauliTransferMatrix, tuple[int, ...]]]:
    cache: dict[tuple, PauliTransferMatrix] = {}
    program = []
    for step in circuit.steps:
        key = (step.name, step.params)
        if key not in cache:
            cache[key] = ptm_of_step(step)
        program.append((cache[key], step.targets))
    return program


def basis_tensor(num_qubits: int) -> np.ndarray:
    """Pauli tensor of ``|0...0>``: product of ``(1, 0, 0, 1)`` on every qubit."""
    return qubitframe.product_tensor([np.array([1.0, 0.0, 0.0, 1.0])] * num_qubits)


def simulate_tensor(circuit: Circuit, initial=None) -> list[np.ndarray]:
    """Pauli-tensor trajectory of *circuit*, one entry per step plus the initial state."""
    t = basis_tensor(circuit.num_qubits) if initial is None else np.asarray(initial, dtype=float)
    if t.shape != (4,) * circuit.num_qubits:
        raise ShapeError("initial tensor does not match the circuit's qubit count")
    trajectory = [t]
    for ptm, targets in compile_circuit(circuit):
        t = apply_local(t, ptm, targets)
        trajectory.append(t)
    return trajectory


# --- probability-space transfer ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProbTransferMatrix:
    """``N x N`` matrix with ``p' = A p``; canonical only on the image subspace."""

    matrix: np.ndarray
    minimal: bool


def superoperator_in_coords(source, dim: int) -> np.ndarray:
    """Real ``n^2 x n^2`` matrix of a unitary or channel in Hermitian coordinates."""
    if isinstance(source, gates.KrausChannel):
        apply = source.apply
        if 2**source.arity != dim:
            raise ShapeError("channel dimension does not match the set")
    else:
        u = matcore.as_matrix(source)
        if u.shape != (dim, dim):
            raise ShapeError("unitary dimension does not match the set")
        residual = matcore.unitarity_residual(u)
        if residual > 1e-9:
            raise NotUnitary(residual)

        def apply(rho):
            return u @ rho @ u.conj().T

    cols = []
    for e in np.eye(dim * dim):
        cols.append(matcore.herm_to_coords(apply(matcore.coords_to_herm(e))))
    return np.array(cols).T


def prob_transfer_of(pset: frame.ProjectorSet, w: frame.RightInverse, source) -> ProbTransferMatrix:
    """``A = M T W``: reconstruct, evolve, re-measure."""
    m = frame.require_representative(pset)
    n = pset.dim
    t = superoperator_in_coords(source, n)
    return ProbTransferMatrix(m @ t @ w.matrix, len(pset) == n * n)


# --- metric and expectation values ---------------------------------------------------


def transition_metric(pset: frame.ProjectorSet, w: frame.RightInverse) -> np.ndarray:
    """Symmetric ``G`` with ``p @ G @ q = Tr(rho_p rho_q)``."""
    frame.require_representative(pset)
    k = matcore.coords_metric(pset.dim)
    g = w.matrix.T @ k @ w.matrix
    return (g + g.T) / 2


def expectation(pset: frame.ProjectorSet, w: frame.RightInverse, p, x) -> float:
    """``Tr(rho X)`` where rho is reconstructed from the probabilities *p*."""
    x = matcore.as_matrix(x)
    if x.shape != (pset.dim, pset.dim):
        raise ShapeError("observable dimension does not match the set")
    p = np.asarray(p, dtype=float)
    if p.shape != (len(pset),):
        raise ShapeError(f"expected {len(pset)} probabilities, got {p.shape}")
    frame.require_representative(pset)
    k = matcore.coords_metric(pset.dim)
    return float(matcore.herm_to_coords(x) @ k @ (w.matrix @ p))

"""Pauli parameters and six-state probabilities for m qubits.

Tensors are numpy arrays with one axis per qubit, qubit 0 first (most
significant in the row-major flattening):

* Pauli-parameter tensor ``t``, shape ``(4,) * m``:
  ``t[n1, ..., nm] = Tr(rho sigma^n1 (x) ... (x) sigma^nm)`` with
  ``sigma^0..3 = I, X, Y, Z``.
* Probability tensor ``p``, shape ``(6,) * m``: per-qubit index
  ``2 * (mu - 1) + theta`` for axis ``mu`` in 1..3 (x, y, z) and outcome
  ``theta`` in {0, 1}, i.e. the order ``0x, 1x, 0y, 1y, 0z, 1z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import frame, matcore
from .errors import InconsistentProbabilities, ShapeError

PAULI = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
PAULI.setflags(write=False)

AXIS_NAMES = "xyz"
SIX_STATE_LABELS = tuple(f"{theta}{axis}" for axis in AXIS_NAMES for theta in (0, 1))

LAYOUT_VERSION = 1
NORMALIZATION_TOL = 1e-6


def six_index(mu: int, theta: int) -> int:
    """Flat six-state index for axis ``mu`` in 1..3 and outcome ``theta``."""
    if mu not in (1, 2, 3) or theta not in (0, 1):
        raise ValueError(f"invalid six-state index mu={mu}, theta={theta}")
    return 2 * (mu - 1) + theta


def eigenvalue(theta: int) -> int:
    return -1 if theta else 1


def pauli_string(indices) -> np.ndarray:
    indices = list(indices)
    if not indices:
        raise ValueError("a Pauli string needs at least one index")
    return reduce(np.kron, (PAULI[i] for i in indices))


def all_pauli_strings(m: int) -> np.ndarray:
    """Stack of the ``4^m`` Pauli strings in row-major index order."""
    out = PAULI
    for _ in range(m - 1):
        out = np.einsum("aij,bkl->abikjl", out, PAULI).reshape(
            out.shape[0] * 4, out.shape[1] * 2, out.shape[2] * 2
        )
    return out


def _six_kets() -> np.ndarray:
    s = 1 / np.sqrt(2)
    return np.array(
        [
            [s, s],
            [s, -s],
            [s, 1j * s],
            [s, -1j * s],
            [1, 0],
            [0, 1],
        ],
        dtype=complex,
    )


def six_state_set(m: int = 1) -> frame.ProjectorSet:
    if m < 1:
        raise ValueError("m must be >= 1")
    single = frame.ProjectorSet(_six_kets(), "six-state", SIX_STATE_LABELS)
    out = single
    for _ in range(m - 1):
        out = frame.compose_sets(out, single)
    return frame.ProjectorSet(out.kets, f"six-state^{m}", out.ket_labels)


# Per-qubit linear maps.  Applying one to every axis of a tensor realizes
# the corresponding m-qubit map as a tensor product.

# (i, j) -> nu : t_nu = sum_ij rho_ij sigma^nu_ji
_RHO_TO_TILDE = np.einsum("nji->nij", PAULI).reshape(4, 4)
# nu -> (i, j) : rho_ij = 1/2 sum_nu t_nu sigma^nu_ij
_TILDE_TO_RHO = PAULI.reshape(4, 4).T / 2

_TILDE_TO_P = np.zeros((6, 4))
for _mu in (1, 2, 3):
    for _theta in (0, 1):
        _TILDE_TO_P[six_index(_mu, _theta), 0] = 0.5
        _TILDE_TO_P[six_index(_mu, _theta), _mu] = 0.5 * eigenvalue(_theta)

_P_TO_TILDE_CANONICAL = np.zeros((4, 6))
_P_TO_TILDE_AVERAGE = np.zeros((4, 6))
for _mu in (1, 2, 3):
    for _theta in (0, 1):
        _P_TO_TILDE_CANONICAL[_mu, six_index(_mu, _theta)] = eigenvalue(_theta)
        _P_TO_TILDE_AVERAGE[_mu, six_index(_mu, _theta)] = eigenvalue(_theta)
        _P_TO_TILDE_AVERAGE[0, six_index(_mu, _theta)] = 1 / 3
_P_TO_TILDE_CANONICAL[0, six_index(3, 0)] = 1.0
_P_TO_TILDE_CANONICAL[0, six_index(3, 1)] = 1.0

_OUTCOME_SUMS = np.zeros((3, 6))
for _mu in (1, 2, 3):
    _OUTCOME_SUMS[_mu - 1, [six_index(_mu, 0), six_index(_mu, 1)]] = 1.0

POLICIES = ("canonical_z", "average")


def apply_each_axis(tensor: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Contract *mat* (out x in) against every axis of *tensor*."""
    out = tensor
    for axis in range(tensor.ndim):
        out = np.moveaxis(np.tensordot(mat, out, axes=([1], [axis])), 0, axis)
    return out


def num_qubits_of_dim(dim: int) -> int:
    m = int(dim).bit_length() - 1
    if dim < 2 or 1 << m != dim:
        raise ShapeError(f"dimension {dim} is not a power of two")
    return m


def tilde_from_rho(rho, imag_tol: float = 1e-12) -> np.ndarray:
    """Pauli parameters ``Tr(rho sigma^nu)`` of a Hermitian matrix."""
    rho = matcore.as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise ShapeError(f"matrix must be square, got {rho.shape}")
    m = num_qubits_of_dim(rho.shape[0])
    # index order (i1..im, j1..jm) -> (i1, j1, i2, j2, ...)
    pairs = rho.reshape([2] * (2 * m))
    pairs = pairs.transpose([a for k in range(m) for a in (k, m + k)]).reshape([4] * m)
    t = apply_each_axis(pairs, _RHO_TO_TILDE)
    scale = max(1.0, float(np.max(np.abs(t))))
    if np.max(np.abs(t.imag)) > imag_tol * scale:
        raise ValueError("matrix is not Hermitian: Pauli parameters have an imaginary part")
    return t.real.copy()


def rho_from_tilde(t) -> np.ndarray:
    """Hermitian matrix ``2^-m sum_nu t_nu sigma^nu``; positivity is not checked."""
    t = np.asarray(t, dtype=float)
    m = t.ndim
    if t.shape != (4,) * m or m == 0:
        raise ShapeError(f"Pauli tensor must have shape (4,)*m, got {t.shape}")
    pairs = apply_each_axis(t.astype(complex), _TILDE_TO_RHO).reshape([2] * (2 * m))
    # (i1, j1, i2, j2, ...) -> (i1..im, j1..jm)
    order = [2 * k for k in range(m)] + [2 * k + 1 for k in range(m)]
    return pairs.transpose(order).reshape(2**m, 2**m)


def _check_pauli(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if t.ndim == 0 or t.shape != (4,) * t.ndim:
        raise ShapeError(f"Pauli tensor must have shape (4,)*m, got {t.shape}")
    return t


def _check_prob(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim == 0 or p.shape != (6,) * p.ndim:
        raise ShapeError(f"probability tensor must have shape (6,)*m, got {p.shape}")
    return p


def p_from_tilde(t) -> np.ndarray:
    """Six-state probabilities from Pauli parameters.

    Each entry is ``2^-m`` times the sum over qubit subsets S of
    ``prod_{k in S} lambda_k * t`` with the axis index on S and 0 elsewhere.
    """
    return apply_each_axis(_check_pauli(t), _TILDE_TO_P)


def outcome_sums(p) -> np.ndarray:
    """For each axis assignment (shape ``(3,) * m``), the sum over outcomes."""
    return apply_each_axis(_check_prob(p), _OUTCOME_SUMS)


def check_normalization(p, tol: float = NORMALIZATION_TOL) -> None:
    sums = outcome_sums(p)
    dev = np.abs(sums - 1.0)
    worst = np.unravel_index(int(np.argmax(dev)), dev.shape)
    if dev[worst] > tol:
        axes = tuple(int(a) + 1 for a in worst)
        raise InconsistentProbabilities(axes, float(sums[worst]))


def tilde_from_p(p, zero_axis_policy: str = "canonical_z", tol: float = NORMALIZATION_TOL) -> np.ndarray:
    """Pauli parameters from six-state probabilities.

    Entries with a nonzero index on every qubit have a unique expression.
    Where some ``nu_k = 0`` the measurement axis of qubit k is free:
    ``canonical_z`` uses the z axis, ``average`` averages over x, y, z.
    """
    p = _check_prob(p)
    check_normalization(p, tol)
    if zero_axis_policy == "canonical_z":
        mat = _P_TO_TILDE_CANONICAL
    elif zero_axis_policy == "average":
        mat = _P_TO_TILDE_AVERAGE
    else:
        raise ValueError(f"unknown zero-axis policy {zero_axis_policy!r}; use one of {POLICIES}")
    return apply_each_axis(p, mat)


@dataclass(frozen=True)
class MarginalTable:
    """Single-qubit marginals.

    ``probabilities[k, mu - 1, theta]`` is the probability of outcome theta
    when qubit k is measured along axis mu; ``parameters[k]`` holds that
    qubit's Pauli parameters (entry 0 is 1).
    """

    probabilities: np.ndarray
    parameters: np.ndarray


def marginals(t) -> MarginalTable:
    t = _check_pauli(t)
    m = t.ndim
    params = np.empty((m, 4))
    for k in range(m):
        index = [0] * m
        for nu in range(4):
            index[k] = nu
            params[k, nu] = t[tuple(index)]
    params[:, 0] = 1.0
    lam = np.array([1.0, -1.0])
    probs = 0.5 * (1.0 + lam[None, None, :] * params[:, 1:, None])
    return MarginalTable(probs, params)


def marginals_from_p(p, qubit: int, other_axes=None) -> np.ndarray:
    """Single-qubit marginal ``(3, 2)`` table by summing outcomes of the other qubits.

    *other_axes* fixes the (1-based) measurement axis of every other qubit;
    default z.  Any choice gives the same result on consistent data.
    """
    p = _check_prob(p)
    m = p.ndim
    if other_axes is None:
        other_axes = [3] * m
    out = np.zeros((3, 2))
    for mu in (1, 2, 3):
        for theta in (0, 1):
            total = 0.0
            for outcomes in np.ndindex(*([2] * m)):
                if outcomes[qubit] != theta:
                    continue
                idx = tuple(
                    six_index(mu, theta) if k == qubit else six_index(other_axes[k], outcomes[k])
                    for k in range(m)
                )
                total += p[idx]
            out[mu - 1, theta] = total
    return out


def product_tensor(parts) -> np.ndarray:
    parts = [_check_pauli(part) for part in parts]
    if not parts:
        raise ValueError("need at least one factor")
    return reduce(np.multiply.outer, parts)


@dataclass(frozen=True)
class ProductTest:
    is_product: bool
    singular_values: np.ndarray
    factors: tuple[np.ndarray, np.ndarray] | None = None


def is_product(t, cut: int, tol: float = 1e-10) -> ProductTest:
    """Test whether *t* factors across the cut after qubit ``cut - 1``.

    The tensor is reshaped to ``4^cut x 4^(m - cut)``; it is a product when
    the second singular value is below ``tol`` times the first.  Factors are
    normalized so each has leading entry equal to the input's leading entry
    split as ``(t0, 1)``.
    """
    t = _check_pauli(t)
    m = t.ndim
    if not 1 <= cut < m:
        raise ValueError(f"cut must satisfy 1 <= cut < {m}")
    mat = t.reshape(4**cut, 4 ** (m - cut))
    u, s, vh = np.linalg.svd(mat)
    second = s[1] if s.size > 1 else 0.0
    if s[0] == 0 or second >= tol * s[0]:
        return ProductTest(False, s)
    right = vh[0]
    pivot = right[0] if abs(right[0]) > 1e-12 else 1.0
    left = u[:, 0] * s[0] * pivot
    right = right / pivot
    factors = (left.reshape((4,) * cut), right.reshape((4,) * (m - cut)))
    if np.max(np.abs(np.multiply.outer(*factors) - t)) > tol * max(1.0, s[0]):
        return ProductTest(False, s)
    return ProductTest(True, s, factors)

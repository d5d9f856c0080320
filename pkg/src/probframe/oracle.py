"""Dense density-matrix reference simulator and seeded instance generators.

This module works only with full ``2^m x 2^m`` density matrices.  It never
touches Pauli tensors or transfer matrices, so it serves as independent
ground truth for them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gates, matcore
from .errors import RangeError, ShapeError

RNG_NAME = "numpy.random.Generator(PCG64)"

UNITARY_GATES = ("h", "x", "y", "z", "s", "t", "rx", "ry", "rz", "cnot", "cz")
GATE_SET = UNITARY_GATES + gates.CHANNELS


@dataclass(frozen=True)
class Step:
    name: str
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()

    @property
    def is_channel(self) -> bool:
        return self.name in gates.CHANNELS


_PARAM_COUNT = {name: 0 for name in GATE_SET}
_PARAM_COUNT.update(rx=1, ry=1, rz=1, depol=1, ampdamp=1)


def check_step(step: Step, num_qubits: int, line: int = 0) -> None:
    """Raise :class:`RangeError` if *step* is not valid on *num_qubits* qubits."""
    if step.name not in GATE_SET:
        raise RangeError(line, 1, f"unknown gate {step.name!r}")
    arity = gates.GATE_ARITY[step.name]
    if len(step.targets) != arity:
        raise RangeError(line, 1, f"{step.name} takes {arity} qubit(s)")
    if len(step.params) != _PARAM_COUNT[step.name]:
        raise RangeError(line, 1, f"{step.name} takes {_PARAM_COUNT[step.name]} parameter(s)")
    for q in step.targets:
        if not 0 <= q < num_qubits:
            raise RangeError(line, 1, f"qubit {q} out of range 0..{num_qubits - 1}")
    if len(set(step.targets)) != len(step.targets):
        raise RangeError(line, 1, f"duplicate target in {step.name}")
    if step.name in gates.CHANNELS and not 0.0 <= step.params[0] <= 1.0:
        raise RangeError(line, 1, f"{step.name} parameter {step.params[0]} outside [0, 1]")
    if any(not np.isfinite(x) for x in step.params):
        raise RangeError(line, 1, "non-finite parameter")


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    steps: tuple[Step, ...] = ()

    def __post_init__(self):
        if self.num_qubits < 1:
            raise RangeError(0, 1, "a circuit needs at least one qubit")
        object.__setattr__(self, "steps", tuple(self.steps))
        for step in self.steps:
            check_step(step, self.num_qubits)


def basis_density(num_qubits: int) -> np.ndarray:
    """``|0...0><0...0|``."""
    rho = np.zeros((2**num_qubits, 2**num_qubits), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def _num_qubits(rho: np.ndarray) -> int:
    d = rho.shape[0]
    m = d.bit_length() - 1
    if rho.shape != (d, d) or 1 << m != d:
        raise ShapeError(f"density matrix shape {rho.shape} is not 2^m x 2^m")
    return m


def evolve_unitary(rho, u, targets) -> np.ndarray:
    rho = matcore.as_matrix(rho)
    m = _num_qubits(rho)
    full = matcore.embed_operator(u, targets, m)
    return full @ rho @ full.conj().T


def evolve_channel(rho, channel: gates.KrausChannel, targets) -> np.ndarray:
    rho = matcore.as_matrix(rho)
    m = _num_qubits(rho)
    out = np.zeros_like(rho)
    for v in channel.kraus_ops:
        full = matcore.embed_operator(v, targets, m)
        out += full @ rho @ full.conj().T
    return out


def apply_step(rho: np.ndarray, step: Step) -> np.ndarray:
    if step.is_channel:
        return evolve_channel(rho, gates.channel_for(step.name, step.params), step.targets)
    return evolve_unitary(rho, gates.unitary_for(step.name, step.params), step.targets)


def simulate_density(circuit: Circuit, initial=None) -> list[np.ndarray]:
    """Trajectory ``[rho_0, rho_1, ..., rho_depth]``; every state is validated."""
    rho = basis_density(circuit.num_qubits) if initial is None else matcore.as_matrix(initial)
    if rho.shape != (2**circuit.num_qubits,) * 2:
        raise ShapeError("initial state does not match the circuit's qubit count")
    trajectory = [matcore.validate_density(rho)]
    for step in circuit.steps:
        rho = apply_step(rho, step)
        trajectory.append(matcore.validate_density(rho))
    return trajectory


# --- random instances -------------------------------------------------------


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_circuit(num_qubits: int, depth: int, rng: np.random.Generator, gate_set=GATE_SET) -> Circuit:
    names = [g for g in gate_set if gates.GATE_ARITY[g] <= num_qubits]
    steps = []
    for _ in range(depth):
        name = names[rng.integers(len(names))]
        targets = tuple(int(q) for q in rng.choice(num_qubits, size=gates.GATE_ARITY[name], replace=False))
        if name in gates.ROTATIONS:
            params = (float(rng.uniform(0, 2 * np.pi)),)
        elif name in gates.CHANNELS:
            params = (float(rng.uniform(0, 1)),)
        else:
            params = ()
        steps.append(Step(name, targets, params))
    return Circuit(num_qubits, tuple(steps))


def random_instance(kind: str, size, seed: int):
    """Deterministic random instance.

    ``kind`` is one of ``pure_state``, ``density``, ``unitary`` (size is the
    Hilbert-space dimension) or ``circuit`` (size is ``(num_qubits, depth)``).
    """
    rng = np.random.default_rng(seed)
    if kind == "pure_state":
        return random_pure_state(size, rng)
    if kind == "density":
        return random_density(size, rng)
    if kind == "unitary":
        return random_unitary(size, rng)
    if kind == "circuit":
        num_qubits, depth = size
        return random_circuit(num_qubits, depth, rng)
    raise ValueError(f"unknown instance kind {kind!r}")

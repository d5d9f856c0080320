"""Named gates and Kraus channels used by circuits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, TraceConditionViolated

KRAUS_TOL = 1e-9

_S2 = 1 / np.sqrt(2)

FIXED_GATES = {
    "h": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "s": np.array([[1, 0], [0, 1j]], dtype=complex),
    "t": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "cnot": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
}
for _g in FIXED_GATES.values():
    _g.setflags(write=False)

ROTATIONS = ("rx", "ry", "rz")
CHANNELS = ("depol", "ampdamp")
GATE_ARITY = {**{name: int(np.log2(g.shape[0])) for name, g in FIXED_GATES.items()},
              "rx": 1, "ry": 1, "rz": 1, "depol": 1, "ampdamp": 1}


def rotation(axis: str, angle: float) -> np.ndarray:
    """``exp(-i angle sigma_axis / 2)``."""
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if axis == "z":
        return np.array([[np.exp(-1j * angle / 2), 0], [0, np.exp(1j * angle / 2)]], dtype=complex)
    raise ValueError(f"unknown rotation axis {axis!r}")


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Channel ``rho -> sum_k V_k rho V_k^dagger`` on ``arity`` qubits."""

    kraus_ops: tuple
    arity: int = 1

    def __post_init__(self):
        ops = tuple(np.asarray(v, dtype=complex) for v in self.kraus_ops)
        d = 2**self.arity
        if not ops or any(v.shape != (d, d) for v in ops):
            raise ShapeError(f"Kraus operators must all be {d}x{d}")
        residual = float(np.max(np.abs(sum(v.conj().T @ v for v in ops) - np.eye(d))))
        if residual > KRAUS_TOL:
            raise TraceConditionViolated(residual)
        object.__setattr__(self, "kraus_ops", ops)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(v @ rho @ v.conj().T for v in self.kraus_ops)


def depolarizing(lam: float) -> KrausChannel:
    """Single-qubit depolarizing channel: Bloch vector shrinks by ``1 - lam``."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError("depolarizing parameter must lie in [0, 1]")
    ops = [np.sqrt(1 - 3 * lam / 4) * np.eye(2, dtype=complex)]
    ops += [np.sqrt(lam / 4) * FIXED_GATES[p] for p in "xyz"]
    return KrausChannel(tuple(ops))


def amplitude_damping(gamma: float) -> KrausChannel:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("damping parameter must lie in [0, 1]")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return KrausChannel((k0, k1))


def unitary_for(name: str, params=()) -> np.ndarray:
    if name in FIXED_GATES:
        return FIXED_GATES[name]
    if name in ROTATIONS:
        return rotation(name[1], float(params[0]))
    raise KeyError(f"{name!r} is not a unitary gate")


def channel_for(name: str, params=()) -> KrausChannel:
    if name == "depol":
        return depolarizing(float(params[0]))
    if name == "ampdamp":
        return amplitude_damping(float(params[0]))
    raise KeyError(f"{name!r} is not a channel")

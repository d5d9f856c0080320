"""Timing of local PTM contraction against the dense 4^m x 4^m superoperator."""

from __future__ import annotations

import platform
import time

import numpy as np

from . import oracle, transfer


def environment_fingerprint() -> dict:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "machine": platform.machine(),
        "system": platform.system(),
        "processor": platform.processor() or "unknown",
    }


def _best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_size(num_qubits: int, depth: int, seed: int, repeats: int = 5) -> dict:
    """Per-gate wall time of both update paths on one seeded random circuit.

    The dense matrices are built before timing; only the multiplies are timed.
    """
    circuit = oracle.random_instance("circuit", (num_qubits, depth), seed)
    program = transfer.compile_circuit(circuit)
    dense = [transfer.embed_ptm(ptm, targets, num_qubits) for ptm, targets in program]
    t0 = transfer.basis_tensor(num_qubits)

    def run_local():
        t = t0
        for ptm, targets in program:
            t = transfer.apply_local(t, ptm, targets)
        return t

    def run_dense():
        v = t0.reshape(-1)
        for mat in dense:
            v = mat @ v
        return v

    local_final = run_local()
    dense_final = run_dense()
    steps = max(len(program), 1)
    local_time = _best_of(run_local, repeats) / steps
    dense_time = _best_of(run_dense, repeats) / steps
    return {
        "m": num_qubits,
        "depth": depth,
        "seed": seed,
        "local_seconds_per_gate": local_time,
        "dense_seconds_per_gate": dense_time,
        "speedup": dense_time / local_time if local_time > 0 else float("inf"),
        "discrepancy": float(np.max(np.abs(local_final.reshape(-1) - dense_final))),
    }


def run_bench(m_values, depth: int, seed: int, repeats: int = 5) -> dict:
    return {
        "seed": seed,
        "rng": oracle.RNG_NAME,
        "environment": environment_fingerprint(),
        "results": [bench_size(m, depth, seed + i, repeats) for i, m in enumerate(m_values)],
    }

"""Command-line interface.

Verbs::

    probframe simulate CIRCUIT [--repr ptm|density|both] [--initial TENSOR]
    probframe verify-set SETFILE [--budget N]
    probframe convert INPUT --to pauli|probability|density [--policy canonical_z|average]
    probframe bench [--m 1-5] [--depth 20] [--seed 0]
    probframe ptm GATE [PARAM]
    probframe make-set six-state|standard|standard-completed [--size K]

Every verb writes one JSON report to ``--out`` (or stdout).  Reports embed
the layout version, the seed and the tolerances in effect.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bench, circuitfile, formats, frame, gates, matcore, oracle, qubitframe, transfer
from .errors import GuardExceeded, ProbFrameError

MAX_PTM_QUBITS = 10
MAX_DENSITY_QUBITS = 8
MAX_PROBABILITY_QUBITS = 4
MAX_BENCH_QUBITS = 6
DISCREPANCY_TOL = 1e-9


def _header(command: str, seed: int | None, tolerance: float = DISCREPANCY_TOL) -> dict:
    return {
        "command": command,
        "layout_version": qubitframe.LAYOUT_VERSION,
        "seed": seed,
        "tolerances": {
            "discrepancy": tolerance,
            "hermiticity": matcore.TOL_HERM,
            "trace": matcore.TOL_TRACE,
            "psd": matcore.TOL_PSD,
            "orthogonality": frame.ORTHO_TOL,
            "rank_rtol": frame.RANK_RTOL,
            "normalization": qubitframe.NORMALIZATION_TOL,
        },
    }


def _marginal_report(t: np.ndarray) -> list[dict]:
    table = qubitframe.marginals(t)
    out = []
    for k in range(t.ndim):
        out.append(
            {
                "qubit": k,
                "parameters": table.parameters[k].tolist(),
                "probabilities": {
                    axis: table.probabilities[k, i].tolist() for i, axis in enumerate(qubitframe.AXIS_NAMES)
                },
            }
        )
    return out


def cmd_simulate(
    circuit_text: str,
    representation: str = "ptm",
    initial: np.ndarray | None = None,
    seed: int | None = None,
    tolerance: float = DISCREPANCY_TOL,
) -> dict:
    circuit = circuitfile.parse_circuit(circuit_text)
    m = circuit.num_qubits
    if representation not in ("ptm", "density", "both"):
        raise ValueError(f"unknown representation {representation!r}")
    if m > MAX_PTM_QUBITS:
        raise GuardExceeded(f"{m} qubits exceeds the Pauli-tensor ceiling of {MAX_PTM_QUBITS}")
    if representation != "ptm" and m > MAX_DENSITY_QUBITS:
        raise GuardExceeded(f"{m} qubits exceeds the density-matrix ceiling of {MAX_DENSITY_QUBITS}")

    report = _header("simulate", seed, tolerance)
    report["circuit"] = {"qubits": m, "steps": len(circuit.steps)}
    report["representation"] = representation

    tensor_path = density_path = None
    if representation in ("ptm", "both"):
        tensor_path = transfer.simulate_tensor(circuit, initial)
    if representation in ("density", "both"):
        rho0 = None if initial is None else qubitframe.rho_from_tilde(initial)
        density_path = oracle.simulate_density(circuit, rho0)

    if tensor_path is not None:
        final = tensor_path[-1]
    else:
        final = qubitframe.tilde_from_rho(density_path[-1])
    report["pauli_tensor"] = formats.tensor_to_dict(final, "pauli")
    if m <= MAX_PROBABILITY_QUBITS:
        report["probabilities"] = formats.tensor_to_dict(qubitframe.p_from_tilde(final), "probability")
    else:
        report["probabilities"] = None
    report["marginals"] = _marginal_report(final)
    if representation == "both":
        worst = max(
            float(np.max(np.abs(t - qubitframe.tilde_from_rho(rho))))
            for t, rho in zip(tensor_path, density_path)
        )
        report["discrepancy"] = worst
        report["within_tolerance"] = worst <= tolerance
    return report


def classification_report(pset: frame.ProjectorSet, budget: int) -> dict:
    report = _header("verify-set", None)
    report["set"] = {"label": pset.label, "dim": pset.dim, "size": len(pset)}
    try:
        result = frame.classify(pset, search_limit=budget)
        status = "complete"
    except ProbFrameError as exc:
        result = getattr(exc, "partial", None)
        if result is None:
            raise
        status = f"budget exceeded: {exc}"
    report["status"] = status
    report["classification"] = {
        "representative": result.representative,
        "minimal": result.minimal,
        "rank": result.rank,
        "complete": result.complete,
        "almost_perfect": result.almost_perfect,
        "perfect": result.perfect,
        "completion_counts": result.completion_counts,
    }
    witnesses: dict = {}
    if result.basis_partition is not None:
        witnesses["basis_partition"] = [[pset.name(i) for i in b] for b in result.basis_partition]
    if result.non_unique_witness is not None and result.perfect is False:
        ket, first, second = result.non_unique_witness
        witnesses["non_unique_completion"] = {
            "ket": pset.name(ket),
            "completions": [[pset.name(i) for i in first], [pset.name(i) for i in second]],
        }
    if result.collapsed_duplicates:
        witnesses["collapsed_duplicates"] = [list(pair) for pair in result.collapsed_duplicates]
    report["witnesses"] = witnesses
    return report


def cmd_verify_set(doc: dict, budget: int = frame.DEFAULT_SEARCH_LIMIT) -> dict:
    return classification_report(formats.set_from_dict(doc), budget)


def cmd_convert(doc: dict, target: str, policy: str = "canonical_z") -> dict:
    kind, values = formats.tensor_from_dict(doc)
    if kind == "density":
        tilde = qubitframe.tilde_from_rho(values)
    elif kind == "pauli":
        tilde = values
    else:
        tilde = qubitframe.tilde_from_p(values, policy)

    if target == "pauli":
        out = formats.tensor_to_dict(tilde, "pauli")
    elif target == "density":
        out = formats.tensor_to_dict(qubitframe.rho_from_tilde(tilde), "density")
    elif target == "probability":
        out = formats.tensor_to_dict(qubitframe.p_from_tilde(tilde), "probability")
    else:
        raise ValueError(f"unknown target kind {target!r}")
    report = _header("convert", None)
    report["source_kind"] = kind
    report["policy"] = policy if kind == "probability" else None
    report["result"] = out
    return report


def parse_m_range(spec: str) -> list[int]:
    if "-" in spec:
        lo, hi = spec.split("-", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in spec.split(",")]


def cmd_bench(m_values, depth: int = 20, seed: int = 0, repeats: int = 5) -> dict:
    m_values = list(m_values)
    if not m_values or min(m_values) < 1 or max(m_values) > MAX_BENCH_QUBITS:
        raise GuardExceeded(f"bench supports 1 <= m <= {MAX_BENCH_QUBITS} (dense path is 4^m x 4^m)")
    report = _header("bench", seed)
    report.update(bench.run_bench(m_values, depth, seed, repeats))
    report["all_agree"] = all(r["discrepancy"] < DISCREPANCY_TOL for r in report["results"])
    return report


def cmd_ptm(name: str, params=()) -> dict:
    step_params = tuple(float(p) for p in params)
    if name in gates.CHANNELS:
        ptm = transfer.ptm_of_channel(gates.channel_for(name, step_params))
    else:
        ptm = transfer.ptm_of_unitary(gates.unitary_for(name, step_params))
    report = _header("ptm", None)
    report["gate"] = {"name": name, "params": list(step_params)}
    report["ptm"] = formats.ptm_to_dict(ptm)
    return report


def cmd_make_set(family: str, size: int) -> dict:
    if family == "six-state":
        pset = qubitframe.six_state_set(size)
    elif family == "standard":
        pset = frame.build_standard_set(size, completed=False)
    elif family == "standard-completed":
        pset = frame.build_standard_set(size, completed=True)
    else:
        raise ValueError(f"unknown set family {family!r}")
    return formats.set_to_dict(pset)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="probframe", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the report here instead of stdout")
        return p

    p = common(sub.add_parser("simulate", help="run a circuit file"))
    p.add_argument("circuit")
    p.add_argument("--repr", dest="representation", choices=["ptm", "density", "both"], default="ptm")
    p.add_argument("--initial", help="Pauli tensor file for the initial state (default |0...0>)")
    p.add_argument("--seed", type=int, default=None, help="recorded in the report")
    p.add_argument("--tolerance", type=float, default=DISCREPANCY_TOL)

    p = common(sub.add_parser("verify-set", help="classify a projector set file"))
    p.add_argument("setfile")
    p.add_argument("--budget", type=int, default=frame.DEFAULT_SEARCH_LIMIT)

    p = common(sub.add_parser("convert", help="convert between density, pauli and probability files"))
    p.add_argument("input")
    p.add_argument("--to", dest="target", choices=["pauli", "probability", "density"], required=True)
    p.add_argument("--policy", choices=list(qubitframe.POLICIES), default="canonical_z")

    p = common(sub.add_parser("bench", help="time local PTM updates against dense multiplies"))
    p.add_argument("--m", default="1-5", help="qubit counts, e.g. 1-5 or 2,4")
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=5)

    p = common(sub.add_parser("ptm", help="emit the Pauli transfer matrix of a gate or channel"))
    p.add_argument("gate", choices=sorted(oracle.GATE_SET))
    p.add_argument("params", nargs="*", type=float)

    p = common(sub.add_parser("make-set", help="write a built-in projector set file"))
    p.add_argument("family", choices=["six-state", "standard", "standard-completed"])
    p.add_argument("--size", type=int, default=1, help="qubits for six-state, dimension otherwise")
    return parser


def _dispatch(args) -> dict:
    if args.command == "simulate":
        initial = None
        if args.initial:
            kind, initial = formats.tensor_from_dict(formats.read_json(args.initial))
            if kind != "pauli":
                raise ValueError("--initial expects a pauli tensor file")
        return cmd_simulate(
            Path(args.circuit).read_text(), args.representation, initial, args.seed, args.tolerance
        )
    if args.command == "verify-set":
        return cmd_verify_set(formats.read_json(args.setfile), args.budget)
    if args.command == "convert":
        return cmd_convert(formats.read_json(args.input), args.target, args.policy)
    if args.command == "bench":
        return cmd_bench(parse_m_range(args.m), args.depth, args.seed, args.repeats)
    if args.command == "ptm":
        return cmd_ptm(args.gate, args.params)
    if args.command == "make-set":
        return cmd_make_set(args.family, args.size)
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = _dispatch(args)
    except (ProbFrameError, ValueError, KeyError, OSError) as exc:
        error = _header(args.command, getattr(args, "seed", None))
        error["error"] = {"type": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(formats.write_json(error, args.out))
        return 2
    text = formats.write_json(report, args.out)
    if args.out is None:
        sys.stdout.write(text)
    if report.get("within_tolerance") is False:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

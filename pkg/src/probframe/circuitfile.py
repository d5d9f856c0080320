"""Text circuit format.

One statement per line, ``#`` starts a comment::

    qubits 2
    h 0
    cnot 0 1
    rx 1 0.25        # angle in radians
    depol 0 0.1
    ampdamp 1 0.3

Qubits are numbered from 0.  ``qubits`` must precede every gate.
"""

from __future__ import annotations

from . import gates
from .errors import ParseError, RangeError
from .oracle import GATE_SET, Circuit, Step, check_step


def _tokens(line: str) -> list[tuple[str, int]]:
    out = []
    col = 0
    for piece in line.split(" "):
        if piece:
            out.append((piece, col + 1))
        col += len(piece) + 1
    return out


def _int(token: str, line: int, col: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line, col, f"expected an integer, got {token!r}") from None


def _float(token: str, line: int, col: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(line, col, f"expected a number, got {token!r}") from None


def parse_circuit(text: str) -> Circuit:
    num_qubits = None
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].replace("\t", " ").rstrip()
        toks = _tokens(line)
        if not toks:
            continue
        word, col = toks[0]
        word = word.lower()
        if word == "qubits":
            if num_qubits is not None:
                raise ParseError(lineno, col, "duplicate 'qubits' statement")
            if len(toks) != 2:
                raise ParseError(lineno, col, "usage: qubits <m>")
            num_qubits = _int(toks[1][0], lineno, toks[1][1])
            if num_qubits < 1:
                raise RangeError(lineno, toks[1][1], "qubit count must be >= 1")
            continue
        if word not in GATE_SET:
            raise ParseError(lineno, col, f"unknown statement {word!r}")
        if num_qubits is None:
            raise ParseError(lineno, col, "'qubits' must be declared before any gate")
        arity = gates.GATE_ARITY[word]
        nparams = 1 if word in gates.ROTATIONS or word in gates.CHANNELS else 0
        args = toks[1:]
        if len(args) != arity + nparams:
            raise ParseError(lineno, col, f"{word} expects {arity} qubit(s) and {nparams} parameter(s)")
        targets = tuple(_int(tok, lineno, c) for tok, c in args[:arity])
        params = tuple(_float(tok, lineno, c) for tok, c in args[arity:])
        step = Step(word, targets, params)
        try:
            check_step(step, num_qubits, lineno)
        except RangeError as exc:
            # point at the offending argument when we can tell which one
            bad_col = col
            for tok, c in args[:arity]:
                if not 0 <= int(tok) < num_qubits or targets.count(int(tok)) > 1:
                    bad_col = c
                    break
            else:
                if args[arity:]:
                    bad_col = args[arity][1]
            raise RangeError(lineno, bad_col, exc.message) from None
        steps.append(step)
    if num_qubits is None:
        raise ParseError(1, 1, "missing 'qubits' statement")
    return Circuit(num_qubits, tuple(steps))


def format_circuit(circuit: Circuit) -> str:
    """Canonical text form; ``parse_circuit(format_circuit(c)) == c``."""
    lines = [f"qubits {circuit.num_qubits}"]
    for step in circuit.steps:
        parts = [step.name, *map(str, step.targets), *(repr(float(p)) for p in step.params)]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"

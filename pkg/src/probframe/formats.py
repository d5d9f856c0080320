"""JSON exchange formats for projector sets, tensors, density matrices and PTMs.

Complex numbers are written as ``[re, im]`` pairs.  Tensors and matrices are
flattened row-major in the layouts documented in :mod:`probframe.qubitframe`.
Every document carries ``format`` and ``layout_version`` fields.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import frame
from .errors import ShapeError
from .qubitframe import LAYOUT_VERSION
from .transfer import PauliTransferMatrix

TENSOR_KINDS = ("pauli", "probability", "density")


def _pairs(values) -> list[list[float]]:
    arr = np.asarray(values, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in arr]


def _complex(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ShapeError("complex values must be given as [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def _expect(doc: dict, fmt: str) -> None:
    if doc.get("format") != fmt:
        raise ValueError(f"expected a {fmt!r} document, got format={doc.get('format')!r}")
    version = doc.get("layout_version", LAYOUT_VERSION)
    if version != LAYOUT_VERSION:
        raise ValueError(f"unsupported layout_version {version}")


def set_to_dict(pset: frame.ProjectorSet) -> dict:
    doc = {
        "format": "projector-set",
        "layout_version": LAYOUT_VERSION,
        "label": pset.label,
        "dim": pset.dim,
        "kets": [_pairs(k) for k in pset.kets],
    }
    if pset.ket_labels is not None:
        doc["ket_labels"] = list(pset.ket_labels)
    return doc


def set_from_dict(doc: dict) -> frame.ProjectorSet:
    _expect(doc, "projector-set")
    dim = int(doc["dim"])
    kets = [_complex(k) for k in doc["kets"]]
    if any(k.size != dim for k in kets):
        raise ShapeError(f"every ket must have {dim} amplitudes")
    labels = doc.get("ket_labels")
    # amplitudes in files are rounded; renormalize before the strict unit check
    kets = np.array([k / np.linalg.norm(k) for k in kets])
    return frame.ProjectorSet(kets, doc.get("label", ""), tuple(labels) if labels else None)


def tensor_to_dict(values, kind: str) -> dict:
    """Document for a Pauli tensor, probability tensor or density matrix."""
    if kind not in TENSOR_KINDS:
        raise ValueError(f"unknown tensor kind {kind!r}")
    arr = np.asarray(values)
    if kind == "density":
        m = arr.shape[0].bit_length() - 1
        flat = _pairs(arr)
    else:
        m = arr.ndim
        flat = [float(v) for v in np.asarray(arr, dtype=float).reshape(-1)]
    return {"format": "tensor", "layout_version": LAYOUT_VERSION, "kind": kind, "m": m, "values": flat}


def tensor_from_dict(doc: dict) -> tuple[str, np.ndarray]:
    _expect(doc, "tensor")
    kind = doc["kind"]
    m = int(doc["m"])
    if kind == "density":
        d = 2**m
        values = _complex(doc["values"])
        if values.size != d * d:
            raise ShapeError(f"density of {m} qubit(s) needs {d * d} entries")
        return kind, values.reshape(d, d)
    base = {"pauli": 4, "probability": 6}.get(kind)
    if base is None:
        raise ValueError(f"unknown tensor kind {kind!r}")
    values = np.asarray(doc["values"], dtype=float)
    if values.size != base**m:
        raise ShapeError(f"{kind} tensor of {m} qubit(s) needs {base**m} values")
    return kind, values.reshape((base,) * m)


def ptm_to_dict(ptm: PauliTransferMatrix) -> dict:
    return {
        "format": "ptm",
        "layout_version": LAYOUT_VERSION,
        "arity": ptm.arity,
        "trace_preserving": ptm.trace_preserving,
        "entries": [float(v) for v in ptm.matrix.reshape(-1)],
    }


def ptm_from_dict(doc: dict) -> PauliTransferMatrix:
    _expect(doc, "ptm")
    arity = int(doc["arity"])
    size = 4**arity
    entries = np.asarray(doc["entries"], dtype=float)
    if entries.size != size * size:
        raise ShapeError(f"PTM of arity {arity} needs {size * size} entries")
    return PauliTransferMatrix(entries.reshape(size, size), arity, bool(doc.get("trace_preserving", True)))


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def write_json(doc: dict, path=None) -> str:
    text = json.dumps(doc, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text

"""JSON state files: ``{"dims", "matrix", "meta", "tolerance"}``.

``matrix`` is row-major with each complex entry stored as ``[re, im]``. Floats are
written with ``repr`` precision, so a save/load round trip is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .qmat import DEFAULT_REL_TOL, MultiQubitState, as_matrix


class StateFileError(ValueError):
    """Malformed state file content."""


@dataclass
class StateFile:
    dims: list
    matrix: np.ndarray
    meta: dict = field(default_factory=dict)
    tolerance: float = DEFAULT_REL_TOL

    def to_state(self) -> MultiQubitState:
        return MultiQubitState(self.matrix, tol=self.tolerance)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "matrix": encode_matrix(self.matrix),
            "meta": self.meta,
            "tolerance": self.tolerance,
        }


def encode_matrix(m) -> list:
    m = as_matrix(m)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"matrix is not a nested array of numbers: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise StateFileError(f"matrix must be rows of [re, im] pairs, got array shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def from_state(state, meta: dict | None = None, tolerance: float = DEFAULT_REL_TOL) -> StateFile:
    m = np.array(as_matrix(state))
    n = int(round(np.log2(m.shape[0])))
    return StateFile(dims=[2] * n, matrix=m, meta=dict(meta or {}), tolerance=tolerance)


def parse_state_file(data: dict) -> StateFile:
    if not isinstance(data, dict):
        raise StateFileError("state file must be a JSON object")
    for key in ("dims", "matrix"):
        if key not in data:
            raise StateFileError(f"missing field {key!r}")
    dims = data["dims"]
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and d >= 1 for d in dims):
        raise StateFileError("dims must be a nonempty list of positive integers")
    m = decode_matrix(data["matrix"])
    size = int(np.prod(dims))
    if m.shape != (size, size):
        raise StateFileError(f"matrix shape {m.shape} does not match dims {dims}")
    meta = data.get("meta") or {}
    if not isinstance(meta, dict):
        raise StateFileError("meta must be an object")
    tol = data.get("tolerance", DEFAULT_REL_TOL)
    if not isinstance(tol, (int, float)) or tol < 0:
        raise StateFileError("tolerance must be a nonnegative number")
    return StateFile(dims=dims, matrix=m, meta=meta, tolerance=float(tol))


def dumps(sf: StateFile) -> str:
    return json.dumps(sf.to_dict())


def loads(text: str) -> StateFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc}") from None
    return parse_state_file(data)


def load(path) -> StateFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from None
    return loads(text)


def save(sf: StateFile, path) -> None:
    Path(path).write_text(dumps(sf) + "\n")

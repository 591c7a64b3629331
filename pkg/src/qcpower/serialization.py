"""JSON forms of matrices, channels and states.

Matrices are row-major nested lists of ``[re, im]`` pairs. A channel is
``{"name", "dim_in", "dim_out", "kraus": [matrix, ...]}`` and a state is
``{"dims": [...], "rho": matrix}``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import KrausChannel
from .qcore import check_density_matrix


class SchemaError(ValueError):
    pass


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(obj) -> np.ndarray:
    try:
        arr = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"matrix is not a rectangular array of [re, im] pairs: {exc}") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise SchemaError(f"matrix must have shape (rows, cols, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def channel_to_dict(ch: KrausChannel) -> dict:
    return {
        "name": ch.name or "",
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "kraus": [matrix_to_json(k) for k in ch.kraus],
    }


def channel_from_dict(obj) -> KrausChannel:
    if not isinstance(obj, dict):
        raise SchemaError("channel JSON must be an object")
    missing = {"dim_in", "dim_out", "kraus"} - obj.keys()
    if missing:
        raise SchemaError(f"channel JSON is missing {sorted(missing)}")
    kraus = [matrix_from_json(k) for k in obj["kraus"]]
    for k in kraus:
        if k.shape != (obj["dim_out"], obj["dim_in"]):
            raise SchemaError(f"Kraus operator shape {k.shape} does not match dim_out x dim_in")
    try:
        return KrausChannel(tuple(kraus), obj.get("name") or None)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def state_to_dict(rho, dims) -> dict:
    return {"dims": [int(d) for d in dims], "rho": matrix_to_json(rho)}


def state_from_dict(obj) -> tuple[np.ndarray, list[int]]:
    if not isinstance(obj, dict) or "dims" not in obj or "rho" not in obj:
        raise SchemaError('state JSON must be an object with "dims" and "rho"')
    dims = [int(d) for d in obj["dims"]]
    rho = matrix_from_json(obj["rho"])
    try:
        rho = check_density_matrix(rho, dims)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    return rho, dims


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc

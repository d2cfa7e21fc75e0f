"""JSON formats for inputs (channels, states, representations) and results.

Complex numbers are stored as ``[re, im]`` pairs. A matrix is a list of
rows of such pairs.

Channel::

    {"kind": "amplitude_damping" | "depolarizing" | "mixed_np" | "kraus",
     "p": 0.3,                         # named kinds
     "kraus": [matrix, ...],           # kind "kraus"
     "dim_in": 2, "dim_out": 2}        # optional consistency check

State::

    {"dims": [2, 2], "matrix": matrix}
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from . import linalg as la
from .channels import TP_TOL, KrausChannel, amplitude_damping, depolarizing, mixed_channel_np
from .twirl import UnitaryRep, named_rep


class FormatError(ValueError):
    """Malformed or inconsistent JSON input."""


NAMED_CHANNELS = {
    "amplitude_damping": amplitude_damping,
    "depolarizing": depolarizing,
    "mixed_np": mixed_channel_np,
}


def encode_matrix(M: np.ndarray) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(data: Any, what: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{what}: entries must be [re, im] number pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise FormatError(f"{what}: expected a rectangular list of rows of [re, im] pairs")
    if not np.all(np.isfinite(arr)):
        raise FormatError(f"{what}: non-finite entry")
    return arr[..., 0] + 1j * arr[..., 1]


def _load(source) -> Any:
    if isinstance(source, (dict, list)):
        return source
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {source}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise FormatError(f"{where}: missing field {key!r}")
    return obj[key]


# -- channels -------------------------------------------------------------------------

def channel_from_json(source) -> KrausChannel:
    """Parse a channel from a JSON file path or an already-decoded object.

    Raises
    ------
    FormatError
        On malformed input, dimension mismatch or a trace-preservation
        residual above ``TP_TOL`` (the residual is quoted).
    """
    obj = _load(source)
    kind = _require(obj, "kind", "channel")
    if kind in NAMED_CHANNELS:
        p = _require(obj, "p", "channel")
        if not isinstance(p, (int, float)) or isinstance(p, bool) or not 0.0 <= p <= 1.0:
            raise FormatError(f"channel: p must be a number in [0, 1], got {p!r}")
        ch = NAMED_CHANNELS[kind](float(p))
    elif kind == "kraus":
        ops = _require(obj, "kraus", "channel")
        if not isinstance(ops, list) or not ops:
            raise FormatError("channel: 'kraus' must be a non-empty list of matrices")
        mats = [decode_matrix(K, f"kraus[{i}]") for i, K in enumerate(ops)]
        if len({m.shape for m in mats}) != 1:
            raise FormatError("channel: Kraus operators have different shapes")
        S = sum(K.conj().T @ K for K in mats)
        if S.shape[0] != S.shape[1]:
            raise FormatError("channel: Kraus operators are not composable")
        resid = float(np.max(np.abs(S - np.eye(S.shape[0]))))
        if resid > TP_TOL:
            raise FormatError(f"channel: not trace preserving (residual {resid:.3e} > {TP_TOL:g})")
        ch = KrausChannel(mats)
    else:
        raise FormatError(f"channel: unknown kind {kind!r}; choose from {sorted([*NAMED_CHANNELS, 'kraus'])}")
    for key, actual in (("dim_in", ch.dim_in), ("dim_out", ch.dim_out)):
        if key in obj and obj[key] != actual:
            raise FormatError(f"channel: {key}={obj[key]!r} but the operators give {actual}")
    return ch


def channel_to_json(ch: KrausChannel) -> dict:
    return {
        "kind": "kraus",
        "kraus": [encode_matrix(K) for K in ch.kraus],
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
    }


# -- states ---------------------------------------------------------------------------

def state_from_json(source, tol: float = 1e-8) -> tuple[np.ndarray, list[int]]:
    """Parse ``{"dims": [...], "matrix": ...}`` into a density matrix and its dims."""
    obj = _load(source)
    dims = _require(obj, "dims", "state")
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and d >= 1 for d in dims):
        raise FormatError("state: 'dims' must be a non-empty list of positive integers")
    rho = decode_matrix(_require(obj, "matrix", "state"), "state matrix")
    if rho.shape[0] != rho.shape[1]:
        raise FormatError(f"state: matrix is not square ({rho.shape[0]}x{rho.shape[1]})")
    if rho.shape[0] != math.prod(dims):
        raise FormatError(f"state: matrix size {rho.shape[0]} does not match dims {dims}")
    try:
        rho = la.check_density(rho, tol=tol)
    except ValueError as exc:
        raise FormatError(f"state: {exc}") from exc
    return rho, list(dims)


def state_to_json(rho: np.ndarray, dims) -> dict:
    return {"dims": [int(d) for d in dims], "matrix": encode_matrix(rho)}


# -- representations ------------------------------------------------------------------

def rep_from_json(source) -> UnitaryRep:
    """A named rep (``"pauli"``, ``"ix"``, ``"iz"``) or ``{"U": [...], "V": [...]}``."""
    if isinstance(source, str) and not Path(source).exists():
        try:
            return named_rep(source)
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    obj = _load(source)
    U = [decode_matrix(m, f"U[{i}]") for i, m in enumerate(_require(obj, "U", "representation"))]
    V = obj.get("V")
    V = None if V is None else [decode_matrix(m, f"V[{i}]") for i, m in enumerate(V)]
    try:
        return UnitaryRep(U, V, label=str(obj.get("label", "custom")))
    except ValueError as exc:
        raise FormatError(f"representation: {exc}") from exc


# -- results --------------------------------------------------------------------------

def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy values and result objects for ``json.dumps``."""
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return encode_matrix(obj) if np.iscomplexobj(obj) and obj.ndim == 2 else to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)

"""JSON state files.

Layout::

    {
      "format": "circulant-state", "version": 1,
      "d": 2, "n": 3,
      "scheme": "small" | "sigma" | "xi",
      "k": 2,                      # xi only
      "normalized": true,
      "name": "ghz", "params": {...},   # optional provenance
      "blocks": {"00": [[re, im], ...], ...}
    }

Small-scheme block labels are the ``n - 1`` base-``d`` digits of mu; big-scheme
labels are the single class digit alpha.  Each block is its entries in
row-major order as ``[re, im]`` pairs.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .assembly import BigBlockFamily, CirculantState, SmallBlockFamily
from .geometry import Scheme, all_dinaries, format_label, parse_label
from .linalg import DimsProfile

FORMAT = "circulant-state"
VERSION = 1


class StateFileError(ValueError):
    pass


def _encode_block(x: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in np.asarray(x).ravel()]


def _decode_block(data, size: int, label: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise StateFileError(f"block {label!r}: entries must be [re, im] pairs") from exc
    if arr.shape != (size * size, 2):
        raise StateFileError(
            f"block {label!r}: expected {size * size} [re, im] pairs, got shape {arr.shape}"
        )
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(size, size)


def _jsonable(value):
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def state_to_dict(state: CirculantState) -> dict:
    fam = state.payload
    dims = fam.dims
    out = {"format": FORMAT, "version": VERSION, "d": dims.d, "n": dims.n}
    if isinstance(fam, SmallBlockFamily):
        if any(fam.twist):
            raise StateFileError("transposed (twisted) families cannot be exported")
        out["scheme"] = "small"
        blocks = {format_label(mu): _encode_block(x) for mu, x in sorted(fam.blocks.items())}
    else:
        if fam.scheme is None:
            raise StateFileError("only sigma and xi big-block families can be exported")
        out["scheme"] = fam.scheme.kind
        if fam.scheme.kind == "xi":
            out["k"] = fam.scheme.k
        blocks = {str(alpha): _encode_block(b) for alpha, b in enumerate(fam.blocks)}
    out["normalized"] = bool(state.normalized)
    if state.name:
        out["name"] = state.name
    if state.params:
        out["params"] = {k: _jsonable(v) for k, v in state.params.items()}
    out["blocks"] = blocks
    return out


def state_from_dict(data: dict) -> CirculantState:
    if data.get("format", FORMAT) != FORMAT:
        raise StateFileError(f"not a {FORMAT} document")
    if data.get("version", VERSION) != VERSION:
        raise StateFileError(f"unsupported version {data.get('version')}")
    try:
        dims = DimsProfile(int(data["d"]), int(data["n"]))
        scheme = data["scheme"]
        raw = data["blocks"]
    except KeyError as exc:
        raise StateFileError(f"missing field {exc.args[0]!r}") from None
    if dims.n < 2:
        raise StateFileError("need at least two factors")
    if scheme == "small":
        blocks = {}
        for label, entries in raw.items():
            mu = parse_label(label, dims.d)
            if len(mu) != dims.n - 1:
                raise StateFileError(f"label {label!r} must have {dims.n - 1} digits")
            blocks[mu] = _decode_block(entries, dims.d, label)
        missing = [mu for mu in all_dinaries(dims.d, dims.n - 1) if mu not in blocks]
        if missing:
            raise StateFileError(f"missing blocks for labels {[format_label(m) for m in missing]}")
        fam = SmallBlockFamily(dims, blocks)
    elif scheme in ("sigma", "xi"):
        sch = Scheme.sigma() if scheme == "sigma" else Scheme.xi(int(data.get("k", dims.n - 1)))
        size = dims.d ** (dims.n - 1)
        try:
            blocks = [_decode_block(raw[str(a)], size, str(a)) for a in range(dims.d)]
        except KeyError as exc:
            raise StateFileError(f"missing block {exc.args[0]!r}") from None
        try:
            fam = BigBlockFamily.from_scheme(dims, sch, blocks)
        except ValueError as exc:
            raise StateFileError(str(exc)) from exc
    else:
        raise StateFileError(f"unknown scheme {scheme!r}")
    return CirculantState(
        fam,
        normalized=bool(data.get("normalized", False)),
        name=data.get("name"),
        params=dict(data.get("params", {})),
    )


def write_state(state: CirculantState, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state), indent=1) + "\n")


def read_state(path) -> CirculantState:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: invalid JSON ({exc})") from exc
    return state_from_dict(data)

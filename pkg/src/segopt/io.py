"""Field and mask file formats.

Three JSON document kinds, dispatched on their "format" tag:

- segopt-marginal (.smf.json): {"format", "version": 1, "shape": [...],
  "values": [...]} with probabilities flat in row-major order.
- segopt-mask (.smk.json): same layout, values restricted to 0/1 integers.
- segopt-raw: sidecar {"format", "version": 1, "shape": [...],
  "data": "<path>"} pointing at a flat little-endian float64 file,
  row-major; the path is resolved relative to the sidecar.

An optional "meta" object round-trips untouched. All floats are written
with 17 significant digits so files diff byte-for-byte across runs.
"""

from __future__ import annotations

import json
import os
from typing import Any

import numpy as np

from .errors import FileFormatError
from .field import MarginalField, Segmentation

__all__ = [
    "FORMAT_MARGINAL",
    "FORMAT_MASK",
    "FORMAT_RAW",
    "dumps_json",
    "load",
    "load_field",
    "load_mask",
    "save_field",
    "save_mask",
    "save_field_raw",
]

FORMAT_MARGINAL = "segopt-marginal"
FORMAT_MASK = "segopt-mask"
FORMAT_RAW = "segopt-raw"
_VERSION = 1


def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"non-finite float {x!r} cannot be serialized")
    return format(x, ".17g")


def dumps_json(obj: Any) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, dict):
        inner = ",".join(f"{json.dumps(str(k))}:{dumps_json(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(dumps_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict) or "format" not in doc:
        raise FileFormatError(f"{path}: not a segopt document")
    if doc.get("version") != _VERSION:
        raise FileFormatError(f"{path}: unsupported version {doc.get('version')!r}")
    return doc


def _shape_of(doc: dict, path: str) -> tuple[int, ...]:
    shape = doc.get("shape")
    if not isinstance(shape, list) or not shape:
        raise FileFormatError(f"{path}: missing or empty shape")
    return tuple(int(n) for n in shape)


def load(path: str) -> MarginalField | Segmentation:
    """Load any segopt document, dispatching on its format tag."""
    doc = _document(path)
    fmt = doc["format"]
    shape = _shape_of(doc, path)
    meta = doc.get("meta")
    try:
        if fmt == FORMAT_MARGINAL:
            return MarginalField(shape, np.asarray(doc["values"], dtype=np.float64), meta=meta)
        if fmt == FORMAT_MASK:
            raw = np.asarray(doc["values"])
            if raw.dtype.kind not in "iub" or not np.isin(raw, (0, 1)).all():
                raise FileFormatError(f"{path}: mask values must be 0/1 integers")
            return Segmentation(shape, raw)
        if fmt == FORMAT_RAW:
            data = doc.get("data")
            if not isinstance(data, str):
                raise FileFormatError(f"{path}: raw sidecar needs a data path")
            data_path = os.path.join(os.path.dirname(os.path.abspath(path)), data)
            values = np.fromfile(data_path, dtype="<f8")
            return MarginalField(shape, values, meta=meta)
    except (KeyError, ValueError, OSError) as exc:
        if isinstance(exc, FileFormatError):
            raise
        raise FileFormatError(f"{path}: {exc}") from exc
    raise FileFormatError(f"{path}: unknown format {fmt!r}")


def load_field(path: str) -> MarginalField:
    """Load a marginal field; a mask file loads as a binary field."""
    obj = load(path)
    if isinstance(obj, Segmentation):
        return MarginalField(obj.shape, obj.bits.astype(np.float64))
    return obj


def load_mask(path: str) -> Segmentation:
    obj = load(path)
    if not isinstance(obj, Segmentation):
        raise FileFormatError(f"{path}: expected a mask file")
    return obj


def _write(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(doc))
        fh.write("\n")


def save_field(field: MarginalField, path: str) -> None:
    doc: dict[str, Any] = {
        "format": FORMAT_MARGINAL,
        "version": _VERSION,
        "shape": list(field.shape),
        "values": field.values,
    }
    if field.meta:
        doc["meta"] = dict(field.meta)
    _write(path, doc)


def save_mask(mask: Segmentation, path: str) -> None:
    _write(
        path,
        {
            "format": FORMAT_MASK,
            "version": _VERSION,
            "shape": list(mask.shape),
            "values": [int(b) for b in mask.bits],
        },
    )


def save_field_raw(field: MarginalField, path: str, data_path: str | None = None) -> None:
    """Write the sidecar at `path` and the flat little-endian payload.

    data_path defaults to the sidecar name with a .f64 suffix, stored
    next to it and referenced relatively.
    """
    if data_path is None:
        base, _ = os.path.splitext(path)
        data_path = base + ".f64"
    field.values.astype("<f8").tofile(data_path)
    doc: dict[str, Any] = {
        "format": FORMAT_RAW,
        "version": _VERSION,
        "shape": list(field.shape),
        "data": os.path.relpath(data_path, os.path.dirname(os.path.abspath(path))),
    }
    if field.meta:
        doc["meta"] = dict(field.meta)
    _write(path, doc)

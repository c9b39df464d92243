"""Raw float64 field snapshots with a JSON sidecar header.

``<field>_t<index>.bin`` holds only the little-endian float64 payload in C
order; ``<field>_t<index>.json`` describes it. Grid values are written, so a
round trip reproduces the Fourier coefficients bit for bit.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

FORMAT_VERSION = "elsim-snapshot/1 rng=PCG64"
DTYPE = "<f8"


def snapshot_stem(field: str, index: int) -> str:
    return f"{field}_t{index:06d}"


def write_snapshot(directory, field: str, index: int, values: np.ndarray, *, time: float,
                   L: float) -> Path:
    """Write ``values`` and its sidecar; returns the payload path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stem = snapshot_stem(field, index)
    data = np.ascontiguousarray(values, dtype=DTYPE)
    payload = data.tobytes(order="C")
    bin_path = directory / f"{stem}.bin"
    bin_path.write_bytes(payload)
    header = {
        "format_version": FORMAT_VERSION,
        "field": field,
        "index": int(index),
        "time": float(time),
        "L": float(L),
        "shape": list(data.shape),
        "dtype": DTYPE,
        "header_bytes": 0,
        "payload_bytes": len(payload),
    }
    (directory / f"{stem}.json").write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")
    return bin_path


class SnapshotError(ValueError):
    pass


def read_snapshot(path) -> tuple[np.ndarray, dict]:
    """Read a snapshot given either its ``.bin`` or ``.json`` path; returns
    (values, header) and validates the header against the payload size."""
    path = Path(path)
    stem = path.with_suffix("")
    bin_path, json_path = Path(f"{stem}.bin"), Path(f"{stem}.json")
    header = json.loads(json_path.read_text())
    if header.get("format_version") != FORMAT_VERSION:
        raise SnapshotError(f"unsupported format version {header.get('format_version')!r}")
    if header.get("dtype") != DTYPE:
        raise SnapshotError(f"unsupported dtype {header.get('dtype')!r}")
    shape = tuple(int(s) for s in header["shape"])
    expected = int(np.prod(shape)) * 8
    size = os.path.getsize(bin_path)
    if header["payload_bytes"] != expected or header["header_bytes"] + header["payload_bytes"] != size:
        raise SnapshotError(
            f"{bin_path.name}: file holds {size} bytes, header promises "
            f"{header['header_bytes']} + {header['payload_bytes']} for shape {shape}"
        )
    data = np.frombuffer(bin_path.read_bytes(), dtype=DTYPE).reshape(shape)
    return data.astype(np.float64), header

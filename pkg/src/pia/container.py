"""Versioned binary container: JSON metadata plus named float32 blobs.

One file layout serves both the per-video feature cache and model
checkpoints:

    magic  b"PIA1"
    u32    format version (little-endian)
    u64    metadata byte length
    bytes  UTF-8 JSON metadata
    repeated per blob:
        u16    name byte length
        bytes  UTF-8 blob name
        u64    blob byte length
        bytes  little-endian float32 payload

Blob shapes are recorded in the metadata under the reserved key
"_blob_shapes" so arrays round-trip bit-exactly with their shape.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .errors import CacheError

MAGIC = b"PIA1"
FORMAT_VERSION = 1

_SHAPES_KEY = "_blob_shapes"


def write_container(path: str | Path, metadata: dict, blobs: dict[str, np.ndarray]) -> Path:
    """Write metadata and float32 arrays to ``path``; returns the path."""
    path = Path(path)
    meta = dict(metadata)
    shapes = {}
    encoded = {}
    for name, arr in blobs.items():
        arr = np.ascontiguousarray(arr, dtype=np.float32)
        shapes[name] = list(arr.shape)
        encoded[name] = arr
    meta[_SHAPES_KEY] = shapes
    meta_bytes = json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8")

    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<Q", len(meta_bytes)))
        fh.write(meta_bytes)
        for name, arr in encoded.items():
            name_bytes = name.encode("utf-8")
            fh.write(struct.pack("<H", len(name_bytes)))
            fh.write(name_bytes)
            payload = arr.tobytes()
            fh.write(struct.pack("<Q", len(payload)))
            fh.write(payload)
    return path


def read_container(path: str | Path) -> tuple[dict, dict[str, np.ndarray]]:
    """Read a container written by :func:`write_container`.

    Raises CacheError on a bad magic string, an unsupported version, or a
    truncated file.
    """
    path = Path(path)
    data = path.read_bytes()
    if len(data) < len(MAGIC) + 12:
        raise CacheError(f"{path}: file too short to be a valid container")
    if data[:4] != MAGIC:
        raise CacheError(f"{path}: bad magic {data[:4]!r}, expected {MAGIC!r}")
    (version,) = struct.unpack_from("<I", data, 4)
    if version != FORMAT_VERSION:
        raise CacheError(
            f"{path}: unsupported format version {version}, reader supports {FORMAT_VERSION}"
        )
    (meta_len,) = struct.unpack_from("<Q", data, 8)
    offset = 16
    if offset + meta_len > len(data):
        raise CacheError(f"{path}: truncated metadata")
    try:
        meta = json.loads(data[offset : offset + meta_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CacheError(f"{path}: corrupt metadata: {exc}") from exc
    offset += meta_len

    shapes = meta.pop(_SHAPES_KEY, {})
    blobs: dict[str, np.ndarray] = {}
    while offset < len(data):
        if offset + 2 > len(data):
            raise CacheError(f"{path}: truncated blob header")
        (name_len,) = struct.unpack_from("<H", data, offset)
        offset += 2
        if offset + name_len + 8 > len(data):
            raise CacheError(f"{path}: truncated blob name")
        name = data[offset : offset + name_len].decode("utf-8")
        offset += name_len
        (blob_len,) = struct.unpack_from("<Q", data, offset)
        offset += 8
        if offset + blob_len > len(data):
            raise CacheError(f"{path}: truncated blob payload for {name!r}")
        arr = np.frombuffer(data[offset : offset + blob_len], dtype="<f4").copy()
        offset += blob_len
        if name in shapes:
            arr = arr.reshape(shapes[name])
        blobs[name] = arr
    missing = set(shapes) - set(blobs)
    if missing:
        raise CacheError(f"{path}: blobs listed in metadata but absent: {sorted(missing)}")
    return meta, blobs

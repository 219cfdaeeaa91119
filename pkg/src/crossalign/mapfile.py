"""ADHP map-pair files: the two D x D maps plus a JSON trailer.

Layout (little-endian):

    bytes 0..3   magic b"ADHP"
    bytes 4..7   uint32 D
    next 8*D*D   h_s, float64 row-major
    next 8*D*D   h_e, float64 row-major
    rest         UTF-8 JSON trailer (training config, centering means,
                 and any producer metadata)

The trailer is serialized with sorted keys and fixed separators, so a
load -> save cycle is byte-identical.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadMagicError, ShapeMismatchError, TruncatedFileError

ADHP_MAGIC = b"ADHP"
_HEADER = struct.Struct("<4sI")


@dataclass(frozen=True)
class MapPairFile:
    h_s: np.ndarray
    h_e: np.ndarray
    trailer: dict

    @property
    def dims(self) -> int:
        return self.h_s.shape[0]


def save_map_pair(path: Path | str, h_s, h_e, trailer: dict) -> None:
    """Write both maps and the metadata trailer. Non-square maps (e.g. a
    D x k CCA projection) are zero-padded to D x D; record k in the trailer
    so readers can slice the live columns back out."""
    h_s = np.asarray(h_s, dtype=np.float64)
    h_e = np.asarray(h_e, dtype=np.float64)
    if h_s.shape != h_e.shape or h_s.ndim != 2:
        raise ShapeMismatchError(
            f"map shapes must match, got {h_s.shape} and {h_e.shape}"
        )
    d, k = h_s.shape
    if k > d:
        raise ShapeMismatchError(f"more columns than rows: {h_s.shape}")
    if k < d:
        pad = np.zeros((d, d))
        pad[:, :k] = h_s
        h_s = pad
        pad = np.zeros((d, d))
        pad[:, :k] = h_e
        h_e = pad
    blob = json.dumps(trailer, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(ADHP_MAGIC, d))
        fh.write(np.ascontiguousarray(h_s).tobytes(order="C"))
        fh.write(np.ascontiguousarray(h_e).tobytes(order="C"))
        fh.write(blob)


def load_map_pair(path: Path | str) -> MapPairFile:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise TruncatedFileError(
            f"{path}: header truncated at byte {len(raw)} (need {_HEADER.size})"
        )
    magic, d = _HEADER.unpack_from(raw, 0)
    if magic != ADHP_MAGIC:
        raise BadMagicError(
            f"{path}: bad magic {magic!r} at byte 0 (expected {ADHP_MAGIC!r})"
        )
    need = _HEADER.size + 2 * 8 * d * d
    if len(raw) < need:
        raise TruncatedFileError(
            f"{path}: body truncated at byte {len(raw)} (need {need} for two "
            f"{d}x{d} float64 maps)"
        )
    h_s = np.frombuffer(raw, dtype="<f8", count=d * d, offset=_HEADER.size)
    h_e = np.frombuffer(raw, dtype="<f8", count=d * d, offset=_HEADER.size + 8 * d * d)
    trailer: dict = {}
    blob = raw[need:]
    if blob:
        try:
            trailer = json.loads(blob.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise TruncatedFileError(f"{path}: corrupt trailer at byte {need}: {exc}")
    return MapPairFile(
        h_s=h_s.reshape(d, d).copy(),
        h_e=h_e.reshape(d, d).copy(),
        trailer=trailer,
    )

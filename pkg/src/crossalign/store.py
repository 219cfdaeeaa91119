"""Embedding matrix container plus AD01 binary and CSV persistence.

The AD01 binary layout (little-endian) is:

    bytes 0..3    magic b"AD01"
    bytes 4..7    uint32 N (rows)
    bytes 8..11   uint32 D (columns)
    bytes 12..    N*D float32 values, row-major, no padding, no footer

Row ids, when present, live in a sidecar text file with the same stem and
extension ``.ids`` (UTF-8, one id per line). CSV files are plain
comma-separated decimal floats, one row per line, no header.

Values are stored at 32-bit precision and widened to 64-bit for all
computation, so a save -> load -> save cycle is byte-identical.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    BadMagicError,
    DimensionMismatchError,
    NonFiniteValueError,
    TruncatedFileError,
    ValidationError,
    ZeroRowError,
)

AD01_MAGIC = b"AD01"
_HEADER = struct.Struct("<4sII")


class DomainTag(str, Enum):
    SYNTHETIC = "synthetic"
    EXEMPLAR = "exemplar"
    DISTRACTOR = "distractor"
    LATENT = "latent"


@dataclass(frozen=True)
class EmbeddingMatrix:
    """N x D matrix of real-valued feature vectors with optional row ids.

    The payload is held as float64 for computation; persistence casts to
    float32. Instances are validated on construction and the underlying
    array is frozen, so they are safe to share read-only across threads.
    """

    data: np.ndarray
    ids: list[str] | None = None
    domain_tag: DomainTag = DomainTag.SYNTHETIC

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.data, dtype=np.float64))
        if arr.ndim != 2:
            raise DimensionMismatchError(
                f"embedding matrix must be 2-dimensional, got ndim={arr.ndim}"
            )
        # zero rows are tolerated in memory (empty distractor pools);
        # the file formats themselves require at least one row
        if arr.shape[1] < 1:
            raise DimensionMismatchError(
                f"embedding matrix needs at least one column, got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise NonFiniteValueError(
                f"non-finite value at row {bad[0]}, column {bad[1]}"
            )
        if self.ids is not None:
            if len(self.ids) != arr.shape[0]:
                raise ValidationError(
                    f"got {len(self.ids)} ids for {arr.shape[0]} rows"
                )
            if len(set(self.ids)) != len(self.ids):
                raise ValidationError("row ids must be distinct")
            object.__setattr__(self, "ids", list(self.ids))
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        object.__setattr__(self, "domain_tag", DomainTag(self.domain_tag))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def dims(self) -> int:
        return self.data.shape[1]

    def with_data(self, data: np.ndarray) -> "EmbeddingMatrix":
        """New matrix with replaced payload, keeping ids and domain tag."""
        ids = self.ids if data.shape[0] == self.rows else None
        return EmbeddingMatrix(data, ids=ids, domain_tag=self.domain_tag)

    def row_ids(self) -> list[str]:
        """Explicit ids if present, else stringified row indices."""
        if self.ids is not None:
            return list(self.ids)
        return [str(i) for i in range(self.rows)]


def matrix_data(x) -> np.ndarray:
    """Accept either an EmbeddingMatrix or a bare array, return float64 array."""
    if isinstance(x, EmbeddingMatrix):
        return x.data
    return np.asarray(x, dtype=np.float64)


def ids_path(path: Path | str) -> Path:
    return Path(path).with_suffix(".ids")


def save_embeddings(m: EmbeddingMatrix, path: Path | str, format: str = "binary") -> None:
    """Write a matrix to `path` in AD01 binary or CSV form.

    Refuses non-finite payloads (cannot be constructed anyway) and writes the
    `.ids` sidecar only when the matrix carries ids.
    """
    path = Path(path)
    if m.rows < 1:
        raise ValidationError("cannot persist an empty matrix")
    with np.errstate(over="ignore"):
        data32 = np.ascontiguousarray(m.data.astype(np.float32))
    if not np.isfinite(data32).all():
        # float64 overflow of float32 range shows up here as inf
        raise NonFiniteValueError("values overflow 32-bit storage precision")
    if format == "binary":
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(AD01_MAGIC, m.rows, m.dims))
            fh.write(data32.tobytes(order="C"))
    elif format == "csv":
        lines = []
        for row in data32:
            lines.append(",".join(str(v) for v in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise ValidationError(f"unknown format {format!r}")
    if m.ids is not None:
        ids_path(path).write_text(
            "\n".join(m.ids) + "\n", encoding="utf-8"
        )


def load_embeddings(
    path: Path | str,
    format: str = "binary",
    domain_tag: DomainTag = DomainTag.SYNTHETIC,
) -> EmbeddingMatrix:
    """Read a matrix from `path`, validating format and invariants.

    Errors name the byte offset (binary) or row index (CSV) of the problem.
    Ids are picked up from the `.ids` sidecar when it exists.
    """
    path = Path(path)
    if format == "binary":
        data = _load_ad01(path)
    elif format == "csv":
        data = _load_csv(path)
    else:
        raise ValidationError(f"unknown format {format!r}")
    ids = None
    sidecar = ids_path(path)
    if sidecar.exists():
        ids = sidecar.read_text(encoding="utf-8").splitlines()
    return EmbeddingMatrix(data, ids=ids, domain_tag=domain_tag)


def _load_ad01(path: Path) -> np.ndarray:
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise TruncatedFileError(
            f"{path}: header truncated at byte {len(raw)} (need {_HEADER.size})"
        )
    magic, n, d = _HEADER.unpack_from(raw, 0)
    if magic != AD01_MAGIC:
        raise BadMagicError(
            f"{path}: bad magic {magic!r} at byte 0 (expected {AD01_MAGIC!r})"
        )
    if n < 1 or d < 1:
        raise DimensionMismatchError(f"{path}: header declares shape ({n}, {d})")
    expected = _HEADER.size + 4 * n * d
    if len(raw) < expected:
        raise TruncatedFileError(
            f"{path}: body truncated at byte {len(raw)} (need {expected} "
            f"for {n}x{d} float32)"
        )
    if len(raw) > expected:
        raise TruncatedFileError(
            f"{path}: {len(raw) - expected} trailing bytes after byte {expected}"
        )
    flat = np.frombuffer(raw, dtype="<f4", count=n * d, offset=_HEADER.size)
    data = flat.reshape(n, d).astype(np.float64)
    if not np.isfinite(data).all():
        bad_row = int(np.argwhere(~np.isfinite(data))[0][0])
        raise NonFiniteValueError(f"{path}: non-finite value in row {bad_row}")
    return data


def _load_csv(path: Path) -> np.ndarray:
    rows: list[np.ndarray] = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            try:
                values = [float(tok) for tok in line.split(",")]
            except ValueError as exc:
                raise ValidationError(f"{path}: row {i}: {exc}") from exc
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise DimensionMismatchError(
                    f"{path}: row {i} has {len(values)} columns, expected {width}"
                )
            rows.append(np.asarray(values, dtype=np.float64))
    if not rows:
        raise TruncatedFileError(f"{path}: no data rows")
    data = np.vstack(rows).astype(np.float32).astype(np.float64)
    if not np.isfinite(data).all():
        bad_row = int(np.argwhere(~np.isfinite(data))[0][0])
        raise NonFiniteValueError(f"{path}: non-finite value in row {bad_row}")
    return data


def concat_embeddings(parts: list[EmbeddingMatrix]) -> EmbeddingMatrix:
    """Stack matrices row-wise (pool assembly). Dims must agree; the result
    carries concatenated ids (explicit or index-based per part)."""
    parts = [p for p in parts if p.rows > 0]
    if not parts:
        raise ValidationError("cannot concatenate zero rows")
    dims = parts[0].dims
    for p in parts[1:]:
        if p.dims != dims:
            raise DimensionMismatchError(
                f"cannot concatenate dims {p.dims} with {dims}"
            )
    data = np.vstack([p.data for p in parts])
    ids: list[str] = []
    for k, p in enumerate(parts):
        ids.extend(p.ids if p.ids is not None else [f"{k}:{i}" for i in range(p.rows)])
    return EmbeddingMatrix(data, ids=ids, domain_tag=parts[0].domain_tag)


def center(m: EmbeddingMatrix) -> tuple[EmbeddingMatrix, np.ndarray]:
    """Subtract the per-column mean; returns (centered matrix, mean vector)."""
    mean = m.data.mean(axis=0)
    return m.with_data(m.data - mean), mean


def l2_normalize_rows(m: EmbeddingMatrix, eps: float = 1e-12) -> EmbeddingMatrix:
    """Scale every row to unit Euclidean norm. Raises ZeroRowError on a
    row whose norm is at or below `eps`."""
    norms = np.linalg.norm(m.data, axis=1)
    small = np.nonzero(norms <= eps)[0]
    if small.size:
        raise ZeroRowError(int(small[0]))
    return m.with_data(m.data / norms[:, None])

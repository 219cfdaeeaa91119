import struct

import numpy as np
import pytest

from crossalign.errors import (
    BadMagicError,
    DimensionMismatchError,
    NonFiniteValueError,
    TruncatedFileError,
    ValidationError,
    ZeroRowError,
)
from crossalign.store import (
    DomainTag,
    EmbeddingMatrix,
    center,
    concat_embeddings,
    ids_path,
    l2_normalize_rows,
    load_embeddings,
    save_embeddings,
)


def test_constructor_validates_invariants():
    with pytest.raises(NonFiniteValueError):
        EmbeddingMatrix(np.array([[1.0, np.nan]]))
    with pytest.raises(NonFiniteValueError):
        EmbeddingMatrix(np.array([[np.inf, 0.0]]))
    with pytest.raises(ValidationError):
        EmbeddingMatrix(np.ones((2, 2)), ids=["a"])
    with pytest.raises(ValidationError):
        EmbeddingMatrix(np.ones((2, 2)), ids=["a", "a"])
    with pytest.raises(DimensionMismatchError):
        EmbeddingMatrix(np.ones(3))


def test_data_is_widened_and_frozen():
    m = EmbeddingMatrix(np.ones((2, 3), dtype=np.float32))
    assert m.data.dtype == np.float64
    with pytest.raises(ValueError):
        m.data[0, 0] = 5.0


def test_binary_round_trip_shape_2x3(tmp_path):
    m = EmbeddingMatrix(np.array([[1.0, 2.5, -3.25], [0.1, 0.2, 0.3]]))
    path = tmp_path / "m.ad01"
    save_embeddings(m, path)
    loaded = load_embeddings(path)
    assert loaded.data.shape == (2, 3)
    # values survive exactly at 32-bit storage precision
    assert np.array_equal(
        loaded.data, m.data.astype(np.float32).astype(np.float64)
    )


def test_binary_round_trip_is_byte_identical(tmp_path):
    rng = np.random.default_rng(7)
    m = EmbeddingMatrix(rng.standard_normal((5, 4)))
    p1 = tmp_path / "a.ad01"
    p2 = tmp_path / "b.ad01"
    save_embeddings(m, p1)
    save_embeddings(load_embeddings(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_round_trip_is_byte_identical(tmp_path):
    rng = np.random.default_rng(8)
    m = EmbeddingMatrix(rng.standard_normal((6, 3)) * 100)
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    save_embeddings(m, p1, format="csv")
    save_embeddings(load_embeddings(p1, format="csv"), p2, format="csv")
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_literal_parse(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1.0,2.0\n3.0,4.0\n")
    m = load_embeddings(path, format="csv")
    assert m.data.shape == (2, 2)
    assert m.data[0].tolist() == [1.0, 2.0]


def test_csv_ragged_rows_name_the_row(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1.0,2.0\n3.0\n")
    with pytest.raises(DimensionMismatchError, match="row 1"):
        load_embeddings(path, format="csv")


def test_bad_magic_names_offset(tmp_path):
    path = tmp_path / "m.ad01"
    path.write_bytes(b"NOPE" + struct.pack("<II", 1, 1) + b"\x00" * 4)
    with pytest.raises(BadMagicError, match="byte 0"):
        load_embeddings(path)


def test_truncated_body_detected(tmp_path):
    # header says N=5 rows but body has 4
    path = tmp_path / "m.ad01"
    body = np.zeros((4, 2), dtype="<f4").tobytes()
    path.write_bytes(b"AD01" + struct.pack("<II", 5, 2) + body)
    with pytest.raises(TruncatedFileError, match="byte"):
        load_embeddings(path)


def test_trailing_bytes_rejected(tmp_path):
    path = tmp_path / "m.ad01"
    body = np.zeros((1, 2), dtype="<f4").tobytes()
    path.write_bytes(b"AD01" + struct.pack("<II", 1, 2) + body + b"xx")
    with pytest.raises(TruncatedFileError, match="trailing"):
        load_embeddings(path)


def test_truncated_header_detected(tmp_path):
    path = tmp_path / "m.ad01"
    path.write_bytes(b"AD01\x01")
    with pytest.raises(TruncatedFileError):
        load_embeddings(path)


def test_non_finite_binary_payload_rejected(tmp_path):
    path = tmp_path / "m.ad01"
    body = np.array([[1.0, np.nan]], dtype="<f4").tobytes()
    path.write_bytes(b"AD01" + struct.pack("<II", 1, 2) + body)
    with pytest.raises(NonFiniteValueError, match="row 0"):
        load_embeddings(path)


def test_ids_sidecar_round_trip(tmp_path):
    m = EmbeddingMatrix(np.ones((2, 2)), ids=["a", "b"])
    path = tmp_path / "m.ad01"
    save_embeddings(m, path)
    sidecar = ids_path(path)
    assert sidecar.read_text().splitlines() == ["a", "b"]
    assert load_embeddings(path).ids == ["a", "b"]


def test_save_refuses_float32_overflow(tmp_path):
    m = EmbeddingMatrix(np.array([[1e200]]))
    with pytest.raises(NonFiniteValueError):
        save_embeddings(m, tmp_path / "m.ad01")


def test_empty_matrix_cannot_be_saved(tmp_path):
    m = EmbeddingMatrix(np.empty((0, 3)))
    with pytest.raises(ValidationError):
        save_embeddings(m, tmp_path / "m.ad01")


def test_center_arithmetic():
    m = EmbeddingMatrix(np.array([[1.0, 1.0], [3.0, 3.0]]))
    centered, mean = center(m)
    assert np.array_equal(centered.data, [[-1.0, -1.0], [1.0, 1.0]])
    assert mean.tolist() == [2.0, 2.0]


def test_center_single_row():
    centered, mean = center(EmbeddingMatrix(np.array([[5.0]])))
    assert centered.data.tolist() == [[0.0]]
    assert mean.tolist() == [5.0]


def test_center_column_means_vanish():
    rng = np.random.default_rng(0)
    m = EmbeddingMatrix(rng.standard_normal((100, 4)) * 10 + 3)
    centered, _ = center(m)
    # direct column-sum oracle
    assert np.all(np.abs(centered.data.sum(axis=0) / 100) < 1e-10)


def test_center_idempotent():
    rng = np.random.default_rng(1)
    m = EmbeddingMatrix(rng.standard_normal((50, 3)) + 7)
    once, _ = center(m)
    twice, _ = center(once)
    assert np.all(np.abs(twice.data - once.data) < 1e-12)


def test_l2_normalize_345_triangle():
    m = l2_normalize_rows(EmbeddingMatrix(np.array([[3.0, 4.0]])))
    assert np.allclose(m.data, [[0.6, 0.8]], atol=1e-15)


def test_l2_normalize_unit_row_unchanged():
    m = l2_normalize_rows(EmbeddingMatrix(np.array([[1.0, 0.0, 0.0]])))
    assert m.data.tolist() == [[1.0, 0.0, 0.0]]


def test_l2_normalize_zero_row():
    with pytest.raises(ZeroRowError) as err:
        l2_normalize_rows(EmbeddingMatrix(np.array([[0.0, 0.0]])))
    assert err.value.index == 0


def test_l2_normalize_idempotent():
    rng = np.random.default_rng(2)
    m = EmbeddingMatrix(rng.standard_normal((20, 5)))
    once = l2_normalize_rows(m)
    twice = l2_normalize_rows(once)
    assert np.all(np.abs(twice.data - once.data) < 1e-12)
    assert np.all(np.abs(np.linalg.norm(once.data, axis=1) - 1.0) < 1e-10)


def test_concat_embeddings_merges_ids():
    a = EmbeddingMatrix(np.ones((2, 2)), ids=["a", "b"])
    b = EmbeddingMatrix(np.zeros((1, 2)), ids=["c"])
    merged = concat_embeddings([a, b])
    assert merged.rows == 3
    assert merged.ids == ["a", "b", "c"]
    with pytest.raises(DimensionMismatchError):
        concat_embeddings([a, EmbeddingMatrix(np.ones((1, 3)))])


def test_domain_tags():
    m = EmbeddingMatrix(np.ones((1, 1)), domain_tag="latent")
    assert m.domain_tag is DomainTag.LATENT

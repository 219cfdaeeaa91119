import numpy as np
import pytest

from crossalign.errors import BadMagicError, ShapeMismatchError, TruncatedFileError
from crossalign.mapfile import load_map_pair, save_map_pair


def test_round_trip_byte_identical(tmp_path):
    rng = np.random.default_rng(0)
    h_s = rng.standard_normal((4, 4))
    h_e = rng.standard_normal((4, 4))
    trailer = {"kind": "infomax", "config": {"lam": 0.1, "seed": 3}, "k": 4}
    p1 = tmp_path / "a.adhp"
    p2 = tmp_path / "b.adhp"
    save_map_pair(p1, h_s, h_e, trailer)
    mp = load_map_pair(p1)
    assert np.array_equal(mp.h_s, h_s)
    assert np.array_equal(mp.h_e, h_e)
    assert mp.trailer == trailer
    save_map_pair(p2, mp.h_s, mp.h_e, mp.trailer)
    assert p1.read_bytes() == p2.read_bytes()


def test_rectangular_maps_zero_padded(tmp_path):
    rng = np.random.default_rng(1)
    h_s = rng.standard_normal((5, 2))
    h_e = rng.standard_normal((5, 2))
    path = tmp_path / "cca.adhp"
    save_map_pair(path, h_s, h_e, {"kind": "cca", "k": 2})
    mp = load_map_pair(path)
    assert mp.dims == 5
    assert np.array_equal(mp.h_s[:, :2], h_s)
    assert np.array_equal(mp.h_s[:, 2:], np.zeros((5, 3)))
    assert mp.trailer["k"] == 2


def test_bad_magic(tmp_path):
    path = tmp_path / "x.adhp"
    path.write_bytes(b"NOPE" + b"\x00" * 40)
    with pytest.raises(BadMagicError):
        load_map_pair(path)


def test_truncated_body(tmp_path):
    path = tmp_path / "x.adhp"
    import struct

    path.write_bytes(b"ADHP" + struct.pack("<I", 4) + b"\x00" * 10)
    with pytest.raises(TruncatedFileError):
        load_map_pair(path)


def test_shape_validation(tmp_path):
    with pytest.raises(ShapeMismatchError):
        save_map_pair(tmp_path / "x.adhp", np.ones((2, 3)), np.ones((2, 3)), {})
    with pytest.raises(ShapeMismatchError):
        save_map_pair(tmp_path / "x.adhp", np.ones((2, 2)), np.ones((3, 3)), {})


def test_empty_trailer(tmp_path):
    path = tmp_path / "x.adhp"
    save_map_pair(path, np.eye(2), np.eye(2), {})
    assert load_map_pair(path).trailer == {}

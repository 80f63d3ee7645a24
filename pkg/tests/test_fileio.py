import json

import numpy as np
import pytest

from pulsegate.errors import InvalidInputError
from pulsegate.fileio import (
    read_cube,
    read_features,
    read_waveform,
    sha256_file,
    write_cube,
    write_features,
    write_waveform,
)
from pulsegate.signal_core import VideoCube, Waveform


def test_waveform_csv_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    w = Waveform(rng.standard_normal(123), 30.0)
    path = tmp_path / "wave.csv"
    write_waveform(w, path)
    back = read_waveform(path)
    assert back.fps == pytest.approx(30.0)
    np.testing.assert_allclose(back.samples, w.samples, atol=1e-15)


def test_waveform_json_round_trip(tmp_path):
    w = Waveform(np.linspace(-1, 1, 50), 90.0)
    path = tmp_path / "wave.json"
    write_waveform(w, path)
    back = read_waveform(path)
    assert back.fps == 90.0
    np.testing.assert_allclose(back.samples, w.samples)


def test_waveform_csv_bad_header_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,val\n0,1\n1,2\n")
    with pytest.raises(InvalidInputError):
        read_waveform(path)


def test_cube_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    cube = VideoCube(rng.uniform(0, 1, (10, 4, 5, 3)), 30.0)
    path = tmp_path / "cube.bin"
    write_cube(cube, path)
    sidecar = json.loads((tmp_path / "cube.json").read_text())
    assert sidecar == {"t": 10, "h": 4, "w": 5, "c": 3, "fps": 30.0,
                       "dtype": "f32", "order": "THWC"}
    back = read_cube(path)
    assert back.fps == 30.0
    np.testing.assert_allclose(back.data, cube.data, atol=1e-7)


def test_cube_payload_size_checked(tmp_path):
    rng = np.random.default_rng(2)
    cube = VideoCube(rng.uniform(0, 1, (4, 2, 2, 1)), 10.0)
    path = tmp_path / "cube.bin"
    write_cube(cube, path)
    path.write_bytes(path.read_bytes()[:-4])
    with pytest.raises(InvalidInputError):
        read_cube(path)


def test_features_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    t_starts = np.arange(5.0)
    matrix = rng.standard_normal((5, 8))
    labels = np.array([1, -1, 1, 1, -1])
    path = tmp_path / "feats.csv"
    write_features(path, t_starts, matrix, labels)
    t_back, m_back, l_back = read_features(path)
    np.testing.assert_allclose(t_back, t_starts)
    np.testing.assert_allclose(m_back, matrix, atol=1e-15)
    np.testing.assert_array_equal(l_back, labels)
    write_features(path, t_starts, matrix)
    _, _, no_labels = read_features(path)
    assert no_labels is None


def test_deterministic_bytes(tmp_path):
    w = Waveform(np.linspace(0, 1, 40), 25.0)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_waveform(w, a)
    write_waveform(w, b)
    assert sha256_file(a) == sha256_file(b)

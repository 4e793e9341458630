import gzip
import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shamap import ingest
from shamap.dataset import PointCloud
from shamap.errors import (BadMagicError, HeterogeneousShapeError,
                           InsufficientMatchesError, MaxvalError, NonNumericCellError,
                           PayloadLengthError, RaggedRowError, TruncatedHeaderError,
                           TruncatedPayloadError, UnknownTypeError)

# 00 00 08 03 | 00 00 00 02 (x3) | 00 01 .. 07
IDX_U8_222 = bytes.fromhex("00000803" "00000002" "00000002" "00000002" "0001020304050607")


def test_parse_idx_hand_built():
    t = ingest.parse_idx(IDX_U8_222)
    assert t.element_kind == "u8"
    assert t.dims == (2, 2, 2)
    assert t.data.tolist() == list(range(8))
    assert t.array()[1, 0, 1] == 5


def test_parse_idx_empty_tensor():
    t = ingest.parse_idx(bytes.fromhex("00000801" "00000000"))
    assert t.dims == (0,) and t.data.size == 0


def test_parse_idx_big_endian_multibyte():
    raw = bytes.fromhex("00000B01" "00000002" "0102" "FFFE")
    t = ingest.parse_idx(raw)
    assert t.element_kind == "i16"
    assert t.data.tolist() == [0x0102, -2]
    raw = bytes.fromhex("00000D01" "00000001") + np.array([1.5], ">f4").tobytes()
    assert ingest.parse_idx(raw).data.tolist() == [1.5]


@pytest.mark.parametrize("raw, exc", [
    (bytes.fromhex("00000701"), UnknownTypeError),
    (bytes.fromhex("0000"), TruncatedHeaderError),
    (bytes.fromhex("00000803" "00000002"), TruncatedHeaderError),
    (IDX_U8_222[:-1], PayloadLengthError),
    (IDX_U8_222 + b"\x00", PayloadLengthError),
    (bytes.fromhex("01000801" "00000000"), BadMagicError),
])
def test_parse_idx_errors(raw, exc):
    with pytest.raises(exc):
        ingest.parse_idx(raw)


_kinds = st.sampled_from(["u8", "i8", "i16", "i32", "f32", "f64"])


@settings(max_examples=60, deadline=None)
@given(kind=_kinds, dims=st.lists(st.integers(0, 4), min_size=1, max_size=3),
       seed=st.integers(0, 2 ** 32 - 1))
def test_idx_round_trip(kind, dims, seed):
    dtype = ingest._IDX_CODES[kind][1].newbyteorder("=")
    count = int(np.prod(dims))
    raw = np.random.default_rng(seed).integers(0, 256, count * dtype.itemsize, dtype=np.uint8)
    data = raw.view(dtype)
    t = ingest.IdxTensor(kind, tuple(dims), data)
    blob = ingest.serialize_idx(t)
    back = ingest.parse_idx(blob)
    assert back.element_kind == kind and back.dims == tuple(dims)
    assert back.data.tobytes() == data.tobytes()
    assert ingest.serialize_idx(back) == blob


def test_read_idx_gzip(tmp_path):
    p = tmp_path / "x.gz"
    p.write_bytes(gzip.compress(IDX_U8_222))
    assert ingest.read_idx(p).dims == (2, 2, 2)


def test_parse_pgm_ascii_minimal():
    img = ingest.parse_pgm(b"P2 2 1 255 0 255")
    assert (img.width, img.height) == (2, 1)
    assert img.pixels.tolist() == [0, 255]


def test_parse_pgm_binary_with_comment():
    raw = b"P5\n# a comment\n2 2\n# another\n255\n" + bytes([0, 10, 200, 255])
    img = ingest.parse_pgm(raw)
    assert (img.width, img.height) == (2, 2)
    assert img.array().tolist() == [[0, 10], [200, 255]]


@pytest.mark.parametrize("raw, exc", [
    (b"P6 1 1 255 \x00\x00\x00", BadMagicError),
    (b"P5 2 2 65535\n\x00\x00", MaxvalError),
    (b"P5 2 2 255\n\x00\x00\x00", TruncatedPayloadError),
    (b"P2 2 2 255 1 2 3", TruncatedPayloadError),
    (b"P5 2", TruncatedHeaderError),
])
def test_parse_pgm_errors(raw, exc):
    with pytest.raises(exc):
        ingest.parse_pgm(raw)


@pytest.mark.parametrize("binary", [True, False])
def test_pgm_round_trip(binary, rng):
    px = rng.integers(0, 256, 12, dtype=np.uint8)
    img = ingest.GrayImage(4, 3, px)
    blob = ingest.serialize_pgm(img, binary)
    back = ingest.parse_pgm(blob)
    assert back.pixels.tobytes() == px.tobytes()
    assert ingest.serialize_pgm(back, binary) == blob


def test_images_to_cloud():
    img = np.zeros((28, 28), dtype=np.uint8)
    img[3, 4] = 255
    cloud = ingest.images_to_cloud([img])
    assert cloud.points.shape == (1, 784)
    assert cloud.points[0, 3 * 28 + 4] == 1.0
    assert np.count_nonzero(cloud.points) == 1
    assert not ingest.images_to_cloud([np.zeros((2, 2), np.uint8)]).points.any()
    with pytest.raises(HeterogeneousShapeError):
        ingest.images_to_cloud([np.zeros((2, 2)), np.zeros((2, 3))])


def test_images_to_cloud_range(rng):
    t = ingest.IdxTensor("u8", (5, 3, 3), rng.integers(0, 256, 45, dtype=np.uint8))
    pts = ingest.images_to_cloud(t).points
    assert pts.shape == (5, 9)
    assert pts.min() >= 0 and pts.max() <= 1


def test_select_by_label():
    cloud = PointCloud([[0.0], [1.0], [2.0]])
    np.testing.assert_array_equal(ingest.select_by_label(cloud, [1, 0, 1], 1, 2).points,
                                  [[0.0], [2.0]])
    with pytest.raises(InsufficientMatchesError):
        ingest.select_by_label(cloud, [1, 0, 1], 1, 0)
    with pytest.raises(InsufficientMatchesError):
        ingest.select_by_label(cloud, [1, 0, 1], 0, 2)


def test_csv_round_trip(rng):
    pts = rng.standard_normal((5, 3)) * 10.0 ** rng.integers(-20, 20, (5, 3))
    buf = io.StringIO()
    ingest.write_csv(buf, pts)
    cloud, labels = ingest.read_csv(io.StringIO(buf.getvalue()))
    assert labels is None
    assert cloud.points.tobytes() == pts.tobytes()


def test_csv_labels_and_errors():
    buf = io.StringIO()
    ingest.write_csv(buf, np.eye(2), [3, 0])
    text = buf.getvalue()
    assert text.splitlines()[0] == "dim0,dim1,label"
    assert text.splitlines()[1].endswith(",3")
    _, labels = ingest.read_csv(io.StringIO(text))
    assert labels.labels.tolist() == [3, 0]
    with pytest.raises(RaggedRowError):
        ingest.read_csv(io.StringIO("dim0,dim1,dim2\n1,2,3\n1,2\n"))
    with pytest.raises(NonNumericCellError):
        ingest.read_csv(io.StringIO("dim0,dim1\n1,abc\n"))


def test_mnist_fixture_loads():
    from pathlib import Path
    data = Path(__file__).parent / "data"
    imgs = ingest.read_idx(data / "mnist01-images-idx3-ubyte.gz")
    labs = ingest.read_idx(data / "mnist01-labels-idx1-ubyte.gz")
    assert imgs.dims == (1000, 28, 28) and labs.dims == (1000,)
    cloud = ingest.images_to_cloud(imgs)
    zeros = ingest.select_by_label(cloud, labs.data, 0, 250)
    assert zeros.points.shape == (250, 784)

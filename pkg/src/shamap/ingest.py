"""Readers and writers: MNIST IDX, PGM (P2/P5) and point-cloud CSV."""
from __future__ import annotations

import csv
import gzip
import io
import math
import re
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dataset import LabelSet, PointCloud, as_cloud
from .errors import (BadMagicError, DataError, HeterogeneousShapeError,
                     InsufficientMatchesError, MaxvalError, NonNumericCellError,
                     ParseError, PayloadLengthError, RaggedRowError,
                     TruncatedHeaderError, TruncatedPayloadError,
                     UnknownTypeError)

# type code -> (kind, big-endian dtype)
IDX_TYPES = {
    0x08: ("u8", np.dtype(">u1")),
    0x09: ("i8", np.dtype(">i1")),
    0x0B: ("i16", np.dtype(">i2")),
    0x0C: ("i32", np.dtype(">i4")),
    0x0D: ("f32", np.dtype(">f4")),
    0x0E: ("f64", np.dtype(">f8")),
}
_IDX_CODES = {kind: (code, dt) for code, (kind, dt) in IDX_TYPES.items()}


@dataclass(frozen=True, eq=False)
class IdxTensor:
    element_kind: str
    dims: tuple
    data: np.ndarray  # flat, native byte order

    def __post_init__(self):
        if self.element_kind not in _IDX_CODES:
            raise UnknownTypeError(f"unknown IDX element kind {self.element_kind!r}")
        if int(np.prod(self.dims, dtype=np.int64)) != self.data.size:
            raise PayloadLengthError(
                f"dims {list(self.dims)} need {int(np.prod(self.dims))} elements, "
                f"payload has {self.data.size}")

    def array(self) -> np.ndarray:
        return self.data.reshape(self.dims)


def parse_idx(data: bytes) -> IdxTensor:
    """Decode an IDX container (big-endian magic ``00 00 TT DD``)."""
    data = bytes(data)
    if len(data) < 4:
        raise TruncatedHeaderError(f"IDX header needs 4 magic bytes, got {len(data)}")
    if data[0] != 0 or data[1] != 0:
        raise BadMagicError(f"IDX magic must start with 00 00, got {data[:2].hex()}")
    code, ndim = data[2], data[3]
    if code not in IDX_TYPES:
        raise UnknownTypeError(f"unknown IDX type code 0x{code:02X}")
    header_len = 4 + 4 * ndim
    if len(data) < header_len:
        raise TruncatedHeaderError(
            f"IDX header declares {ndim} dimensions ({header_len} bytes), "
            f"only {len(data)} bytes present")
    dims = struct.unpack(f">{ndim}I", data[4:header_len])
    kind, dtype = IDX_TYPES[code]
    count = math.prod(dims)
    expected = count * dtype.itemsize
    payload = len(data) - header_len
    if payload != expected:
        raise PayloadLengthError(
            f"IDX payload is {payload} bytes, dims {list(dims)} of {kind} need {expected}")
    flat = np.frombuffer(data, dtype=dtype, count=count, offset=header_len)
    return IdxTensor(kind, tuple(dims), flat.astype(dtype.newbyteorder("=")))


def serialize_idx(tensor: IdxTensor) -> bytes:
    code, dtype = _IDX_CODES[tensor.element_kind]
    head = bytes([0, 0, code, len(tensor.dims)]) + struct.pack(
        f">{len(tensor.dims)}I", *tensor.dims)
    return head + np.asarray(tensor.data, dtype=dtype).tobytes()


def _read_maybe_gzip(path) -> bytes:
    raw = Path(path).read_bytes()
    if raw[:2] == b"\x1f\x8b":
        return gzip.decompress(raw)
    return raw


def read_idx(path) -> IdxTensor:
    """Read an IDX file; gzip-compressed files are detected by their magic."""
    return parse_idx(_read_maybe_gzip(path))


@dataclass(frozen=True, eq=False)
class GrayImage:
    width: int
    height: int
    pixels: np.ndarray  # row-major uint8, length width*height
    maxval: int = 255

    def __post_init__(self):
        if self.pixels.size != self.width * self.height:
            raise DataError(
                f"{self.pixels.size} pixels for a {self.width}x{self.height} image")

    def array(self) -> np.ndarray:
        return self.pixels.reshape(self.height, self.width)


_COMMENT = re.compile(rb"#[^\n\r]*")


def _header_tokens(data: bytes, count: int, start: int = 0):
    """Read ``count`` whitespace-separated header tokens, skipping '#' comments.

    Returns the tokens and the offset just past the last one.
    """
    pos = start
    tokens = []
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        if pos >= n:
            raise TruncatedHeaderError("PGM header ended early")
        end = pos
        while end < n and not data[end:end + 1].isspace() and data[end:end + 1] != b"#":
            end += 1
        tokens.append(data[pos:end])
        pos = end
    return tokens, pos


def parse_pgm(data: bytes) -> GrayImage:
    """Decode a binary (P5) or ASCII (P2) graymap with maxval <= 255."""
    data = bytes(data)
    if data[:2] not in (b"P5", b"P2"):
        raise BadMagicError(f"not a P2/P5 graymap (magic {data[:2]!r})")
    binary = data[:2] == b"P5"
    tokens, pos = _header_tokens(data, 3, 2)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise ParseError(f"bad PGM header fields {tokens!r}") from None
    if width < 0 or height < 0 or maxval < 1:
        raise ParseError(f"bad PGM header values {width}x{height} maxval {maxval}")
    if maxval > 255:
        raise MaxvalError(f"PGM maxval {maxval} > 255 (16-bit graymaps unsupported)")
    count = width * height
    if binary:
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            if count:
                raise TruncatedPayloadError("PGM payload missing")
        start = pos + 1
        body = data[start:start + count]
        if len(body) < count:
            raise TruncatedPayloadError(f"PGM payload has {len(body)} of {count} bytes")
        pixels = np.frombuffer(body, dtype=np.uint8).copy()
    else:
        body = _COMMENT.sub(b" ", data[pos:]).split()
        if len(body) < count:
            raise TruncatedPayloadError(f"PGM payload has {len(body)} of {count} values")
        try:
            values = np.array([int(v) for v in body[:count]], dtype=np.int64)
        except ValueError:
            raise ParseError("non-integer PGM sample") from None
        if values.size and (values.min() < 0 or values.max() > maxval):
            raise ParseError("PGM sample outside [0, maxval]")
        pixels = values.astype(np.uint8)
    if pixels.size and pixels.max() > maxval:
        raise ParseError("PGM sample exceeds maxval")
    return GrayImage(width, height, pixels, maxval)


def serialize_pgm(image: GrayImage, binary: bool = True) -> bytes:
    head = f"{'P5' if binary else 'P2'}\n{image.width} {image.height}\n{image.maxval}\n"
    if binary:
        return head.encode("ascii") + image.pixels.astype(np.uint8).tobytes()
    rows = image.array()
    lines = [" ".join(str(int(v)) for v in row) for row in rows]
    return (head + "\n".join(lines) + "\n").encode("ascii")


def read_pgm(path) -> GrayImage:
    return parse_pgm(Path(path).read_bytes())


def images_to_cloud(images) -> PointCloud:
    """Flatten images row-major into rows of a cloud, scaling bytes by 1/255.

    ``images`` is a 3-D :class:`IdxTensor` (first axis indexes images), an
    ``(N, H, W)`` array, or a sequence of :class:`GrayImage` / 2-D arrays.
    """
    if isinstance(images, IdxTensor):
        images = images.array()
    if isinstance(images, np.ndarray) and images.ndim == 3:
        arrays = list(images)
    else:
        arrays = [im.array() if isinstance(im, GrayImage) else np.asarray(im)
                  for im in images]
    if not arrays:
        raise DataError("no images given")
    shape = arrays[0].shape
    for k, a in enumerate(arrays):
        if a.shape != shape:
            raise HeterogeneousShapeError(
                f"image {k} has shape {a.shape}, expected {shape}")
    rows = np.stack([a.reshape(-1) for a in arrays]).astype(np.float64)
    return PointCloud(rows / 255.0)


def label_indices(labels, wanted: int, count: int) -> np.ndarray:
    lab = labels.labels if isinstance(labels, LabelSet) else np.asarray(labels)
    if count < 1:
        raise InsufficientMatchesError("selection count must be >= 1")
    hits = np.flatnonzero(lab == wanted)
    if hits.size < count:
        raise InsufficientMatchesError(
            f"requested {count} samples of class {wanted}, only {hits.size} available")
    return hits[:count]


def select_by_label(cloud, labels, wanted: int, count: int) -> PointCloud:
    """First ``count`` rows whose label equals ``wanted``, in original order."""
    cloud = as_cloud(cloud)
    if not isinstance(labels, LabelSet):
        labels = LabelSet(labels)
    labels.check_pairs(cloud)
    return cloud.subset(label_indices(labels, wanted, count))


def format_float(x: float) -> str:
    return "%.17g" % x


def write_csv(target, coords, labels=None) -> None:
    """Write ``dim0,dim1,...[,label]`` rows; ``target`` is a path or text stream."""
    coords = np.asarray(coords.points if isinstance(coords, PointCloud) else coords,
                        dtype=np.float64)
    if coords.ndim != 2:
        raise DataError("coordinates must be 2-D")
    if labels is not None:
        lab = labels.labels if isinstance(labels, LabelSet) else np.asarray(labels)
        if lab.shape[0] != coords.shape[0]:
            raise DataError(f"{lab.shape[0]} labels for {coords.shape[0]} rows")
    header = [f"dim{k}" for k in range(coords.shape[1])]
    if labels is not None:
        header.append("label")
    out = io.StringIO()
    out.write(",".join(header) + "\n")
    for i, row in enumerate(coords):
        cells = [format_float(v) for v in row]
        if labels is not None:
            cells.append(str(int(lab[i])))
        out.write(",".join(cells) + "\n")
    text = out.getvalue()
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(target, "w", newline="") as fh:
            fh.write(text)


def read_csv(source) -> tuple[PointCloud, LabelSet | None]:
    """Read a cloud written by :func:`write_csv`; returns ``(cloud, labels)``."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty CSV")
    header = [c.strip() for c in rows[0]]
    has_label = header[-1] == "label"
    ndim = len(header) - int(has_label)
    if ndim < 1 or header[:ndim] != [f"dim{k}" for k in range(ndim)]:
        raise ParseError(f"unexpected CSV header {header}")
    coords = np.empty((len(rows) - 1, ndim))
    labels = np.empty(len(rows) - 1, dtype=np.int64)
    for i, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise RaggedRowError(
                f"line {i + 2}: {len(row)} cells, header has {len(header)}")
        try:
            coords[i] = [float(c) for c in row[:ndim]]
            if has_label:
                labels[i] = int(row[ndim])
        except ValueError:
            raise NonNumericCellError(f"line {i + 2}: non-numeric cell in {row}") from None
    return PointCloud(coords), (LabelSet(labels) if has_label else None)

"""Point-cloud containers and reference-point resolution."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DataError, DimensionMismatchError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PointCloud:
    """An ``n x D`` array of sample coordinates, one sample per row.

    Coordinates are widened to float64 on construction and stored read-only.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2:
            raise DataError(f"point cloud must be 2-D, got shape {pts.shape}")
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise DataError(f"point cloud needs n >= 1 and D >= 1, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            bad = np.unique(np.nonzero(~np.isfinite(pts))[0])
            raise DataError(f"non-finite coordinates in rows {bad[:10].tolist()}")
        object.__setattr__(self, "points", _frozen(pts))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return self.points[i]

    def subset(self, indices) -> "PointCloud":
        return PointCloud(self.points[np.asarray(indices, dtype=np.intp)])


@dataclass(frozen=True, eq=False)
class LabelSet:
    labels: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.labels)
        if raw.ndim != 1:
            raise DataError("labels must be a 1-D sequence")
        if raw.size and not np.all(np.equal(np.mod(raw, 1), 0)):
            raise DataError("labels must be integers")
        lab = raw.astype(np.int64)
        if lab.size and lab.min() < 0:
            raise DataError("labels must be >= 0")
        object.__setattr__(self, "labels", _frozen(lab))

    def __len__(self):
        return self.labels.shape[0]

    def check_pairs(self, cloud: PointCloud) -> None:
        if len(self) != cloud.n:
            raise DimensionMismatchError(
                f"{len(self)} labels for a cloud of {cloud.n} points")


class Reference(enum.Enum):
    ORIGIN = "origin"
    CENTROID = "centroid"


def as_cloud(x) -> PointCloud:
    return x if isinstance(x, PointCloud) else PointCloud(x)


def centroid(cloud) -> np.ndarray:
    cloud = as_cloud(cloud)
    return cloud.points.mean(axis=0)


def resolve_reference(ref, cloud) -> np.ndarray:
    """Turn a reference specification into a concrete length-D vector.

    ``ref`` may be a :class:`Reference` member, the strings ``"origin"`` /
    ``"centroid"``, or an explicit vector (returned unchanged if already a
    float64 array of the right length).
    """
    cloud = as_cloud(cloud)
    if isinstance(ref, str):
        try:
            ref = Reference(ref.lower())
        except ValueError:
            raise DataError(f"unknown reference {ref!r}") from None
    if ref is None or ref is Reference.ORIGIN:
        return np.zeros(cloud.dim)
    if ref is Reference.CENTROID:
        return centroid(cloud)
    if isinstance(ref, np.ndarray) and ref.dtype == np.float64 and ref.ndim == 1:
        vec = ref
    else:
        vec = np.asarray(ref, dtype=np.float64).reshape(-1)
    if vec.shape[0] != cloud.dim:
        raise DimensionMismatchError(
            f"reference has length {vec.shape[0]}, cloud dimension is {cloud.dim}")
    if not np.all(np.isfinite(vec)):
        raise DataError("reference point has non-finite entries")
    return vec

import numpy as np
import pytest

from shamap.dataset import LabelSet, PointCloud, Reference, centroid, resolve_reference
from shamap.errors import DataError, DimensionMismatchError


def test_centroid_examples():
    np.testing.assert_array_equal(centroid([[0, 0], [2, 2]]), [1, 1])
    np.testing.assert_array_equal(centroid([[3, 4, 5]]), [3, 4, 5])
    np.testing.assert_array_equal(centroid([[1, 0], [0, 1], [-1, 0], [0, -1]]), [0, 0])


def test_centroid_permutation_invariant(rng):
    pts = rng.standard_normal((17, 4))
    perm = rng.permutation(17)
    np.testing.assert_allclose(centroid(pts[perm]), centroid(pts), atol=1e-15)


def test_resolve_reference():
    cloud = PointCloud(np.ones((4, 3)))
    np.testing.assert_array_equal(resolve_reference(Reference.ORIGIN, cloud), [0, 0, 0])
    np.testing.assert_array_equal(resolve_reference("origin", cloud), [0, 0, 0])
    np.testing.assert_array_equal(resolve_reference(Reference.CENTROID, [[2, 0], [0, 2]]), [1, 1])
    with pytest.raises(DimensionMismatchError):
        resolve_reference([1, 2], cloud)


def test_resolve_reference_idempotent():
    cloud = PointCloud(np.zeros((2, 2)))
    v = np.array([0.1, 0.7])
    once = resolve_reference(v, cloud)
    assert resolve_reference(once, cloud) is once
    assert once.tobytes() == v.tobytes()


def test_point_cloud_invariants():
    with pytest.raises(DataError):
        PointCloud([[0.0, np.nan]])
    with pytest.raises(DataError):
        PointCloud(np.zeros((0, 3)))
    cloud = PointCloud(np.arange(6, dtype=np.uint8).reshape(3, 2))
    assert cloud.points.dtype == np.float64
    assert not cloud.points.flags.writeable
    assert (cloud.n, cloud.dim) == (3, 2)


def test_label_set():
    with pytest.raises(DataError):
        LabelSet([0, -1])
    with pytest.raises(DimensionMismatchError):
        LabelSet([0, 1]).check_pairs(PointCloud(np.zeros((3, 1))))

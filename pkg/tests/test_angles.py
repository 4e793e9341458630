import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shamap import angles, graph, synth
from shamap.dataset import PointCloud
from shamap.errors import DegenerateReferenceError, DisconnectedGraphError

from .oracles import naive_accumulated_angles


@pytest.mark.parametrize("xi, xj, c, expected", [
    ((1, 0), (0, 1), (0, 0), math.pi / 2),
    ((3, 4), (3, 4), (0, 0), 0.0),
    ((1, 0), (-1, 0), (0, 0), math.pi),
    ((2, 0), (1, 1), (1, 0), math.pi / 2),
])
def test_edge_angle_examples(xi, xj, c, expected):
    assert angles.edge_angle(xi, xj, c) == pytest.approx(expected, abs=1e-15)


def test_edge_angle_degenerate():
    with pytest.raises(DegenerateReferenceError):
        angles.edge_angle((0, 0), (1, 0), (0, 0))
    with pytest.raises(DegenerateReferenceError) as info:
        angles.reference_offsets(PointCloud([[1.0, 0], [0, 0], [0, 1]]), (0.0, 0.0))
    assert list(info.value.indices) == [1]


def test_arc_additivity(backend):
    phi = np.array([0.0, 0.05, 0.10]) * math.pi
    cloud = PointCloud(np.c_[np.cos(phi), np.sin(phi)])
    g = graph.NeighborGraph.from_edges(3, [(0, 1), (1, 2)], [1.0, 1.0])
    theta = angles.accumulated_angles(cloud, (0.0, 0.0), graph.all_pairs_shortest(g), backend)
    assert theta[0, 2] == pytest.approx(0.10 * math.pi, abs=1e-15)
    assert theta[0, 1] == angles.edge_angle(cloud.points[0], cloud.points[1], (0, 0))


def test_adjacent_pairs_equal_edge_angle(rng, backend):
    cloud = PointCloud(rng.standard_normal((30, 4)) + 3.0)
    g = graph.knn_graph(cloud, 4)
    theta = angles.accumulated_angles(cloud, "origin", graph.all_pairs_shortest(g), backend)
    for i, j, _ in zip(*g.edges()):
        if graph.shortest_path(graph.all_pairs_shortest(g), i, j) == [i, j]:
            assert theta[i, j] == angles.edge_angle(cloud.points[i], cloud.points[j], np.zeros(4))


def test_helix_matches_naive_rewalk(backend):
    cloud = synth.gen_helix()
    geo = graph.all_pairs_shortest(graph.knn_graph(cloud, 2))
    theta = angles.accumulated_angles(cloud, np.zeros(3), geo, backend)
    ref = naive_accumulated_angles(cloud.points, np.zeros(3), geo)
    assert np.max(np.abs(theta - ref)) < 1e-10


def test_angle_matrix_invariants(rng, backend):
    cloud = PointCloud(rng.standard_normal((25, 3)) + 2.0)
    geo = graph.all_pairs_shortest(graph.knn_graph(cloud, 3))
    theta = angles.accumulated_angles(cloud, "origin", geo, backend)
    np.testing.assert_array_equal(theta, theta.T)
    assert np.all(np.diag(theta) == 0) and np.all(theta >= 0)
    hops = np.array([[len(graph.shortest_path(geo, m, n)) - 1 for n in range(25)]
                     for m in range(25)])
    assert np.all(theta <= hops * math.pi)


def test_angular_mode_triangle_inequality(rng, backend):
    cloud = PointCloud(rng.standard_normal((30, 3)) + 1.5)
    g = graph.knn_graph(cloud, 4)
    ang = angles.edge_angles(cloud, "origin", g)
    geo = graph.all_pairs_shortest(g, "angular", ang, backend=backend)
    theta = angles.accumulated_angles(cloud, "origin", geo, backend)
    assert np.all(theta[:, None, :] <= theta[:, :, None] + theta[None, :, :] + 1e-12)
    np.testing.assert_allclose(theta, geo.dist, rtol=1e-12, atol=1e-15)


def test_unreachable_raises():
    cloud = PointCloud([[1.0, 0], [1.1, 0], [0, 5.0]])
    geo = graph.all_pairs_shortest(graph.NeighborGraph.from_edges(3, [(0, 1)], [0.1]))
    with pytest.raises(DisconnectedGraphError):
        angles.accumulated_angles(cloud, "origin", geo)


def test_cosine_examples():
    theta = np.array([[0.0, math.pi / 2, math.pi, 1.5 * math.pi],
                      [math.pi / 2, 0.0, 0.3, 0.2],
                      [math.pi, 0.3, 0.0, 0.1],
                      [1.5 * math.pi, 0.2, 0.1, 0.0]])
    c = angles.cosine_matrix(theta)
    assert np.all(np.diag(c) == 1.0)
    assert abs(c[0, 1]) < 1e-15 and c[0, 2] == -1.0 and abs(c[0, 3]) < 1e-15
    np.testing.assert_array_equal(c, c.T)
    assert np.all(np.abs(c) <= 1.0)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10 ** 6), dim=st.integers(2, 6))
def test_rotation_invariance(seed, dim):
    rng = np.random.default_rng(seed)
    xi, xj, c = rng.standard_normal((3, dim))
    q = synth.random_orthogonal(dim, rng)
    a = angles.edge_angle(xi, xj, c)
    b = angles.edge_angle(q @ xi, q @ xj, q @ c)
    assert abs(a - b) <= 1e-12 + 1e-7 * (a < 1e-4)  # arccos is ill-conditioned near 0


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10 ** 6), e=st.integers(-20, 20))
def test_power_of_two_scaling_is_exact(seed, e):
    xi, xj, c = np.random.default_rng(seed).standard_normal((3, 3))
    s = 2.0 ** e
    assert angles.edge_angle(s * xi, s * xj, s * c) == angles.edge_angle(xi, xj, c)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10 ** 6), s=st.floats(1e-3, 1e3))
def test_generic_scaling(seed, s):
    xi, xj, c = np.random.default_rng(seed).standard_normal((3, 3))
    a = angles.edge_angle(xi, xj, c)
    assert abs(angles.edge_angle(s * xi, s * xj, s * c) - a) <= 1e-12 + 1e-7 * (a < 1e-4)


def test_joint_rotation_leaves_cosine_matrix(rng):
    cloud = PointCloud(rng.standard_normal((20, 3)) + 2.0)
    c = np.array([0.1, -0.2, 0.3])
    q = synth.random_orthogonal(3, rng)
    mats = []
    for pts, ref in ((cloud.points, c), (cloud.points @ q.T, q @ c)):
        cl = PointCloud(pts)
        g = graph.knn_graph(cl, 4)
        geo = graph.all_pairs_shortest(g)
        mats.append((g.edge_set(), angles.cosine_matrix(angles.accumulated_angles(cl, ref, geo))))
    assert mats[0][0] == mats[1][0]
    assert np.max(np.abs(mats[0][1] - mats[1][1])) < 1e-10

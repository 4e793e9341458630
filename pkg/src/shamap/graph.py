"""Neighbourhood graphs and all-pairs shortest paths with path recovery.

Path conventions
----------------
``GeodesicResult.next_hop[m, n]`` is the node after ``m`` on a shortest path
from ``m`` to ``n``; column ``n`` is the shortest-path tree grown from ``n``.
Routes within a relative ``TIE_RTOL`` of each other count as tied, and ties
go to the lowest-index predecessor. The canonical path of a pair is the one in
the tree rooted at the pair's lower index, and ``dist[a, b]`` is the
left-to-right sum of edge weights along that path starting from ``a``. With these conventions ``dist``
is exactly symmetric and :func:`shortest_path` returns mutually reversed node
sequences for ``(m, n)`` and ``(n, m)``.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from . import kernels
from .dataset import as_cloud
from .errors import DataError, DisconnectedGraphError
from .kernels import TIE_RTOL


class WeightMode(enum.Enum):
    EUCLIDEAN = "euclidean"
    ANGULAR = "angular"


def _weight_mode(mode) -> WeightMode:
    if isinstance(mode, WeightMode):
        return mode
    try:
        return WeightMode(str(mode).lower())
    except ValueError:
        raise DataError(f"unknown weight mode {mode!r}") from None


@dataclass(frozen=True, eq=False)
class NeighborGraph:
    """Undirected graph in CSR form; neighbour lists are sorted by index."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    lengths: np.ndarray
    rule: tuple = ("custom", None)

    @classmethod
    def from_adjacency(cls, adjacency, distances, rule=("custom", None)):
        adj = np.asarray(adjacency, dtype=bool)
        adj = adj | adj.T
        np.fill_diagonal(adj, False)
        rows, cols = np.nonzero(adj)
        indptr = np.zeros(adj.shape[0] + 1, dtype=kernels.INDEX)
        np.cumsum(np.bincount(rows, minlength=adj.shape[0]), out=indptr[1:])
        lengths = np.asarray(distances)[rows, cols].astype(np.float64)
        return cls(adj.shape[0], indptr, cols.astype(kernels.INDEX), lengths, rule)

    @classmethod
    def from_edges(cls, n, edges, lengths, rule=("custom", None)):
        """Build from ``(i, j)`` pairs and their lengths (used by tests and tools)."""
        dense = np.zeros((n, n))
        adj = np.zeros((n, n), dtype=bool)
        for (i, j), w in zip(edges, lengths):
            if i == j:
                raise DataError("self-loops are not allowed")
            adj[i, j] = adj[j, i] = True
            dense[i, j] = dense[j, i] = w
        return cls.from_adjacency(adj, dense, rule)

    @property
    def edge_count(self) -> int:
        return self.indices.shape[0] // 2

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self):
        """Arrays ``(i, j, length)`` of each undirected edge once, with ``i < j``."""
        rows = np.repeat(np.arange(self.n), self.degree())
        keep = rows < self.indices
        return rows[keep], self.indices[keep], self.lengths[keep]

    def edge_set(self) -> set:
        i, j, _ = self.edges()
        return set(zip(i.tolist(), j.tolist()))

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        k = np.searchsorted(nb, j)
        return bool(k < nb.size and nb[k] == j)

    def dense(self, values=None, fill=0.0) -> np.ndarray:
        """Dense ``n x n`` matrix of per-edge ``values`` (lengths by default)."""
        values = self.lengths if values is None else np.asarray(values, dtype=np.float64)
        out = np.full((self.n, self.n), fill, dtype=np.float64)
        rows = np.repeat(np.arange(self.n), self.degree())
        out[rows, self.indices] = values
        return out

    def subgraph(self, nodes) -> "NeighborGraph":
        nodes = np.asarray(nodes, dtype=np.intp)
        adj = self.dense(np.ones_like(self.lengths)) > 0
        dist = self.dense()
        return NeighborGraph.from_adjacency(adj[np.ix_(nodes, nodes)],
                                            dist[np.ix_(nodes, nodes)], self.rule)


def pairwise_distances(cloud) -> np.ndarray:
    """Exact Euclidean distance matrix (direct differences, exactly symmetric)."""
    pts = as_cloud(cloud).points
    return cdist(pts, pts)


def nearest_neighbors(cloud, k: int, distances=None) -> np.ndarray:
    """One-sided ``k`` nearest neighbours of every point, ``n x k``.

    Ties in distance go to the lower index; a point is never its own neighbour.
    """
    cloud = as_cloud(cloud)
    n = cloud.n
    if not 1 <= k <= n - 1:
        raise DataError(f"K must satisfy 1 <= K <= n-1 = {n - 1}, got {k}")
    d = pairwise_distances(cloud) if distances is None else np.array(distances, copy=True)
    np.fill_diagonal(d, -1.0)
    order = np.argsort(d, axis=1, kind="stable")
    return order[:, 1:k + 1]


def knn_graph(cloud, k: int) -> NeighborGraph:
    """Union-symmetrised K-nearest-neighbour graph."""
    cloud = as_cloud(cloud)
    dist = pairwise_distances(cloud)
    nbrs = nearest_neighbors(cloud, k, dist)
    adj = np.zeros((cloud.n, cloud.n), dtype=bool)
    adj[np.repeat(np.arange(cloud.n), k), nbrs.reshape(-1)] = True
    return NeighborGraph.from_adjacency(adj, dist, ("knn", int(k)))


def eps_graph(cloud, eps: float) -> NeighborGraph:
    """Connect every pair within Euclidean distance ``eps``."""
    if not eps > 0:
        raise DataError(f"eps must be > 0, got {eps}")
    dist = pairwise_distances(cloud)
    return NeighborGraph.from_adjacency(dist <= eps, dist, ("eps", float(eps)))


def neighbor_graph(cloud, k=None, eps=None) -> NeighborGraph:
    if (k is None) == (eps is None):
        raise DataError("exactly one of K and eps must be given")
    return knn_graph(cloud, k) if k is not None else eps_graph(cloud, eps)


def complete_graph(cloud) -> NeighborGraph:
    cloud = as_cloud(cloud)
    dist = pairwise_distances(cloud)
    return NeighborGraph.from_adjacency(np.ones((cloud.n, cloud.n), bool), dist,
                                        ("complete", None))


def connected_components(g: NeighborGraph) -> np.ndarray:
    """Component id per node; ids are numbered in order of each component's lowest node."""
    comp = np.full(g.n, -1, dtype=np.int64)
    indptr, indices = g.indptr, g.indices
    label = 0
    for start in range(g.n):
        if comp[start] >= 0:
            continue
        comp[start] = label
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in indices[indptr[u]:indptr[u + 1]]:
                if comp[v] < 0:
                    comp[v] = label
                    queue.append(v)
        label += 1
    return comp


def largest_component(g: NeighborGraph) -> np.ndarray:
    """Sorted node indices of the largest component (lowest id wins ties)."""
    comp = connected_components(g)
    sizes = np.bincount(comp)
    return np.flatnonzero(comp == int(np.argmax(sizes)))


def require_connected(g: NeighborGraph) -> None:
    comp = connected_components(g)
    count = int(comp.max()) + 1 if comp.size else 0
    if count > 1:
        sizes = np.bincount(comp)
        raise DisconnectedGraphError(
            f"neighbour graph has {count} connected components (sizes "
            f"{sorted(sizes.tolist(), reverse=True)[:10]}); increase K/eps or "
            f"restrict to the largest component", components=comp)


@dataclass(frozen=True, eq=False)
class GeodesicResult:
    dist: np.ndarray
    next_hop: np.ndarray
    weight_mode: WeightMode = WeightMode.EUCLIDEAN

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def parents(self) -> np.ndarray:
        """``parents[r, v]``: v's parent in the shortest-path tree rooted at r."""
        return np.ascontiguousarray(self.next_hop.T)


def _edge_weights(g: NeighborGraph, weight_mode, angles) -> tuple[WeightMode, np.ndarray]:
    mode = _weight_mode(weight_mode)
    if mode is WeightMode.EUCLIDEAN:
        return mode, g.lengths
    if angles is None:
        raise DataError("ANGULAR weight mode requires per-edge angles")
    angles = np.asarray(angles, dtype=np.float64)
    if angles.ndim == 2:
        rows = np.repeat(np.arange(g.n), g.degree())
        angles = angles[rows, g.indices]
    if angles.shape != g.lengths.shape:
        raise DataError(f"angle table has {angles.shape[0]} entries, graph has "
                        f"{g.lengths.shape[0]} directed edges")
    return mode, angles


def _mirror_upper(rows: np.ndarray) -> np.ndarray:
    out = np.triu(rows, 1)
    return out + out.T


def all_pairs_shortest(g: NeighborGraph, weight_mode=WeightMode.EUCLIDEAN,
                       angles=None, backend=None) -> GeodesicResult:
    """Dijkstra from every node; see the module docstring for tie and sum conventions."""
    mode, weights = _edge_weights(g, weight_mode, angles)
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise DataError("edge weights must be finite and >= 0")
    dist_rows, pred = kernels.dijkstra_rows(g.indptr, g.indices, weights,
                                            np.arange(g.n), backend=backend)
    return GeodesicResult(_mirror_upper(dist_rows), np.ascontiguousarray(pred.T), mode)


def floyd_warshall_oracle(g: NeighborGraph, weight_mode=WeightMode.EUCLIDEAN,
                          angles=None) -> GeodesicResult:
    """O(n^3) dynamic-programming reference with the same output conventions.

    Trees are read off the DP distances: nodes are visited in order of DP
    distance from the root, and each takes as parent the lowest-index visited
    neighbour whose route is within ``TIE_RTOL`` (relative) of the best route
    through visited neighbours. Distances are then re-summed along the tree.
    """
    mode, weights = _edge_weights(g, weight_mode, angles)
    n = g.n
    w = g.dense(weights, fill=np.inf)
    np.fill_diagonal(w, 0.0)
    d = w.copy()
    for k in range(n):
        np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :], out=d)

    nbr = [g.neighbors(v).tolist() for v in range(n)]
    parent = np.full((n, n), -1, dtype=np.int64)
    folded = np.full((n, n), np.inf)
    for a in range(n):
        row = d[a]
        order = sorted((v for v in range(n) if v != a and np.isfinite(row[v])),
                       key=lambda v: (row[v], v))
        folded[a, a] = 0.0
        done = {a}
        for v in order:
            routes = [(u, folded[a, u] + w[u, v]) for u in nbr[v] if u in done]
            best = min(r for _, r in routes)
            u, total = next((u, r) for u, r in routes if r - best <= TIE_RTOL * best)
            parent[a, v] = u
            folded[a, v] = total
            done.add(v)
    return GeodesicResult(_mirror_upper(folded), np.ascontiguousarray(parent.T), mode)


def walk(geo: GeodesicResult, m: int, n: int) -> list:
    """Follow ``next_hop`` from ``m`` until ``n``."""
    if m == n:
        return [m]
    if not np.isfinite(geo.dist[m, n]):
        raise DisconnectedGraphError(f"nodes {m} and {n} are not connected")
    path = [m]
    cur = m
    for _ in range(geo.n):
        cur = int(geo.next_hop[cur, n])
        path.append(cur)
        if cur == n:
            return path
    raise RuntimeError(f"next_hop walk from {m} to {n} did not terminate")


def shortest_path(geo: GeodesicResult, m: int, n: int) -> list:
    """Canonical path ``(m, k1, ..., kW, n)``; reversing the pair reverses the path."""
    a, b = min(m, n), max(m, n)
    path = walk(geo, b, a)
    return path[::-1] if m == a else path

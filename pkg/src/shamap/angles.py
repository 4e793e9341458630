"""Reference-point angles and their accumulation along geodesic paths."""
from __future__ import annotations

import numpy as np

from . import kernels
from .dataset import as_cloud, resolve_reference
from .errors import (DegenerateReferenceError, DisconnectedGraphError,
                     InternalConsistencyError)
from .graph import GeodesicResult, NeighborGraph

DEGENERATE_NORM = 1e-12
COS_SLACK = 1e-9


def _clamp(cos):
    over = np.abs(cos) > 1.0 + COS_SLACK
    if np.any(over):
        worst = float(np.max(np.abs(np.asarray(cos)[over])))
        raise InternalConsistencyError(f"cosine magnitude {worst!r} exceeds 1")
    return np.clip(cos, -1.0, 1.0)


def edge_angle(x_i, x_j, c) -> float:
    """Angle at ``c`` between ``x_i`` and ``x_j``, in ``[0, pi]``.

    Shares its arithmetic with :func:`pair_angles`, so a single edge and the
    same edge inside a batch produce identical bits.
    """
    v = np.array([x_i, x_j], dtype=np.float64) - np.asarray(c, dtype=np.float64)
    norms = np.sqrt(np.einsum("ij,ij->i", v, v))
    bad = [k for k, nrm in zip("ij", norms) if nrm <= DEGENERATE_NORM]
    if bad:
        raise DegenerateReferenceError(
            f"point(s) {', '.join(bad)} coincide with the reference point")
    return float(pair_angles(v, norms, np.array([0]), np.array([1]))[0])


def reference_offsets(cloud, c):
    """``(X - c, ||X - c||)``; raises if any point sits on the reference."""
    cloud = as_cloud(cloud)
    c = resolve_reference(c, cloud)
    v = cloud.points - c
    norms = np.sqrt(np.einsum("ij,ij->i", v, v))
    bad = np.flatnonzero(norms <= DEGENERATE_NORM)
    if bad.size:
        raise DegenerateReferenceError(
            f"{bad.size} point(s) coincide with the reference point: "
            f"indices {bad[:20].tolist()}", indices=bad.tolist())
    return v, norms


def pair_angles(v, norms, i, j) -> np.ndarray:
    """Angles for index arrays ``i``, ``j`` given offsets from the reference."""
    dots = np.einsum("ij,ij->i", v[i], v[j])
    return np.arccos(_clamp(dots / (norms[i] * norms[j])))


def edge_angles(cloud, c, g: NeighborGraph) -> np.ndarray:
    """Per-edge angles aligned with ``g.indices`` (usable as ANGULAR weights)."""
    v, norms = reference_offsets(cloud, c)
    rows = np.repeat(np.arange(g.n), g.degree())
    lo = np.minimum(rows, g.indices)
    hi = np.maximum(rows, g.indices)
    # evaluate each undirected edge once so both directions carry identical bits
    return pair_angles(v, norms, lo, hi)


def accumulated_angles(cloud, c, geo: GeodesicResult, backend=None) -> np.ndarray:
    """Total angle swept along each pair's canonical shortest path.

    For ``a < b`` the increments are summed starting from ``a``; the result is
    mirrored, so the matrix is exactly symmetric with a zero diagonal.
    """
    v, norms = reference_offsets(cloud, c)
    n = v.shape[0]
    if geo.n != n:
        raise ValueError(f"geodesics cover {geo.n} nodes, cloud has {n}")
    if not np.all(np.isfinite(geo.dist)):
        bad = np.argwhere(~np.isfinite(geo.dist))[0]
        raise DisconnectedGraphError(
            f"pair {tuple(bad.tolist())} is unreachable; accumulated angles need a "
            f"connected graph")
    parents = geo.parents()
    child = np.broadcast_to(np.arange(n), parents.shape)
    mask = parents >= 0
    lo = np.minimum(parents[mask], child[mask])
    hi = np.maximum(parents[mask], child[mask])
    codes = np.unique(lo.astype(np.int64) * n + hi)
    ei, ej = codes // n, codes % n
    table = np.zeros((n, n))
    vals = pair_angles(v, norms, ei, ej)
    table[ei, ej] = vals
    table[ej, ei] = vals
    acc = kernels.accumulate_trees(parents, table, backend=backend)
    upper = np.triu(acc, 1)
    return upper + upper.T


def cosine_matrix(theta) -> np.ndarray:
    """Elementwise cosine; accumulated angles beyond pi are not wrapped."""
    c = np.cos(np.asarray(theta, dtype=np.float64))
    np.fill_diagonal(c, 1.0)
    return c

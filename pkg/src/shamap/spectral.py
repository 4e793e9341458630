"""Symmetric eigendecomposition and the Shamap / Isomap / Sammon embeddings."""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .angles import accumulated_angles, cosine_matrix, edge_angles, reference_offsets
from .dataset import PointCloud, Reference, as_cloud, resolve_reference
from .errors import (ConvergenceError, DataError, DuplicatePointsError,
                     SpectralDeficiencyError)
from .graph import (WeightMode, _weight_mode, all_pairs_shortest, largest_component,
                    neighbor_graph, pairwise_distances, require_connected)

log = logging.getLogger(__name__)

JACOBI_TOL = 1e-11
JACOBI_MAX_SWEEPS = 100


class Method(enum.Enum):
    SHAMAP = "shamap"
    ISOMAP = "isomap"
    SAMMON = "sammon"


@dataclass(frozen=True, eq=False)
class EigenPairs:
    """Eigenvalues in descending order; column ``p`` of ``vectors`` pairs with ``values[p]``."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0


@dataclass(frozen=True, eq=False)
class Embedding:
    coords: np.ndarray
    spectrum: np.ndarray
    method: Method
    kept: np.ndarray = None  # rows of the input that were embedded
    info: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    @property
    def n(self) -> int:
        return self.coords.shape[0]


def jacobi_eigen(a, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS,
                 backend=None) -> EigenPairs:
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Rotations visit the upper triangle row by row until the off-diagonal
    Frobenius norm falls below ``tol * ||A||_F``. Eigenvectors are unit length
    with their largest-magnitude entry positive.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DataError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DataError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if a.size and float(np.max(np.abs(a - a.T))) > 1e-9 * scale:
        raise DataError("matrix is not symmetric within 1e-9")
    sym = (a + a.T) / 2
    work, vt, sweeps, off = kernels.jacobi_sweeps(sym, tol, max_sweeps, backend=backend)
    if sweeps > max_sweeps:
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal norm {off:.3e})")
    values = np.diag(work).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vt[order].T.copy()
    if vectors.size:
        lead = np.argmax(np.abs(vectors), axis=0)
        signs = np.where(vectors[lead, np.arange(vectors.shape[1])] < 0, -1.0, 1.0)
        vectors *= signs
    return EigenPairs(values, vectors, sweeps)


def _top_coordinates(eig: EigenPairs, d: int, clamp_negative: bool) -> np.ndarray:
    if not 1 <= d <= eig.values.shape[0]:
        raise DataError(f"target dimension must be in [1, {eig.values.shape[0]}], got {d}")
    lam = eig.values[:d]
    bad = np.flatnonzero(lam <= 0)
    if bad.size and not clamp_negative:
        p = int(bad[0])
        raise SpectralDeficiencyError(
            f"eigenvalue {p + 1} of {d} selected is {lam[p]!r} <= 0; lower the target "
            f"dimension or clamp negative eigenvalues", eigenvalue=float(lam[p]), index=p)
    return np.sqrt(np.maximum(lam, 0.0)) * eig.vectors[:, :d]


def _graph_nodes(cloud: PointCloud, k, eps, largest: bool):
    g = neighbor_graph(cloud, k=k, eps=eps)
    kept = np.arange(cloud.n)
    if largest:
        comp = largest_component(g)
        if comp.size < cloud.n:
            dropped = np.setdiff1d(kept, comp)
            log.warning("dropping %d point(s) outside the largest component: %s",
                        dropped.size, dropped[:50].tolist())
            kept = comp
            g = g.subgraph(comp)
            cloud = cloud.subset(comp)
    else:
        require_connected(g)
    return cloud, g, kept


@dataclass(frozen=True, eq=False)
class ShamapMatrices:
    kept: np.ndarray
    theta: np.ndarray
    cosine: np.ndarray
    norms: np.ndarray
    reference: np.ndarray


def shamap_matrices(cloud, c=Reference.ORIGIN, *, k=None, eps=None,
                    weight_mode=WeightMode.EUCLIDEAN, largest_component=False,
                    backend=None) -> ShamapMatrices:
    """Neighbour graph, geodesics, accumulated angles and the cosine matrix."""
    cloud = as_cloud(cloud)
    ref = resolve_reference(c, cloud)
    sub, g, kept = _graph_nodes(cloud, k, eps, largest_component)
    _, norms = reference_offsets(sub, ref)
    mode = _weight_mode(weight_mode)
    weights = edge_angles(sub, ref, g) if mode is WeightMode.ANGULAR else None
    geo = all_pairs_shortest(g, mode, weights, backend=backend)
    theta = accumulated_angles(sub, ref, geo, backend=backend)
    return ShamapMatrices(kept, theta, cosine_matrix(theta), norms, ref)


def double_center(m) -> np.ndarray:
    """``J M J`` with ``J = I - 11^T/n``, computed so symmetric input stays exactly symmetric."""
    mean = m.mean(axis=1)
    out = m - mean[:, None] - mean[None, :] + mean.mean()
    # the two subtraction orders round differently; averaging with the
    # transpose restores exact symmetry
    return (out + out.T) / 2


def shamap_embed(cloud, c=Reference.ORIGIN, *, k=None, eps=None, d: int = 2,
                 weight_mode=WeightMode.EUCLIDEAN, largest_component=False,
                 clamp_negative=False, center=False, backend=None) -> Embedding:
    """Shape-preserving embedding from the cosine matrix of accumulated angles.

    Coordinate ``p`` of point ``i`` is ``sqrt(lam_p) * u_p[i] * ||x_i - c||`` for
    the ``d`` largest eigenvalues of the cosine matrix (uncentred unless
    ``center`` is set).
    """
    mats = shamap_matrices(cloud, c, k=k, eps=eps, weight_mode=weight_mode,
                           largest_component=largest_component, backend=backend)
    target = double_center(mats.cosine) if center else mats.cosine
    eig = jacobi_eigen(target, backend=backend)
    coords = _top_coordinates(eig, d, clamp_negative) * mats.norms[:, None]
    return Embedding(coords, eig.values, Method.SHAMAP, mats.kept,
                     {"reference": mats.reference, "sweeps": eig.sweeps})


def classical_mds(dist, d: int, clamp_negative=False, backend=None):
    """Top-``d`` classical scaling of a distance matrix; returns ``(coords, eig)``."""
    b = -0.5 * double_center(np.asarray(dist, dtype=np.float64) ** 2)
    eig = jacobi_eigen(b, backend=backend)
    return _top_coordinates(eig, d, clamp_negative), eig


def isomap_embed(cloud, *, k=None, eps=None, complete=False, d: int = 2,
                 largest_component=False, clamp_negative=False, backend=None) -> Embedding:
    """Classical MDS on graph geodesic distances.

    ``complete=True`` uses the complete graph, whose geodesics are the
    Euclidean distances themselves.
    """
    cloud = as_cloud(cloud)
    if complete:
        if k is not None or eps is not None:
            raise DataError("complete graph excludes K and eps")
        kept = np.arange(cloud.n)
        dist = pairwise_distances(cloud)
    else:
        sub, g, kept = _graph_nodes(cloud, k, eps, largest_component)
        dist = all_pairs_shortest(g, backend=backend).dist
    coords, eig = classical_mds(dist, d, clamp_negative, backend=backend)
    return Embedding(coords, eig.values, Method.ISOMAP, kept, {"sweeps": eig.sweeps})


def _duplicate_check(delta):
    n = delta.shape[0]
    iu = np.triu_indices(n, 1)
    dup = delta[iu] == 0
    if np.any(dup):
        pairs = list(zip(iu[0][dup].tolist(), iu[1][dup].tolist()))
        raise DuplicatePointsError(
            f"{len(pairs)} duplicate point pair(s), e.g. {pairs[:10]}", pairs=pairs)


def stress_and_gradient(delta, y, scale=None):
    """Sammon stress of configuration ``y`` and its gradient.

    ``delta`` holds high-dimensional distances (no zeros off the diagonal).
    Pairs that coincide in ``y`` contribute no gradient.
    """
    if scale is None:
        scale = float(np.sum(np.triu(delta, 1)))
    dy = pairwise_distances(y)
    n = delta.shape[0]
    iu = np.triu_indices(n, 1)
    diff = delta[iu] - dy[iu]
    stress = float(np.sum(diff * diff / delta[iu])) / scale
    safe_delta = delta.copy()
    np.fill_diagonal(safe_delta, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (dy - delta) / (safe_delta * dy)
    w[~np.isfinite(w)] = 0.0
    np.fill_diagonal(w, 0.0)
    grad = (2.0 / scale) * (w.sum(axis=1)[:, None] * y - w @ y)
    return stress, grad


def sammon_embed(cloud, d: int = 2, max_iters: int = 500, step_size: float = 0.1,
                 tol: float = 1e-9, init=None, backend=None) -> Embedding:
    """Sammon mapping by gradient descent with step halving.

    Starts from classical MDS unless ``init`` is given. Each iteration tries the
    current step, halving up to 30 times until stress drops; the step doubles
    after an accepted move. ``step_size`` is the first move's length relative to
    the configuration's RMS radius. Stops when the relative improvement falls
    below ``tol`` or after ``max_iters`` iterations (``info["converged"]`` is
    then False and the best iterate is returned).
    """
    cloud = as_cloud(cloud)
    delta = pairwise_distances(cloud)
    _duplicate_check(delta)
    if init is None:
        y, eig = classical_mds(delta, d, clamp_negative=True, backend=backend)
        spectrum = eig.values
    else:
        y = np.array(init, dtype=np.float64)
        spectrum = np.array([])
    if y.shape != (cloud.n, d):
        raise DataError(f"initial configuration must be {cloud.n}x{d}")
    scale = float(np.sum(np.triu(delta, 1)))
    stress, grad = stress_and_gradient(delta, y, scale)
    history = [stress]
    gnorm = math.sqrt(float(np.sum(grad * grad)))
    radius = math.sqrt(float(np.mean(np.sum((y - y.mean(0)) ** 2, axis=1)))) or 1.0
    eta = step_size * radius / gnorm if gnorm > 0 else 0.0
    converged = stress == 0.0 or gnorm == 0.0
    it = 0
    while not converged and it < max_iters:
        it += 1
        accepted = False
        trial_eta = eta
        for _ in range(31):
            cand = y - trial_eta * grad
            cand_stress, cand_grad = stress_and_gradient(delta, cand, scale)
            if cand_stress < stress:
                accepted = True
                break
            trial_eta *= 0.5
        if not accepted:
            converged = True
            break
        improvement = (stress - cand_stress) / stress
        y, stress, grad = cand, cand_stress, cand_grad
        history.append(stress)
        eta = 2.0 * trial_eta
        if improvement < tol or stress == 0.0:
            converged = True
    return Embedding(y, spectrum, Method.SAMMON, np.arange(cloud.n),
                     {"stress": stress, "initial_stress": history[0],
                      "iterations": it, "converged": converged,
                      "history": np.array(history)})

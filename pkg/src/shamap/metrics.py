"""Numbers for embedding quality: alignment error, winding, class separation,
spectral shape and Sammon stress."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import LabelSet, PointCloud
from .errors import DataError, DegenerateReferenceError, DuplicatePointsError


def _coords(x) -> np.ndarray:
    if isinstance(x, PointCloud):
        return x.points
    if hasattr(x, "coords"):
        return np.asarray(x.coords, dtype=np.float64)
    a = np.asarray(x, dtype=np.float64)
    return a[:, None] if a.ndim == 1 else a


@dataclass(frozen=True)
class ProcrustesReport:
    rmse: float
    rotation: np.ndarray
    scale: float
    translation: np.ndarray

    def apply(self, b) -> np.ndarray:
        return self.scale * _coords(b) @ self.rotation + self.translation


def _orthonormal_completion(basis: np.ndarray, d: int) -> np.ndarray:
    """Extend the orthonormal columns of ``basis`` (d x r) to a d x d orthogonal matrix."""
    r = basis.shape[1]
    if r == d:
        return basis
    q, _ = np.linalg.qr(np.hstack([basis, np.eye(d)]))
    extra = q[:, r:d]
    return np.hstack([basis, extra])


def procrustes(a, b, allow_scale: bool = False) -> ProcrustesReport:
    """Least-squares alignment of ``b`` onto ``a`` (rotation/reflection, translation,
    optionally uniform scale).

    The orthogonal factor comes from the symmetric eigenproblem of
    ``[[0, M], [M^T, 0]]`` with ``M = B_c^T A_c``, whose positive eigenpairs carry
    the singular triplets of ``M``. ``rmse`` is taken over all ``n * d`` residual
    coordinates.
    """
    from .spectral import jacobi_eigen

    a, b = _coords(a), _coords(b)
    if a.shape != b.shape:
        raise DataError(f"shape mismatch {a.shape} vs {b.shape}")
    n, d = a.shape
    if n < d:
        raise DataError(f"procrustes needs n >= d, got n={n}, d={d}")
    ma, mb = a.mean(axis=0), b.mean(axis=0)
    ac, bc = a - ma, b - mb
    m = bc.T @ ac
    lifted = np.zeros((2 * d, 2 * d))
    lifted[:d, d:] = m
    lifted[d:, :d] = m.T
    eig = jacobi_eigen(lifted)
    sigma = eig.values[:d]
    cut = 1e-12 * max(1.0, float(sigma[0]) if d else 0.0)
    keep = sigma > cut
    u = math.sqrt(2.0) * eig.vectors[:d, :d][:, keep]
    v = math.sqrt(2.0) * eig.vectors[d:, :d][:, keep]
    u = _orthonormal_completion(u, d)
    v = _orthonormal_completion(v, d)
    rotation = u @ v.T
    denom = float(np.sum(bc * bc))
    if allow_scale and denom > 0:
        scale = float(np.sum(sigma[keep])) / denom
    else:
        scale = 1.0
    translation = ma - scale * mb @ rotation
    resid = ac - scale * bc @ rotation
    rmse = math.sqrt(float(np.sum(resid * resid)) / (n * d))
    return ProcrustesReport(rmse, rotation, scale, translation)


def winding_count(path, center=(0.0, 0.0)) -> float:
    """Net turns of an ordered planar path about ``center`` (signed, may be fractional).

    Each step's polar-angle increment is wrapped to (-pi, pi], so consecutive
    samples must subtend less than half a turn.
    """
    p = _coords(path)
    if p.ndim != 2 or p.shape[1] != 2:
        raise DataError("winding count needs an n x 2 path")
    if p.shape[0] < 3:
        raise DataError("winding count needs at least 3 points")
    rel = p - np.asarray(center, dtype=np.float64)
    at_center = np.flatnonzero(np.all(rel == 0.0, axis=1))
    if at_center.size:
        raise DegenerateReferenceError(
            f"path points {at_center[:10].tolist()} lie on the center",
            indices=at_center.tolist())
    phi = np.arctan2(rel[:, 1], rel[:, 0])
    step = np.diff(phi)
    step = np.mod(step + math.pi, 2 * math.pi) - math.pi
    step[step == -math.pi] = math.pi
    return float(np.sum(step) / (2 * math.pi))


def nn_label_accuracy(emb, labels) -> float:
    """Leave-one-out 1-NN label agreement in embedding space (ties to lower index)."""
    y = _coords(emb)
    lab = labels.labels if isinstance(labels, LabelSet) else np.asarray(labels)
    if y.shape[0] < 2:
        raise DataError("need at least 2 points")
    if lab.shape[0] != y.shape[0]:
        raise DataError(f"{lab.shape[0]} labels for {y.shape[0]} points")
    dist = cdist(y, y)
    np.fill_diagonal(dist, np.inf)
    nearest = np.argmin(dist, axis=1)
    return float(np.mean(lab[nearest] == lab))


def set_separation(a, b) -> tuple[float, float]:
    """``(min cross-set distance, symmetric Hausdorff distance)``."""
    a, b = _coords(a), _coords(b)
    if a.shape[0] == 0 or b.shape[0] == 0:
        raise DataError("point sets must be non-empty")
    cross = cdist(a, b)
    hausdorff = max(float(cross.min(axis=1).max()), float(cross.min(axis=0).max()))
    return float(cross.min()), hausdorff


def spectral_ratio(emb) -> float:
    """Second over first eigenvalue of an embedding's recorded spectrum."""
    spec = np.asarray(getattr(emb, "spectrum", emb), dtype=np.float64)
    if spec.shape[0] < 2:
        raise DataError("spectrum needs at least two eigenvalues")
    if spec[0] <= 0:
        raise DataError(f"leading eigenvalue {spec[0]!r} is not positive")
    return float(spec[1] / spec[0])


def sammon_stress(high, low) -> float:
    """``sum_{i<j} (delta_ij - d_ij)^2 / delta_ij`` normalised by ``sum_{i<j} delta_ij``."""
    x, y = _coords(high), _coords(low)
    if x.shape[0] != y.shape[0]:
        raise DataError(f"{x.shape[0]} high-dimensional rows vs {y.shape[0]} low")
    iu = np.triu_indices(x.shape[0], 1)
    delta = cdist(x, x)[iu]
    if np.any(delta == 0):
        raise DuplicatePointsError("duplicate high-dimensional points")
    dl = cdist(y, y)[iu]
    return float(np.sum((delta - dl) ** 2 / delta) / np.sum(delta))

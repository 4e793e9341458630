"""Kernel backend selection.

The compiled extension ``shamap._core`` is used when it imports; otherwise, or
when ``SHAMAP_PURE_PYTHON=1`` is set, the numpy fallback is used. Both produce
identical results.
"""
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _fallback

INDEX = np.int64
# relative gap below which two shortest-path routes count as tied
TIE_RTOL = 1e-12

_core = None
if os.environ.get("SHAMAP_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _core
    except ImportError:  # extension not built
        _core = None

BACKEND = "compiled" if _core is not None else "python"


def backend_module(name=None):
    if name is None:
        name = BACKEND
    if name == "compiled":
        if _core is None:
            raise RuntimeError("compiled kernels are not available")
        return _core
    if name == "python":
        return _fallback
    raise ValueError(f"unknown backend {name!r}")


def available_backends():
    return ["compiled", "python"] if _core is not None else ["python"]


def thread_count() -> int:
    raw = os.environ.get("SHAMAP_THREADS", "0").strip() or "0"
    try:
        k = int(raw)
    except ValueError:
        k = 0
    if k <= 0:
        k = os.cpu_count() or 1
    return k


def dijkstra_rows(indptr, indices, weights, sources, tie_rtol=TIE_RTOL, backend=None):
    """Shortest-path rows for ``sources``; returns ``(dist, pred)`` arrays.

    Routes whose lengths differ by at most ``tie_rtol`` (relative) count as
    tied, and the tie goes to the lowest-index predecessor.
    """
    mod = backend_module(backend)
    indptr = np.ascontiguousarray(indptr, dtype=INDEX)
    indices = np.ascontiguousarray(indices, dtype=INDEX)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    sources = np.ascontiguousarray(sources, dtype=INDEX)
    n = indptr.shape[0] - 1
    dist = np.empty((sources.shape[0], n))
    pred = np.empty((sources.shape[0], n), dtype=INDEX)
    workers = min(thread_count(), max(1, sources.shape[0] // 64))
    if mod is _fallback or workers <= 1:
        mod.dijkstra_rows(indptr, indices, weights, sources, dist, pred, tie_rtol)
        return dist, pred
    # rows are independent, so chunking cannot change the result
    bounds = np.linspace(0, sources.shape[0], workers + 1).astype(int)

    def run(lo, hi):
        mod.dijkstra_rows(indptr, indices, weights, sources[lo:hi], dist[lo:hi], pred[lo:hi],
                          tie_rtol)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(run, bounds[:-1], bounds[1:]))
    return dist, pred


def accumulate_trees(parent, edge_value, backend=None):
    mod = backend_module(backend)
    parent = np.ascontiguousarray(parent, dtype=INDEX)
    edge_value = np.ascontiguousarray(edge_value, dtype=np.float64)
    out = np.empty(parent.shape)
    mod.accumulate_trees(parent, edge_value, out)
    return out


def jacobi_sweeps(a, tol, max_sweeps, backend=None):
    """Run cyclic Jacobi on a copy of ``a``; returns ``(diag_matrix, vt, sweeps, off)``."""
    mod = backend_module(backend)
    work = np.array(a, dtype=np.float64, order="C", copy=True)
    vt = np.eye(work.shape[0])
    sweeps, off = mod.jacobi_sweeps(work, vt, float(tol), int(max_sweeps))
    return work, vt, sweeps, off

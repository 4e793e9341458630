# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels. Semantics mirror shamap._fallback exactly."""
from libc.math cimport sqrt, fabs, INFINITY, NAN
from libc.stdlib cimport malloc, free

ctypedef long long idx_t


cdef inline bint _less(double ka, idx_t na, double kb, idx_t nb) noexcept nogil:
    return ka < kb or (ka == kb and na < nb)


cdef void _push(double* keys, idx_t* nodes, idx_t* size, double k, idx_t v) noexcept nogil:
    cdef idx_t i = size[0]
    cdef idx_t parent
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _less(k, v, keys[parent], nodes[parent]):
            keys[i] = keys[parent]
            nodes[i] = nodes[parent]
            i = parent
        else:
            break
    keys[i] = k
    nodes[i] = v


cdef void _pop(double* keys, idx_t* nodes, idx_t* size, double* k, idx_t* v) noexcept nogil:
    cdef idx_t n, i, child
    cdef double lk
    cdef idx_t lv
    k[0] = keys[0]
    v[0] = nodes[0]
    size[0] -= 1
    n = size[0]
    if n == 0:
        return
    lk = keys[n]
    lv = nodes[n]
    i = 0
    while True:
        child = 2 * i + 1
        if child >= n:
            break
        if child + 1 < n and _less(keys[child + 1], nodes[child + 1], keys[child], nodes[child]):
            child += 1
        if _less(keys[child], nodes[child], lk, lv):
            keys[i] = keys[child]
            nodes[i] = nodes[child]
            i = child
        else:
            break
    keys[i] = lk
    nodes[i] = lv


def dijkstra_rows(const idx_t[::1] indptr, const idx_t[::1] indices,
                  const double[::1] weights, const idx_t[::1] sources,
                  double[:, ::1] dist, idx_t[:, ::1] pred, double tie_rtol):
    """Single-source shortest paths from each of ``sources``.

    Row ``r`` of ``dist``/``pred`` receives the result for ``sources[r]``.
    When a node is settled its predecessor is the lowest-index settled
    neighbour whose route is within ``tie_rtol`` (relative) of the best one,
    and its distance is that neighbour's distance plus the edge weight.
    """
    cdef idx_t n = indptr.shape[0] - 1
    cdef idx_t m = indices.shape[0]
    cdef idx_t cap = m + n + 1
    cdef idx_t r, s, u, v, e, size
    cdef double d, nd, best
    cdef idx_t choice
    cdef double* keys
    cdef idx_t* nodes
    cdef char* settled
    with nogil:
        keys = <double*> malloc(cap * sizeof(double))
        nodes = <idx_t*> malloc(cap * sizeof(idx_t))
        settled = <char*> malloc(n * sizeof(char))
        for r in range(sources.shape[0]):
            s = sources[r]
            for v in range(n):
                dist[r, v] = INFINITY
                pred[r, v] = -1
                settled[v] = 0
            dist[r, s] = 0.0
            size = 0
            _push(keys, nodes, &size, 0.0, s)
            while size > 0:
                _pop(keys, nodes, &size, &d, &u)
                if settled[u]:
                    continue
                if u != s:
                    best = d
                    choice = -1
                    for e in range(indptr[u], indptr[u + 1]):
                        v = indices[e]
                        if settled[v] and dist[r, v] + weights[e] - best <= tie_rtol * best:
                            choice = v
                            d = dist[r, v] + weights[e]
                            break
                    pred[r, u] = choice
                    dist[r, u] = d
                settled[u] = 1
                for e in range(indptr[u], indptr[u + 1]):
                    v = indices[e]
                    if settled[v]:
                        continue
                    nd = d + weights[e]
                    if nd < dist[r, v]:
                        dist[r, v] = nd
                        _push(keys, nodes, &size, nd, v)
        free(keys)
        free(nodes)
        free(settled)


def accumulate_trees(const idx_t[:, ::1] parent, const double[:, ::1] edge_value,
                     double[:, ::1] out):
    """Root-outward sums of ``edge_value`` along each shortest-path tree.

    ``parent[r, v]`` is v's parent in the tree rooted at r (-1 at the root and
    for unreachable nodes, which receive NaN).
    """
    cdef idx_t n = parent.shape[1]
    cdef idx_t r, v, u, top, w
    cdef char* state
    cdef idx_t* stack
    with nogil:
        state = <char*> malloc(n * sizeof(char))
        stack = <idx_t*> malloc((n + 1) * sizeof(idx_t))
        for r in range(parent.shape[0]):
            for v in range(n):
                state[v] = 0
            state[r] = 1
            out[r, r] = 0.0
            for v in range(n):
                if state[v]:
                    continue
                top = 0
                u = v
                while u >= 0 and state[u] == 0:
                    stack[top] = u
                    top += 1
                    state[u] = 2
                    u = parent[r, u]
                while top > 0:
                    top -= 1
                    w = stack[top]
                    if u < 0 or state[u] == 3:
                        out[r, w] = NAN
                        state[w] = 3
                    else:
                        out[r, w] = out[r, u] + edge_value[u, w]
                        state[w] = 1
                    u = w
        free(state)
        free(stack)


def jacobi_sweeps(double[:, ::1] a, double[:, ::1] vt, double tol, int max_sweeps):
    """Cyclic Jacobi on symmetric ``a`` in place; rotations accumulate into ``vt``.

    Row p of ``vt`` ends as the eigenvector for ``a[p, p]``. Returns
    ``(sweeps, off_norm)``; ``sweeps == max_sweeps + 1`` signals no convergence.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double off, sm, tresh, apq, g, h, t, theta, c, s, tau, gp, gq, app, aqq
    cdef double norm = 0.0
    cdef int done = max_sweeps + 1
    for p in range(n):
        for q in range(n):
            norm += a[p, q] * a[p, q]
    norm = sqrt(norm)
    with nogil:
        for sweep in range(max_sweeps + 1):
            off = 0.0
            sm = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    off += a[p, q] * a[p, q]
                    sm += fabs(a[p, q])
            off = sqrt(2.0 * off)
            if off <= tol * norm:
                done = sweep
                break
            if sweep == max_sweeps:
                break
            tresh = 0.2 * sm / (n * n) if sweep < 3 else 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    g = 100.0 * fabs(apq)
                    app = a[p, p]
                    aqq = a[q, q]
                    if sweep > 3 and fabs(app) + g == fabs(app) and fabs(aqq) + g == fabs(aqq):
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                    elif fabs(apq) > tresh:
                        h = aqq - app
                        if fabs(h) + g == fabs(h):
                            t = apq / h
                        else:
                            theta = 0.5 * h / apq
                            t = 1.0 / (fabs(theta) + sqrt(1.0 + theta * theta))
                            if theta < 0.0:
                                t = -t
                        c = 1.0 / sqrt(1.0 + t * t)
                        s = t * c
                        tau = s / (1.0 + c)
                        h = t * apq
                        for k in range(n):
                            gp = a[p, k]
                            gq = a[q, k]
                            a[p, k] = gp - s * (gq + gp * tau)
                            a[q, k] = gq + s * (gp - gq * tau)
                        for k in range(n):
                            a[k, p] = a[p, k]
                            a[k, q] = a[q, k]
                        a[p, p] = app - h
                        a[q, q] = aqq + h
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        for k in range(n):
                            gp = vt[p, k]
                            gq = vt[q, k]
                            vt[p, k] = gp - s * (gq + gp * tau)
                            vt[q, k] = gq + s * (gp - gq * tau)
    return done, off

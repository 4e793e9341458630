"""Pure-Python/numpy kernels with the same semantics as the compiled core."""
import heapq
import math

import numpy as np


def dijkstra_rows(indptr, indices, weights, sources, dist, pred, tie_rtol):
    n = len(indptr) - 1
    indptr = indptr.tolist()
    indices = indices.tolist()
    weights = weights.tolist()
    for r, s in enumerate(sources.tolist()):
        d_row = [math.inf] * n
        p_row = [-1] * n
        settled = [False] * n
        d_row[s] = 0.0
        heap = [(0.0, s)]
        while heap:
            d, u = heapq.heappop(heap)
            if settled[u]:
                continue
            if u != s:
                # lowest-index settled neighbour within the tie tolerance
                best = d
                for e in range(indptr[u], indptr[u + 1]):
                    v = indices[e]
                    if settled[v] and d_row[v] + weights[e] - best <= tie_rtol * best:
                        p_row[u] = v
                        d = d_row[v] + weights[e]
                        break
                d_row[u] = d
            settled[u] = True
            for e in range(indptr[u], indptr[u + 1]):
                v = indices[e]
                if settled[v]:
                    continue
                nd = d + weights[e]
                if nd < d_row[v]:
                    d_row[v] = nd
                    heapq.heappush(heap, (nd, v))
        dist[r] = d_row
        pred[r] = p_row


def accumulate_trees(parent, edge_value, out):
    n = parent.shape[1]
    for r in range(parent.shape[0]):
        par = parent[r].tolist()
        acc = [None] * n
        acc[r] = 0.0
        for v in range(n):
            if acc[v] is not None:
                continue
            stack = []
            u = v
            while u >= 0 and acc[u] is None:
                stack.append(u)
                u = par[u]
            base = acc[u] if u >= 0 else math.nan
            while stack:
                w = stack.pop()
                base = base + edge_value[u, w] if u >= 0 and not math.isnan(base) else math.nan
                acc[w] = base
                u = w
        out[r] = acc


def jacobi_sweeps(a, vt, tol, max_sweeps):
    n = a.shape[0]
    norm = math.sqrt(float(np.sum(a * a)))
    iu = np.triu_indices(n, 1)
    off = 0.0
    for sweep in range(max_sweeps + 1):
        upper = a[iu]
        off = math.sqrt(2.0 * float(np.dot(upper, upper)))
        sm = float(np.sum(np.abs(upper)))
        if off <= tol * norm:
            return sweep, off
        if sweep == max_sweeps:
            break
        tresh = 0.2 * sm / (n * n) if sweep < 3 else 0.0
        for p in range(n - 1):
            row_p = a[p]
            for q in range(p + 1, n):
                apq = row_p[q]
                g = 100.0 * abs(apq)
                app = row_p[p]
                aqq = a[q, q]
                if sweep > 3 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                elif abs(apq) > tresh:
                    h = aqq - app
                    if abs(h) + g == abs(h):
                        t = apq / h
                    else:
                        theta = 0.5 * h / apq
                        t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = t * c
                    tau = s / (1.0 + c)
                    h = t * apq
                    gp = a[p].copy()
                    gq = a[q].copy()
                    newp = gp - s * (gq + gp * tau)
                    newq = gq + s * (gp - gq * tau)
                    a[p] = newp
                    a[q] = newq
                    a[:, p] = newp
                    a[:, q] = newq
                    a[p, p] = app - h
                    a[q, q] = aqq + h
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    gp = vt[p].copy()
                    gq = vt[q].copy()
                    vt[p] = gp - s * (gq + gp * tau)
                    vt[q] = gq + s * (gp - gq * tau)
    return max_sweeps + 1, off

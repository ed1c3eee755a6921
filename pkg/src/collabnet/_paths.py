"""Compiled single-source BFS kernels (Brandes accumulation)."""
import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def source_block(indptr, indices, sources):
    """Run BFS + dependency accumulation from each source in ``sources``.

    Returns the block's betweenness contribution (ordered-pair counting),
    and per-source reciprocal-distance sums, distance sums and reach counts.
    """
    n = indptr.shape[0] - 1
    bc = np.zeros(n, dtype=np.float64)
    recip = np.zeros(sources.shape[0], dtype=np.float64)
    dsum = np.zeros(sources.shape[0], dtype=np.int64)
    reach = np.zeros(sources.shape[0], dtype=np.int64)

    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n, dtype=np.float64)
    delta = np.zeros(n, dtype=np.float64)
    order = np.empty(n, dtype=np.int64)

    for k in range(sources.shape[0]):
        s = sources[k]
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v]
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dv + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dv + 1:
                    sigma[w] += sigma[v]

        r = 0.0
        ds = 0
        for i in range(1, tail):
            d = dist[order[i]]
            r += 1.0 / d
            ds += d
        recip[k] = r
        dsum[k] = ds
        reach[k] = tail - 1

        for i in range(tail - 1, -1, -1):
            v = order[i]
            dv = dist[v]
            acc = 0.0
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] == dv + 1:
                    acc += sigma[v] / sigma[w] * (1.0 + delta[w])
            delta[v] = acc
            if v != s:
                bc[v] += acc

        for i in range(tail):
            v = order[i]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0

    return bc, recip, dsum, reach

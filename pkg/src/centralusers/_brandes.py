"""Compiled Brandes kernel over CSR adjacency.

Sources are cut into a fixed number of contiguous blocks that depends only
on the node count. Each block sums its sources in ascending order into its
own row, and rows are reduced in block order, so serial and parallel runs
give bit-identical results whatever the thread count.
"""

import numba
import numpy as np

# the bundled TBB is too old and only produces a warning
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

MAX_BLOCKS = 128
MIN_BLOCK = 16


def block_bounds(n: int) -> np.ndarray:
    nblocks = max(1, min(MAX_BLOCKS, -(-n // MIN_BLOCK)))
    return np.linspace(0, n, nblocks + 1).round().astype(np.int64)


@numba.njit(cache=True, nogil=True)
def _single_block(indptr, indices, s_lo, s_hi, out):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int64)
    sigma = np.zeros(n)
    delta = np.zeros(n)
    order = np.empty(n, np.int64)
    for s in range(s_lo, s_hi):
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            dv = dist[v] + 1
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] < 0:
                    dist[w] = dv
                    order[tail] = w
                    tail += 1
                if dist[w] == dv:
                    sigma[w] += sigma[v]
        # queue order is non-decreasing in distance; walk it backwards
        for idx in range(tail - 1, -1, -1):
            v = order[idx]
            dv = dist[v] + 1
            acc = 0.0
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if dist[w] == dv:
                    acc += (1.0 + delta[w]) / sigma[w]
            delta[v] = sigma[v] * acc
            if v != s:
                out[v] += delta[v]
        for idx in range(tail):
            v = order[idx]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0


@numba.njit(cache=True, nogil=True)
def _reduce(partial):
    total = np.zeros(partial.shape[1])
    for b in range(partial.shape[0]):
        for v in range(partial.shape[1]):
            total[v] += partial[b, v]
    return total


@numba.njit(cache=True, nogil=True)
def brandes_serial(indptr, indices, bounds):
    n = indptr.shape[0] - 1
    nb = bounds.shape[0] - 1
    partial = np.zeros((nb, n))
    for b in range(nb):
        _single_block(indptr, indices, bounds[b], bounds[b + 1], partial[b])
    return _reduce(partial)


@numba.njit(cache=True, nogil=True, parallel=True)
def brandes_parallel(indptr, indices, bounds):
    n = indptr.shape[0] - 1
    nb = bounds.shape[0] - 1
    partial = np.zeros((nb, n))
    for b in numba.prange(nb):
        _single_block(indptr, indices, bounds[b], bounds[b + 1], partial[b])
    return _reduce(partial)

"""Compiled inner loops for SOM training and BMU search.

Everything here operates on plain float64 arrays; validation happens in
:mod:`somqe.som`. The kernels release the GIL so series runs can use threads.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _nearest(weights, x):
    # strict < keeps the lowest row-major index on ties
    n_nodes, dim = weights.shape
    best = 0
    best_d2 = np.inf
    for i in range(n_nodes):
        d2 = 0.0
        for k in range(dim):
            diff = x[k] - weights[i, k]
            d2 += diff * diff
        if d2 < best_d2:
            best_d2 = d2
            best = i
    return best, best_d2


@njit(cache=True, nogil=True)
def bmu_index(weights, x):
    return _nearest(weights, x)[0]


@njit(cache=True, nogil=True)
def bmu_distances(weights, data):
    """Per-sample BMU index and Euclidean distance."""
    n = data.shape[0]
    idx = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    for j in range(n):
        best, best_d2 = _nearest(weights, data[j])
        idx[j] = best
        dist[j] = math.sqrt(best_d2)
    return idx, dist


@njit(cache=True, nogil=True)
def train_online(weights, coords, data, draws, radius0, radius_final,
                 alpha0, alpha_final, bubble):
    """In-place online Kohonen updates, one per entry of ``draws``."""
    n_nodes, dim = weights.shape
    total = draws.shape[0]
    for t in range(total):
        sigma = radius0 + (radius_final - radius0) * t / total
        alpha = alpha0 + (alpha_final - alpha0) * t / total
        x = data[draws[t]]
        c = _nearest(weights, x)[0]
        two_sigma_sq = 2.0 * sigma * sigma
        sigma_sq = sigma * sigma
        for i in range(n_nodes):
            dr = coords[i, 0] - coords[c, 0]
            dc = coords[i, 1] - coords[c, 1]
            d2 = dr * dr + dc * dc
            if bubble:
                if d2 > sigma_sq:
                    continue
                h = 1.0
            else:
                h = math.exp(-d2 / two_sigma_sq)
            step = alpha * h
            for k in range(dim):
                weights[i, k] += step * (x[k] - weights[i, k])
    return weights

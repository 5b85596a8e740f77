"""Weighted PageRank by power iteration, shared by sentence and topic ranking."""

from __future__ import annotations

import numpy as np

TOLERANCE = 1e-6
MAX_ITER = 100


def weighted_pagerank(weights: np.ndarray, damping: float = 0.85,
                      tol: float = TOLERANCE, max_iter: int = MAX_ITER) -> np.ndarray:
    """Sum-normalized PageRank over a non-negative weight matrix.

    ``weights[i, j]`` is the weight of edge i -> j.  Nodes without outgoing
    weight spread their score uniformly, so the result always sums to one.
    Iterates from the uniform vector until the L1 change drops below ``tol``
    or ``max_iter`` rounds have run.
    """
    if not 0 < damping < 1:
        raise ValueError(f"damping must be in (0, 1), got {damping}")
    w = np.asarray(weights, dtype=float)
    n = w.shape[0]
    if w.shape != (n, n):
        raise ValueError("weight matrix must be square")
    if n == 0:
        return np.zeros(0)
    if (w < 0).any():
        raise ValueError("negative edge weight")

    out = w.sum(axis=1)
    dangling = out == 0
    trans = np.divide(w, out[:, None], out=np.zeros_like(w), where=~dangling[:, None])

    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        spread = x[dangling].sum() / n
        nxt = (1.0 - damping) / n + damping * (x @ trans + spread)
        delta = np.abs(nxt - x).sum()
        x = nxt
        if delta < tol:
            break
    return x

"""Independent reference computations shared by the unit and acceptance tests."""

import math

import numpy as np

from weibull_pythag.inference import ContingencyTable


def random_table(rng, d=11, n=162):
    # games spread over off-diagonal cells, every row and column hit at least once
    off = [(r, c) for r in range(d) for c in range(d) if r != c]
    obs = np.zeros((d, d), dtype=int)
    for r in range(d):
        obs[r, (r + 1) % d] += 1
    for _ in range(n - d):
        r, c = off[rng.integers(len(off))]
        obs[r, c] += 1
    return ContingencyTable(obs)


def grid_search_quasi_independence(obs, rounds=40, pts=21):
    """Brute-force maximizer of the quasi-independence Poisson likelihood on a 3x3 table.

    E[i, j] = a_i b_j off the diagonal. a_1 is pinned to 1 and, for fixed a,
    the optimal b has the closed form b_j = colsum_j / sum_{i != j} a_i, so
    only (log a_2, log a_3) is searched, on a grid that shrinks around the
    best point each round.
    """
    obs = np.asarray(obs, dtype=float)
    off = ~np.eye(3, dtype=bool)
    col = obs.sum(axis=0)

    def table(la2, la3):
        a = np.array([1.0, math.exp(la2), math.exp(la3)])
        b = col / np.array([a.sum() - a[j] for j in range(3)])
        return np.where(off, np.outer(a, b), 0.0)

    def loglik(e):
        return float(np.sum(obs[off] * np.log(e[off]) - e[off]))

    center, half = np.zeros(2), 6.0
    for _ in range(rounds):
        axis = np.linspace(-half, half, pts)
        best = max(
            ((loglik(table(center[0] + u, center[1] + v)), u, v) for u in axis for v in axis),
            key=lambda t: t[0],
        )
        center = center + np.array(best[1:])
        half *= 0.35
    return table(*center)

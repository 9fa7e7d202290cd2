"""Small graph makers shared by the demo scripts."""

import numpy as np

from nodesep import build_graph


def grid(a, b):
    idx = np.arange(a * b).reshape(a, b)
    edges = np.concatenate([
        np.stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()], axis=1),
        np.stack([idx[:-1, :].ravel(), idx[1:, :].ravel()], axis=1),
    ])
    return build_graph(a * b, edges.tolist())


def delaunay(n, seed=0):
    from scipy.spatial import Delaunay

    pts = np.random.default_rng(seed).random((n, 2))
    tri = Delaunay(pts).simplices
    edges = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [0, 2]]])
    return build_graph(n, np.unique(np.sort(edges, axis=1), axis=0).tolist())

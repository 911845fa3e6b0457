"""Pure-numpy twins of the compiled kernels in ``_kernels.pyx``."""

import numpy as np


def soft_threshold(v, tau):
    v = np.asarray(v, dtype=np.float64)
    return np.sign(v) * np.maximum(np.abs(v) - tau, 0.0)


def group_norms(x, bounds):
    sq = np.sum(np.asarray(x) ** 2, axis=1)
    return np.sqrt(np.add.reduceat(sq, bounds[:-1]))


def hierarchical_prox(v, bounds, tau1, tau2):
    u = soft_threshold(v, tau1)
    norms = group_norms(u, bounds)
    scale = np.zeros_like(norms)
    keep = norms > tau2
    scale[keep] = 1.0 - tau2 / norms[keep]
    return u * np.repeat(scale, np.diff(bounds))[:, None]


def hierarchical_penalty(x, bounds, w1, w2):
    x = np.asarray(x)
    return float(w1 * np.abs(x).sum() + w2 * group_norms(x, bounds).sum())

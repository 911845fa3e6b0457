"""Proximal maps for the l1, group and hierarchical (l1 + group) penalties."""

from __future__ import annotations

import numpy as np

from .. import _core
from .partition import GroupPartition


def soft_threshold(v, tau):
    """sign(v) * max(|v| - tau, 0), elementwise."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    v = np.asarray(v, dtype=np.float64)
    if v.ndim == 2 and v.flags.c_contiguous:
        return _core.soft_threshold(v, float(tau))
    return _core._fallback.soft_threshold(v, tau)


def group_shrink(block, tau):
    """block * max(0, 1 - tau / ||block||_F); zero whenever the norm is <= tau."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    block = np.asarray(block, dtype=np.float64)
    nrm = np.linalg.norm(block)
    if nrm <= tau:
        return np.zeros_like(block)
    return block * (1.0 - tau / nrm)


def _as_2d(v):
    v = np.asarray(v, dtype=np.float64)
    return (v[:, None], True) if v.ndim == 1 else (v, False)


def hierarchical_prox(v, partition: GroupPartition, tau1, tau2):
    """Minimizer of 1/2 ||U - V||_F^2 + tau1 ||U||_1 + tau2 sum_g ||U[g]||_F.

    Soft-thresholding followed by group shrinkage is exact for this
    nested (l1 inside l2) penalty.
    """
    if tau1 < 0 or tau2 < 0:
        raise ValueError("thresholds must be non-negative")
    v2, flat = _as_2d(v)
    partition.check(v2.shape[0])
    out = _core.hierarchical_prox(np.ascontiguousarray(v2), partition.bounds,
                                  float(tau1), float(tau2))
    return out[:, 0] if flat else out


def hierarchical_penalty(x, partition: GroupPartition, lambda1, lambda2) -> float:
    x2, _ = _as_2d(x)
    partition.check(x2.shape[0])
    return float(_core.hierarchical_penalty(np.ascontiguousarray(x2), partition.bounds,
                                            float(lambda1), float(lambda2)))


def group_norms(x, partition: GroupPartition) -> np.ndarray:
    x2, _ = _as_2d(x)
    partition.check(x2.shape[0])
    return np.asarray(_core.group_norms(np.ascontiguousarray(x2), partition.bounds))


def prox_objective(u, v, partition, tau1, tau2) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    return 0.5 * float(np.sum((u - v) ** 2)) + hierarchical_penalty(u, partition, tau1, tau2)

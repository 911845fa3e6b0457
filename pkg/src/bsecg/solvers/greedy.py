"""Greedy baselines: orthogonal matching pursuit and its simultaneous variant."""

from __future__ import annotations

import numpy as np


class GreedyError(ValueError):
    pass


def _check_unit_columns(B, atol):
    norms = np.linalg.norm(B, axis=0)
    if np.any(np.abs(norms - 1.0) > atol):
        raise GreedyError("dictionary columns must have unit l2 norm")


def somp(B, Y, k_max, residual_tol=0.0, atol=1e-6, return_support=False):
    """Simultaneous OMP: one support shared by all columns of Y.

    Atoms are scored by the summed absolute correlation with the residuals
    of every column; coefficients are refit per column by least squares on
    the shared support. Stops after ``k_max`` atoms, once the residual
    Frobenius norm drops to ``residual_tol`` (or to round-off relative to
    ``Y``), or when a step fails to reduce the residual.
    """
    B = np.asarray(B, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    flat = Y.ndim == 1
    if flat:
        Y = Y[:, None]
    if B.shape[0] != Y.shape[0]:
        raise GreedyError(f"B has {B.shape[0]} rows, Y has {Y.shape[0]}")
    _check_unit_columns(B, atol)

    m, n_atoms = B.shape
    k_max = int(min(k_max, m, n_atoms))
    C = np.zeros((n_atoms, Y.shape[1]))
    support = []
    Q = np.zeros((m, k_max))
    R = Y.copy()
    rnorm = np.linalg.norm(R)
    residuals = [rnorm]
    available = np.ones(n_atoms, dtype=bool)
    # below this the residual is round-off, not signal
    floor = max(residual_tol, 1e-12 * rnorm)

    while len(support) < k_max and rnorm > floor:
        score = np.abs(B.T @ R).sum(axis=1)
        score[~available] = -1.0
        j = int(np.argmax(score))
        if score[j] <= 0:
            break
        k = len(support)
        # twice-applied Gram-Schmidt keeps Q orthonormal to working precision
        q = B[:, j].copy()
        for _ in range(2):
            q -= Q[:, :k] @ (Q[:, :k].T @ q)
        qn = np.linalg.norm(q)
        available[j] = False
        if qn <= 1e-10:
            continue
        q /= qn
        R_new = R - np.outer(q, q @ R)
        new_norm = np.linalg.norm(R_new)
        if not new_norm < rnorm:
            break
        Q[:, k] = q
        support.append(j)
        R, rnorm = R_new, new_norm
        residuals.append(rnorm)

    if support:
        coef, *_ = np.linalg.lstsq(B[:, support], Y, rcond=None)
        C[support] = coef
    out = C[:, 0] if flat else C
    if return_support:
        return out, list(support), residuals
    return out


def omp(B, y, k_max, residual_tol=0.0, atol=1e-6, return_support=False):
    """Orthogonal matching pursuit for a single target vector."""
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise GreedyError("omp takes a single target vector; use somp for matrices")
    return somp(B, y, k_max, residual_tol, atol, return_support)

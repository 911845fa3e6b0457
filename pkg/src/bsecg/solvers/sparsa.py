"""SpaRSA proximal-gradient engine and the lasso / C-HiLasso solvers built on it."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace

import numpy as np

from .partition import GroupPartition
from .prox import hierarchical_penalty, hierarchical_prox, soft_threshold

log = logging.getLogger(__name__)

_TINY = np.finfo(np.float64).tiny


class SolverDivergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """Weights and iteration controls for :func:`sparsa_solve`.

    ``tol`` is a relative objective change between accepted iterates;
    ``window`` is the length of the nonmonotone reference history.
    """

    lambda1: float = 0.0
    lambda2: float = 0.0
    max_iter: int = 2000
    tol: float = 1e-6
    bb_min: float = 1e-8
    bb_max: float = 1e8
    continuation: bool = False
    continuation_factor: float = 0.5
    continuation_stages: int = 4
    sigma: float = 0.01
    window: int = 5
    min_iter: int = 1
    record_trace: bool = False

    def __post_init__(self):
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("lambda weights must be non-negative")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not 0 < self.bb_min <= self.bb_max:
            raise ValueError("need 0 < bb_min <= bb_max")
        if not 0 < self.sigma < 1:
            raise ValueError("sigma must lie in (0, 1)")
        if not 0 < self.continuation_factor < 1:
            raise ValueError("continuation_factor must lie in (0, 1)")
        if self.max_iter < 1 or self.window < 1 or self.continuation_stages < 1:
            raise ValueError("max_iter, window and continuation_stages must be >= 1")


@dataclass
class SparseCode:
    C: np.ndarray
    iterations: int = 0
    objective: float = 0.0
    converged: bool = True
    trace: list = field(default_factory=list)

    def support(self, rel_tol=0.0) -> np.ndarray:
        a = np.abs(self.C)
        cut = rel_tol * a.max() if a.size and rel_tol > 0 else 0.0
        return a > cut


def sparsa_solve(B, Y, prox, penalty_value, config: SolverConfig = SolverConfig(),
                 x0=None) -> SparseCode:
    """Minimize 1/2 ||Y - B X||_F^2 + penalty(X).

    ``prox(V, t)`` must return argmin_U 1/2 ||U - V||^2 + t * penalty(U) and
    ``penalty_value(X)`` the penalty itself. With ``config.continuation`` the
    penalty is first scaled up by ``factor**-(stages-1)`` and relaxed stage by
    stage, warm-starting each solve.
    """
    B = np.asarray(B, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    flat = Y.ndim == 1
    Y2 = Y[:, None] if flat else Y
    if B.shape[0] != Y2.shape[0]:
        raise ValueError(f"B has {B.shape[0]} rows but Y has {Y2.shape[0]}")
    if not (np.all(np.isfinite(B)) and np.all(np.isfinite(Y2))):
        raise ValueError("non-finite input")
    X = np.zeros((B.shape[1], Y2.shape[1])) if x0 is None else np.array(x0, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]

    if config.continuation and config.continuation_stages > 1:
        scales = [config.continuation_factor ** -k
                  for k in range(config.continuation_stages - 1, -1, -1)]
    else:
        scales = [1.0]

    total_iter = 0
    trace = []
    result = None
    for scale in scales:
        result = _sparsa_stage(B, Y2, X, prox, penalty_value, scale, config, trace)
        X = result.C
        total_iter += result.iterations
    result.iterations = total_iter
    result.trace = trace
    if flat:
        result.C = result.C[:, 0]
    return result


def _sparsa_stage(B, Y, X, prox, penalty_value, scale, cfg, trace) -> SparseCode:
    def pen(Z):
        return scale * penalty_value(Z)

    R = B @ X - Y
    obj = 0.5 * float(np.vdot(R, R)) + pen(X)
    if not np.isfinite(obj):
        raise SolverDivergenceError("objective is not finite at the starting point")
    grad = B.T @ R
    gg = float(np.vdot(grad, grad))
    if gg > 0:
        Bg = B @ grad
        alpha = float(np.vdot(Bg, Bg)) / gg
    else:
        alpha = 1.0
    alpha = min(cfg.bb_max, max(cfg.bb_min, alpha))
    history = deque([obj], maxlen=cfg.window)
    converged = False

    it = 0
    while it < cfg.max_iter:
        it += 1
        ref = max(history)
        while True:
            X_new = prox(X - grad / alpha, scale / alpha)
            D = X_new - X
            dd = float(np.vdot(D, D))
            if dd == 0.0:
                break
            BD = B @ D
            R_new = R + BD
            obj_new = 0.5 * float(np.vdot(R_new, R_new)) + pen(X_new)
            if not np.isfinite(obj_new):
                raise SolverDivergenceError(f"objective became non-finite at iteration {it}")
            if obj_new <= ref - 0.5 * cfg.sigma * alpha * dd or alpha >= cfg.bb_max:
                break
            alpha = min(2.0 * alpha, cfg.bb_max)

        if dd == 0.0:
            # fixed point of the prox-gradient map: stationary
            converged = True
            if cfg.record_trace:
                trace.append((len(trace) + 1, obj, alpha))
            break

        prev = obj
        X, R, obj = X_new, R_new, obj_new
        history.append(obj)
        grad = B.T @ R
        bd = float(np.vdot(BD, BD))
        alpha = min(cfg.bb_max, max(cfg.bb_min, bd / (dd + _TINY)))
        if cfg.record_trace:
            trace.append((len(trace) + 1, obj, alpha))
        if it >= cfg.min_iter and abs(prev - obj) <= cfg.tol * max(abs(obj), _TINY):
            converged = True
            break

    if not converged:
        log.debug("sparsa: max_iter=%d reached, objective %.6g", cfg.max_iter, obj)
    return SparseCode(X, it, obj, converged)


def lasso(B, y, lambda1, config: SolverConfig = None, polish=True, kkt_tol=1e-4) -> np.ndarray:
    """argmin_c 1/2 ||y - B c||^2 + lambda1 ||c||_1.

    With ``polish`` the SpaRSA solution is finished by solving the
    stationarity equations exactly on its support and sign pattern. If the
    optimality conditions still miss ``kkt_tol`` (relative to lambda1), the
    solve is resumed from the current point with a 100x tighter tolerance,
    down to 1e-14.
    """
    cfg = replace(config or SolverConfig(), lambda1=lambda1, lambda2=0.0)
    B = np.asarray(B, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()

    def prox(v, t):
        return soft_threshold(v, lambda1 * t)

    def penalty(c):
        return lambda1 * float(np.abs(c).sum())

    c = None
    while True:
        c = sparsa_solve(B, y, prox, penalty, cfg, x0=c).C
        if not (polish and lambda1 > 0):
            return c
        c = _polish_lasso(B, y, c, lambda1)
        if lasso_kkt_residual(B, y, c, lambda1) < kkt_tol or cfg.tol <= 1e-14:
            return c
        cfg = replace(cfg, tol=max(cfg.tol * 1e-2, 1e-14), continuation=False)


def lasso_kkt_residual(B, y, c, lambda1) -> float:
    """Worst violation of the lasso optimality conditions, relative to lambda1."""
    g = B.T @ (y - B @ c)
    act = c != 0
    r_act = np.abs(g[act] - lambda1 * np.sign(c[act]))
    r_in = np.maximum(np.abs(g[~act]) - lambda1, 0.0)
    worst = max(r_act.max(initial=0.0), r_in.max(initial=0.0))
    return worst / lambda1 if lambda1 > 0 else worst


def _polish_lasso(B, y, c, lambda1):
    act = np.flatnonzero(c)
    if act.size == 0 or act.size > B.shape[0]:
        return c
    Bs = B[:, act]
    s = np.sign(c[act])
    try:
        cs = np.linalg.solve(Bs.T @ Bs, Bs.T @ y - lambda1 * s)
    except np.linalg.LinAlgError:
        return c
    if np.any(np.sign(cs) != s):
        return c
    cand = np.zeros_like(c)
    cand[act] = cs
    if lasso_kkt_residual(B, y, cand, lambda1) <= lasso_kkt_residual(B, y, c, lambda1):
        return cand
    return c


def chilasso(B, Y, partition: GroupPartition, lambda1, lambda2,
             config: SolverConfig = None, x0=None) -> SparseCode:
    """Collaborative hierarchical lasso over the columns of Y.

    Minimizes 1/2 ||Y - B C||_F^2 + lambda2 sum_g ||C[g]||_F + lambda1 ||C||_1,
    so all columns share active groups while each keeps its own pattern
    inside them.
    """
    cfg = replace(config or SolverConfig(), lambda1=lambda1, lambda2=lambda2)
    B = np.asarray(B, dtype=np.float64)
    partition.check(B.shape[1])
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]

    def prox(v, t):
        return hierarchical_prox(v, partition, lambda1 * t, lambda2 * t)

    def penalty(c):
        return hierarchical_penalty(c, partition, lambda1, lambda2)

    return sparsa_solve(B, Y, prox, penalty, cfg, x0=x0)


def chilasso_objective(B, Y, C, partition, lambda1, lambda2) -> float:
    R = np.asarray(Y) - np.asarray(B) @ C
    return 0.5 * float(np.vdot(R, R)) + hierarchical_penalty(C, partition, lambda1, lambda2)


def default_lambdas(B, Y, partition: GroupPartition, fraction=0.05):
    """lambda1 = fraction * ||B^T Y||_inf, lambda2 = lambda1 * sqrt(mean group size).

    A group is the block of its rows across every column of Y, so its size
    counts rows times columns.
    """
    Y = np.asarray(Y)
    corr = np.abs(np.asarray(B).T @ Y)
    lam1 = fraction * float(corr.max()) if corr.size else 0.0
    n_cols = 1 if Y.ndim == 1 else Y.shape[1]
    return lam1, lam1 * float(np.sqrt(partition.sizes.mean() * n_cols))

from .greedy import GreedyError, omp, somp
from .partition import GroupPartition, PartitionError
from .prox import (group_norms, group_shrink, hierarchical_penalty, hierarchical_prox,
                   prox_objective, soft_threshold)
from .sparsa import (SolverConfig, SolverDivergenceError, SparseCode, chilasso,
                     chilasso_objective, default_lambdas, lasso, lasso_kkt_residual,
                     sparsa_solve)

__all__ = [
    "GreedyError", "omp", "somp",
    "GroupPartition", "PartitionError",
    "group_norms", "group_shrink", "hierarchical_penalty", "hierarchical_prox",
    "prox_objective", "soft_threshold",
    "SolverConfig", "SolverDivergenceError", "SparseCode", "chilasso",
    "chilasso_objective", "default_lambdas", "lasso", "lasso_kkt_residual", "sparsa_solve",
]

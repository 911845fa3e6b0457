"""Shrinkage kernels: compiled extension when built, numpy otherwise.

Set ``BSECG_PURE_PYTHON=1`` to force the numpy path.
"""

import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("BSECG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback

soft_threshold = _impl.soft_threshold
group_norms = _impl.group_norms
hierarchical_prox = _impl.hierarchical_prox
hierarchical_penalty = _impl.hierarchical_penalty

__all__ = [
    "BACKEND",
    "soft_threshold",
    "group_norms",
    "hierarchical_prox",
    "hierarchical_penalty",
]

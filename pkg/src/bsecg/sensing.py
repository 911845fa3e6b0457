"""Seeded Gaussian sensing matrices and the measurement-count bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signal import MultiLeadSignal, make_rng


class SensingError(ValueError):
    pass


# The constant of the measurement bound, as a number. Its closed form is the
# reciprocal 1 / (2 ln(sqrt(24) + 1)) ~ 0.2817; written without the reciprocal
# it would be ~0.887. The two-digit value is the default so bounds match
# published figures; EXACT_BOUND_CONSTANT is available for the closed form.
BOUND_CONSTANT = 0.28
EXACT_BOUND_CONSTANT = 1.0 / (2.0 * math.log(math.sqrt(24.0) + 1.0))


@dataclass(frozen=True, eq=False)
class SensingMatrix:
    entries: np.ndarray
    seed: int

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]


def gaussian_sensing_matrix(m: int, n: int, seed: int) -> SensingMatrix:
    """m x n matrix of i.i.d. N(0, 1) entries (no 1/sqrt(m) rescaling)."""
    if not 1 <= m <= n:
        raise SensingError(f"need 1 <= m <= N, got m={m}, N={n}")
    a = make_rng(seed).standard_normal((m, n))
    a.setflags(write=False)
    return SensingMatrix(a, int(seed))


def identity_sensing_matrix(n: int) -> SensingMatrix:
    a = np.eye(n)
    a.setflags(write=False)
    return SensingMatrix(a, 0)


def min_measurements(k: int, n: int, u: float = BOUND_CONSTANT) -> int:
    """ceil(u k ln(N/k)), natural log; 0 when k == N."""
    if not 1 <= k <= n:
        raise SensingError(f"sparsity k={k} must lie in [1, {n}]")
    if k == n:
        return 0
    return int(math.ceil(u * k * math.log(n / k)))


def compress(x, a: SensingMatrix) -> np.ndarray:
    """Y = A X."""
    xs = x.samples if isinstance(x, MultiLeadSignal) else np.asarray(x, dtype=np.float64)
    if xs.ndim == 1:
        xs = xs[:, None]
    if xs.shape[0] != a.n:
        raise SensingError(f"sensing matrix expects {a.n} rows, signal has {xs.shape[0]}")
    return a.entries @ xs

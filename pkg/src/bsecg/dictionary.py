"""Kernel dictionaries over shift/scale grids, and their coherence."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class DictionaryError(ValueError):
    pass


class KernelKind(enum.Enum):
    RAISED_COSINE = 0
    GAUSSIAN = 1
    HYPERBOLIC_SECANT = 2
    TRUNCATED_GAUSSIAN = 3

    @property
    def code(self) -> str:
        return _CODES[self]

    @classmethod
    def parse(cls, value) -> "KernelKind":
        if isinstance(value, cls):
            return value
        if isinstance(value, int):
            return cls(value)
        key = str(value).strip().lower().replace("-", "_")
        for kind, code in _CODES.items():
            if key in (code, kind.name.lower()):
                return kind
        raise DictionaryError(f"unknown kernel {value!r}; expected one of {sorted(_CODES.values())}")


_CODES = {
    KernelKind.RAISED_COSINE: "rc",
    KernelKind.GAUSSIAN: "g",
    KernelKind.HYPERBOLIC_SECANT: "hs",
    KernelKind.TRUNCATED_GAUSSIAN: "tg",
}


def _check_scale(beta):
    if not beta > 0:
        raise DictionaryError(f"scale must be positive, got {beta}")


def raised_cosine_atom(t, alpha, beta):
    """1 + cos(pi (t - alpha) / beta) on [alpha - beta, alpha + beta], zero elsewhere."""
    _check_scale(beta)
    u = (np.asarray(t, dtype=np.float64) - alpha) / beta
    return np.where(np.abs(u) <= 1.0, 1.0 + np.cos(np.pi * u), 0.0)


def gaussian_atom(t, alpha, beta):
    _check_scale(beta)
    u = (np.asarray(t, dtype=np.float64) - alpha) / beta
    return np.exp(-0.5 * u * u)


def hyperbolic_secant_atom(t, alpha, beta):
    _check_scale(beta)
    u = (np.asarray(t, dtype=np.float64) - alpha) / beta
    return 1.0 / np.cosh(u)


def truncated_gaussian_atom(t, alpha, beta):
    """Gaussian restricted to [alpha - 3 beta, alpha + 3 beta]."""
    _check_scale(beta)
    u = (np.asarray(t, dtype=np.float64) - alpha) / beta
    return np.where(np.abs(u) <= 3.0, np.exp(-0.5 * u * u), 0.0)


_ATOMS = {
    KernelKind.RAISED_COSINE: raised_cosine_atom,
    KernelKind.GAUSSIAN: gaussian_atom,
    KernelKind.HYPERBOLIC_SECANT: hyperbolic_secant_atom,
    KernelKind.TRUNCATED_GAUSSIAN: truncated_gaussian_atom,
}


def evaluate_kernel(kind, t, alpha, beta):
    return _ATOMS[KernelKind.parse(kind)](t, alpha, beta)


@dataclass(frozen=True)
class DictionaryParams:
    """Everything needed to rebuild a dictionary bit-for-bit.

    Shifts are placed uniformly on ``[r_index - shift_pre, r_index + shift_post]``
    samples and scales uniformly on ``scale_interval`` (seconds).
    """

    kernel: KernelKind = KernelKind.RAISED_COSINE
    n_shifts: int = 100
    n_scales: int = 30
    n: int = 800
    fs: float = 1000.0
    r_index: int = 300
    shift_pre: float = 200.0
    shift_post: float = 450.0
    scale_interval: tuple = (0.02, 0.6)
    normalize: bool = True

    @property
    def n_atoms(self) -> int:
        return self.n_shifts * self.n_scales

    def with_r_index(self, r_index) -> "DictionaryParams":
        return DictionaryParams(self.kernel, self.n_shifts, self.n_scales, self.n, self.fs,
                                int(r_index), self.shift_pre, self.shift_post,
                                tuple(self.scale_interval), self.normalize)

    def valid_r_range(self) -> tuple:
        """Smallest and largest R index whose shift window fits the N-sample grid."""
        return int(np.ceil(self.shift_pre)), int(np.floor(self.n - 1 - self.shift_post))


@dataclass(frozen=True, eq=False)
class Dictionary:
    atoms: np.ndarray
    kernel: KernelKind
    shifts: np.ndarray
    scales: np.ndarray
    column_norms: np.ndarray
    normalized: bool
    params: DictionaryParams = None

    @property
    def n(self) -> int:
        return self.atoms.shape[0]

    @property
    def m(self) -> int:
        return self.atoms.shape[1]

    def raw_atoms(self) -> np.ndarray:
        """Atoms before normalization."""
        return self.atoms * self.column_norms if self.normalized else self.atoms


def build_dictionary(kernel=KernelKind.RAISED_COSINE, n_shifts=100, n_scales=30, n=800,
                     fs=1000.0, r_index=300, normalize=True, shift_pre=200.0,
                     shift_post=450.0, scale_interval=(0.02, 0.6)) -> Dictionary:
    """Build an N x (n_shifts * n_scales) dictionary, shift-major.

    Column ``i * n_scales + j`` is the kernel at shift ``i`` and scale ``j``,
    so contiguous column ranges map to contiguous stretches of time.
    """
    params = DictionaryParams(KernelKind.parse(kernel), int(n_shifts), int(n_scales), int(n),
                              float(fs), int(r_index), float(shift_pre), float(shift_post),
                              tuple(float(s) for s in scale_interval), bool(normalize))
    return _build(params)


def dictionary_from_params(params: DictionaryParams) -> Dictionary:
    return _cached_build(params)


@lru_cache(maxsize=16)
def _cached_build(params: DictionaryParams) -> Dictionary:
    return _build(params)


def _build(p: DictionaryParams) -> Dictionary:
    if p.n_shifts < 1 or p.n_scales < 1 or p.n < 1:
        raise DictionaryError("n_shifts, n_scales and N must all be >= 1")
    if not p.fs > 0:
        raise DictionaryError("fs must be positive")
    lo, hi = p.r_index - p.shift_pre, p.r_index + p.shift_post
    if lo < 0 or hi > p.n - 1:
        raise DictionaryError(
            f"shift window [{lo}, {hi}] does not fit a {p.n}-sample grid (r_index={p.r_index})")
    s_lo, s_hi = p.scale_interval
    if not 0 < s_lo <= s_hi:
        raise DictionaryError(f"bad scale interval {p.scale_interval}")

    t = np.arange(p.n) / p.fs
    shift_samples = np.linspace(lo, hi, p.n_shifts)
    scale_values = np.linspace(s_lo, s_hi, p.n_scales)
    alphas = np.repeat(shift_samples / p.fs, p.n_scales)
    betas = np.tile(scale_values, p.n_shifts)
    u = (t[:, None] - alphas[None, :]) / betas[None, :]
    if p.kernel is KernelKind.RAISED_COSINE:
        atoms = np.where(np.abs(u) <= 1.0, 1.0 + np.cos(np.pi * u), 0.0)
    elif p.kernel is KernelKind.GAUSSIAN:
        atoms = np.exp(-0.5 * u * u)
    elif p.kernel is KernelKind.HYPERBOLIC_SECANT:
        atoms = 1.0 / np.cosh(u)
    else:
        atoms = np.where(np.abs(u) <= 3.0, np.exp(-0.5 * u * u), 0.0)

    norms = np.linalg.norm(atoms, axis=0)
    dead = np.flatnonzero(norms == 0)
    if dead.size:
        k = dead[0]
        raise DictionaryError(
            f"all-zero atom at (alpha={alphas[k]:.6g} s, beta={betas[k]:.6g} s)")
    if p.normalize:
        atoms = atoms / norms
    atoms.setflags(write=False)
    return Dictionary(atoms, p.kernel, alphas * p.fs, betas, norms, p.normalize, p)


def mutual_coherence(matrix, atol=1e-9) -> float:
    """Largest |<a_i, a_j>| over distinct unit-norm columns."""
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[1] < 2:
        raise DictionaryError("need a matrix with at least two columns")
    norms = np.linalg.norm(a, axis=0)
    if np.any(np.abs(norms - 1.0) > atol):
        raise DictionaryError("columns must have unit l2 norm; call normalize_columns first")
    g = np.abs(a.T @ a)
    np.fill_diagonal(g, 0.0)
    return float(min(g.max(), 1.0))


def normalize_columns(matrix) -> np.ndarray:
    a = np.asarray(matrix, dtype=np.float64)
    norms = np.linalg.norm(a, axis=0)
    if np.any(norms == 0):
        raise DictionaryError("cannot normalize an all-zero column")
    return a / norms

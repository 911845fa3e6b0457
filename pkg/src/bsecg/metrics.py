"""Compression and reconstruction quality measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .signal import BeatWindow, MultiLeadSignal

NONZERO_REL_TOL = 1e-8


class MetricError(ValueError):
    pass


def _mat(x):
    if isinstance(x, MultiLeadSignal):
        return x.samples
    x = np.asarray(x, dtype=np.float64)
    return x[:, None] if x.ndim == 1 else x


def _pair(x, x_hat):
    a, b = _mat(x), _mat(x_hat)
    if a.shape != b.shape:
        raise MetricError(f"shape mismatch {a.shape} vs {b.shape}")
    return a, b


def nonzero_count(code, rel_tol=NONZERO_REL_TOL) -> int:
    c = np.abs(np.asarray(code, dtype=np.float64))
    if c.size == 0 or c.max() == 0:
        return 0
    return int(np.count_nonzero(c > rel_tol * c.max()))


def sparsity_percent(code, n: int, rel_tol=NONZERO_REL_TOL) -> float:
    """(N - k) / N * 100 with k the nonzero count of ``code`` and N the signal length."""
    if n < 1:
        raise MetricError("N must be >= 1")
    k = nonzero_count(code, rel_tol)
    return (n - k) / n * 100.0


def sparsity_from_count(k: int, n: int) -> float:
    if n < 1:
        raise MetricError("N must be >= 1")
    return (n - k) / n * 100.0


def compression_ratio(n: int, m: int) -> float:
    if not 1 <= m <= n:
        raise MetricError(f"need 1 <= m <= N, got m={m}, N={n}")
    return n / m


def reconstruction_error(x, x_hat) -> float:
    """Per-lead sum of squared errors, averaged over leads (no 1/N factor)."""
    a, b = _pair(x, x_hat)
    return float(np.sum((b - a) ** 2) / a.shape[1])


def prd(x, x_hat) -> float:
    """||X - X_hat|| / ||X - mean(X)|| * 100 over the whole matrix."""
    a, b = _pair(x, x_hat)
    den = np.linalg.norm(a - a.mean())
    if den == 0:
        raise MetricError("PRD undefined for a constant signal")
    return float(np.linalg.norm(a - b) / den * 100.0)


@dataclass(frozen=True)
class FeatureConfig:
    """Search windows (seconds) and thresholds for fiducial features."""

    qrs_search: float = 0.060
    qrs_threshold: float = 0.02
    p_window: tuple = (-0.200, -0.060)
    t_window: tuple = (0.080, 0.450)


@dataclass(frozen=True)
class DiagnosticFeatures:
    qrs_dur: float
    p_dur: float
    qrs_amp: float
    p_amp: float
    t_amp: float
    qrs_sign: int

    def __post_init__(self):
        if self.qrs_dur < 0 or self.p_dur < 0:
            raise MetricError("durations must be non-negative")
        if self.qrs_sign not in (1, -1):
            raise MetricError("qrs_sign must be +1 or -1")

    def as_vector(self) -> np.ndarray:
        return np.array([self.qrs_dur, self.p_dur, self.qrs_amp, self.p_amp, self.t_amp,
                         float(self.qrs_sign)])


def _half_amplitude_width(x, peak, lo, hi, fs):
    """Width between the half-amplitude crossings around ``peak``, linearly interpolated."""
    h = 0.5 * abs(x[peak])
    if h == 0:
        return 0.0
    a = np.abs(x)
    i = peak
    while i > lo and a[i - 1] >= h:
        i -= 1
    left = float(i)
    if i > lo:
        left = i - (a[i] - h) / (a[i] - a[i - 1])
    j = peak
    while j < hi - 1 and a[j + 1] >= h:
        j += 1
    right = float(j)
    if j < hi - 1:
        right = j + (a[j] - h) / (a[j] - a[j + 1])
    return (right - left) / fs


def extract_features(beat: BeatWindow, fs: float, config: FeatureConfig = FeatureConfig()
                     ) -> DiagnosticFeatures:
    """Six fiducial features of one lead of one beat.

    The isoelectric baseline is the median of the window. QRS extent is the
    span, within +-qrs_search of R, of samples deviating from baseline by at
    least qrs_threshold of the R deflection; QRS amplitude is peak-to-peak
    inside it. P and T are the largest deflections in their search windows
    (signed), and P duration is its half-amplitude width.
    """
    x = np.asarray(beat.samples, dtype=np.float64)
    n = x.size
    r = int(beat.r_index)

    def idx(sec):
        return r + int(round(sec * fs))

    # P and T searches are clipped to the window; each must keep >= 2 samples
    p_lo, p_hi = max(0, idx(config.p_window[0])), idx(config.p_window[1])
    t_lo, t_hi = idx(config.t_window[0]), min(n, idx(config.t_window[1]))
    q = int(round(config.qrs_search * fs))
    if p_hi - p_lo < 2 or t_hi - t_lo < 2 or r - q < 0 or r + q >= n:
        raise MetricError(
            f"window of {n} samples too short for feature search around R={r}")

    x = x - np.median(x)
    r_amp = x[r]
    sign = 1 if r_amp >= 0 else -1

    seg = np.abs(x[r - q:r + q + 1])
    sig = np.flatnonzero(seg >= config.qrs_threshold * abs(r_amp)) if r_amp != 0 else np.array([q])
    on, off = r - q + sig[0], r - q + sig[-1]
    qrs_dur = (off - on) / fs
    qrs_amp = float(x[on:off + 1].max() - x[on:off + 1].min())

    p_seg = x[p_lo:p_hi]
    p_peak = p_lo + int(np.argmax(np.abs(p_seg)))
    p_amp = float(x[p_peak])
    p_dur = _half_amplitude_width(x, p_peak, p_lo, p_hi, fs)

    t_seg = x[t_lo:t_hi]
    t_amp = float(t_seg[np.argmax(np.abs(t_seg))])

    return DiagnosticFeatures(float(qrs_dur), float(p_dur), qrs_amp, p_amp, t_amp, sign)


@dataclass(frozen=True)
class WeightMatrix:
    """Diagonal weights, one per feature, in DiagnosticFeatures order."""

    weights: tuple = (1.0, 1.0, 1.0, 1.0, 1.0, 1.0)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.shape != (6,) or np.any(w < 0) or w.sum() <= 0:
            raise MetricError("need six non-negative weights with positive trace")


def feature_distances(beta: DiagnosticFeatures, beta_hat: DiagnosticFeatures) -> np.ndarray:
    a, b = beta.as_vector(), beta_hat.as_vector()
    d = np.zeros(6)
    for i in range(5):
        den = max(abs(a[i]), abs(b[i]))
        # opposite signs would give up to 2; cap so WDD stays in [0, 100]
        d[i] = min(1.0, abs(a[i] - b[i]) / den) if den > 0 else 0.0
    d[5] = 0.0 if beta.qrs_sign == beta_hat.qrs_sign else 1.0
    return d


def wdd(beta: DiagnosticFeatures, beta_hat: DiagnosticFeatures,
        weights: WeightMatrix = WeightMatrix()) -> float:
    """Weighted diagnostic distortion in percent."""
    d = feature_distances(beta, beta_hat)
    w = np.asarray(weights.weights, dtype=np.float64)
    return float(np.sum(w * d * d) / w.sum() * 100.0)


def refine_r_index(lead, r_index: int, fs: float, config: FeatureConfig = FeatureConfig()) -> int:
    """Largest deflection from the median within +-qrs_search of ``r_index``.

    The beat-level R index comes from all leads combined; in a lead whose R
    wave is small the dominant QRS deflection sits a few samples away.
    """
    x = np.asarray(lead, dtype=np.float64)
    q = int(round(config.qrs_search * fs))
    lo, hi = max(0, r_index - q), min(x.size, r_index + q + 1)
    if lo >= hi:
        raise MetricError(f"R index {r_index} outside a {x.size}-sample window")
    seg = np.abs(x[lo:hi] - np.median(x))
    return lo + int(np.argmax(seg))


def multilead_wdd(x, x_hat, r_index: int, fs: float, weights: WeightMatrix = WeightMatrix(),
                  config: FeatureConfig = FeatureConfig(), refine: bool = True) -> float:
    """WDD averaged over leads.

    With ``refine`` each lead's R index is moved to its dominant QRS
    deflection in the reference signal, and the same index is used for the
    reconstruction so both feature sets share one fiducial point.
    """
    a, b = _pair(x, x_hat)
    vals = []
    for s in range(a.shape[1]):
        r = refine_r_index(a[:, s], r_index, fs, config) if refine else r_index
        fa = extract_features(BeatWindow(a[:, s], r), fs, config)
        fb = extract_features(BeatWindow(b[:, s], r), fs, config)
        vals.append(wdd(fa, fb, weights))
    return float(np.mean(vals))


def quality_label(wdd_percent: float) -> str:
    return "very good/good" if wdd_percent < 10 else "poor"

"""Multi-lead signal containers, R-peak location, beat windows and test data."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .dictionary import KernelKind, evaluate_kernel

DEFAULT_FS = 1000.0
INFINITE_SNR = float("inf")


class SignalError(ValueError):
    pass


class NoPeakError(SignalError):
    pass


class WindowBoundaryError(SignalError):
    pass


def make_rng(seed):
    """Seeded PCG64 generator, the only randomness source in the package."""
    return np.random.Generator(np.random.PCG64(int(seed) & 0xFFFFFFFFFFFFFFFF))


@dataclass(frozen=True)
class MultiLeadSignal:
    """N x S samples in millivolts, one column per lead."""

    samples: np.ndarray
    fs: float = DEFAULT_FS
    lead_names: tuple = ()

    def __post_init__(self):
        x = np.array(self.samples, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
            raise SignalError(f"samples must be a non-empty N x S matrix, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise SignalError("samples contain non-finite values")
        if not self.fs > 0:
            raise SignalError(f"sampling rate must be positive, got {self.fs}")
        names = tuple(self.lead_names) or tuple(f"lead{i}" for i in range(x.shape[1]))
        if len(names) != x.shape[1]:
            raise SignalError(f"{len(names)} lead names for {x.shape[1]} leads")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        object.__setattr__(self, "fs", float(self.fs))
        object.__setattr__(self, "lead_names", names)

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def n_leads(self) -> int:
        return self.samples.shape[1]

    def with_samples(self, samples) -> "MultiLeadSignal":
        return MultiLeadSignal(samples, self.fs, self.lead_names)


@dataclass(frozen=True)
class BeatWindow:
    samples: np.ndarray
    r_index: int

    def __post_init__(self):
        if not 0 <= self.r_index < len(self.samples):
            raise WindowBoundaryError(
                f"r_index {self.r_index} outside window of length {len(self.samples)}")


@dataclass(frozen=True)
class Wave:
    """One additive wave: amplitude (mV), center (s), width (s), kernel."""

    amplitude: float
    center: float
    width: float
    kernel: KernelKind = KernelKind.RAISED_COSINE


@dataclass
class SyntheticBeatSpec:
    """Recipe for a synthetic multi-lead beat.

    ``leads`` is either one scalar gain per lead or, per lead, one gain per
    wave (so leads can differ in morphology, e.g. an inverted T).
    """

    waves: list
    duration: float = 0.8
    fs: float = DEFAULT_FS
    leads: list = field(default_factory=lambda: [1.0])
    noise_std: float = 0.0
    seed: int = 0
    lead_names: list = field(default_factory=list)

    def validate(self):
        if not (self.duration > 0 and self.fs > 0):
            raise SignalError("duration and fs must be positive")
        for w in self.waves:
            if not w.width > 0:
                raise SignalError(f"wave width must be positive, got {w.width}")
            if not 0.0 <= w.center <= self.duration:
                raise SignalError(f"wave center {w.center} outside [0, {self.duration}]")
        if len(self.leads) < 1:
            raise SignalError("at least one lead is required")
        if self.noise_std < 0:
            raise SignalError("noise_std must be non-negative")

    def gain_matrix(self) -> np.ndarray:
        """S x n_waves lead gains."""
        rows = []
        for g in self.leads:
            if np.ndim(g) == 0:
                rows.append(np.full(len(self.waves), float(g)))
            else:
                g = np.asarray(g, dtype=np.float64)
                if g.shape != (len(self.waves),):
                    raise SignalError(f"per-wave gains must have {len(self.waves)} entries")
                rows.append(g)
        return np.array(rows).reshape(len(self.leads), len(self.waves))

    @classmethod
    def from_dict(cls, d) -> "SyntheticBeatSpec":
        waves = [Wave(float(w["amplitude"]), float(w["center"]), float(w["width"]),
                      KernelKind.parse(w.get("kernel", "rc"))) for w in d.get("waves", [])]
        return cls(waves=waves,
                   duration=float(d.get("duration", 0.8)),
                   fs=float(d.get("fs", DEFAULT_FS)),
                   leads=list(d.get("leads", [1.0])),
                   noise_std=float(d.get("noise_std", 0.0)),
                   seed=int(d.get("seed", 0)),
                   lead_names=list(d.get("lead_names", [])))


def detect_r_peak(lead, fs: float = DEFAULT_FS) -> int:
    """Index of the largest absolute excursion from the lead mean."""
    x = np.asarray(lead, dtype=np.float64)
    if x.ndim != 1 or x.size < 3:
        raise NoPeakError("need a 1-D lead with at least 3 samples")
    if not fs > 0:
        raise SignalError("fs must be positive")
    d = np.abs(x - x.mean())
    if not np.any(d > 0):
        raise NoPeakError("no peak: signal is constant")
    return int(np.argmax(d))


def combined_lead(samples: np.ndarray) -> np.ndarray:
    """Root-sum-square of mean-removed leads; used to locate beats across all leads."""
    x = np.asarray(samples, dtype=np.float64)
    x = x - x.mean(axis=0)
    return np.sqrt(np.sum(x * x, axis=1))


def beat_r_index(samples) -> int:
    """R index of a single-beat window: peak of the combined-lead envelope."""
    env = combined_lead(_as_matrix(samples))
    if env.size < 3 or not np.any(env > 0):
        raise NoPeakError("no peak: window is constant or shorter than 3 samples")
    return int(np.argmax(env))


def detect_r_peaks(samples, fs: float = DEFAULT_FS, min_rr: float = 0.3,
                   rel_height: float = 0.5) -> np.ndarray:
    """All R peaks of a multi-beat record (N x S, or a single lead)."""
    from scipy.signal import find_peaks

    x = np.asarray(samples, dtype=np.float64)
    env = combined_lead(x if x.ndim == 2 else x[:, None])
    if not np.any(env > 0):
        raise NoPeakError("no peak: signal is constant")
    peaks, _ = find_peaks(env, height=rel_height * env.max(),
                          distance=max(1, int(round(min_rr * fs))))
    if peaks.size == 0:
        peaks = np.array([int(np.argmax(env))])
    return peaks


def extract_beat(signal: MultiLeadSignal, r_index: int, pre: int = 200,
                 post: int = 450) -> list:
    """Slice [r_index - pre, r_index + post) out of every lead."""
    lo, hi = r_index - pre, r_index + post
    if lo < 0:
        raise WindowBoundaryError(f"window start {lo} (r_index {r_index} - pre {pre}) is negative")
    if hi > signal.n_samples:
        raise WindowBoundaryError(
            f"window end {hi} (r_index {r_index} + post {post}) exceeds {signal.n_samples} samples")
    return [BeatWindow(signal.samples[lo:hi, s].copy(), pre) for s in range(signal.n_leads)]


def pad_to_length(block: np.ndarray, n: int) -> np.ndarray:
    """Extend rows to ``n`` by mirror padding at the end (no-op if long enough)."""
    block = np.asarray(block, dtype=np.float64)
    if block.shape[0] >= n:
        return block[:n]
    extra = n - block.shape[0]
    out = block
    while out.shape[0] < n:
        # np.pad 'symmetric' cannot extend past one reflection
        take = min(extra, out.shape[0])
        out = np.concatenate([out, out[::-1][:take]], axis=0)
        extra = n - out.shape[0]
    return out[:n]


def generate_synthetic_beat(spec: SyntheticBeatSpec) -> MultiLeadSignal:
    spec.validate()
    n = int(round(spec.duration * spec.fs))
    t = np.arange(n) / spec.fs
    gains = spec.gain_matrix()
    shapes = np.zeros((n, len(spec.waves)))
    for i, w in enumerate(spec.waves):
        shapes[:, i] = w.amplitude * evaluate_kernel(w.kernel, t, w.center, w.width)
    x = shapes @ gains.T
    if spec.noise_std > 0:
        x = x + spec.noise_std * make_rng(spec.seed).standard_normal(x.shape)
    names = spec.lead_names or [f"lead{i}" for i in range(len(spec.leads))]
    return MultiLeadSignal(x, spec.fs, tuple(names))


def add_white_noise(signal: MultiLeadSignal, target_snr_db: float, seed) -> MultiLeadSignal:
    """Add per-lead Gaussian noise with variance = lead power / 10**(snr/10)."""
    x = signal.samples
    power = np.mean(x * x, axis=0)
    if np.any(power <= 0):
        raise SignalError("cannot calibrate noise against a zero-power lead")
    std = np.sqrt(power / 10.0 ** (target_snr_db / 10.0))
    noise = make_rng(seed).standard_normal(x.shape) * std
    return signal.with_samples(x + noise)


def snr_db(reference, test) -> float:
    x = _as_matrix(reference)
    y = _as_matrix(test)
    if x.shape != y.shape:
        raise SignalError(f"shape mismatch {x.shape} vs {y.shape}")
    err = np.sum((x - y) ** 2)
    if err == 0:
        return INFINITE_SNR
    return float(10.0 * np.log10(np.sum(x * x) / err))


def _as_matrix(x) -> np.ndarray:
    if isinstance(x, MultiLeadSignal):
        return x.samples
    x = np.asarray(x, dtype=np.float64)
    return x[:, None] if x.ndim == 1 else x


def read_csv(path, fs: float = DEFAULT_FS) -> MultiLeadSignal:
    """Header row of lead names, then one row of samples per time step."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SignalError(f"{path}: empty file") from None
        names = [h.strip() for h in header]
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or not any(c.strip() for c in row):
                continue
            if len(row) != len(names):
                raise SignalError(f"{path}:{lineno}: expected {len(names)} values, got {len(row)}")
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise SignalError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise SignalError(f"{path}: no samples")
    return MultiLeadSignal(np.array(rows), fs, tuple(names))


def write_csv(signal: MultiLeadSignal, path, fmt: str = "%.10g"):
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write(",".join(signal.lead_names) + "\n")
        np.savetxt(fh, signal.samples, delimiter=",", fmt=fmt)


def stack_leads(windows: Sequence[BeatWindow]) -> np.ndarray:
    return np.column_stack([w.samples for w in windows])

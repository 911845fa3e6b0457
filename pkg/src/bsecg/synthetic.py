"""Ready-made synthetic beats for tests, benchmarks and the ``synth`` command.

Two families:

* :func:`ecg_like_spec` - P/QRS/T waves off the dictionary grid, mixed kernel
  shapes and a dipole lead model, so no dictionary represents it exactly;
* :func:`atom_beat_spec` - the same wave layout snapped onto the raised-cosine
  dictionary grid, so the clean beat lies exactly in the span of the dictionary.
"""

from __future__ import annotations

import numpy as np

from .dictionary import DictionaryParams, KernelKind
from .signal import SyntheticBeatSpec, Wave, beat_r_index, generate_synthetic_beat, make_rng

STANDARD_LEADS = ("i", "ii", "iii", "avr", "avl", "avf", "v1", "v2", "v3", "v4", "v5", "v6")

# (frontal angle deg, horizontal angle deg) of each lead axis
_LEAD_AXES = {
    "i": (0, None), "ii": (60, None), "iii": (120, None),
    "avr": (-150, None), "avl": (-30, None), "avf": (90, None),
    "v1": (None, 115), "v2": (None, 95), "v3": (None, 75),
    "v4": (None, 55), "v5": (None, 30), "v6": (None, 0),
}

# name, amplitude mV, center s (R at 0.3 s), width s, kernel, dipole (x, y, z)
_WAVES = (
    ("P1", 0.07, 0.150, 0.045, KernelKind.RAISED_COSINE, (0.5, 0.8, 0.2)),
    ("P2", 0.04, 0.180, 0.030, KernelKind.GAUSSIAN, (0.6, 0.7, -0.2)),
    ("Q", -0.10, 0.281, 0.010, KernelKind.GAUSSIAN, (0.8, 0.2, -0.6)),
    ("R", 0.55, 0.300, 0.026, KernelKind.RAISED_COSINE, (0.55, 0.75, 0.4)),
    ("S", -0.20, 0.321, 0.012, KernelKind.GAUSSIAN, (0.3, 0.6, 0.75)),
    ("T1", 0.10, 0.505, 0.065, KernelKind.GAUSSIAN, (0.6, 0.5, 0.6)),
    ("T2", 0.14, 0.565, 0.045, KernelKind.RAISED_COSINE, (0.7, 0.5, 0.5)),
)


def lead_vectors(names=STANDARD_LEADS) -> np.ndarray:
    """Unit lead axes in (x: left, y: inferior, z: anterior) coordinates."""
    out = []
    for name in names:
        frontal, horizontal = _LEAD_AXES[name]
        if frontal is not None:
            a = np.deg2rad(frontal)
            out.append((np.cos(a), np.sin(a), 0.0))
        else:
            a = np.deg2rad(horizontal)
            out.append((np.cos(a), 0.15, np.sin(a)))
    v = np.array(out)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _lead_names(n_leads):
    if n_leads <= len(STANDARD_LEADS):
        return list(STANDARD_LEADS[:n_leads])
    return list(STANDARD_LEADS) + [f"x{i}" for i in range(n_leads - len(STANDARD_LEADS))]


def _gains(n_leads, rng, jitter):
    names = _lead_names(n_leads)
    known = [n for n in names if n in _LEAD_AXES]
    vecs = np.vstack([lead_vectors(known),
                      rng.standard_normal((n_leads - len(known), 3))])
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    dip = np.array([w[5] for w in _WAVES], dtype=np.float64)
    dip /= np.linalg.norm(dip, axis=1, keepdims=True)
    dip = dip + jitter * rng.standard_normal(dip.shape)
    g = 0.3 + vecs @ dip.T
    return g * (1.0 + 0.5 * jitter * rng.standard_normal((n_leads, 1))), names


def ecg_like_spec(n_leads=12, seed=0, noise_std=0.0, jitter=0.15, duration=0.8,
                  fs=1000.0) -> SyntheticBeatSpec:
    """A plausible 12-lead beat with R at 0.3 s; ``seed`` varies the subject."""
    rng = make_rng(seed)
    waves = []
    for name, amp, center, width, kernel, _ in _WAVES:
        c = center + jitter * 0.02 * rng.standard_normal()
        if name != "R":
            c = float(np.clip(c, 0.0, duration))
        else:
            c = center
        w = width * (1.0 + jitter * rng.uniform(-1, 1))
        a = amp * (1.0 + jitter * rng.uniform(-1, 1))
        waves.append(Wave(float(a), float(c), float(w), kernel))
    gains, names = _gains(n_leads, rng, jitter)
    return SyntheticBeatSpec(waves, duration, fs, [list(g) for g in gains], noise_std,
                             int(seed) + 1, names)


def _snap(waves, params):
    """Snapped waves plus, for each, the index of the source wave."""
    shifts = np.linspace(params.r_index - params.shift_pre, params.r_index + params.shift_post,
                         params.n_shifts) / params.fs
    scales = np.linspace(*params.scale_interval, params.n_scales)
    main = int(np.argmax([abs(w.amplitude) for w in waves]))
    out, src = [], []
    for i, w in enumerate(waves):
        # an RC wave of half-support beta has the FWHM of a Gaussian of sigma ~ 0.42 beta
        target = w.width if w.kernel is KernelKind.RAISED_COSINE else w.width / 0.4247
        b = float(scales[np.argmin(np.abs(scales - target))])
        if i == main:
            # split R over the two grid shifts around its center so the summed
            # peak stays near the true center instead of jumping to a grid point
            k = int(np.clip(np.searchsorted(shifts, w.center) - 1, 0, len(shifts) - 2))
            frac = float(np.clip((w.center - shifts[k]) / (shifts[k + 1] - shifts[k]), 0, 1))
            out.append(Wave(w.amplitude * (1 - frac), float(shifts[k]), b,
                            KernelKind.RAISED_COSINE))
            out.append(Wave(w.amplitude * frac, float(shifts[k + 1]), b,
                            KernelKind.RAISED_COSINE))
            src += [i, i]
            continue
        c = float(shifts[np.argmin(np.abs(shifts - w.center))])
        out.append(Wave(w.amplitude, c, b, KernelKind.RAISED_COSINE))
        src.append(i)
    return out, src


def atom_beat_spec(n_leads=12, seed=0, params: DictionaryParams = DictionaryParams(),
                   noise_std=0.0) -> SyntheticBeatSpec:
    """Raised-cosine waves placed exactly on dictionary (shift, scale) grid points.

    The grid is anchored at an R index that :func:`beat_r_index` finds again
    in the generated beat, so a dictionary built around the detected R
    contains every wave exactly. The R wave is nudged until detection lands
    on the anchor; anchors are tried outward from ``params.r_index``.
    """
    base = ecg_like_spec(n_leads, seed, 0.0, duration=params.n / params.fs, fs=params.fs)
    main = int(np.argmax([abs(w.amplitude) for w in base.waves]))
    lo, hi = params.valid_r_range()
    r0 = min(max(params.r_index, lo), hi)
    for r in sorted(range(lo, hi + 1), key=lambda v: (abs(v - r0), v)):
        grid = params.with_r_index(r)
        center = r / params.fs
        for _ in range(4):
            waves = list(base.waves)
            w = waves[main]
            waves[main] = Wave(w.amplitude, center, w.width, w.kernel)
            waves, src = _snap(waves, grid)
            leads = [[g[i] for i in src] for g in base.leads]
            spec = SyntheticBeatSpec(waves, base.duration, base.fs, leads, noise_std,
                                     base.seed, base.lead_names)
            clean = SyntheticBeatSpec(waves, base.duration, base.fs, leads, 0.0,
                                      base.seed, base.lead_names)
            d = beat_r_index(generate_synthetic_beat(clean).samples)
            if d == r:
                return spec
            center += (r - d) / params.fs
    raise ValueError("no grid anchor reproduces itself under R detection")

"""End-to-end compression, reconstruction and benchmarking of multi-lead records.

A record is split into beat windows of N samples around detected R peaks;
each window is projected by its own seeded sensing matrix and stored in a
:class:`~bsecg.bundle.CompressedBundle`. Reconstruction solves C-HiLasso on
``A @ Phi`` and maps the code back through the dictionary.

Regularization follows a warm-started path: lambda1 starts at
``lambda_fraction * ||B^T Y||_inf`` and is halved stage by stage. When no
lambda1 is configured the encoder walks the path on its own measurements
and keeps the first value whose residual drops to the noise level predicted
from the raw signal (a discrepancy rule); the chosen weights travel in the
bundle and the decoder replays the same path down to them.
"""

from __future__ import annotations

import csv
import io
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .bundle import PAYLOAD_F64, BeatRecord, CompressedBundle
from .dictionary import DictionaryParams, KernelKind, dictionary_from_params
from .metrics import (MetricError, compression_ratio, multilead_wdd, prd,
                      reconstruction_error, sparsity_percent)
from .sensing import gaussian_sensing_matrix, identity_sensing_matrix
from .signal import (MultiLeadSignal, NoPeakError, SignalError, add_white_noise,
                     beat_r_index, detect_r_peaks, generate_synthetic_beat, pad_to_length,
                     read_csv, write_csv)
from .solvers import GroupPartition, SolverConfig, chilasso, omp, somp

log = logging.getLogger(__name__)

METHODS = ("chilasso-rc", "lasso-rc", "omp-rc", "chilasso-hs", "chilasso-tg", "somp-rc")
_MAD_SCALE = 0.6745


class PipelineError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    """Encoder/decoder settings.

    Exactly one of ``m`` and ``cr`` sets the measurement count (``m = round(N / cr)``).
    ``lambda1=None`` selects the weight automatically; ``lambda2=None`` uses
    ``lambda1 * sqrt(mean group size)``, where a group's size counts its atoms
    times the number of leads. ``n_groups=None`` means one group per atom.
    """

    kernel: KernelKind = KernelKind.RAISED_COSINE
    n_shifts: int = 100
    n_scales: int = 30
    n: int = 800
    fs: float = 1000.0
    shift_pre: float = 200.0
    shift_post: float = 450.0
    scale_interval: tuple = (0.02, 0.6)
    m: int = None
    cr: float = None
    seed: int = 0
    lambda1: float = None
    lambda2: float = None
    n_groups: int = None
    lambda_fraction: float = 0.05
    path_factor: float = 0.5
    path_stages: int = 11
    discrepancy: float = 1.0
    solver: SolverConfig = field(default_factory=SolverConfig)
    payload_type: int = PAYLOAD_F64
    identity_sensing: bool = False
    sparse_coding: bool = True
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kernel", KernelKind.parse(self.kernel))
        if self.m is not None and self.cr is not None:
            raise PipelineError("give either m or cr, not both")
        if self.m is None and self.cr is None:
            object.__setattr__(self, "cr", 10.0)
        if self.cr is not None and not self.cr >= 1:
            raise PipelineError(f"compression ratio must be >= 1, got {self.cr}")
        m = self.measurements
        if not 1 <= m <= self.n:
            raise PipelineError(f"need 1 <= m <= N, got m={m}, N={self.n}")
        if self.identity_sensing and m != self.n:
            raise PipelineError("identity sensing needs m == N (CR = 1)")
        if not 0 <= self.seed < 2 ** 64:
            raise PipelineError("seed must be an unsigned 64-bit integer")
        if self.lambda1 is not None and not self.lambda1 > 0:
            raise PipelineError("lambda1 must be positive")
        if self.lambda2 is not None:
            if self.lambda1 is None:
                raise PipelineError("lambda2 needs an explicit lambda1")
            if self.lambda2 < 0:
                raise PipelineError("lambda2 must be non-negative")
        if self.n_groups is not None and not 1 <= self.n_groups <= self.n_atoms:
            raise PipelineError(f"group count must lie in [1, {self.n_atoms}], got {self.n_groups}")
        if not 0 < self.path_factor < 1 or self.path_stages < 0 or not self.lambda_fraction > 0:
            raise PipelineError("bad lambda path settings")
        if self.workers < 1:
            raise PipelineError("workers must be >= 1")

    @property
    def measurements(self) -> int:
        return int(self.m) if self.m is not None else int(round(self.n / self.cr))

    @property
    def n_atoms(self) -> int:
        return self.n_shifts * self.n_scales

    @property
    def groups(self) -> int:
        return self.n_atoms if self.n_groups is None else int(self.n_groups)

    def partition(self) -> GroupPartition:
        return GroupPartition.equal(self.n_atoms, self.groups)

    def dictionary_params(self, r_index=None) -> DictionaryParams:
        r = int(round(self.shift_pre)) if r_index is None else int(r_index)
        return DictionaryParams(self.kernel, self.n_shifts, self.n_scales, self.n, self.fs, r,
                                self.shift_pre, self.shift_post, tuple(self.scale_interval))

    @classmethod
    def from_bundle(cls, bundle: CompressedBundle, **overrides) -> "PipelineConfig":
        kw = dict(kernel=bundle.kernel, n_shifts=bundle.n_shifts, n_scales=bundle.n_scales,
                  n=bundle.n, fs=bundle.fs, shift_pre=bundle.shift_pre,
                  shift_post=bundle.shift_post, scale_interval=tuple(bundle.scale_interval),
                  m=bundle.m, seed=bundle.seed, n_groups=bundle.n_groups,
                  payload_type=bundle.payload_type, identity_sensing=bundle.identity_sensing)
        kw.update(overrides)
        return cls(**kw)


# -- segmentation -------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """Window ``[window_start, window_start + N)`` restores samples ``[seg_start, seg_end)``."""

    window_start: int
    seg_start: int
    seg_end: int
    r_index: int


def _clamp_r(r, params: DictionaryParams):
    lo, hi = params.valid_r_range()
    if lo > hi:
        raise PipelineError(f"shift window of {params.shift_pre}+{params.shift_post} samples "
                            f"does not fit N={params.n}")
    return int(min(max(r, lo), hi))


def _filler(x, a, e, t, n, params):
    """Windows covering [a, e) where no beat was detected."""
    out = []
    while a < e:
        stop = min(e, a + n)
        w = min(a, t - n) if t > n else 0
        try:
            r = (a - w) + beat_r_index(x[a:stop])
        except NoPeakError:
            r = a - w
        out.append(Segment(w, a, stop, _clamp_r(r, params)))
        a = stop
    return out


def segment_record(samples: np.ndarray, fs: float, params: DictionaryParams) -> list:
    """Cover a T x S record with beat windows of N samples.

    Each detected beat gets one window placed so that its R index falls in
    the range where the dictionary's shift grid fits, as far left as needed
    to continue from the previous segment. A segment runs from where the
    previous one ended to the end of its window or the next beat's
    boundary, whichever comes first; stretches no beat window reaches get
    plain N-sample filler windows.
    """
    x = np.asarray(samples, dtype=np.float64)
    t, n = x.shape[0], params.n
    r_lo, r_hi = params.valid_r_range()
    if r_lo > r_hi:
        raise PipelineError(f"shift window of {params.shift_pre}+{params.shift_post} samples "
                            f"does not fit N={params.n}")
    if t <= n:
        return _filler(x, 0, t, t, n, params)
    peaks = [int(p) for p in detect_r_peaks(x, fs)]
    pre = int(round(params.shift_pre))
    out = []
    pos = 0
    for k, r in enumerate(peaks):
        lo = min(max(0, r - r_hi), t - n)
        hi = min(max(0, r - r_lo), t - n)
        if pos < lo:
            out += _filler(x, pos, lo, t, n, params)
            pos = lo
        w = max(lo, min(pos, hi))
        if w + n <= pos:
            continue
        end = w + n if k + 1 == len(peaks) else min(w + n, max(pos + 1, peaks[k + 1] - pre))
        if k + 1 == len(peaks):
            end = min(end, t)
        out.append(Segment(w, pos, end, _clamp_r(r - w, params)))
        pos = end
    if pos < t:
        out += _filler(x, pos, t, t, n, params)
    return out


def window_samples(samples: np.ndarray, seg: Segment, n: int) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64)
    return pad_to_length(x[seg.window_start:seg.window_start + n], n)


# -- regularization path ------------------------------------------------------

def noise_std_estimate(x) -> np.ndarray:
    """Per-lead white-noise std from the MAD of second differences.

    Second differences suppress the smooth ECG waves far better than first
    differences; for white noise their variance is 6 sigma^2.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.shape[0] < 3:
        return np.zeros(x.shape[1])
    d = np.diff(x, n=2, axis=0)
    mad = np.median(np.abs(d - np.median(d, axis=0)), axis=0)
    return mad / _MAD_SCALE / np.sqrt(6.0)


def lambda_top(B, Y, fraction) -> float:
    return fraction * float(np.abs(B.T @ Y).max())


def lambda_path(B, Y, cfg: PipelineConfig, lambda1=None) -> list:
    """Decreasing lambda1 values; ends at ``lambda1`` when it is given."""
    top = lambda_top(B, Y, cfg.lambda_fraction)
    full = [top * cfg.path_factor ** k for k in range(cfg.path_stages + 1)]
    if lambda1 is None:
        return full
    # strict comparison with a margin so a stored path value is not repeated
    return [lam for lam in full if lam > lambda1 * (1 + 1e-9)] + [float(lambda1)]


def solve_path(B, Y, partition, lambdas, ratio, solver: SolverConfig, stop=None,
               min_gain=0.0):
    """Warm-started C-HiLasso over ``lambdas`` with lambda2 = ratio * lambda1.

    Returns ``(C, lambda1)`` at the first value accepted by ``stop(C)``, or
    the last. With ``min_gain > 0`` the walk also ends, keeping the previous
    stage, once a stage shrinks the residual by less than that fraction.
    """
    C = None
    lam = lambdas[0]
    prev = None
    for k, lam in enumerate(lambdas):
        C_new = chilasso(B, Y, partition, lam, lam * ratio, solver, x0=C).C
        if min_gain > 0:
            r = Y - B @ C_new
            res = float(np.vdot(r, r))
            if prev is not None and res > (1.0 - min_gain) * prev[0]:
                return C, prev[1]
            prev = (res, float(lam))
        C = C_new
        if stop is not None and stop(C):
            break
    return C, float(lam)


def discrepancy_stop(B, Y, sigma, a_fro2, rho):
    """Accept once ||Y - B C||^2 <= rho * sum_s sigma_s^2 * ||A||_F^2."""
    target = rho * float(np.sum(np.asarray(sigma) ** 2)) * a_fro2

    def stop(C):
        r = Y - B @ C
        return float(np.vdot(r, r)) <= target
    return stop


def default_ratio(partition: GroupPartition, n_leads: int) -> float:
    """sqrt of the mean entry count of a group block (rows x leads)."""
    return float(np.sqrt(partition.sizes.mean() * n_leads))


# -- per-beat encode / decode -------------------------------------------------

def _sensing(cfg: PipelineConfig, seed):
    if cfg.identity_sensing:
        return identity_sensing_matrix(cfg.n)
    return gaussian_sensing_matrix(cfg.measurements, cfg.n, seed)


def beat_seed(seed: int, b: int) -> int:
    return (int(seed) ^ int(b)) & 0xFFFFFFFFFFFFFFFF


@dataclass
class EncodedBeat:
    record: BeatRecord
    payload: np.ndarray
    sparsity: list = None


def encode_beat(window: np.ndarray, seg: Segment, b: int, cfg: PipelineConfig) -> EncodedBeat:
    params = cfg.dictionary_params(seg.r_index)
    D = dictionary_from_params(params)
    A = _sensing(cfg, beat_seed(cfg.seed, b))
    Y = A.entries @ window
    part = cfg.partition()

    sparsity = None
    if cfg.sparse_coding:
        # sparse code of the raw window, reported only
        sigma = noise_std_estimate(window)
        stop = discrepancy_stop(D.atoms, window, sigma, float(cfg.n), cfg.discrepancy)
        ratio = default_ratio(part, window.shape[1]) if cfg.lambda2 is None or cfg.lambda1 is None \
            else cfg.lambda2 / cfg.lambda1
        lams = lambda_path(D.atoms, window, cfg, cfg.lambda1)
        C, _ = solve_path(D.atoms, window, part, lams, ratio, cfg.solver,
                          None if cfg.lambda1 is not None else stop, min_gain=0.1)
        sparsity = [sparsity_percent(C[:, s], cfg.n) for s in range(C.shape[1])]

    if cfg.lambda1 is None:
        B = A.entries @ D.atoms
        sigma = noise_std_estimate(window)
        stop = discrepancy_stop(B, Y, sigma, float(np.vdot(A.entries, A.entries)),
                                cfg.discrepancy)
        ratio = default_ratio(part, Y.shape[1])
        _, lam1 = solve_path(B, Y, part, lambda_path(B, Y, cfg), ratio, cfg.solver, stop)
        lam2 = lam1 * ratio
    else:
        lam1 = float(cfg.lambda1)
        ratio = default_ratio(part, Y.shape[1])
        lam2 = float(cfg.lambda2) if cfg.lambda2 is not None else lam1 * ratio
    rec = BeatRecord(seg.window_start, seg.seg_start, seg.seg_end, seg.r_index, lam1, lam2)
    return EncodedBeat(rec, Y, sparsity)


def decode_beat(Y: np.ndarray, rec: BeatRecord, b: int, cfg: PipelineConfig,
                return_code=False):
    """Reconstruct one N x S window from its measurements."""
    D = dictionary_from_params(cfg.dictionary_params(rec.r_index))
    A = _sensing(cfg, beat_seed(cfg.seed, b))
    B = A.entries @ D.atoms
    part = cfg.partition()
    ratio = rec.lambda2 / rec.lambda1 if rec.lambda1 > 0 else 0.0
    C, _ = solve_path(B, Y, part, lambda_path(B, Y, cfg, rec.lambda1), ratio, cfg.solver)
    X = D.atoms @ C
    return (X, C) if return_code else X


# -- parallel helpers ---------------------------------------------------------

def _single_thread(fn, *args):
    # BLAS thread count changes summation order; pin it so results do not
    # depend on how many worker processes share the machine
    from threadpoolctl import threadpool_limits

    with threadpool_limits(limits=1):
        return fn(*args)


def _run_tasks(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [_single_thread(fn, *t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as ex:
        futs = [ex.submit(_single_thread, fn, *t) for t in tasks]
        return [f.result() for f in futs]


# -- record level -------------------------------------------------------------

def encode_signal(signal: MultiLeadSignal, cfg: PipelineConfig) -> CompressedBundle:
    if signal.fs != cfg.fs:
        cfg = replace(cfg, fs=signal.fs)
    segs = segment_record(signal.samples, cfg.fs, cfg.dictionary_params())
    tasks = [(window_samples(signal.samples, s, cfg.n), s, b, cfg) for b, s in enumerate(segs)]
    beats = _run_tasks(encode_beat, tasks, cfg.workers)
    for b, eb in enumerate(beats):
        if eb.sparsity is not None:
            for name, sp in zip(signal.lead_names, eb.sparsity):
                log.info("beat %d lead %s: sparsity %.2f%%", b, name, sp)
    bundle = CompressedBundle(
        cfg.n, cfg.measurements, cfg.fs, cfg.kernel, cfg.n_shifts, cfg.n_scales,
        cfg.shift_pre, cfg.shift_post, tuple(cfg.scale_interval), int(cfg.seed), cfg.groups,
        beats[0].record.lambda1, beats[0].record.lambda2, signal.n_samples,
        tuple(signal.lead_names), [eb.record for eb in beats], [eb.payload for eb in beats],
        cfg.payload_type, cfg.identity_sensing, True)
    log.info("CR %.3g (N/m), byte CR %.3g, %d beat window(s)",
             compression_ratio(cfg.n, cfg.measurements), bundle.byte_compression_ratio(),
             len(beats))
    return bundle


def _check_beats(bundle: CompressedBundle):
    t = bundle.record_length
    for b, rec in enumerate(bundle.beats):
        ok = (0 <= rec.seg_start < rec.seg_end <= t and rec.window_start <= rec.seg_start
              and rec.seg_end <= rec.window_start + bundle.n and rec.lambda1 > 0
              and rec.lambda2 >= 0)
        if not ok:
            raise PipelineError(f"beat {b}: inconsistent beat record {rec}")


def decode_bundle(bundle: CompressedBundle, workers: int = 1,
                  solver: SolverConfig = None) -> MultiLeadSignal:
    bundle.validate()
    _check_beats(bundle)
    over = {"workers": workers}
    if solver is not None:
        over["solver"] = solver
    cfg = PipelineConfig.from_bundle(bundle, **over)
    tasks = [(bundle.payloads[b], rec, b, cfg) for b, rec in enumerate(bundle.beats)]
    windows = _run_tasks(decode_beat, tasks, workers)
    out = np.zeros((bundle.record_length, bundle.n_leads))
    for rec, X in zip(bundle.beats, windows):
        out[rec.seg_start:rec.seg_end] = X[rec.seg_start - rec.window_start:
                                           rec.seg_end - rec.window_start]
    return MultiLeadSignal(out, bundle.fs, tuple(bundle.lead_names))


def compress_command(cfg: PipelineConfig, csv_input, bundle_output) -> CompressedBundle:
    signal = read_csv(csv_input, cfg.fs)
    bundle = encode_signal(signal, cfg)
    data = bundle.to_bytes()
    Path(bundle_output).write_bytes(data)
    return bundle


def decompress_command(bundle_input, csv_output, workers: int = 1) -> MultiLeadSignal:
    bundle = CompressedBundle.read(bundle_input)
    x = decode_bundle(bundle, workers)
    # render first so a failure leaves no partial file
    buf = io.StringIO()
    buf.write(",".join(x.lead_names) + "\n")
    np.savetxt(buf, x.samples, delimiter=",", fmt="%.10g")
    Path(csv_output).write_text(buf.getvalue())
    return x


# -- benchmark ----------------------------------------------------------------

_METHOD_KERNEL = {"rc": KernelKind.RAISED_COSINE, "hs": KernelKind.HYPERBOLIC_SECANT,
                  "tg": KernelKind.TRUNCATED_GAUSSIAN, "g": KernelKind.GAUSSIAN}


def parse_method(name: str):
    """'chilasso-rc' -> ('chilasso', RAISED_COSINE)."""
    try:
        solver, kern = name.lower().split("-")
        kind = _METHOD_KERNEL[kern]
    except (ValueError, KeyError):
        raise PipelineError(f"unknown method {name!r}") from None
    if solver not in ("chilasso", "lasso", "omp", "somp"):
        raise PipelineError(f"unknown method {name!r}")
    return solver, kind


def reconstruct_window(window: np.ndarray, seg: Segment, b: int, cfg: PipelineConfig,
                       method: str) -> np.ndarray:
    """Compress one window and reconstruct it with ``method``.

    Regularized methods pick their weight by the discrepancy rule; greedy
    ones stop at the same predicted noise level or after m/4 atoms.
    """
    solver, kind = parse_method(method)
    cfg = replace(cfg, kernel=kind)
    D = dictionary_from_params(cfg.dictionary_params(seg.r_index))
    A = _sensing(cfg, beat_seed(cfg.seed, b))
    Y = A.entries @ window
    B = A.entries @ D.atoms
    sigma = noise_std_estimate(window)
    a_fro2 = float(np.vdot(A.entries, A.entries))
    if solver in ("chilasso", "lasso"):
        part = cfg.partition()
        ratio = default_ratio(part, Y.shape[1]) if solver == "chilasso" else 0.0
        stop = discrepancy_stop(B, Y, sigma, a_fro2, cfg.discrepancy)
        C, _ = solve_path(B, Y, part, lambda_path(B, Y, cfg), ratio, cfg.solver, stop)
    else:
        norms = np.linalg.norm(B, axis=0)
        Bn = B / norms
        k_max = max(1, cfg.measurements // 4)
        tol = np.sqrt(cfg.discrepancy * a_fro2) * sigma
        if solver == "omp":
            C = np.column_stack([omp(Bn, Y[:, s], k_max, float(tol[s]))
                                 for s in range(Y.shape[1])])
        else:
            C = somp(Bn, Y, k_max, float(np.linalg.norm(tol)))
        C = C / norms[:, None]
    return D.atoms @ C


def _bench_task(subject, x, fs, cr, method, cfg):
    t0 = time.perf_counter()
    cfg = replace(cfg, cr=float(cr), m=None, fs=fs)
    segs = segment_record(x, fs, cfg.dictionary_params())
    out = np.zeros_like(x)
    wdds = []
    for b, seg in enumerate(segs):
        w = window_samples(x, seg, cfg.n)
        xh = reconstruct_window(w, seg, b, cfg, method)
        out[seg.seg_start:seg.seg_end] = xh[seg.seg_start - seg.window_start:
                                            seg.seg_end - seg.window_start]
        try:
            wdds.append(multilead_wdd(w, xh, seg.r_index, fs))
        except MetricError as exc:
            log.warning("%s beat %d: WDD skipped (%s)", subject, b, exc)
    row = dict(subject=subject, cr=float(cr), m=cfg.measurements, method=method,
               error=reconstruction_error(x, out), prd=prd(x, out),
               wdd=float(np.mean(wdds)) if wdds else float("nan"))
    return row, time.perf_counter() - t0


REPORT_FIELDS = ("subject", "cr", "m", "method", "error", "prd", "wdd")


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def bench(signals: dict, crs, methods, cfg: PipelineConfig = None) -> tuple:
    """Run every (subject, CR, method); returns (rows, seconds) in a fixed order."""
    cfg = cfg or PipelineConfig(sparse_coding=False)
    if not signals:
        raise PipelineError("empty dataset")
    for m in methods:
        parse_method(m)
    tasks = [(name, sig.samples, sig.fs, float(cr), method, cfg)
             for name, sig in signals.items() for cr in crs for method in methods]
    results = _run_tasks(_bench_task, tasks, cfg.workers)
    return [r for r, _ in results], [t for _, t in results]


def load_dataset(directory, fs: float = 1000.0) -> dict:
    d = Path(directory)
    if not d.is_dir():
        raise PipelineError(f"{d}: not a directory")
    files = sorted(d.glob("*.csv"))
    if not files:
        raise PipelineError(f"empty dataset: no .csv files in {d}")
    return {f.stem: read_csv(f, fs) for f in files}


def _write_rows(path, header, rows):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def bench_command(data_dir, crs, methods, out_dir, cfg: PipelineConfig = None) -> list:
    """Write report.csv, timings.csv and plot/<method>.csv under ``out_dir``."""
    cfg = cfg or PipelineConfig(sparse_coding=False)
    signals = load_dataset(data_dir, cfg.fs)
    rows, secs = bench(signals, crs, methods, cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_rows(out / "report.csv", REPORT_FIELDS, [[r[k] for k in REPORT_FIELDS] for r in rows])
    _write_rows(out / "timings.csv", ("subject", "cr", "method", "seconds"),
                [[r["subject"], r["cr"], r["method"], t] for r, t in zip(rows, secs)])
    plot = out / "plot"
    plot.mkdir(exist_ok=True)
    for method in methods:
        series = []
        for cr in crs:
            sel = [r for r in rows if r["method"] == method and r["cr"] == float(cr)]
            series.append([float(cr)] + [float(np.mean([r[k] for r in sel]))
                                         for k in ("error", "prd", "wdd")])
        _write_rows(plot / f"{method}.csv", ("cr", "error", "prd", "wdd"), series)
    return rows


# -- synthetic data -----------------------------------------------------------

def synth_signal(spec, beats: int = 1, snr_db=None, noise_seed: int = 0) -> MultiLeadSignal:
    """Generate a beat from ``spec``, tile it ``beats`` times, optionally add noise at ``snr_db``."""
    sig = generate_synthetic_beat(spec)
    if beats < 1:
        raise SignalError("beats must be >= 1")
    if beats > 1:
        sig = sig.with_samples(np.tile(sig.samples, (beats, 1)))
    if snr_db is not None:
        sig = add_white_noise(sig, snr_db, noise_seed)
    return sig


def synth_command(spec, out_path, beats: int = 1, snr_db=None, noise_seed: int = 0
                  ) -> MultiLeadSignal:
    sig = synth_signal(spec, beats, snr_db, noise_seed)
    write_csv(sig, out_path)
    return sig


def atoms_needed(x, D, target_prd: float, k_max: int = 400) -> list:
    """Per lead, the number of OMP atoms of ``D`` needed to reach ``target_prd``.

    PRD here is relative to the lead's own mean-removed energy. Leads that
    never reach the target report ``k_max + 1``.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    atoms = np.asarray(D.atoms if hasattr(D, "atoms") else D)
    out = []
    for s in range(x.shape[1]):
        y = x[:, s]
        den = np.linalg.norm(y - y.mean())
        if den == 0:
            raise MetricError(f"lead {s} is constant")
        _, support, res = omp(atoms, y, k_max, target_prd / 100.0 * den, return_support=True)
        out.append(len(support) if res[-1] <= target_prd / 100.0 * den else k_max + 1)
    return out


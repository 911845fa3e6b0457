"""Self-describing binary container for compressed measurements.

Layout (little-endian)::

    magic      4s   b"BSEC"
    version    u16
    N, m, M, S u32 x 4
    fs         f64
    kernel     u8
    n_shifts   u32
    n_scales   u32
    shift_pre, shift_post, scale_lo, scale_hi   f64 x 4
    seed       u64
    groups     u32
    lambda1    f64
    lambda2    f64
    payload    u8   (0 = f64, 1 = f32)
    -- record section --
    flags      u8   (bit 0: identity sensing, bit 1: normalized atoms)
    T          u32  record length in samples
    B          u32  number of beat windows
    S x (u16 length + utf-8 lead name)
    B x (window_start, seg_start, seg_end, r_index: u32; lambda1, lambda2: f64)
    B x (m x S payload, column-major)

The sensing matrix of beat b is regenerated from ``seed ^ b``; the dictionary
from the kernel and grid fields plus the beat's R index.
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dictionary import DictionaryParams, KernelKind

MAGIC = b"BSEC"
VERSION = 1

_HEAD = struct.Struct("<4sH4IdB2I4dQIddB")
_REC = struct.Struct("<BII")
_BEAT = struct.Struct("<4Idd")
_NAME = struct.Struct("<H")

PAYLOAD_F64 = 0
PAYLOAD_F32 = 1
_DTYPES = {PAYLOAD_F64: np.dtype("<f8"), PAYLOAD_F32: np.dtype("<f4")}

FLAG_IDENTITY = 1
FLAG_NORMALIZED = 2


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class BeatRecord:
    """Where one compressed window sits in the original record.

    Samples ``seg_start:seg_end`` of the record are restored from this window,
    which starts at ``window_start``; ``r_index`` is R within the window.
    """

    window_start: int
    seg_start: int
    seg_end: int
    r_index: int
    lambda1: float
    lambda2: float


@dataclass
class CompressedBundle:
    n: int
    m: int
    fs: float
    kernel: KernelKind
    n_shifts: int
    n_scales: int
    shift_pre: float
    shift_post: float
    scale_interval: tuple
    seed: int
    n_groups: int
    lambda1: float
    lambda2: float
    record_length: int
    lead_names: tuple
    beats: list = field(default_factory=list)
    payloads: list = field(default_factory=list)
    payload_type: int = PAYLOAD_F64
    identity_sensing: bool = False
    normalized: bool = True

    @property
    def n_atoms(self) -> int:
        return self.n_shifts * self.n_scales

    @property
    def n_leads(self) -> int:
        return len(self.lead_names)

    def beat_seed(self, b: int) -> int:
        return (self.seed ^ b) & 0xFFFFFFFFFFFFFFFF

    def dictionary_params(self, r_index: int) -> DictionaryParams:
        return DictionaryParams(self.kernel, self.n_shifts, self.n_scales, self.n, self.fs,
                                int(r_index), self.shift_pre, self.shift_post,
                                tuple(self.scale_interval), self.normalized)

    def validate(self):
        if len(self.beats) != len(self.payloads):
            raise BundleError(f"{len(self.beats)} beat records but {len(self.payloads)} payloads")
        for y in self.payloads:
            if y.shape != (self.m, self.n_leads):
                raise BundleError(f"payload shape {y.shape} != ({self.m}, {self.n_leads})")
        if not 1 <= self.m <= self.n:
            raise BundleError(f"bad dimensions m={self.m}, N={self.n}")
        if self.payload_type not in _DTYPES:
            raise BundleError(f"unknown payload type {self.payload_type}")

    def to_bytes(self) -> bytes:
        self.validate()
        buf = io.BytesIO()
        buf.write(_HEAD.pack(
            MAGIC, VERSION, self.n, self.m, self.n_atoms, self.n_leads, self.fs,
            self.kernel.value, self.n_shifts, self.n_scales, self.shift_pre, self.shift_post,
            self.scale_interval[0], self.scale_interval[1], self.seed, self.n_groups,
            self.lambda1, self.lambda2, self.payload_type))
        flags = (FLAG_IDENTITY if self.identity_sensing else 0) | \
                (FLAG_NORMALIZED if self.normalized else 0)
        buf.write(_REC.pack(flags, self.record_length, len(self.beats)))
        for name in self.lead_names:
            raw = name.encode("utf-8")
            buf.write(_NAME.pack(len(raw)))
            buf.write(raw)
        for b in self.beats:
            buf.write(_BEAT.pack(b.window_start, b.seg_start, b.seg_end, b.r_index,
                                 b.lambda1, b.lambda2))
        dt = _DTYPES[self.payload_type]
        for y in self.payloads:
            buf.write(np.asarray(y, dtype=dt).tobytes(order="F"))
        return buf.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompressedBundle":
        view = memoryview(data)
        if len(view) < _HEAD.size:
            raise BundleError("truncated header")
        head = _HEAD.unpack_from(view, 0)
        (magic, version, n, m, n_atoms, n_leads, fs, kernel, n_shifts, n_scales, pre, post,
         s_lo, s_hi, seed, groups, lam1, lam2, ptype) = head
        if magic != MAGIC:
            raise BundleError(f"bad magic {magic!r}")
        if version != VERSION:
            raise BundleError(f"unsupported bundle version {version}")
        if ptype not in _DTYPES:
            raise BundleError(f"unknown payload type {ptype}")
        if n_shifts * n_scales != n_atoms:
            raise BundleError("atom count does not match the grid")
        try:
            kind = KernelKind(kernel)
        except ValueError:
            raise BundleError(f"unknown kernel id {kernel}") from None
        off = _HEAD.size
        if len(view) < off + _REC.size:
            raise BundleError("truncated record section")
        flags, record_length, n_beats = _REC.unpack_from(view, off)
        off += _REC.size
        names = []
        for _ in range(n_leads):
            if len(view) < off + _NAME.size:
                raise BundleError("truncated lead names")
            (ln,) = _NAME.unpack_from(view, off)
            off += _NAME.size
            if len(view) < off + ln:
                raise BundleError("truncated lead names")
            names.append(bytes(view[off:off + ln]).decode("utf-8"))
            off += ln
        if len(view) < off + n_beats * _BEAT.size:
            raise BundleError("truncated beat table")
        beats = []
        for _ in range(n_beats):
            beats.append(BeatRecord(*_BEAT.unpack_from(view, off)))
            off += _BEAT.size
        dt = _DTYPES[ptype]
        size = m * n_leads * dt.itemsize
        expected = off + n_beats * size
        if len(view) != expected:
            raise BundleError(
                f"payload size mismatch: expected {expected} bytes, got {len(view)}")
        payloads = []
        for _ in range(n_beats):
            y = np.frombuffer(view[off:off + size], dtype=dt).reshape((m, n_leads), order="F")
            payloads.append(y.astype(np.float64))
            off += size
        return cls(n, m, fs, kind, n_shifts, n_scales, pre, post, (s_lo, s_hi), seed, groups,
                   lam1, lam2, record_length, tuple(names), beats, payloads, ptype,
                   bool(flags & FLAG_IDENTITY), bool(flags & FLAG_NORMALIZED))

    def write(self, path):
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def read(cls, path) -> "CompressedBundle":
        return cls.from_bytes(Path(path).read_bytes())

    def byte_compression_ratio(self, sample_bytes: int = 8) -> float:
        """Raw f64 record size over bundle size; complements the dimension ratio N/m."""
        return self.record_length * self.n_leads * sample_bytes / len(self.to_bytes())

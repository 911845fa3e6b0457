"""Block-sparse compressed sensing of multi-lead ECG."""

from ._core import BACKEND
from .bundle import BeatRecord, BundleError, CompressedBundle
from .dictionary import (Dictionary, DictionaryError, DictionaryParams, KernelKind,
                         build_dictionary, mutual_coherence)
from .metrics import (DiagnosticFeatures, compression_ratio, extract_features, multilead_wdd,
                      prd, reconstruction_error, sparsity_percent, wdd)
from .pipeline import PipelineConfig, decode_bundle, encode_signal
from .sensing import SensingMatrix, compress, gaussian_sensing_matrix, min_measurements
from .signal import (BeatWindow, MultiLeadSignal, SyntheticBeatSpec, Wave, add_white_noise,
                     detect_r_peak, extract_beat, generate_synthetic_beat, read_csv, snr_db,
                     write_csv)
from .solvers import (GroupPartition, SolverConfig, SparseCode, chilasso, hierarchical_prox,
                      lasso, omp, somp, sparsa_solve)

__version__ = "0.1.0"

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsecg.dictionary import (DictionaryError, DictionaryParams, KernelKind, build_dictionary,
                              dictionary_from_params, evaluate_kernel, gaussian_atom,
                              hyperbolic_secant_atom, mutual_coherence, normalize_columns,
                              raised_cosine_atom, truncated_gaussian_atom)

# recorded from the default 800 x 3000 raised-cosine build
RC_COHERENCE = 0.9999498885148252


def test_raised_cosine_values():
    a, b = 0.3, 0.04
    t = np.array([a, a - b, a + b, a + b / 2, a + 1.01 * b, a - 2 * b])
    np.testing.assert_allclose(raised_cosine_atom(t, a, b), [2.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                               atol=1e-15)


def test_raised_cosine_compact_support():
    t = np.linspace(0, 1, 2001)
    v = raised_cosine_atom(t, 0.5, 0.1)
    assert np.all(v[np.abs(t - 0.5) > 0.1 + 1e-9] == 0.0)
    assert np.all(v[np.abs(t - 0.5) < 0.1 - 1e-9] > 0.0)


def test_gaussian_values():
    a, b = 0.3, 0.04
    assert gaussian_atom(np.array([a]), a, b)[0] == 1.0
    assert gaussian_atom(np.array([a + b]), a, b)[0] == pytest.approx(np.exp(-0.5), abs=1e-15)
    t = np.linspace(0, 1, 1001)
    assert np.all(gaussian_atom(t, a, 0.05) > 0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.01, 0.5), st.floats(0.0, 1.0))
def test_gaussian_symmetry(a, b, d):
    v = gaussian_atom(np.array([a + d, a - d]), a, b)
    assert v[0] == pytest.approx(v[1], rel=1e-12, abs=1e-300)


def test_other_kernels():
    assert hyperbolic_secant_atom(np.array([0.2]), 0.2, 0.1)[0] == 1.0
    assert hyperbolic_secant_atom(np.array([0.3]), 0.2, 0.1)[0] == pytest.approx(1 / np.cosh(1))
    t = np.array([0.2, 0.2 + 0.29, 0.2 + 0.31])
    v = truncated_gaussian_atom(t, 0.2, 0.1)
    assert v[0] == 1.0 and v[1] > 0 and v[2] == 0.0
    for k in KernelKind:
        assert evaluate_kernel(k, np.array([0.5]), 0.5, 0.1)[0] > 0


@pytest.mark.parametrize("fn", [raised_cosine_atom, gaussian_atom, hyperbolic_secant_atom,
                                truncated_gaussian_atom])
def test_bad_scale(fn):
    with pytest.raises(DictionaryError):
        fn(np.zeros(3), 0.0, 0.0)
    with pytest.raises(DictionaryError):
        fn(np.zeros(3), 0.0, -1.0)


def test_kernel_parse():
    assert KernelKind.parse("rc") is KernelKind.RAISED_COSINE
    assert KernelKind.parse("TG") is KernelKind.TRUNCATED_GAUSSIAN
    assert KernelKind.parse("gaussian") is KernelKind.GAUSSIAN
    assert KernelKind.parse(2) is KernelKind.HYPERBOLIC_SECANT
    assert KernelKind.parse(KernelKind.GAUSSIAN) is KernelKind.GAUSSIAN
    with pytest.raises(DictionaryError):
        KernelKind.parse("wavelet")


def test_rc_tails_vanish_faster_than_gaussian():
    t = np.arange(800) / 1000.0
    for a, b in [(0.3, 0.02), (0.4, 0.1), (0.2, 0.3)]:
        rc = np.mean(np.abs(raised_cosine_atom(t, a, b)) < 1e-6)
        g = np.mean(np.abs(gaussian_atom(t, a, b)) < 1e-6)
        assert rc > g


def test_default_size_and_layout():
    D = build_dictionary()
    assert D.atoms.shape == (800, 3000)
    np.testing.assert_allclose(np.linalg.norm(D.atoms, axis=0), 1.0, atol=1e-12)
    # shift-major: column i * 30 + j is shift i, scale j
    assert np.all(D.shifts[:30] == D.shifts[0])
    assert D.shifts[30] > D.shifts[0]
    np.testing.assert_array_equal(D.scales[:30], D.scales[30:60])
    assert D.shifts.min() == pytest.approx(100.0) and D.shifts.max() == pytest.approx(750.0)
    assert D.scales.min() == pytest.approx(0.02) and D.scales.max() == pytest.approx(0.6)
    t = np.arange(800) / 1000.0
    k = 17 * 30 + 4
    raw = raised_cosine_atom(t, D.shifts[k] / 1000.0, D.scales[k])
    np.testing.assert_allclose(D.atoms[:, k], raw / np.linalg.norm(raw), atol=1e-15)


def test_coherence_regression():
    D = build_dictionary()
    c = mutual_coherence(D.atoms)
    assert c < 1.0
    assert c == pytest.approx(RC_COHERENCE, abs=1e-12)


def test_normalization_round_trip():
    D = build_dictionary("g", 20, 5, 200, 1000.0, 50, shift_pre=40, shift_post=100)
    np.testing.assert_allclose(D.atoms * D.column_norms, D.raw_atoms(), atol=1e-12)
    raw = build_dictionary("g", 20, 5, 200, 1000.0, 50, normalize=False, shift_pre=40,
                           shift_post=100)
    np.testing.assert_allclose(raw.atoms, D.raw_atoms(), atol=1e-12)
    assert not raw.normalized


def test_deterministic_build():
    a = build_dictionary("hs", 30, 7, 400, 500.0, 150, shift_pre=100, shift_post=200)
    b = build_dictionary("hs", 30, 7, 400, 500.0, 150, shift_pre=100, shift_post=200)
    assert a.atoms.tobytes() == b.atoms.tobytes()
    p = DictionaryParams(KernelKind.RAISED_COSINE)
    assert dictionary_from_params(p) is dictionary_from_params(p)


def test_build_errors():
    with pytest.raises(DictionaryError, match="does not fit"):
        build_dictionary(r_index=100)
    with pytest.raises(DictionaryError, match="does not fit"):
        build_dictionary(r_index=400)
    with pytest.raises(DictionaryError):
        build_dictionary(n_shifts=0)
    # a truncated Gaussian centred between samples with a tiny scale is all zero
    with pytest.raises(DictionaryError, match=r"alpha=0\.022625"):
        build_dictionary("tg", 5, 2, 100, 1000.0, 10, shift_pre=10, shift_post=80.5,
                         scale_interval=(1e-5, 1e-5))


def test_valid_r_range():
    assert DictionaryParams().valid_r_range() == (200, 349)
    for r in DictionaryParams().valid_r_range():
        build_dictionary(r_index=r)


def test_mutual_coherence_examples():
    assert mutual_coherence(np.eye(5)) == 0.0
    a = np.eye(3)[:, [0, 1, 1]]
    assert mutual_coherence(a) == 1.0
    a = np.array([[1, 0, 1 / np.sqrt(2)], [0, 1, 1 / np.sqrt(2)]])
    assert mutual_coherence(a) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    with pytest.raises(DictionaryError):
        mutual_coherence(np.array([[2.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(DictionaryError):
        mutual_coherence(np.ones((3, 1)) / np.sqrt(3))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 50), st.integers(2, 12), st.integers(0, 2 ** 32 - 1))
def test_mutual_coherence_brute_force(ncols, nrows, seed):
    a = normalize_columns(np.random.default_rng(seed).standard_normal((nrows, ncols)))
    best = max(abs(float(a[:, i] @ a[:, j])) for i, j in itertools.combinations(range(ncols), 2))
    assert mutual_coherence(a) == pytest.approx(min(best, 1.0), abs=1e-12)


def test_normalize_columns_rejects_zero():
    with pytest.raises(DictionaryError):
        normalize_columns(np.zeros((3, 2)))

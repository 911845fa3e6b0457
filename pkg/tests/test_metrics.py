import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsecg.metrics import (DiagnosticFeatures, FeatureConfig, MetricError, WeightMatrix,
                           compression_ratio, extract_features, feature_distances,
                           multilead_wdd, nonzero_count, prd, quality_label,
                           reconstruction_error, refine_r_index, sparsity_from_count,
                           sparsity_percent, wdd)
from bsecg.signal import BeatWindow, SyntheticBeatSpec, Wave, generate_synthetic_beat

FS = 1000.0


def _beat(p=(0.1, 0.2, 0.04), r=(0.5, 0.3, 0.04), t=(0.15, 0.55, 0.08), gain=1.0):
    waves = [Wave(*w) for w in (p, r, t) if w is not None]
    spec = SyntheticBeatSpec(waves=waves, duration=0.8, fs=FS, leads=[gain])
    return generate_synthetic_beat(spec).samples[:, 0]


def test_sparsity_examples():
    assert sparsity_percent(np.zeros(800), 800) == 100.0
    assert sparsity_percent(np.ones(800), 800) == 0.0
    code = np.zeros(3000)
    code[:48] = 1.0
    assert sparsity_percent(code, 800) == pytest.approx(94.0)
    assert sparsity_from_count(48, 800) == pytest.approx(94.0)


def test_nonzero_threshold():
    c = np.array([1.0, 1e-9, 2e-8, 0.0])
    assert nonzero_count(c) == 2


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 2000), st.integers(0, 2000), st.integers(0, 2000))
def test_sparsity_non_increasing(n, k1, k2):
    lo, hi = sorted((k1, k2))
    assert sparsity_from_count(hi, n) <= sparsity_from_count(lo, n)


def test_compression_ratio():
    assert compression_ratio(800, 800) == 1.0
    assert compression_ratio(800, 80) == 10.0
    assert compression_ratio(800, 130) == pytest.approx(6.1538, abs=1e-4)
    for m in (0, 801):
        with pytest.raises(MetricError):
            compression_ratio(800, m)


def test_reconstruction_error_examples():
    x = np.random.default_rng(0).standard_normal((50, 3))
    assert reconstruction_error(x, x) == 0.0
    assert reconstruction_error(np.array([[0.0]]), np.array([[0.1]])) == pytest.approx(0.01)
    a = np.zeros((2, 2))
    b = np.array([[0.1, 0.2], [0.1, 0.0]])  # squared sums 0.02 and 0.04
    assert reconstruction_error(a, b) == pytest.approx(0.03)
    with pytest.raises(MetricError):
        reconstruction_error(np.zeros((3, 2)), np.zeros((4, 2)))


def test_reconstruction_error_identical_leads():
    rng = np.random.default_rng(1)
    x, y = rng.standard_normal(40), rng.standard_normal(40)
    one = reconstruction_error(x, y)
    assert reconstruction_error(np.tile(x[:, None], 5), np.tile(y[:, None], 5)) == pytest.approx(one)


def test_prd_examples():
    x = np.random.default_rng(2).standard_normal((100, 4))
    assert prd(x, x) == 0.0
    assert prd(x, np.full_like(x, x.mean())) == pytest.approx(100.0)
    with pytest.raises(MetricError):
        prd(np.ones((5, 2)), np.zeros((5, 2)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.floats(-10, 10).filter(lambda a: abs(a) > 1e-3),
       st.floats(-100, 100))
def test_prd_invariances(seed, a, c):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((60, 3))
    y = x + 0.1 * rng.standard_normal((60, 3))
    base = prd(x, y)
    assert prd(a * x, a * y) == pytest.approx(base, rel=1e-9)
    assert prd(x + c, y + c) == pytest.approx(base, rel=1e-6)


def test_planted_features():
    x = _beat()
    f = extract_features(BeatWindow(x, 300), FS)
    # raised cosine: peak 2*amplitude, FWHM = width, support 2*width
    assert f.qrs_amp == pytest.approx(1.0, rel=0.05)
    assert f.p_amp == pytest.approx(0.2, rel=0.05)
    assert f.t_amp == pytest.approx(0.3, rel=0.05)
    assert abs(f.qrs_dur - 0.08) <= 0.010
    assert abs(f.p_dur - 0.04) <= 0.010
    assert f.qrs_sign == 1


@pytest.mark.parametrize("seed", range(5))
def test_planted_features_random(seed):
    rng = np.random.default_rng(seed)
    pa, ra, ta = rng.uniform(0.05, 0.2), rng.uniform(0.5, 1.5), rng.uniform(0.1, 0.4)
    pw, rw, tw = rng.uniform(0.02, 0.05), rng.uniform(0.02, 0.045), rng.uniform(0.05, 0.1)
    pc = 0.3 - rng.uniform(0.09, 0.15)
    tc = 0.3 + rng.uniform(0.2, 0.3)
    x = _beat((pa, pc, pw), (ra, 0.3, rw), (ta, tc, tw))
    f = extract_features(BeatWindow(x, 300), FS)
    assert f.qrs_amp == pytest.approx(2 * ra, rel=0.05)
    assert f.p_amp == pytest.approx(2 * pa, rel=0.05)
    assert f.t_amp == pytest.approx(2 * ta, rel=0.05)
    assert abs(f.qrs_dur - 2 * rw) <= 0.010
    assert abs(f.p_dur - pw) <= 0.010


def test_pure_r_spike():
    x = _beat(p=None, t=None)
    f = extract_features(BeatWindow(x, 300), FS)
    assert abs(f.p_amp) < 0.05 * f.qrs_amp
    assert abs(f.t_amp) < 0.05 * f.qrs_amp


def test_inverted_beat():
    x = _beat()
    f = extract_features(BeatWindow(x, 300), FS)
    g = extract_features(BeatWindow(-x, 300), FS)
    assert (f.qrs_sign, g.qrs_sign) == (1, -1)
    assert g.qrs_dur == f.qrs_dur and g.p_dur == f.p_dur
    assert g.qrs_amp == pytest.approx(f.qrs_amp)
    assert g.p_amp == pytest.approx(-f.p_amp) and g.t_amp == pytest.approx(-f.t_amp)


def test_short_window_rejected():
    x = _beat()
    with pytest.raises(MetricError):
        extract_features(BeatWindow(x[:350], 300), FS)
    with pytest.raises(MetricError):
        extract_features(BeatWindow(x, 30), FS)


def _feat(*v):
    return DiagnosticFeatures(*v)


def test_feature_validation():
    with pytest.raises(MetricError):
        _feat(-0.1, 0.1, 1, 1, 1, 1)
    with pytest.raises(MetricError):
        _feat(0.1, 0.1, 1, 1, 1, 0)
    for bad in ((1, 1, 1, 1, 1), (0,) * 6, (-1, 1, 1, 1, 1, 1)):
        with pytest.raises(MetricError):
            WeightMatrix(bad)


def test_wdd_examples():
    b = _feat(0.1, 0.05, 1.0, 0.2, 0.3, 1)
    assert wdd(b, b) == 0.0
    # qrs_amp off by a normalized distance of 0.3
    assert wdd(b, _feat(0.1, 0.05, 0.7, 0.2, 0.3, 1)) == pytest.approx(1.5)
    # every distance 1: features vanish and the sign flips
    far = _feat(0.0, 0.0, 0.0, 0.0, 0.0, -1)
    np.testing.assert_allclose(feature_distances(b, far), [1, 1, 1, 1, 1, 1])
    assert wdd(b, far) == pytest.approx(100.0)


def test_opposite_sign_distance_capped():
    b = _feat(0.1, 0.05, 1.0, 0.2, 0.3, 1)
    c = _feat(0.1, 0.05, 1.0, 0.2, -0.3, 1)
    assert feature_distances(b, c)[4] == 1.0


def test_wdd_both_zero_feature():
    b = _feat(0.1, 0.0, 1.0, 0.0, 0.3, 1)
    assert wdd(b, b) == 0.0


def test_wdd_weights():
    b = _feat(0.1, 0.05, 1.0, 0.2, 0.3, 1)
    c = _feat(0.1, 0.05, 0.7, 0.2, 0.3, 1)
    w = WeightMatrix((0, 0, 1, 0, 0, 0))
    assert wdd(b, c, w) == pytest.approx(9.0)


feat = st.builds(_feat, st.floats(0, 0.2), st.floats(0, 0.2), st.floats(-3, 3),
                 st.floats(-1, 1), st.floats(-1, 1), st.sampled_from([1, -1]))


@settings(max_examples=100, deadline=None)
@given(feat, feat)
def test_wdd_symmetric_and_bounded(a, b):
    v = wdd(a, b)
    assert v == pytest.approx(wdd(b, a))
    assert 0.0 <= v <= 100.0 + 1e-9


def test_multilead_wdd():
    x = np.column_stack([_beat(), _beat(gain=-0.5), _beat(gain=2.0)])
    assert multilead_wdd(x, x, 300, FS) == 0.0
    y = x * 1.1
    v = multilead_wdd(x, y, 300, FS)
    assert 0.0 < v < 10.0
    assert quality_label(v) == "very good/good"
    assert quality_label(10.0) == "poor"


def test_refine_r_index():
    x = _beat(r=(0.5, 0.305, 0.03))
    assert refine_r_index(x, 300, FS) == 305
    with pytest.raises(MetricError):
        refine_r_index(x, 5000, FS)


def test_feature_config_windows_are_used():
    x = _beat()
    narrow = FeatureConfig(t_window=(0.08, 0.15))
    f = extract_features(BeatWindow(x, 300), FS, narrow)
    assert abs(f.t_amp) < 0.3 * 0.5

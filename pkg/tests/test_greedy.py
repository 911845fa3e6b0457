import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsecg.solvers import GreedyError, omp, somp


def _unit(rng, m, n):
    B = rng.standard_normal((m, n))
    return B / np.linalg.norm(B, axis=0)


def test_single_atom_target():
    B = _unit(np.random.default_rng(0), 20, 30)
    c, sup, _ = omp(B, 3 * B[:, 7], 5, return_support=True)
    assert sup == [7]
    assert c[7] == pytest.approx(3.0, abs=1e-10)
    assert np.count_nonzero(c) == 1


def test_zero_target():
    B = _unit(np.random.default_rng(1), 10, 20)
    c, sup, _ = omp(B, np.zeros(10), 5, return_support=True)
    assert sup == [] and not np.any(c)


@pytest.mark.parametrize("seed", range(5))
def test_three_atom_recovery(seed):
    rng = np.random.default_rng(seed)
    B = _unit(rng, 40, 80)
    idx = rng.choice(80, 3, replace=False)
    c0 = np.zeros(80)
    c0[idx] = rng.choice([-1, 1], 3) * rng.uniform(1, 2, 3)
    c, sup, _ = omp(B, B @ c0, 10, residual_tol=1e-9, return_support=True)
    assert set(sup) == set(idx.tolist())
    np.testing.assert_allclose(c, c0, atol=1e-9)


def test_somp_equals_omp_on_repeated_columns():
    rng = np.random.default_rng(2)
    B = _unit(rng, 30, 60)
    y = rng.standard_normal(30)
    C = somp(B, np.column_stack([y, y, y]), 6)
    c = omp(B, y, 6)
    for s in range(3):
        np.testing.assert_allclose(C[:, s], c, atol=1e-12)


def test_somp_zero_target():
    B = _unit(np.random.default_rng(3), 10, 20)
    assert not np.any(somp(B, np.zeros((10, 4)), 5))


@pytest.mark.parametrize("seed", range(5))
def test_somp_shared_support(seed):
    rng = np.random.default_rng(seed)
    B = _unit(rng, 40, 80)
    idx = rng.choice(80, 3, replace=False)
    C0 = np.zeros((80, 4))
    C0[idx] = rng.uniform(1, 2, (3, 4)) * rng.choice([-1, 1], (3, 4))
    C, sup, _ = somp(B, B @ C0, 10, residual_tol=1e-9, return_support=True)
    assert set(sup) == set(idx.tolist())
    np.testing.assert_allclose(C, C0, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 3))
def test_residuals_strictly_decrease(seed, leads):
    rng = np.random.default_rng(seed)
    B = _unit(rng, 25, 50)
    Y = rng.standard_normal((25, leads))
    C, sup, res = somp(B, Y, 20, return_support=True)
    assert len(res) == len(sup) + 1
    assert all(b < a for a, b in zip(res, res[1:]))
    assert len(set(sup)) == len(sup)
    # final residual matches the refit coefficients
    assert np.linalg.norm(Y - B @ C) == pytest.approx(res[-1], rel=1e-8, abs=1e-10)


def test_residual_tol_stops_early():
    rng = np.random.default_rng(4)
    B = _unit(rng, 25, 50)
    y = rng.standard_normal(25)
    _, sup, res = omp(B, y, 25, residual_tol=0.5 * np.linalg.norm(y), return_support=True)
    assert res[-1] <= 0.5 * np.linalg.norm(y) < res[-2]


def test_errors():
    rng = np.random.default_rng(5)
    with pytest.raises(GreedyError):
        omp(rng.standard_normal((10, 20)) * 3, rng.standard_normal(10), 3)
    B = _unit(rng, 10, 20)
    with pytest.raises(GreedyError):
        omp(B, np.zeros((10, 2)), 3)
    with pytest.raises(GreedyError):
        somp(B, np.zeros(11), 3)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bsecg.solvers import (GroupPartition, PartitionError, group_norms, group_shrink,
                           hierarchical_penalty, hierarchical_prox, prox_objective,
                           soft_threshold)
from oracles import naive_group_shrink, naive_soft, prox_cvx, random_partition

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_soft_threshold_examples():
    assert soft_threshold(np.array([3.0]), 1.0)[0] == 2.0
    assert soft_threshold(np.array([-0.5]), 1.0)[0] == 0.0
    v = np.array([1.5, -2.0, 0.0])
    np.testing.assert_array_equal(soft_threshold(v, 0.0), v)
    with pytest.raises(ValueError):
        soft_threshold(v, -1.0)


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 7), st.integers(1, 4)), elements=finite),
       st.floats(0, 5))
def test_soft_threshold_closed_form(v, tau):
    assert np.array_equal(soft_threshold(v, tau), naive_soft(v, tau))


def test_group_shrink_examples():
    b = np.array([[0.3], [0.4]])
    assert not np.any(group_shrink(b, 1.0))
    np.testing.assert_array_equal(group_shrink(b, 0.0), b)
    assert group_shrink(np.array([[3.0]]), 1.0)[0, 0] == 2.0
    assert not np.any(group_shrink(np.zeros((2, 2)), 0.0))
    assert not np.any(group_shrink(np.zeros((2, 2)), 1.0))


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 3)), elements=finite),
       st.floats(0, 20))
def test_group_shrink_closed_form(b, tau):
    np.testing.assert_allclose(group_shrink(b, tau), naive_group_shrink(b, tau),
                               rtol=1e-14, atol=1e-14)


def test_partition():
    p = GroupPartition.equal(10, 3)
    assert p.n_groups == 3 and p.n_rows == 10
    assert p.ranges[0][0] == 0 and p.ranges[-1][1] == 10
    assert p.sizes.sum() == 10
    np.testing.assert_array_equal(p.group_of([0, 9]), [0, 2])
    q = GroupPartition.from_ranges([(0, 2), (2, 5)])
    assert q.n_groups == 2
    with pytest.raises(PartitionError):
        GroupPartition.from_ranges([(0, 2), (3, 5)])
    with pytest.raises(PartitionError):
        GroupPartition.equal(5, 6)
    with pytest.raises(PartitionError):
        GroupPartition.equal(5, 0)
    with pytest.raises(PartitionError):
        q.check(6)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3000), st.data())
def test_equal_partition_covers(m, data):
    g = data.draw(st.integers(1, m))
    p = GroupPartition.equal(m, g)
    r = p.ranges
    assert len(r) == g and r[0][0] == 0 and r[-1][1] == m
    assert all(a[1] == b[0] for a, b in zip(r, r[1:]))
    assert all(b > a for a, b in r)


def test_prox_identity_and_annihilation():
    rng = np.random.default_rng(0)
    v = rng.standard_normal((6, 3))
    p = GroupPartition.equal(6, 2)
    np.testing.assert_array_equal(hierarchical_prox(v, p, 0.0, 0.0), v)
    one = GroupPartition.equal(6, 1)
    tau2 = np.linalg.norm(soft_threshold(v, 0.2))
    assert not np.any(hierarchical_prox(v, one, 0.2, tau2))
    with pytest.raises(PartitionError):
        hierarchical_prox(v, GroupPartition.equal(5, 1), 0.1, 0.1)
    with pytest.raises(ValueError):
        hierarchical_prox(v, p, -0.1, 0.1)


def test_prox_matches_cvx_4x2():
    v = np.random.default_rng(1).standard_normal((4, 2))
    p = GroupPartition.equal(4, 1)
    u = hierarchical_prox(v, p, 0.3, 0.5)
    np.testing.assert_allclose(u, prox_cvx(v, p.ranges, 0.3, 0.5), atol=1e-5)


def test_prox_vector_input():
    v = np.array([3.0, -0.2, 1.0, 2.0])
    p = GroupPartition.equal(4, 2)
    u = hierarchical_prox(v, p, 0.5, 0.1)
    assert u.shape == (4,)
    np.testing.assert_allclose(u, hierarchical_prox(v[:, None], p, 0.5, 0.1)[:, 0])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 3), st.integers(0, 2 ** 32 - 1),
       st.floats(0, 1.5), st.floats(0, 1.5))
def test_prox_beats_random_perturbations(m, s, seed, tau1, tau2):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((m, s)) * 2
    p = GroupPartition.from_ranges(random_partition(rng, m))
    u = hierarchical_prox(v, p, tau1, tau2)
    best = prox_objective(u, v, p, tau1, tau2)
    for scale in (1e-1, 1e-3, 1e-6):
        for _ in range(300):
            w = u + scale * rng.standard_normal(u.shape)
            assert best <= prox_objective(w, v, p, tau1, tau2) + 1e-12


def test_penalty_and_norms():
    x = np.array([[3.0, 4.0], [0.0, 0.0], [1.0, -1.0]])
    p = GroupPartition.from_ranges([(0, 1), (1, 3)])
    np.testing.assert_allclose(group_norms(x, p), [5.0, np.sqrt(2.0)])
    assert hierarchical_penalty(x, p, 0.5, 2.0) == pytest.approx(0.5 * 9 + 2.0 * (5 + np.sqrt(2)))

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigensign.errors import NoConvergence, NotSymmetric
from eigensign.linalg import canonical_sign, covariance, eigen_symmetric, mean_vector

from oracles import char_poly, covariance_loops, det_cofactor, real_roots, row_means


def sym(rng, n, scale=1.0):
    m = rng.normal(scale=scale, size=(n, n))
    return (m + m.T) / 2


def test_diagonal_matrix():
    d = eigen_symmetric(np.diag([1.0, 3.0, 2.0]))
    assert d.values.tolist() == [3.0, 2.0, 1.0]
    assert np.array_equal(d.vectors, np.eye(3)[[1, 2, 0]])


def test_two_by_two():
    d = eigen_symmetric([[2.0, 1.0], [1.0, 2.0]])
    assert d.values == pytest.approx([3.0, 1.0], abs=1e-14)
    s = 1 / np.sqrt(2)
    assert d.vectors[0] == pytest.approx([s, s], abs=1e-14)
    # both entries tie in magnitude, so the first one is made positive
    assert d.vectors[1] == pytest.approx([s, -s], abs=1e-14)


def test_zero_matrix():
    d = eigen_symmetric(np.zeros((4, 4)))
    assert d.values.tolist() == [0.0] * 4
    assert np.array_equal(d.vectors, np.eye(4))


def test_one_by_one():
    d = eigen_symmetric([[-2.5]])
    assert d.values.tolist() == [-2.5] and d.vectors.tolist() == [[1.0]]


def test_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        eigen_symmetric([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(NotSymmetric):
        eigen_symmetric(np.ones((2, 3)))


def test_tiny_asymmetry_is_tolerated():
    a = np.array([[1.0, 2.0], [2.0 + 1e-13, 1.0]])
    assert eigen_symmetric(a).values == pytest.approx([3.0, -1.0])


def test_sweep_cap():
    a = sym(np.random.default_rng(4), 6)
    with pytest.raises(NoConvergence):
        eigen_symmetric(a, max_sweeps=1)


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        eigen_symmetric([[np.nan]])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_eigenvalues_match_characteristic_polynomial(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(20):
        a = sym(rng, n, scale=3.0)
        roots = real_roots(char_poly(a.tolist()))
        assert len(roots) == n
        got = eigen_symmetric(a).values
        assert got == pytest.approx(roots, abs=1e-8)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
def test_decomposition_properties(n, seed, scale):
    a = sym(np.random.default_rng(seed), n, scale)
    d = eigen_symmetric(a)
    vals, vecs = d.values, d.vectors
    norm_inf = np.abs(a).sum(axis=1).max()
    # A v = lambda v
    for lam, v in zip(vals, vecs):
        assert np.abs(a @ v - lam * v).max() <= 1e-9 * (1 + norm_inf)
    # orthonormal
    assert np.abs(vecs @ vecs.T - np.eye(n)).max() < 1e-10
    # sorted, signs canonical
    assert np.all(np.diff(vals) <= 0)
    for v in vecs:
        assert v[np.argmax(np.abs(v))] > 0
    assert vals.sum() == pytest.approx(np.trace(a), abs=1e-9 * (1 + abs(np.trace(a))))


def test_determinant_is_product_of_eigenvalues():
    rng = np.random.default_rng(9)
    for n in (2, 3, 4):
        for _ in range(20):
            a = sym(rng, n)
            det = det_cofactor(a.tolist())
            assert np.prod(eigen_symmetric(a).values) == pytest.approx(det, rel=1e-6, abs=1e-14)


def test_repeated_eigenvalues():
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
    a = q @ np.diag([2.0, 2.0, 2.0, -1.0, 0.0]) @ q.T
    a = (a + a.T) / 2
    d = eigen_symmetric(a)
    assert d.values == pytest.approx([2, 2, 2, 0, -1], abs=1e-12)
    assert np.abs(d.vectors @ d.vectors.T - np.eye(5)).max() < 1e-12


def test_deterministic():
    a = sym(np.random.default_rng(21), 12)
    d1, d2 = eigen_symmetric(a), eigen_symmetric(a.copy())
    assert np.array_equal(d1.values, d2.values) and np.array_equal(d1.vectors, d2.vectors)


def test_canonical_sign():
    assert canonical_sign(np.array([0.1, -0.9, 0.3])).tolist() == [-0.1, 0.9, -0.3]
    assert canonical_sign(np.array([-0.5, 0.5])).tolist() == [0.5, -0.5]


def test_mean_and_covariance_examples():
    x = [[1.0, 2.0, 3.0], [2.0, 2.0, 2.0]]
    assert mean_vector(x).tolist() == [2.0, 2.0]
    c = covariance(x)
    assert c.tolist() == [[2 / 3, 0.0], [0.0, 0.0]]


def test_covariance_against_loops():
    rng = np.random.default_rng(17)
    for _ in range(10):
        data = (rng.random((int(rng.integers(1, 12)), int(rng.integers(1, 30)))) < 0.5).astype(float)
        assert mean_vector(data) == pytest.approx(row_means(data.tolist()), abs=1e-15)
        c = covariance(data)
        assert np.array_equal(c, c.T)
        assert c == pytest.approx(np.array(covariance_loops(data.tolist())), abs=1e-12)


def test_covariance_is_positive_semidefinite():
    data = np.random.default_rng(2).random((20, 50)) < 0.4
    vals = eigen_symmetric(covariance(data.astype(float))).values
    assert vals.min() > -1e-12

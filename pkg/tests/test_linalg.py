import numpy as np
import pytest

from curcluster.linalg import (
    matrix_power,
    nuclear_norm,
    numerical_rank,
    pinv,
    skinny_svd,
)


def random_matrix(rng, m, n, rank):
    return rng.standard_normal((m, rank)) @ rng.standard_normal((rank, n))


class TestSkinnySvd:
    def test_identity(self):
        t = skinny_svd(np.eye(3), 2)
        np.testing.assert_allclose(t.singulars, [1.0, 1.0])
        np.testing.assert_allclose(t.left.T @ t.left, np.eye(2), atol=1e-12)
        np.testing.assert_allclose(t.right.T @ t.right, np.eye(2), atol=1e-12)

    def test_diagonal(self):
        t = skinny_svd(np.diag([3.0, 2.0, 1.0]), 2)
        np.testing.assert_allclose(t.singulars, [3.0, 2.0])

    def test_rank3_reconstruction(self, rng):
        a = random_matrix(rng, 8, 5, 3)
        t = skinny_svd(a, 3)
        resid = np.linalg.norm(t.reconstruct() - a) / np.linalg.norm(a)
        assert resid <= 1e-10

    def test_drops_tiny_singular_values(self, rng):
        a = random_matrix(rng, 6, 6, 2)
        t = skinny_svd(a, 5)
        assert t.rank == 2

    def test_singulars_nonincreasing(self, rng):
        for _ in range(10):
            a = rng.standard_normal((7, 9))
            t = skinny_svd(a, 5)
            assert np.all(np.diff(t.singulars) <= 0)
            assert np.all(t.singulars > 0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            skinny_svd(np.array([[1.0, np.nan]]), 1)

    def test_rejects_bad_rank(self):
        with pytest.raises(ValueError):
            skinny_svd(np.eye(3), 4)


class TestPinv:
    def test_diagonal(self):
        np.testing.assert_allclose(pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))

    def test_column_vector(self):
        # (A^T A)^-1 A^T for full column rank
        np.testing.assert_allclose(pinv([[1.0], [1.0]]), [[0.5, 0.5]])

    def test_zero_matrix(self):
        np.testing.assert_allclose(pinv(np.zeros((3, 4))), np.zeros((4, 3)))

    @pytest.mark.parametrize("seed", range(20))
    def test_penrose_conditions(self, seed):
        rng = np.random.default_rng(seed)
        m, n = int(rng.integers(1, 31)), int(rng.integers(1, 31))
        rank = int(rng.integers(1, min(m, n) + 1))
        a = random_matrix(rng, m, n, rank)
        ap = pinv(a)
        scale = np.linalg.norm(a)
        assert np.linalg.norm(a @ ap @ a - a) <= 1e-9 * scale
        assert np.linalg.norm(ap @ a @ ap - ap) <= 1e-9 * np.linalg.norm(ap)
        assert np.linalg.norm(a @ ap - (a @ ap).T) <= 1e-9
        assert np.linalg.norm(ap @ a - (ap @ a).T) <= 1e-9

    def test_full_column_rank_form(self, rng):
        a = rng.standard_normal((8, 4))
        np.testing.assert_allclose(pinv(a), np.linalg.inv(a.T @ a) @ a.T, atol=1e-8)

    def test_full_row_rank_form(self, rng):
        a = rng.standard_normal((4, 8))
        np.testing.assert_allclose(pinv(a), a.T @ np.linalg.inv(a @ a.T), atol=1e-8)

    def test_square_invertible_form(self, rng):
        a = rng.standard_normal((5, 5)) + 5 * np.eye(5)
        np.testing.assert_allclose(pinv(a), np.linalg.inv(a), atol=1e-8)


class TestNumericalRank:
    def test_identity(self):
        assert numerical_rank(np.eye(4)) == 4

    def test_outer_product(self, rng):
        u, v = rng.standard_normal(6), rng.standard_normal(5)
        assert numerical_rank(np.outer(u, v)) == 1

    def test_gram_construction(self, rng):
        b = rng.standard_normal((6, 2))
        assert numerical_rank(b @ b.T) == 2

    def test_zero_matrix(self):
        assert numerical_rank(np.zeros((3, 3))) == 0


class TestNuclearNorm:
    def test_identity(self):
        assert nuclear_norm(np.eye(3)) == pytest.approx(3.0)

    def test_diagonal(self):
        assert nuclear_norm(np.diag([3.0, 2.0, 1.0])) == pytest.approx(6.0)

    def test_projection(self, rng):
        # rank-r orthogonal projections have exactly r unit singular values
        q, _ = np.linalg.qr(rng.standard_normal((9, 4)))
        assert nuclear_norm(q @ q.T) == pytest.approx(4.0, abs=1e-9)


class TestMatrixPower:
    def test_identity(self):
        np.testing.assert_allclose(matrix_power(np.eye(3), 7), np.eye(3))

    def test_all_ones(self):
        j = np.ones((2, 2))
        np.testing.assert_allclose(matrix_power(j, 3), 4 * j)

    def test_matches_naive(self, rng):
        a = rng.random((4, 4)) + 0.1
        naive = a.copy()
        for _ in range(4):
            naive = naive @ a
        np.testing.assert_allclose(matrix_power(a, 5), naive, rtol=1e-12)

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            matrix_power(np.ones((2, 3)), 2)

import numpy as np
import pytest

from qscocycle import mat_exp, max_herm_eig, op_norm, psd_inv_sqrt, schur_product

from oracles import random_complex, schur_loop, scipy_expm


class TestMatExp:
    def test_zero_matrix(self):
        assert np.array_equal(mat_exp(np.zeros((2, 2))), np.eye(2))

    def test_nilpotent(self):
        out = mat_exp([[0.0, 1.0], [0.0, 0.0]])
        assert np.allclose(out, [[1.0, 1.0], [0.0, 1.0]], atol=1e-15)

    def test_diagonal(self):
        out = mat_exp([[-0.5]])
        assert abs(out[0, 0] - 0.6065306597126334) < 1e-15

    def test_against_scipy(self):
        rng = np.random.default_rng(7)
        for scale in (0.01, 0.3, 1.0, 3.0, 8.0):
            for _ in range(6):
                a = random_complex(rng, (5, 5))
                a *= scale / op_norm(a)
                ref = scipy_expm(a)
                err = op_norm(mat_exp(a) - ref) / op_norm(ref)
                assert err < 1e-12, (scale, err)

    def test_commuting_factorization(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            m = random_complex(rng, (4, 4), 0.5)
            a = 0.3 * m + 0.1 * m @ m
            b = -0.2 * m + 0.05 * m @ m
            lhs = mat_exp(a + b)
            rhs = mat_exp(a) @ mat_exp(b)
            assert op_norm(lhs - rhs) <= 1e-10 * max(1.0, op_norm(lhs))

    def test_adjoint_identity(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            a = random_complex(rng, (4, 4))
            lhs = np.conj(mat_exp(a).T)
            rhs = mat_exp(np.conj(a.T))
            assert op_norm(lhs - rhs) <= 1e-12 * max(1.0, op_norm(rhs))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError, match="square"):
            mat_exp(np.zeros((2, 3)))

    def test_norm_overflow_reported(self):
        with pytest.raises(OverflowError, match="norm"):
            mat_exp(2e4 * np.eye(2))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            mat_exp([[np.inf, 0.0], [0.0, 0.0]])


class TestPsdInvSqrt:
    def test_identity(self):
        assert np.allclose(psd_inv_sqrt(np.eye(3)), np.eye(3), atol=1e-14)

    def test_scalar(self):
        assert np.allclose(psd_inv_sqrt([[4.0]]), [[0.5]], atol=1e-14)

    def test_random_psd_inverse_property(self):
        rng = np.random.default_rng(3)
        for _ in range(8):
            x = random_complex(rng, (4, 4))
            a = x @ np.conj(x.T) + 0.5 * np.eye(4)
            root = psd_inv_sqrt(a)
            assert op_norm(np.conj(root.T) - root) <= 1e-12
            assert op_norm(root @ a @ root - np.eye(4)) <= 1e-10
            assert op_norm(root @ a - a @ root) <= 1e-9

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            psd_inv_sqrt([[1.0, 1.0], [0.0, 1.0]])

    def test_degenerate_rejected(self):
        with pytest.raises(ValueError, match="eigenvalue"):
            psd_inv_sqrt(np.diag([1.0, 1e-15]))


class TestOpNorm:
    def test_identity(self):
        assert abs(op_norm(np.eye(3)) - 1.0) < 1e-14

    def test_diagonal(self):
        assert abs(op_norm(np.diag([2.0, -3.0])) - 3.0) < 1e-12

    def test_column_vector(self):
        assert abs(op_norm([[3.0], [4.0]]) - 5.0) < 1e-12

    def test_submultiplicative(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            a = random_complex(rng, (3, 4))
            b = random_complex(rng, (4, 2))
            assert op_norm(a @ b) <= op_norm(a) * op_norm(b) + 1e-10


class TestMaxHermEig:
    def test_zero(self):
        assert max_herm_eig(np.zeros((2, 2))) == 0.0

    def test_diagonal(self):
        assert abs(max_herm_eig(np.diag([-1.0, -2.0])) + 1.0) < 1e-13

    def test_nonnormal(self):
        # Hermitian part of [[0, 2], [0, 0]] is [[0, 1], [1, 0]].
        assert abs(max_herm_eig([[0.0, 2.0], [0.0, 0.0]]) - 1.0) < 1e-13

    def test_non_square_rejected(self):
        with pytest.raises(ValueError, match="square"):
            max_herm_eig(np.zeros((1, 2)))


class TestSchurProduct:
    def test_ones_identity(self):
        rng = np.random.default_rng(1)
        b = random_complex(rng, (3, 3))
        assert np.array_equal(schur_product(np.ones((3, 3)), b), b)

    def test_diagonal(self):
        a = np.diag([1.0, 2.0])
        b = np.diag([3.0, 4.0])
        assert np.allclose(schur_product(a, b), np.diag([3.0, 8.0]))

    def test_matches_elementwise_loop(self):
        rng = np.random.default_rng(2)
        a = random_complex(rng, (3, 3))
        b = random_complex(rng, (3, 3))
        assert np.allclose(schur_product(a, b), schur_loop(a, b), rtol=1e-15, atol=0)

    def test_scalar_block_variant(self):
        rng = np.random.default_rng(4)
        a = random_complex(rng, (2, 2))
        blocks = random_complex(rng, (4, 4))
        out = schur_product(a, blocks)
        for i in range(2):
            for j in range(2):
                expect = a[i, j] * blocks[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]
                assert np.array_equal(out[2 * i : 2 * i + 2, 2 * j : 2 * j + 2], expect)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError, match="shapes"):
            schur_product(np.ones((2, 2)), np.ones((3, 2)))

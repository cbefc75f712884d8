import numpy as np
import pytest

from tuckerhbf.tensor_ops import (
    fold,
    frobenius_norm_sq,
    mode_n_matricize,
    phase_project,
    slice_kron_apply,
    svd,
)

from conftest import complex_randn


def matricize_by_index(t, n):
    # independent oracle: direct index arithmetic, remaining indices fastest
    # to slowest in increasing mode order
    d1, d2, d3 = t.shape
    if n == 1:
        out = np.zeros((d1, d2 * d3), dtype=t.dtype)
        for i1 in range(d1):
            for i2 in range(d2):
                for i3 in range(d3):
                    out[i1, i3 * d2 + i2] = t[i1, i2, i3]
    elif n == 2:
        out = np.zeros((d2, d1 * d3), dtype=t.dtype)
        for i1 in range(d1):
            for i2 in range(d2):
                for i3 in range(d3):
                    out[i2, i3 * d1 + i1] = t[i1, i2, i3]
    else:
        out = np.zeros((d3, d1 * d2), dtype=t.dtype)
        for i1 in range(d1):
            for i2 in range(d2):
                for i3 in range(d3):
                    out[i3, i2 * d1 + i1] = t[i1, i2, i3]
    return out


class TestMatricize:
    def test_singleton(self):
        t = np.array([[[3.0 + 1.0j]]])
        assert mode_n_matricize(t, 1) == pytest.approx(np.array([[3.0 + 1.0j]]))

    def test_zero_tensor_mode2_shape(self):
        t = np.zeros((2, 2, 2), dtype=complex)
        x2 = mode_n_matricize(t, 2)
        assert x2.shape == (2, 4)
        assert np.all(x2 == 0)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_matches_index_oracle(self, rng, n):
        t = complex_randn(rng, 3, 4, 5)
        assert np.array_equal(mode_n_matricize(t, n), matricize_by_index(t, n))

    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("shape", [(3, 4, 5), (1, 1, 1), (2, 5, 3), (6, 2, 4)])
    def test_fold_roundtrip_exact(self, rng, n, shape):
        t = complex_randn(rng, *shape)
        assert np.array_equal(fold(mode_n_matricize(t, n), n, shape), t)

    def test_frontal_slices_are_contiguous_blocks(self, rng):
        t = complex_randn(rng, 3, 4, 5)
        x1 = mode_n_matricize(t, 1)
        for k in range(5):
            assert np.array_equal(x1[:, k * 4:(k + 1) * 4], t[:, :, k])

    def test_kron_identity_holds(self, rng):
        # Z = X_(1) (A3 kron A2) contracts modes 2 and 3 under this ordering
        t = complex_randn(rng, 3, 4, 5)
        a2 = complex_randn(rng, 4, 2)
        a3 = complex_randn(rng, 5, 2)
        z = mode_n_matricize(t, 1) @ np.kron(a3, a2)
        full = np.einsum("ijk,jr,ks->irs", t, a2, a3)
        expected = np.zeros((3, 4), dtype=complex)
        for r2 in range(2):
            for r3 in range(2):
                expected[:, r3 * 2 + r2] = full[:, r2, r3]
        assert np.allclose(z, expected, atol=1e-12)

    def test_bad_mode_raises(self, rng):
        t = complex_randn(rng, 2, 2, 2)
        with pytest.raises(ValueError):
            mode_n_matricize(t, 4)
        with pytest.raises(ValueError):
            fold(np.zeros((2, 4)), 0, (2, 2, 2))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_norm_consistency(self, rng, n):
        t = complex_randn(rng, 4, 3, 6)
        assert frobenius_norm_sq(mode_n_matricize(t, n)) == pytest.approx(
            frobenius_norm_sq(t), rel=1e-14
        )


class TestSliceKronApply:
    def test_identity_block(self, rng):
        x = complex_randn(rng, 2, 6)
        out = slice_kron_apply(x, np.eye(3), 2)
        assert np.allclose(out, x, atol=1e-14)

    def test_m_equal_one_is_plain_product(self, rng):
        x = complex_randn(rng, 2, 3)
        p = complex_randn(rng, 3, 3)
        assert np.allclose(slice_kron_apply(x, p, 1), x @ p, atol=1e-13)

    @pytest.mark.parametrize("dims", [(2, 3, 2), (4, 4, 3), (8, 8, 8)])
    def test_matches_dense_kron(self, rng, dims):
        rows, pr, m = dims
        x = complex_randn(rng, rows, m * pr)
        p = complex_randn(rng, pr, pr)
        dense = x @ np.kron(np.eye(m), p)
        out = slice_kron_apply(x, p, m)
        assert np.linalg.norm(out - dense) <= 1e-12 * max(np.linalg.norm(dense), 1.0)

    def test_dimension_mismatch_raises(self, rng):
        with pytest.raises(ValueError):
            slice_kron_apply(complex_randn(rng, 2, 5), np.eye(3), 2)
        with pytest.raises(ValueError):
            slice_kron_apply(complex_randn(rng, 2, 6), complex_randn(rng, 3, 2), 2)


class TestPhaseProject:
    def test_real_one(self):
        assert phase_project(np.array([1.0]), 1.0) == pytest.approx([1.0])

    def test_three_four_five(self):
        out = phase_project(np.array([3.0 + 4.0j]), 1.0)
        assert out == pytest.approx([0.6 + 0.8j])

    def test_zero_convention(self):
        out = phase_project(np.array([0.0]), 0.5)
        assert out == pytest.approx([0.5])

    def test_constant_modulus_and_idempotent(self, rng):
        v = complex_randn(rng, 64)
        v[7] = 0.0
        once = phase_project(v, 0.25)
        assert np.allclose(np.abs(once), 0.25, atol=1e-14)
        twice = phase_project(once, 0.25)
        assert np.allclose(once, twice, atol=1e-14)


class TestSvd:
    def test_identity(self):
        res = svd(np.eye(2, dtype=complex))
        assert res.s == pytest.approx([1.0, 1.0])

    def test_diagonal(self):
        res = svd(np.diag([3.0, 0.0]).astype(complex))
        assert res.s == pytest.approx([3.0, 0.0])
        # signed permutation structure: a single unit entry per column
        assert np.abs(res.u[0, 0]) == pytest.approx(1.0)
        assert np.abs(res.v[0, 0]) == pytest.approx(1.0)

    def test_reconstruction_and_orthonormality(self, rng):
        a = complex_randn(rng, 4, 3)
        res = svd(a)
        rec = res.u @ np.diag(res.s) @ res.v.conj().T
        assert np.linalg.norm(rec - a) <= 1e-10 * np.linalg.norm(a)
        assert np.allclose(res.u.conj().T @ res.u, np.eye(3), atol=1e-10)
        assert np.allclose(res.v.conj().T @ res.v, np.eye(3), atol=1e-10)
        assert np.all(np.diff(res.s) <= 0)

    def test_singular_values_of_adjoint(self, rng):
        a = complex_randn(rng, 5, 3)
        assert svd(a.conj().T).s == pytest.approx(svd(a).s, abs=1e-10)

    def test_unitary_invariance(self, rng):
        a = complex_randn(rng, 4, 4)
        q, _ = np.linalg.qr(complex_randn(rng, 4, 4))
        p, _ = np.linalg.qr(complex_randn(rng, 4, 4))
        assert svd(q @ a @ p).s == pytest.approx(svd(a).s, abs=1e-10)


class TestFrobenius:
    def test_zero(self):
        assert frobenius_norm_sq(np.zeros((3, 3))) == 0.0

    def test_single_complex_entry(self):
        assert frobenius_norm_sq(np.array([[1.0 + 1.0j]])) == pytest.approx(2.0)

    def test_matches_slice_sum(self, rng):
        t = complex_randn(rng, 4, 5, 6)
        by_slices = sum(frobenius_norm_sq(t[:, :, k]) for k in range(6))
        assert frobenius_norm_sq(t) == pytest.approx(by_slices, rel=1e-13)

import numpy as np
import pytest

import grkhs
from grkhs import (
    EvaluationOverflowError,
    MultiIndex,
    ResourceLimitError,
    ShapeSequence,
    eigenvalue_ratio,
    gauss_hermite,
    mercer_check,
    stream_tensor_eigenvalues,
    tensor_log_eigenvalue,
    top_n_tensor_eigenvalues,
    univariate_spectrum,
)


class TestUnivariateSpectrum:
    def test_omega_gamma_one(self):
        spec = univariate_spectrum(1.0)
        assert spec.omega == pytest.approx((3.0 - np.sqrt(5.0)) / 2.0)
        assert spec.omega == pytest.approx(0.3819660, abs=1e-7)

    def test_eigenvalues_geometric(self):
        spec = univariate_spectrum(1.0)
        lam = spec.eigenvalue(np.arange(1, 8))
        assert lam[0] == pytest.approx(0.6180340, abs=1e-7)
        assert lam[5] == pytest.approx(0.0050250, abs=1e-6)
        assert np.allclose(lam[1:] / lam[:-1], spec.omega)

    def test_trace_one(self):
        for gamma in (0.3, 1.0, 4.0):
            spec = univariate_spectrum(gamma)
            # sum lambda_j = (1 - omega) / (1 - omega) = 1
            partial = np.sum(spec.eigenvalue(np.arange(1, 500)))
            assert partial == pytest.approx(1.0)

    def test_log_eigenvalue(self):
        spec = univariate_spectrum(0.7)
        j = np.arange(1, 50)
        assert np.allclose(np.exp(spec.log_eigenvalue(j)), spec.eigenvalue(j))

    def test_first_eigenfunction_at_zero(self):
        spec = univariate_spectrum(1.0)
        # phi_1(0) = sqrt(beta) = 5^(1/8)
        assert spec.eigenfunction(1, 0.0)[0] == pytest.approx(5.0**0.125)
        assert spec.eigenfunction(1, 0.0)[0] == pytest.approx(1.2228445, abs=1e-7)

    def test_orthonormality(self):
        rule = gauss_hermite(200)
        for gamma in (0.5, 1.0, 2.0):
            spec = univariate_spectrum(gamma)
            P = spec.eigenfunctions(12, rule.nodes)
            G = (P * rule.weights) @ P.T
            assert np.max(np.abs(G - np.eye(12))) < 1e-10

    def test_mercer(self):
        spec = univariate_spectrum(1.0)
        shape = ShapeSequence.isotropic(1.0)
        for x, t in [(0.0, 0.0), (0.5, -1.0), (2.0, 1.5)]:
            exact = grkhs.kernel_eval(shape, 1, [x], [t])
            assert mercer_check(spec, x, t, 60) == pytest.approx(exact, abs=1e-12)

    def test_overflow_guard(self):
        spec = univariate_spectrum(1.0)
        with pytest.raises(EvaluationOverflowError):
            spec.eigenfunction(1, 40.0)

    def test_invalid_gamma(self):
        with pytest.raises(ValueError):
            univariate_spectrum(-1.0)


class TestMultiIndex:
    def test_dense_roundtrip(self):
        idx = MultiIndex.from_dense((1, 3, 1, 2))
        assert idx.dense() == (1, 3, 1, 2)
        assert idx[2] == 3
        assert idx[1] == 1

    def test_sparse_storage(self):
        idx = MultiIndex.from_dense([1] * 1000 + [5])
        assert idx.d == 1001
        assert idx[1001] == 5

    def test_equality_and_hash(self):
        a = MultiIndex.from_dense((2, 1))
        b = MultiIndex.from_dense((2, 1))
        assert a == b and hash(a) == hash(b)
        assert a != MultiIndex.from_dense((1, 2))


class TestTensorEnumeration:
    def test_d1_matches_univariate(self):
        shape = ShapeSequence.isotropic(1.0)
        spec = univariate_spectrum(1.0)
        top = top_n_tensor_eigenvalues(shape, 1, 10)
        assert np.allclose(top.values, spec.eigenvalue(np.arange(1, 11)))
        assert [i.dense() for i in top.indices] == [(j,) for j in range(1, 11)]

    def test_tie_break_order(self):
        top = top_n_tensor_eigenvalues(ShapeSequence.isotropic(1.0), 2, 3)
        assert [i.dense() for i in top.indices] == [(1, 1), (2, 1), (1, 2)]
        omega = eigenvalue_ratio(1.0)
        assert top.values[0] == pytest.approx((1.0 - omega) ** 2)
        assert top.values[1] == pytest.approx((1.0 - omega) ** 2 * omega)
        assert top.values[1] == top.values[2]

    def test_values_descending(self):
        top = top_n_tensor_eigenvalues(ShapeSequence.power_law(1.0, 1.0), 3, 200)
        assert np.all(np.diff(top.log_values) <= 0)

    def test_log_values_bit_match_direct_formula(self):
        shape = ShapeSequence.explicit([1.0, 0.5])
        top = top_n_tensor_eigenvalues(shape, 2, 50)
        for lv, idx in zip(top.log_values, top.indices):
            assert lv == tensor_log_eigenvalue(shape, 2, idx.dense())

    def test_stream_and_top_agree(self):
        shape = ShapeSequence.isotropic(0.8)
        top = top_n_tensor_eigenvalues(shape, 3, 30)
        streamed = []
        for lv, idx in stream_tensor_eigenvalues(shape, 3):
            streamed.append((lv, idx))
            if len(streamed) == 30:
                break
        assert [i for _, i in streamed] == list(top.indices)

    def test_large_d_no_underflow(self):
        top = top_n_tensor_eigenvalues(ShapeSequence.isotropic(1.0), 500, 5)
        assert np.isfinite(top.log_values).all()
        assert top.log_values[0] == pytest.approx(
            500 * np.log1p(-eigenvalue_ratio(1.0))
        )

    def test_guard_env_var(self, monkeypatch):
        monkeypatch.setenv("GRKHS_MAX_EIGS", "10")
        with pytest.raises(ResourceLimitError):
            top_n_tensor_eigenvalues(ShapeSequence.isotropic(1.0), 2, 11)
        # within the guard still works
        top = top_n_tensor_eigenvalues(ShapeSequence.isotropic(1.0), 2, 10)
        assert len(top) == 10

    def test_guard_env_var_validation(self, monkeypatch):
        monkeypatch.setenv("GRKHS_MAX_EIGS", "zero")
        with pytest.raises(ValueError):
            top_n_tensor_eigenvalues(ShapeSequence.isotropic(1.0), 2, 5)

import numpy as np
import pytest

from cceqr import (
    InvariantError,
    gb_qr,
    norm_mass_cdf,
    rank_reveal_metrics,
    verify_equivalence,
)


class TestVerifyEquivalence:
    def test_distinct_norms_force_order(self):
        A = np.hstack([np.diag([3.0, 2.0, 1.0]), np.zeros((3, 4))])
        rep = verify_equivalence(A, 3, rho=0.3)
        assert rep.status == "equivalent"
        assert list(rep.p_blocked) == [0, 1, 2]

    def test_tied_norms_are_inconclusive(self):
        rep = verify_equivalence(np.eye(2), 2, rho=0.5)
        assert rep.status == "inconclusive"
        assert rep.ok  # inconclusive is not a mismatch

    def test_batch_has_no_mismatches(self):
        rng = np.random.default_rng(0)
        statuses = []
        for i in range(20):
            A = rng.standard_normal((8, 120))
            rep = verify_equivalence(A, 8, rho=(0.02, 0.1, 0.3)[i % 3])
            statuses.append(rep.status)
            assert rep.status != "mismatch"
        assert statuses.count("equivalent") >= 18


class TestRankRevealMetrics:
    def test_orthogonal_square(self):
        H = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
        f = gb_qr(H, 2)
        metrics = rank_reveal_metrics(H, f.p, 2)
        assert metrics.sigma_ratio == pytest.approx(1.0)
        assert metrics.exact_rank
        assert metrics.residual_ratio == 0.0

    def test_diagonal_closed_form(self):
        A = np.diag([2.0, 1.0])
        f = gb_qr(A, 1)
        metrics = rank_reveal_metrics(A, f.p, 1)
        assert metrics.sigma_ratio == pytest.approx(1.0)
        assert metrics.residual_ratio == pytest.approx(1.0)
        assert metrics.q_bound == pytest.approx(2.0)

    def test_random_instances_within_bounds(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            A = rng.standard_normal((8, 40))
            f = gb_qr(A, 4)
            metrics = rank_reveal_metrics(A, f.p, 4)
            assert metrics.sigma_ratio >= 1.0 / metrics.q_bound
            assert metrics.residual_ratio <= metrics.q_bound

    def test_bad_skeleton_raises(self):
        # picking a duplicated column twice makes the skeleton singular,
        # which violates the lower bound
        A = np.vstack([np.ones(6), np.arange(6.0)])
        A[:, 1] = A[:, 0]
        with pytest.raises(InvariantError):
            rank_reveal_metrics(A, np.arange(6), 2)

    def test_oracle_size_cap(self, monkeypatch):
        import cceqr.diagnostics as diag
        monkeypatch.setattr(diag, "SVD_ORACLE_LIMIT", 4)
        with pytest.raises(ValueError, match="oracle"):
            rank_reveal_metrics(np.zeros((1, 8)), np.arange(8), 1)


class TestNormMassCdf:
    def test_uniform_norms(self):
        frac, zero = norm_mass_cdf(np.eye(4), [0.25, 0.5, 1.0])
        assert not zero
        assert np.allclose(frac, [0.25, 0.5, 1.0])

    def test_point_mass(self):
        A = np.zeros((3, 5))
        A[0, 2] = 2.0
        frac, zero = norm_mass_cdf(A, [0.2, 0.6, 1.0])
        assert not zero
        assert np.allclose(frac, [1.0, 1.0, 1.0])

    def test_zero_matrix_flagged(self):
        frac, zero = norm_mass_cdf(np.zeros((2, 3)), [0.5])
        assert zero
        assert np.all(frac == 0.0)

    def test_quantile_validation(self):
        with pytest.raises(ValueError):
            norm_mass_cdf(np.eye(2), [1.5])

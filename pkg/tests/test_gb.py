import numpy as np
import pytest

from cceqr import (
    apply_qt_serial,
    check_gb_form,
    gb_qr,
    gb_qr_naive,
    rank_reveal_metrics,
)


def reconstruct(A, fact):
    Rp = np.asfortranarray(A[:, fact.p])
    return apply_qt_serial(Rp, fact.hs)


class TestGbQr:
    def test_diagonal_already_sorted(self):
        A = np.diag([2.0, 1.0])
        f = gb_qr(A, 2)
        assert list(f.p) == [0, 1]
        assert abs(f.R[0, 0]) == pytest.approx(2.0)
        assert abs(f.R[1, 1]) == pytest.approx(1.0)

    def test_zero_column_skipped(self):
        A = np.array([[0.0, 3.0], [0.0, 4.0]])
        f = gb_qr(A, 1)
        assert f.p[0] == 1
        assert abs(f.R[0, 0]) == pytest.approx(5.0)

    def test_random_matches_naive_and_gb_form(self):
        rng = np.random.default_rng(0)
        A = rng.standard_normal((8, 30))
        f = gb_qr(A, 8)
        g = gb_qr_naive(A, 8)
        assert np.array_equal(f.p, g.p)
        assert check_gb_form(f.R, 8, 1e-10)

    def test_k_out_of_range(self):
        A = np.ones((3, 4))
        for k in (0, 4, -1):
            with pytest.raises(ValueError):
                gb_qr(A, k)

    def test_downdate_guard_recovers_cancellation(self):
        # near rank-1 matrix: residual norms collapse after the first pivot,
        # which forces the from-scratch recomputation path
        rng = np.random.default_rng(1)
        u = rng.standard_normal(6)
        w = rng.standard_normal(20)
        A = np.outer(u, w) + 1e-9 * rng.standard_normal((6, 20))
        f = gb_qr(A, 6)
        g = gb_qr_naive(A, 6)
        assert np.array_equal(f.p, g.p)
        assert check_gb_form(f.R, 6, 1e-10)


class TestGbQrNaive:
    def test_identity_tie_break_lowest_index(self):
        f = gb_qr_naive(np.eye(4), 4)
        assert list(f.p) == [0, 1, 2, 3]
        assert np.allclose(np.abs(np.diag(f.R)), 1.0)

    def test_matches_fast_on_zero_column_case(self):
        A = np.array([[0.0, 3.0], [0.0, 4.0]])
        f = gb_qr(A, 1)
        g = gb_qr_naive(A, 1)
        assert np.array_equal(f.p, g.p)
        assert np.allclose(f.R, g.R, atol=1e-14)

    def test_oracle_equivalence_property(self):
        rng = np.random.default_rng(2)
        for trial in range(10):
            A = rng.standard_normal((6, 12))
            f = gb_qr(A, 6)
            g = gb_qr_naive(A, 6)
            assert np.array_equal(f.p, g.p), f"pivot mismatch on trial {trial}"


class TestCheckGbForm:
    def test_identity_passes(self):
        for n in (1, 3, 6):
            assert check_gb_form(np.eye(n), n, 1e-10)

    def test_dominance_violation_detected(self):
        res = check_gb_form(np.diag([1.0, 2.0]), 2, 1e-10)
        assert not res.ok
        assert "dominated" in res.message

    def test_triangularity_violation_detected(self):
        R = np.array([[2.0, 0.0], [1.0, 0.5]])
        res = check_gb_form(R, 2, 1e-10)
        assert not res.ok
        assert "below the diagonal" in res.message

    def test_naive_output_passes(self):
        rng = np.random.default_rng(3)
        A = rng.standard_normal((5, 17))
        g = gb_qr_naive(A, 5)
        assert check_gb_form(g.R, 5, 1e-10)


class TestFactorizationInvariants:
    def test_many_random_shapes(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            m = int(rng.integers(2, 21))
            n = int(rng.integers(m, 201))
            A = rng.standard_normal((m, n))
            f = gb_qr(A, m)
            assert check_gb_form(f.R, m, 1e-10), (m, n)
            # the reduced columns are exactly triangular, not just nearly
            assert np.all(np.tril(f.R[:, :m], -1) == 0.0)
            # reconstruction
            R2 = reconstruct(A, f)
            err = np.linalg.norm(R2 - f.R) / np.linalg.norm(A)
            assert err <= 1e-10, (m, n, err)
            # diagonal monotonicity
            d = np.abs(np.diag(f.R))[:m]
            assert np.all(d[:-1] >= d[1:] - 1e-10 * d[0]), (m, n)

    def test_rank_reveal_bounds_hold(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            A = rng.standard_normal((8, 40))
            f = gb_qr(A, 4)
            metrics = rank_reveal_metrics(A, f.p, 4)  # raises if a bound fails
            assert 0.0 < metrics.sigma_ratio <= 1.0 + 1e-12
            assert metrics.residual_ratio >= 1.0 - 1e-12

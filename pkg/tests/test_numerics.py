import numpy as np
import pytest

from itl.numerics import log_sum_exp, make_rng, normal_draws, pairwise_sq_dists


class TestMakeRng:
    def test_same_seed_same_draws(self):
        a = make_rng(42).standard_normal(16)
        b = make_rng(42).standard_normal(16)
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        a = make_rng(42, 0).standard_normal(16)
        b = make_rng(42, 1).standard_normal(16)
        assert not np.array_equal(a, b)

    def test_seeds_differ(self):
        a = make_rng(0).standard_normal(16)
        b = make_rng(1).standard_normal(16)
        assert not np.array_equal(a, b)

    def test_seed_bounds(self):
        make_rng(0)
        make_rng(2**64 - 1)
        with pytest.raises(ValueError, match="seed"):
            make_rng(-1)
        with pytest.raises(ValueError, match="seed"):
            make_rng(2**64)
        with pytest.raises(ValueError, match="stream"):
            make_rng(0, -1)


class TestPairwiseSqDists:
    def test_matches_double_loop(self):
        rng = make_rng(3)
        for _ in range(10):
            n, m, d = rng.integers(1, 12, size=3)
            a = rng.standard_normal((n, d))
            b = rng.standard_normal((m, d))
            got = pairwise_sq_dists(a, b)
            want = np.array([[np.sum((ai - bj) ** 2) for bj in b] for ai in a])
            assert np.allclose(got, want, rtol=1e-12, atol=1e-12)

    def test_same_object_exact_diagonal(self):
        a = make_rng(4).standard_normal((50, 3)) * 100
        sq = pairwise_sq_dists(a, a)
        assert np.all(np.diag(sq) == 0.0)
        assert np.array_equal(sq, sq.T)

    def test_nonnegative_for_near_duplicates(self):
        # catastrophic cancellation in ||a||^2 + ||b||^2 - 2ab can go negative
        a = np.full((4, 2), 1e8) + make_rng(5).standard_normal((4, 2)) * 1e-8
        assert np.all(pairwise_sq_dists(a, a.copy()) >= 0.0)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            pairwise_sq_dists(np.zeros((2, 2)), np.zeros((2, 3)))

    def test_rejects_non_2d(self):
        with pytest.raises(ValueError, match="2-D"):
            pairwise_sq_dists(np.zeros(3), np.zeros((2, 3)))


class TestLogSumExp:
    def test_matches_direct_small_values(self):
        v = make_rng(6).standard_normal((5, 7))
        assert np.isclose(log_sum_exp(v), np.log(np.sum(np.exp(v))), rtol=1e-13)
        assert np.allclose(log_sum_exp(v, axis=1), np.log(np.sum(np.exp(v), axis=1)),
                           rtol=1e-13)

    def test_no_underflow_for_large_negatives(self):
        v = np.array([-1e6, -1e6 - 1.0])
        got = log_sum_exp(v)
        assert np.isfinite(got)
        assert np.isclose(got, -1e6 + np.log(1.0 + np.exp(-1.0)), rtol=1e-12)

    def test_shift_invariance(self):
        v = make_rng(7).standard_normal(20)
        assert np.isclose(log_sum_exp(v + 500.0), log_sum_exp(v) + 500.0, rtol=1e-12)

    def test_single_element(self):
        assert np.isclose(log_sum_exp(np.array([3.5])), 3.5)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            log_sum_exp(np.array([]))


class TestNormalDraws:
    def test_shape_and_moments(self):
        x = normal_draws(make_rng(8), 20000, 2, mean=1.5, std=2.0)
        assert x.shape == (20000, 2)
        assert np.allclose(x.mean(axis=0), 1.5, atol=0.06)
        assert np.allclose(x.std(axis=0), 2.0, atol=0.06)

    def test_deterministic(self):
        a = normal_draws(make_rng(9), 8, 3)
        b = normal_draws(make_rng(9), 8, 3)
        assert np.array_equal(a, b)

    def test_bad_std(self):
        with pytest.raises(ValueError, match="std"):
            normal_draws(make_rng(0), 4, 2, std=0.0)
        with pytest.raises(ValueError, match="std"):
            normal_draws(make_rng(0), 4, 2, std=np.inf)

    def test_bad_counts(self):
        with pytest.raises(ValueError):
            normal_draws(make_rng(0), 0, 2)

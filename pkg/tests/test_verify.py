import numpy as np
import pytest

from structobs.colorability import output_pattern
from structobs.fixtures import STAR_A
from structobs.patterns import PatternMatrix, Symbol, pattern_membership
from structobs.verify import (
    RealizationSampler,
    cross_validate,
    kalman_rank_observable,
    observability_matrix,
    pbh_observable,
    sample_realization,
)


class TestRankTests:
    def test_distinct_modes_one_output(self):
        A, C = np.diag([1.0, 2.0]), np.array([[1.0, 1.0]])
        assert kalman_rank_observable(A, C) and pbh_observable(A, C)

    def test_identity_single_output(self):
        A, C = np.eye(2), np.array([[1.0, 0.0]])
        assert not kalman_rank_observable(A, C) and not pbh_observable(A, C)

    def test_observability_matrix_shape(self):
        O = observability_matrix(np.eye(3), np.ones((2, 3)))
        assert O.shape == (6, 3)

    def test_badly_scaled_chain_still_observable(self):
        # integrator chain with widely spread gains: raw powers span many decades
        A = np.diag([1e3, 1e-2, 1e2, 1e-3], k=1)
        C = np.eye(5)[[4]]
        assert kalman_rank_observable(A.T, C)
        assert pbh_observable(A.T, C)

    def test_shape_errors(self):
        with pytest.raises(ValueError):
            kalman_rank_observable(np.ones((2, 3)), np.ones((1, 3)))
        with pytest.raises(ValueError):
            kalman_rank_observable(np.eye(2), np.ones((1, 3)))

    def test_oracles_agree_on_random_systems(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            n = int(rng.integers(1, 6))
            A = rng.normal(size=(n, n)) * (rng.random((n, n)) < 0.4)
            C = np.eye(n)[rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False)]
            assert kalman_rank_observable(A, C) == pbh_observable(A, C)


class TestSampler:
    def test_same_seed_same_draw(self):
        s = RealizationSampler(seed=9)
        P = PatternMatrix.from_rows(["*?", "?0"])
        assert np.array_equal(sample_realization(P, s, s.rng(3)), sample_realization(P, s, s.rng(3)))
        assert not np.array_equal(sample_realization(P, s, s.rng(3)), sample_realization(P, s, s.rng(4)))

    def test_draws_are_members(self):
        s = RealizationSampler(seed=1)
        for t in range(50):
            assert pattern_membership(sample_realization(STAR_A, s, s.rng(t)), STAR_A)

    def test_star_magnitudes_in_range(self):
        s = RealizationSampler(seed=0, star_low=2.0, star_high=3.0)
        X = sample_realization(PatternMatrix.diag(50), s)
        assert np.all((np.abs(np.diag(X)) >= 2.0) & (np.abs(np.diag(X)) <= 3.0))

    def test_unknown_zero_probability(self):
        P = PatternMatrix(np.full((20, 20), int(Symbol.UNKNOWN)))
        assert not sample_realization(P, RealizationSampler(unknown_zero_prob=1.0)).any()
        assert np.all(sample_realization(P, RealizationSampler(unknown_zero_prob=0.0)) != 0)

    @pytest.mark.parametrize("kw", [dict(star_low=0.0), dict(star_low=2.0, star_high=1.0), dict(unknown_zero_prob=1.5)])
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            RealizationSampler(**kw)


class TestCrossValidate:
    def test_star_published_placement(self):
        r = cross_validate(STAR_A, output_pattern(5, [0, 1, 2]), trials=100)
        assert r["structural"] and r["failures"] == 0 and r["passes"] == 100
        assert "note" not in r

    def test_negative_verdict_carries_note(self):
        r = cross_validate(STAR_A, output_pattern(5, [1]), trials=20)
        assert not r["structural"]
        assert "cannot certify" in r["note"]
        assert r["failures"] == len(r["seeds_of_failures"])

    def test_failing_seeds_reproduce(self):
        # diag(*) with one sensor: every realization has n-1 unobserved modes
        A, C = PatternMatrix.diag(3), output_pattern(3, [0])
        r = cross_validate(A, C, trials=5, s=RealizationSampler(seed=7))
        assert r["failures"] == 5
        seed, t = r["seeds_of_failures"][2]
        s = RealizationSampler(seed=seed)
        rng = s.rng(t)
        Ar = sample_realization(A, s, rng)
        Cr = sample_realization(C, s, rng)
        assert not kalman_rank_observable(Ar, Cr)

    def test_reports_are_deterministic(self):
        args = (STAR_A, output_pattern(5, [0, 1, 3]))
        assert cross_validate(*args, trials=30) == cross_validate(*args, trials=30)

    def test_zero_trials(self):
        with pytest.raises(ValueError):
            cross_validate(STAR_A, output_pattern(5, [0]), trials=0)

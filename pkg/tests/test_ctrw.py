import json
import math

import numpy as np
import pytest

from fracdisk.ctrw import (CtrwConfig, convergence_report, ctrw_counts,
                           empirical_circular_moments, report_to_json,
                           simulate_ctrw, simulate_ctrw_batch)
from fracdisk.errors import DomainError
from fracdisk.kernels import dk_value
from fracdisk.wrapped import TWO_PI


class TestConfig:
    def test_valid(self):
        cfg = CtrwConfig(100.0, 0.5)
        assert cfg.jump_mode == "exact_stable"
        assert cfg.y_mode == "rademacher"

    def test_scale_below_one_rejected(self):
        with pytest.raises(DomainError):
            CtrwConfig(0.5, 0.5)

    def test_alpha_boundary_rejected(self):
        with pytest.raises(DomainError):
            CtrwConfig(10.0, 1.0)
        with pytest.raises(DomainError):
            CtrwConfig(10.0, 0.0)

    def test_pareto_with_tempering_rejected(self):
        with pytest.raises(DomainError):
            CtrwConfig(10.0, 0.5, mu=1.0, jump_mode="pareto")

    def test_unknown_modes_rejected(self):
        with pytest.raises(DomainError):
            CtrwConfig(10.0, 0.5, jump_mode="gamma")
        with pytest.raises(DomainError):
            CtrwConfig(10.0, 0.5, y_mode="cauchy")


class TestCounts:
    def test_deterministic_waits(self):
        # J = 1 always: N_t = floor(t) renewals by time t
        cfg = CtrwConfig(4.0, 0.5)
        sampler = lambda gen, n: np.ones(n)
        for t, expect in ((0.5, 0), (1.0, 1), (3.7, 3)):
            counts = ctrw_counts(cfg, t, np.random.default_rng(0),
                                 n_samples=5, waiting_sampler=sampler)
            assert np.all(counts == expect)

    def test_nondecreasing_in_t(self):
        cfg = CtrwConfig(50.0, 0.6)
        a = ctrw_counts(cfg, 0.5, np.random.default_rng(3), n_samples=200)
        b = ctrw_counts(cfg, 2.0, np.random.default_rng(3), n_samples=200)
        # same seed, same waiting sequence scanned to a later level
        assert np.all(b >= a)

    def test_counts_nonnegative_ints(self):
        cfg = CtrwConfig(20.0, 0.4, jump_mode="pareto")
        counts = ctrw_counts(cfg, 1.0, np.random.default_rng(1),
                             n_samples=100)
        assert counts.dtype.kind == "i"
        assert np.all(counts >= 0)

    def test_rejects_nonpositive_t(self):
        with pytest.raises(DomainError):
            ctrw_counts(CtrwConfig(10.0, 0.5), 0.0)


class TestSimulate:
    def test_batch_range_and_shape(self):
        cfg = CtrwConfig(100.0, 0.5)
        th = simulate_ctrw_batch(cfg, 1.0, np.random.default_rng(2),
                                 n_samples=500)
        assert th.shape == (500,)
        assert np.all((th >= 0.0) & (th < TWO_PI))

    def test_single_is_scalar(self):
        cfg = CtrwConfig(50.0, 0.7, y_mode="gaussian")
        th = simulate_ctrw(cfg, 0.5, np.random.default_rng(2))
        assert isinstance(th, float)

    def test_first_moment_near_kernel(self, stable_05):
        # at large scale the k = 1 moment approaches d_1(1)
        cfg = CtrwConfig(512.0, 0.5)
        th = simulate_ctrw_batch(cfg, 1.0, np.random.default_rng(9),
                                 n_samples=40000)
        moments, se_re, se_im = empirical_circular_moments(th, 1)
        target = dk_value(stable_05, 1.0, 1.0)
        tol = 3.0 * math.hypot(se_re[1], se_im[1]) + 2.0 / 512.0
        assert abs(moments[1] - target) < tol


class TestEmpiricalMoments:
    def test_all_zero_angles(self):
        moments, se_re, se_im = empirical_circular_moments(
            np.zeros(50), 3)
        assert np.allclose(moments, 1.0)

    def test_k_zero_exact(self):
        moments, se_re, se_im = empirical_circular_moments(
            np.array([0.1, 2.0, 4.0]), 0)
        assert moments[0] == 1.0 + 0.0j
        assert se_re[0] == 0.0 and se_im[0] == 0.0

    def test_moments_bounded_by_one(self):
        g = np.random.default_rng(4)
        moments, _, _ = empirical_circular_moments(
            g.uniform(0.0, TWO_PI, 1000), 5)
        assert np.all(np.abs(moments) <= 1.0 + 1e-12)

    def test_rejects_empty(self):
        with pytest.raises(DomainError):
            empirical_circular_moments(np.array([]), 2)


class TestConvergenceReport:
    def test_structure_and_decay(self, stable_05):
        report = convergence_report(stable_05, 1.0, 2, [8.0, 32.0, 128.0],
                                    20000, rng=np.random.default_rng(0))
        assert report["k_max"] == 2
        assert len(report["records"]) == 3 * 3
        assert set(report["gamma"]) == {1, 2}
        # errors at the top scale must sit well below the bottom scale
        errs = {(r["c"], r["k"]): r["abs_error"] for r in report["records"]}
        assert errs[(128.0, 1)] < errs[(8.0, 1)]

    def test_raw_mode_runs(self, stable_05):
        report = convergence_report(stable_05, 0.5, 1, [4.0, 16.0], 2000,
                                    rng=np.random.default_rng(1),
                                    rao_blackwell=False)
        assert len(report["records"]) == 2 * 2
        for rec in report["records"]:
            if rec["k"] > 0:
                assert rec["se"] > 0.0

    def test_unsorted_scales_rejected(self, stable_05):
        with pytest.raises(DomainError):
            convergence_report(stable_05, 1.0, 1, [16.0, 4.0], 100)

    def test_json_roundtrip(self, stable_05):
        report = convergence_report(stable_05, 0.5, 1, [4.0, 8.0], 500,
                                    rng=np.random.default_rng(2))
        payload = json.loads(report_to_json(report))
        assert payload["gamma"].keys() == {"1"}
        assert payload["monotone"]["1"] in (True, False)
        assert payload["scales"] == [4.0, 8.0]

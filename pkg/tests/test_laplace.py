import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracdisk.errors import DomainError, HorizonError
from fracdisk.laplace import (forward_double_laplace, forward_laplace,
                              gaver_stehfest, stehfest_weights, talbot)


class TestStehfestWeights:
    def test_weights_sum_to_zero(self):
        # the exact weights sum to zero; in floating point the cancellation
        # is only good to machine epsilon relative to the largest weight
        for n in (8, 14, 18):
            w = stehfest_weights(n)
            assert len(w) == n
            assert abs(float(np.sum(w))) <= 1e-14 * float(np.max(np.abs(w)))

    def test_rejects_odd(self):
        with pytest.raises(DomainError):
            stehfest_weights(7)


class TestGaverStehfest:
    @pytest.mark.parametrize("t", [0.2, 0.5, 1.0])
    def test_exponential_pair(self, t):
        # 1/(theta + 1) <-> e^{-t}; accuracy degrades with t, so stay small
        val = gaver_stehfest(lambda th: 1.0 / (th + 1.0), t, n_terms=18)
        assert val == pytest.approx(math.exp(-t), rel=1e-7)

    def test_polynomial_pair(self):
        # 2/theta^3 <-> t^2
        assert gaver_stehfest(lambda th: 2.0 / th ** 3, 1.7, n_terms=18) == pytest.approx(
            1.7 ** 2, rel=5e-7)

    def test_constant_pair(self):
        assert gaver_stehfest(lambda th: 1.0 / th, 5.0) == pytest.approx(1.0, rel=1e-11)

    def test_rejects_nonpositive_t(self):
        with pytest.raises(DomainError):
            gaver_stehfest(lambda th: 1.0 / th, 0.0)


class TestTalbot:
    @pytest.mark.parametrize("t", [0.2, 1.0, 3.0])
    def test_exponential_pair(self, t):
        val = talbot(lambda th: 1.0 / (th + 1.0), t)
        assert val == pytest.approx(math.exp(-t), rel=1e-9)

    def test_oscillatory_pair(self):
        # theta/(theta^2 + 1) <-> cos t; contour methods handle oscillation
        assert talbot(lambda th: th / (th * th + 1.0), 2.0) == pytest.approx(
            math.cos(2.0), rel=1e-9)

    def test_matches_gaver_stehfest(self):
        f = lambda th: 1.0 / (th ** 0.5 * (th ** 0.5 + 1.0))
        for t in (0.5, 2.0):
            assert talbot(f, t) == pytest.approx(
                gaver_stehfest(f, t, n_terms=18), rel=1e-8)


class TestForwardLaplace:
    def test_exponential_sample(self):
        ts = np.linspace(0.0, 80.0, 8001)
        est = forward_laplace(ts, np.exp(-ts), 1.3)
        assert est.value == pytest.approx(1.0 / 2.3, rel=2e-4)

    def test_short_horizon_raises(self):
        ts = np.linspace(0.0, 1.0, 11)
        with pytest.raises(HorizonError):
            forward_laplace(ts, np.ones_like(ts), 0.5)

    def test_requires_zero_start(self):
        with pytest.raises(DomainError):
            forward_laplace([0.5, 1.0, 1.5], [1.0, 1.0, 1.0], 30.0)


class TestForwardDoubleLaplace:
    def test_separable_product(self):
        ts = np.linspace(0.0, 40.0, 1601)
        surface = np.exp(-ts)[:, None] * np.exp(-0.5 * ts)[None, :]
        est = forward_double_laplace(ts, ts, surface, 1.0, 1.0)
        ref = (1.0 / 2.0) * (1.0 / 1.5)
        assert est.value == pytest.approx(ref, rel=2e-3)

    def test_shape_mismatch_raises(self):
        with pytest.raises(DomainError):
            forward_double_laplace([0.0, 1.0], [0.0, 1.0, 2.0],
                                   np.ones((3, 2)), 1.0, 1.0)

    @given(st.floats(0.5, 3.0), st.floats(0.5, 3.0))
    def test_positive_surface_gives_positive_transform(self, th1, th2):
        ts = np.linspace(0.0, 30.0, 301)
        surface = np.exp(-np.add.outer(ts, ts) / 4.0)
        assert forward_double_laplace(ts, ts, surface, th1, th2).value > 0.0

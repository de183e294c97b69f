import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special as sc

from fracdisk.bernstein import BernsteinSpec, dk_laplace
from fracdisk.errors import CoverageError, DomainError
from fracdisk.kernels import build_table, dk_value
from fracdisk.solver import (DiskPoint, NdTaylorCoeffs, TaylorCoeffs,
                             caputo_derivative_numeric, dump_solution_csv,
                             evaluate_solution, evaluate_solution_nd,
                             fundamental_density_stable, pde_residual,
                             resolvent)

import _refs as R


class TestDatumTypes:
    def test_taylor_degree(self):
        f = TaylorCoeffs(np.array([1.0, 0.5, 0.25]))
        assert f.degree == 2
        assert f.coeffs.dtype == complex

    def test_taylor_rejects_empty_and_nonfinite(self):
        with pytest.raises(DomainError):
            TaylorCoeffs(np.array([]))
        with pytest.raises(DomainError):
            TaylorCoeffs(np.array([1.0, np.inf]))

    def test_nd_coeffs_normalized(self):
        f = NdTaylorCoeffs({(1, 0): 2.0, (0, 3): 1.0j})
        assert f.dim == 2
        assert f.coeffs[(1, 0)] == 2.0 + 0.0j

    def test_nd_rejects_mixed_dim_and_negative(self):
        with pytest.raises(DomainError):
            NdTaylorCoeffs({(1, 0): 1.0, (2,): 1.0})
        with pytest.raises(DomainError):
            NdTaylorCoeffs({(-1, 0): 1.0})

    def test_disk_point(self):
        p = DiskPoint(0.5, math.pi / 2.0)
        assert p.z == pytest.approx(0.5j, abs=1e-15)
        with pytest.raises(DomainError):
            DiskPoint(0.0, 0.0)
        with pytest.raises(DomainError):
            DiskPoint(1.5, 0.0)


class TestEvaluateSolution:
    def test_matches_manual_sum(self, stable_05):
        coeffs = np.array([1.0, -0.5j, 0.25])
        table = build_table(stable_05, 4, [1.0])
        z = 0.6 * np.exp(0.8j)
        u = evaluate_solution(stable_05, TaylorCoeffs(coeffs), z, 1.0, table)
        ref = sum(
            a * z ** k * table.value(k, 1.0) for k, a in enumerate(coeffs)
        )
        assert u == pytest.approx(ref, rel=1e-14)

    def test_t_zero_recovers_datum(self, tempered_06):
        coeffs = np.array([0.3, 1.0, 0.2j, -0.1])
        table = build_table(tempered_06, 3, [0.0, 0.5])
        z = 0.9 * np.exp(0.3j)
        u = evaluate_solution(tempered_06, TaylorCoeffs(coeffs), z, 0.0, table)
        ref = np.polyval(coeffs[::-1], z)
        assert u == pytest.approx(ref, rel=1e-14)

    def test_constant_mode_preserved(self, stable_05):
        table = build_table(stable_05, 0, [2.0])
        u = evaluate_solution(stable_05, TaylorCoeffs([3.0]), 0.4, 2.0, table)
        assert u == pytest.approx(3.0, rel=1e-14)

    def test_accepts_disk_point(self, stable_05):
        table = build_table(stable_05, 2, [1.0])
        f = TaylorCoeffs([0.0, 1.0, 0.0])
        p = DiskPoint(0.7, 1.2)
        u = evaluate_solution(stable_05, f, p, 1.0, table)
        ref = evaluate_solution(stable_05, f, p.z, 1.0, table)
        assert u == ref

    def test_degree_beyond_table_rejected(self, stable_05):
        table = build_table(stable_05, 2, [1.0])
        with pytest.raises(CoverageError):
            evaluate_solution(stable_05, TaylorCoeffs([1.0, 0, 0, 1.0]), 0.5,
                              1.0, table)

    def test_point_outside_disk_rejected(self, stable_05):
        table = build_table(stable_05, 1, [1.0])
        with pytest.raises(DomainError):
            evaluate_solution(stable_05, TaylorCoeffs([1.0, 1.0]), 1.2, 1.0,
                              table)

    def test_mismatched_spec_rejected(self, stable_05, stable_07):
        table = build_table(stable_05, 1, [1.0])
        with pytest.raises(DomainError):
            evaluate_solution(stable_07, TaylorCoeffs([1.0, 1.0]), 0.5, 1.0,
                              table)

    @given(st.floats(0.1, 1.0), st.floats(0.0, 6.2))
    def test_modulus_never_exceeds_datum_sup(self, r, phi):
        # |u(z, t)| <= sum_k |a_k| because 0 <= d_k <= 1
        spec = BernsteinSpec.stable(0.5)
        coeffs = np.array([0.5, 1.0, 0.25])
        table = build_table(spec, 2, [0.7])
        z = r * np.exp(1j * phi)
        u = evaluate_solution(spec, TaylorCoeffs(coeffs), z, 0.7, table)
        assert abs(u) <= np.sum(np.abs(coeffs)) + 1e-12


class TestResolvent:
    def test_matches_dk_laplace_sum(self, stable_05):
        coeffs = np.array([1.0, 0.5j, -0.25])
        z = 0.8 * np.exp(0.5j)
        got = resolvent(stable_05, TaylorCoeffs(coeffs), z, 1.3)
        ref = sum(
            a * z ** k * dk_laplace(stable_05, k, 1.3)
            for k, a in enumerate(coeffs)
        )
        assert got == pytest.approx(ref, rel=1e-14)

    def test_constant_datum_is_one_over_theta(self, tempered_06):
        assert resolvent(tempered_06, TaylorCoeffs([2.0]), 0.5, 4.0) \
            == pytest.approx(0.5, rel=1e-14)

    def test_rejects_nonpositive_theta(self, stable_05):
        with pytest.raises(DomainError):
            resolvent(stable_05, TaylorCoeffs([1.0]), 0.5, 0.0)


class TestEvaluateSolutionNd:
    def test_collapses_to_1d(self, stable_05):
        coeffs = {(0,): 1.0, (1,): -0.5, (3,): 0.25j}
        table = build_table(stable_05, 3, [0.9])
        z = 0.7 * np.exp(1.1j)
        got = evaluate_solution_nd(stable_05, NdTaylorCoeffs(coeffs), [z], 0.9,
                                   table)
        flat = np.zeros(4, dtype=complex)
        for (k,), a in coeffs.items():
            flat[k] = a
        ref = evaluate_solution(stable_05, TaylorCoeffs(flat), z, 0.9, table)
        assert got == pytest.approx(ref, rel=1e-12)

    def test_product_modes_use_ksq_sum(self, stable_05):
        # single mode (1, 2): kernel must be d at ksq = 1 + 4 = 5
        f = NdTaylorCoeffs({(1, 2): 1.0})
        zs = [0.5, 0.6j]
        got = evaluate_solution_nd(stable_05, f, zs, 0.8)
        ref = zs[0] * zs[1] ** 2 * dk_value(stable_05, 5.0, 0.8)
        assert got == pytest.approx(ref, rel=1e-12)

    def test_dimension_mismatch_rejected(self, stable_05):
        f = NdTaylorCoeffs({(1, 1): 1.0})
        with pytest.raises(DomainError):
            evaluate_solution_nd(stable_05, f, [0.5], 1.0)


class TestCaputoDerivative:
    def test_power_function_closed_form(self):
        # D^0.6 t^1.4 = Gamma(2.4)/Gamma(1.8) t^0.8
        got = caputo_derivative_numeric(lambda s: s ** 1.4, 0.6, 0.9)
        assert got == pytest.approx(R.CAPUTO_T14_06_09, rel=1e-4)

    def test_constant_has_zero_derivative(self):
        got = caputo_derivative_numeric(lambda s: 3.0, 0.4, 1.0)
        assert got == pytest.approx(0.0, abs=1e-12)

    def test_linear_function(self):
        # D^alpha t = t^{1-alpha} / Gamma(2 - alpha)
        alpha = 0.5
        got = caputo_derivative_numeric(lambda s: s, alpha, 0.8)
        ref = 0.8 ** 0.5 * sc.rgamma(1.5)
        assert got == pytest.approx(ref, rel=1e-4)

    def test_rejects_bad_order_and_step(self):
        with pytest.raises(DomainError):
            caputo_derivative_numeric(lambda s: s, 1.2, 1.0)
        with pytest.raises(DomainError):
            caputo_derivative_numeric(lambda s: s, 0.5, 0.1, h=0.2)


class TestPdeResidual:
    def test_small_for_stable_clock(self, stable_05):
        f = TaylorCoeffs([0.0, 1.0, 0.5])
        res = pde_residual(stable_05, f, 0.6 * np.exp(0.4j), 0.8)
        assert res < 5e-4

    def test_second_order(self):
        spec = BernsteinSpec.stable(0.7)
        res = pde_residual(spec, TaylorCoeffs([0.0, 1.0]), 0.5, 1.0)
        assert res < 5e-4

    def test_tempered_rejected(self, tempered_06):
        with pytest.raises(DomainError):
            pde_residual(tempered_06, TaylorCoeffs([0.0, 1.0]), 0.5, 1.0)


class TestFundamentalDensity:
    def test_frozen_values(self):
        assert fundamental_density_stable(0.5, 0.7, 1.3) \
            == pytest.approx(R.FD_05_07_13, rel=1e-10)
        assert fundamental_density_stable(0.8, 0.0, 0.5) \
            == pytest.approx(R.FD_08_00_05, rel=1e-10)

    def test_alpha_one_gaussian(self):
        got = fundamental_density_stable(1.0, 0.3, 2.0)
        ref = math.exp(-0.09 / 4.0) / math.sqrt(4.0 * math.pi)
        assert got == pytest.approx(ref, rel=1e-14)

    def test_even_in_x(self):
        assert fundamental_density_stable(0.6, 1.1, 0.7) \
            == pytest.approx(fundamental_density_stable(0.6, -1.1, 0.7),
                             rel=1e-14)

    @pytest.mark.parametrize("alpha,t", [(0.5, 1.0), (0.8, 0.4)])
    def test_normalization(self, alpha, t):
        # stretched-exponential tails: [0, 12] t^{alpha/2} captures the mass
        xs = np.linspace(0.0, 12.0 * t ** (0.5 * alpha), 1601)
        dens = np.array([fundamental_density_stable(alpha, x, t) for x in xs])
        total = 2.0 * np.trapezoid(dens, xs)
        assert total == pytest.approx(1.0, abs=5e-4)

    def test_deep_tail_positive(self):
        # far outside the series range; exercises the stable-pdf bridge
        val = fundamental_density_stable(0.5, 60.0, 1.0)
        assert 0.0 < val < 1e-8

    def test_rejects_bad_args(self):
        with pytest.raises(DomainError):
            fundamental_density_stable(1.2, 0.0, 1.0)
        with pytest.raises(DomainError):
            fundamental_density_stable(0.5, 0.0, 0.0)


class TestSolutionCsv:
    def test_header_and_roundtrip(self):
        buf = io.StringIO()
        dump_solution_csv([(0.5, 1.0, 2.0, 0.25 - 0.75j)], buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "r,phi,t,re_u,im_u"
        assert lines[1] == "0.5,1,2,0.25,-0.75"

"""Time-fractional heat flow on the unit disk.

The package is organized around one object, ``BernsteinSpec``, describing
the Bernstein function g of a subordinator clock.  From it:

* ``kernels`` evaluates the moment kernels d_k(t) = E exp(-k^2 E_g(t)/2)
  by closed form, quadrature, or Laplace inversion,
* ``solver`` sums the series solution of the fractional Cauchy problem on
  the disk and checks its Caputo-type residual,
* ``subsim`` simulates subordinators, their inverses, and time-changed
  Brownian motion; ``wrapped`` handles the circular marginals,
* ``moments`` carries the Laplace-domain moment formulas and their Monte
  Carlo adjudicators; ``ctrw`` the scaled random-walk approximation,
* ``specfun`` supplies Mittag-Leffler, Wright, and stable-density
  primitives; ``laplace`` numerical transform inversion.

The ``fracdisk`` console script exposes the main tabulators.
"""

from .bernstein import (BernsteinSpec, dk_laplace, exp_functional_laplace,
                        g_eval, tail_levy)
from .ctrw import (CtrwConfig, convergence_report, ctrw_counts,
                   empirical_circular_moments, simulate_ctrw,
                   simulate_ctrw_batch)
from .errors import (AccuracyLossError, ConvergenceError, CoverageError,
                     DomainError, FracdiskError, HorizonError, InversionError,
                     StepSizeError)
from .kernels import (KernelTable, build_table, dk_nd, dk_numeric, dk_stable,
                      dk_tempered, dk_value)
from .laplace import (forward_double_laplace, forward_laplace, gaver_stehfest,
                      talbot)
from .moments import (MomentReport, circular_moment, circular_moment_mc,
                      convention_report, covariance_laplace, joint_exp_laplace,
                      mixed_moment_integral, mixed_moment_mc,
                      mixed_moment_stable, moment_laplace_paper, nd_covariance)
from .solver import (DiskPoint, NdTaylorCoeffs, TaylorCoeffs,
                     caputo_derivative_numeric, evaluate_solution,
                     evaluate_solution_nd, fundamental_density_stable,
                     pde_residual, resolvent)
from .specfun import (incomplete_beta, mittag_leffler, mittag_leffler2,
                      mwright, onesided_stable_pdf, upper_incomplete_gamma,
                      wright)
from .subsim import (RngStream, SubordinatorPath, inverse_at, sample_inverse,
                     sample_inverse_batch, sample_stable_increment,
                     sample_subordinator_path, sample_tempered_increment,
                     sample_timechanged_bm, sample_timechanged_bm_batch)
from .wrapped import (WrappedNormalParams, circular_fourier, kuiper_critical,
                      kuiper_two, sample_wrapped, sample_wrapped_batch, wrap,
                      wrapped_density, wrapped_normal_pdf)

__version__ = "0.1.0"

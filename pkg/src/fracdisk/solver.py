"""Series solutions on the disk, fractional-derivative checks, densities.

For a boundary-holomorphic initial datum f(z) = sum_k a_k z^k the solution
of the time-fractional problem is the mode-damped series

    u(z, t) = sum_k a_k z^k d_k(t),

so everything here reduces to kernel lookups.  The module also provides a
product-integration Caputo derivative for residual checks and the
self-similar fundamental density of the one-dimensional stable-clock
problem.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special as sc

from .bernstein import dk_laplace
from .errors import DomainError, StepSizeError
from .kernels import dk_value
from .specfun import AccuracyLossError, mwright, onesided_stable_pdf

__all__ = [
    "TaylorCoeffs",
    "NdTaylorCoeffs",
    "DiskPoint",
    "evaluate_solution",
    "resolvent",
    "evaluate_solution_nd",
    "caputo_derivative_numeric",
    "pde_residual",
    "fundamental_density_stable",
    "dump_solution_csv",
]


@dataclass
class TaylorCoeffs:
    """Taylor coefficients a_0..a_K of the initial datum on the closed disk.

    ``declared_radius_ok`` records the caller's assertion that the series
    converges on |z| <= 1 (automatic for the finite vectors used here).
    """

    coeffs: np.ndarray
    declared_radius_ok: bool = True

    def __post_init__(self):
        self.coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if self.coeffs.ndim != 1 or self.coeffs.size == 0:
            raise DomainError("coeffs must be a nonempty 1-d array")
        if not np.all(np.isfinite(self.coeffs)):
            raise DomainError("coeffs must be finite")

    @property
    def degree(self):
        return self.coeffs.size - 1


@dataclass
class NdTaylorCoeffs:
    """Sparse multi-index coefficients {(k_1..k_n): a} for product domains."""

    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        dim = None
        for key, val in self.coeffs.items():
            key = tuple(int(k) for k in key)
            if any(k < 0 for k in key):
                raise DomainError(f"multi-index {key} has a negative entry")
            if dim is None:
                dim = len(key)
            elif len(key) != dim:
                raise DomainError("all multi-indices must share one dimension")
            clean[key] = complex(val)
        self.coeffs = clean

    @property
    def dim(self):
        if not self.coeffs:
            raise DomainError("empty coefficient set has no dimension")
        return len(next(iter(self.coeffs)))


@dataclass(frozen=True)
class DiskPoint:
    """Point of the punctured closed unit disk in polar form."""

    r: float
    phi: float

    def __post_init__(self):
        if not 0.0 < self.r <= 1.0:
            raise DomainError(f"r must be in (0, 1], got {self.r}")

    @property
    def z(self):
        return self.r * complex(math.cos(self.phi), math.sin(self.phi))


def _as_z(point):
    if isinstance(point, DiskPoint):
        return point.z
    z = complex(point)
    if abs(z) > 1.0 + 1e-12:
        raise DomainError(f"evaluation point must satisfy |z| <= 1, got {abs(z)}")
    return z


def evaluate_solution(spec, f, point, t, table):
    """u(z, t) = sum_k a_k z^k d_k(t) with kernels from ``table``.

    ``point`` may be a DiskPoint or a complex number with |z| <= 1; ``t``
    must be one of the table's grid times and the table must reach the
    coefficient degree (CoverageError otherwise).
    """
    if table.spec is not None and table.spec != spec:
        raise DomainError("kernel table was built for a different clock spec")
    if not isinstance(f, TaylorCoeffs):
        f = TaylorCoeffs(np.asarray(f))
    z = _as_z(point)
    column = table.column(t)
    if f.degree > table.k_max:
        from .errors import CoverageError

        raise CoverageError(
            f"datum degree {f.degree} exceeds table k_max={table.k_max}"
        )
    powers = z ** np.arange(f.coeffs.size)
    return complex(np.sum(f.coeffs * powers * column[: f.coeffs.size]))


def resolvent(spec, f, point, theta):
    """Laplace transform in t of the solution: sum_k a_k z^k dk_laplace(k)."""
    if not isinstance(f, TaylorCoeffs):
        f = TaylorCoeffs(np.asarray(f))
    z = _as_z(point)
    theta = float(theta)
    if theta <= 0.0:
        raise DomainError(f"resolvent requires theta > 0, got {theta}")
    total = 0.0j
    for k, a in enumerate(f.coeffs):
        if a == 0.0:
            continue
        total += a * z ** k * complex(dk_laplace(spec, k, theta))
    return complex(total)


def evaluate_solution_nd(spec, f, points, t, table=None):
    """Product-domain solution sum_K a_K prod_j z_j^{K_j} d_{|K|^2}(t).

    ``points`` is a sequence of DiskPoints or complex numbers, one per
    coordinate.  The shared clock collapses each multi-index to the single
    kernel with effective ksq = sum_j K_j^2; a table covering those values
    as integer modes sqrt(ksq) is used when possible, otherwise the kernel
    is evaluated directly.
    """
    if not isinstance(f, NdTaylorCoeffs):
        f = NdTaylorCoeffs(dict(f))
    zs = [_as_z(p) for p in points]
    if f.coeffs and len(zs) != f.dim:
        raise DomainError(
            f"got {len(zs)} coordinates for dimension-{f.dim} coefficients"
        )
    total = 0.0j
    for key, a in f.coeffs.items():
        if a == 0.0:
            continue
        ksq = float(sum(k * k for k in key))
        dk = None
        if table is not None:
            root = math.isqrt(int(ksq))
            if root * root == int(ksq) and root <= table.k_max:
                try:
                    dk = table.value(root, t)
                except Exception:
                    dk = None
        if dk is None:
            dk = dk_value(spec, ksq, float(t))
        mono = 1.0 + 0.0j
        for z, k in zip(zs, key):
            mono *= z ** k
        total += a * mono * dk
    return complex(total)


def _frac_integral(u0, grid, values, alpha, tau):
    """int_0^tau (tau - s)^{-alpha} (u(s) - u0) ds with piecewise-linear u."""
    v = values - u0
    b = tau - grid[:-1]
    a = tau - grid[1:]
    a = np.maximum(a, 0.0)
    p1 = (b ** (1.0 - alpha) - a ** (1.0 - alpha)) / (1.0 - alpha)
    p2 = (b ** (2.0 - alpha) - a ** (2.0 - alpha)) / (2.0 - alpha)
    slope = np.diff(v) / np.diff(grid)
    return float(np.sum(v[:-1] * p1 + slope * (b * p1 - p2)))


def _caputo_once(u, alpha, t, h):
    """Caputo derivative via centered difference of the fractional integral."""
    ga = sc.rgamma(1.0 - alpha)
    u0 = u(0.0)
    out = []
    for tau in (t - h, t + h):
        n = max(8, int(math.ceil(tau / h)))
        grid = np.linspace(0.0, tau, n + 1)
        values = np.array([u(s) for s in grid])
        out.append(_frac_integral(u0, grid, values, alpha, tau) * ga)
    return (out[1] - out[0]) / (2.0 * h)


def caputo_derivative_numeric(u, alpha, t, h=1e-3):
    """Caputo fractional derivative of order alpha of a scalar function.

    D^alpha u(t) = (1/Gamma(1-alpha)) d/dt int_0^t (t-s)^{-alpha}
    (u(s) - u(0)) ds, computed by product integration of the convolution on
    a step-h grid followed by a centered difference.  A half-step rerun acts
    as a Richardson self-check: disagreement beyond 10% raises
    ``StepSizeError``; otherwise the half-step value is returned.
    """
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"caputo order must be in (0, 1), got {alpha}")
    t = float(t)
    h = float(h)
    if not 0.0 < h < t:
        raise DomainError(f"need 0 < h < t, got h={h}, t={t}")
    d_h = _caputo_once(u, alpha, t, h)
    d_h2 = _caputo_once(u, alpha, t, 0.5 * h)
    scale = max(abs(d_h2), 1e-12)
    if abs(d_h - d_h2) > 0.1 * scale:
        raise StepSizeError(
            f"Caputo Richardson check failed at t={t}: h-step {d_h:.6e} vs "
            f"h/2-step {d_h2:.6e}; reduce h"
        )
    return d_h2


def pde_residual(spec, f, point, t, h=1e-3):
    """Absolute residual |D_t^alpha u - (1/2) d^2u/dphi^2| at one point.

    Mode-wise: each mode contributes a_k z^k (D^alpha d_k + (k^2/2) d_k),
    with the Caputo derivative taken numerically.  Only the stable clock
    satisfies this constant-order fractional equation, so other families are
    rejected.
    """
    if spec.family != "stable" and spec.mu != 0.0:
        raise DomainError(
            "the constant-order fractional equation holds for the stable "
            "clock; tempered clocks obey a different memory kernel"
        )
    if not isinstance(f, TaylorCoeffs):
        f = TaylorCoeffs(np.asarray(f))
    z = _as_z(point)
    alpha = spec.alpha
    total = 0.0j
    for k, a in enumerate(f.coeffs):
        if a == 0.0 or k == 0:
            continue
        dk_fun = lambda s, k=k: dk_value(spec, float(k * k), float(s))
        dalpha = caputo_derivative_numeric(dk_fun, alpha, t, h)
        total += a * z ** k * (dalpha + 0.5 * k * k * dk_fun(t))
    return abs(total)


# density values need ~1e-8 accuracy; the series route is abandoned well
# before its default budget and replaced by the first-passage bridge
_DENSITY_BUDGET = 1.0e5


def fundamental_density_stable(alpha, x, t):
    """Self-similar fundamental density of the stable-clock problem on R.

    l_alpha(x, t) = 2^{-1/2} t^{-alpha/2} M_{alpha/2}(sqrt(2) |x| t^{-alpha/2}),
    the density of B(E(t)) at x.  alpha = 1 gives the Gaussian N(0, t).

    The M-Wright factor is summed as a series while cancellation stays mild;
    deep in the tail it switches to the exact first-passage identity
    M_nu(y) = (1/nu) y^{-1-1/nu} h_nu(y^{-1/nu}) with h_nu the one-sided
    stable density, so the tails are accurate far beyond the series range.
    """
    alpha = float(alpha)
    x = float(x)
    t = float(t)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must be in (0, 1], got {alpha}")
    if t <= 0.0:
        raise DomainError(f"t must be > 0, got {t}")
    if alpha == 1.0:
        return math.exp(-0.5 * x * x / t) / math.sqrt(2.0 * math.pi * t)
    nu = 0.5 * alpha
    scale = t ** (-nu)
    y = math.sqrt(2.0) * abs(x) * scale
    try:
        m = mwright(nu, y, cancel_budget=_DENSITY_BUDGET)
    except AccuracyLossError:
        m = (1.0 / nu) * y ** (-1.0 - 1.0 / nu) * onesided_stable_pdf(
            nu, y ** (-1.0 / nu)
        )
    return scale * m / math.sqrt(2.0)


def dump_solution_csv(rows, fileobj):
    """Write solution samples as rows ``r,phi,t,re_u,im_u``.

    ``rows`` yields (r, phi, t, u) with complex u.
    """
    writer = csv.writer(fileobj)
    writer.writerow(["r", "phi", "t", "re_u", "im_u"])
    for r, phi, t, u in rows:
        writer.writerow(
            [
                f"{r:.17g}",
                f"{phi:.17g}",
                f"{t:.17g}",
                f"{u.real:.17g}",
                f"{u.imag:.17g}",
            ]
        )

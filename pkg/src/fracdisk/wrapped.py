"""Wrapped (circular) distributions and circular sample statistics.

Angles are plain floats normalized to [0, 2*pi); ``wrap`` is the canonical
constructor.  The wrapped normal pdf switches between the image-sum and the
Fourier representation depending on the variance, so both small and large
variances evaluate with a handful of terms.
"""

import csv
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CoverageError, DomainError
from .subsim import RngStream, sample_timechanged_bm_batch

__all__ = [
    "TWO_PI",
    "wrap",
    "WrappedNormalParams",
    "wrapped_normal_pdf",
    "wrapped_density",
    "sample_wrapped",
    "sample_wrapped_batch",
    "circular_fourier",
    "CircularMoment",
    "kuiper_two",
    "kuiper_critical",
    "dump_density_csv",
    "dump_angles_csv",
]

TWO_PI = 2.0 * math.pi


def wrap(theta):
    """Normalize an angle (or array of angles) to [0, 2*pi)."""
    out = np.mod(theta, TWO_PI)
    # mod can return 2*pi itself when theta is a tiny negative float
    out = np.where(out >= TWO_PI, 0.0, out)
    if np.ndim(theta) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class WrappedNormalParams:
    """Mean direction and (unwrapped) variance of a wrapped normal law."""

    mean: float
    variance: float

    def __post_init__(self):
        if not self.variance > 0.0:
            raise DomainError(f"variance must be > 0, got {self.variance}")


def wrapped_normal_pdf(params, phi, k_terms=None):
    """Density of wrap(N(mean, variance)) at angle(s) phi.

    Image sum (1/sqrt(2 pi s2)) sum_j exp(-(delta + 2 pi j)^2 / (2 s2)) for
    small variance, Fourier series (1/(2 pi)) (1 + 2 sum_k e^{-k^2 s2/2}
    cos(k delta)) for large.  With the automatic term count the truncation
    error is below 1e-15 absolute; ``k_terms`` overrides the number of terms
    (per side for the image sum).
    """
    if not isinstance(params, WrappedNormalParams):
        params = WrappedNormalParams(*params)
    s2 = params.variance
    delta = np.mod(np.asarray(phi, dtype=float) - params.mean + math.pi, TWO_PI) - math.pi
    if s2 <= 6.0:
        sigma = math.sqrt(s2)
        if k_terms is None:
            # exp(-(2 pi K - pi)^2 / (2 s2)) < 1e-18 once 2 pi K > pi + 9.1 sigma
            k_terms = int(math.ceil((math.pi + 9.1 * sigma) / TWO_PI)) + 1
        js = np.arange(-k_terms, k_terms + 1)
        dev = delta[..., None] + TWO_PI * js
        out = np.sum(np.exp(-0.5 * dev * dev / s2), axis=-1) / math.sqrt(TWO_PI * s2)
    else:
        if k_terms is None:
            # e^{-k^2 s2 / 2} < 1e-18 once k > sqrt(83/s2)
            k_terms = int(math.ceil(math.sqrt(83.0 / s2))) + 1
        ks = np.arange(1, k_terms + 1)
        coeff = np.exp(-0.5 * ks * ks * s2)
        out = (1.0 + 2.0 * np.cos(np.multiply.outer(delta, ks)) @ coeff) / TWO_PI
    if np.ndim(phi) == 0:
        return float(out)
    return out


def wrapped_density(spec, phi, t, table, tail_tol=1e-12, k_cap=512):
    """Angular density of the time-changed circular motion at time t.

    rho_t(phi) = (1/(2 pi)) (1 + 2 sum_{k>=1} d_k(t) cos(k phi)), truncated
    at the first mode with d_K(t) < ``tail_tol`` (capped at ``k_cap``).  The
    kernels come from ``table``, which must contain t and reach the needed
    mode depth.

    Monotonicity of d_k in k makes the dropped tail bounded by
    k_cap * tail_tol in density units; if the table ends before the kernels
    fall under ``tail_tol`` (and the cap was not reached) a CoverageError
    explains how much tail remains.

    Values that round below zero (possible at the 1e-12 truncation level)
    are clamped to 0.0 with a warning.
    """
    if table.spec is not None and table.spec != spec:
        raise DomainError("kernel table was built for a different clock spec")
    column = table.column(t)
    below = np.nonzero(column < tail_tol)[0]
    if below.size:
        K = int(below[0])
    elif table.k_max >= k_cap:
        K = k_cap
    else:
        raise CoverageError(
            f"kernel table ends at k_max={table.k_max} with "
            f"d(k_max)={column[-1]:.3e} still above tail_tol={tail_tol:.1e}; "
            f"extend the table or raise tail_tol"
        )
    ks = np.arange(1, K + 1)
    coeff = column[1 : K + 1]
    phi_arr = np.asarray(phi, dtype=float)
    out = (1.0 + 2.0 * np.cos(np.multiply.outer(phi_arr, ks)) @ coeff) / TWO_PI
    if np.any(out < 0.0):
        worst = float(np.min(out))
        warnings.warn(
            f"wrapped density clamped at 0 (most negative value {worst:.3e}, "
            f"truncation K={K})",
            RuntimeWarning,
            stacklevel=2,
        )
        out = np.maximum(out, 0.0)
    if np.ndim(phi) == 0:
        return float(out)
    return out


def sample_wrapped(spec, times, step_dt, rng=None):
    """One trajectory of the wrapped time-changed Brownian motion."""
    return sample_wrapped_batch(spec, times, step_dt, rng, n_paths=1)[0]


def sample_wrapped_batch(spec, times, step_dt, rng=None, n_paths=1):
    """Independent wrapped trajectories; shape (n_paths, len(times))."""
    raw = sample_timechanged_bm_batch(spec, times, step_dt, rng, n_paths)
    return wrap(raw)


class CircularMoment(NamedTuple):
    """Empirical circular moment with per-component standard errors."""

    value: complex
    se_re: float
    se_im: float


def circular_fourier(samples, k):
    """Empirical k-th circular moment (1/n) sum_j exp(i k theta_j).

    Matches E[e^{i k Theta}] = d_k(t) for wrapped time-changed Brownian
    samples at time t.  Standard errors are per component.
    """
    k = int(k)
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise DomainError("circular_fourier needs at least one sample")
    z = np.exp(1j * k * samples)
    n = samples.size
    value = complex(z.mean())
    se_re = float(z.real.std(ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    se_im = float(z.imag.std(ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    return CircularMoment(value=value, se_re=se_re, se_im=se_im)


def kuiper_two(samples1, samples2):
    """Two-sample Kuiper test on the circle.

    The statistic V = D+ + D- is invariant under common rotations of both
    samples, which makes it the right two-sample test for circular data.
    Returns (V, p) with the asymptotic tail probability

        Q(lam) = 2 sum_{j>=1} (4 j^2 lam^2 - 1) exp(-2 j^2 lam^2),
        lam = V (sqrt(ne) + 0.155 + 0.24/sqrt(ne)),  ne = n1 n2/(n1 + n2).
    """
    a = np.sort(wrap(np.asarray(samples1, dtype=float).ravel()))
    b = np.sort(wrap(np.asarray(samples2, dtype=float).ravel()))
    n1, n2 = a.size, b.size
    if n1 == 0 or n2 == 0:
        raise DomainError("kuiper_two needs nonempty samples")
    grid = np.concatenate([a, b])
    grid.sort()
    cdf1 = np.searchsorted(a, grid, side="right") / n1
    cdf2 = np.searchsorted(b, grid, side="right") / n2
    d = cdf1 - cdf2
    v = float(d.max() - d.min())
    ne = n1 * n2 / (n1 + n2)
    lam = v * (math.sqrt(ne) + 0.155 + 0.24 / math.sqrt(ne))
    if lam < 0.4:
        p = 1.0
    else:
        js = np.arange(1, 101)
        x = js * js * lam * lam
        p = float(np.clip(2.0 * np.sum((4.0 * x - 1.0) * np.exp(-2.0 * x)), 0.0, 1.0))
    return v, p


def kuiper_critical(n_eff, level=0.01):
    """Critical V for the asymptotic Kuiper tail at the given level."""
    lo, hi = 0.4, 5.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        js = np.arange(1, 101)
        x = js * js * mid * mid
        p = 2.0 * np.sum((4.0 * x - 1.0) * np.exp(-2.0 * x))
        if p > level:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    return lam / (math.sqrt(n_eff) + 0.155 + 0.24 / math.sqrt(n_eff))


def dump_density_csv(phis, density, fileobj):
    """Write density samples as rows ``phi,mu``."""
    writer = csv.writer(fileobj)
    writer.writerow(["phi", "mu"])
    for p, m in zip(np.atleast_1d(phis), np.atleast_1d(density)):
        writer.writerow([f"{p:.17g}", f"{m:.17g}"])


def dump_angles_csv(times, angles, fileobj):
    """Write a wrapped trajectory as rows ``t,theta``."""
    writer = csv.writer(fileobj)
    writer.writerow(["t", "theta"])
    for t, th in zip(np.atleast_1d(times), np.atleast_1d(angles)):
        writer.writerow([f"{t:.17g}", f"{th:.17g}"])

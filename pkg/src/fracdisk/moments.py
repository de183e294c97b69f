"""Moment formulas for circular Brownian motion on a random clock.

Closed forms live in the Laplace domain (single- and two-time), the stable
clock additionally has an incomplete-beta series and an integral
representation for the mixed moment, and every formula is paired with a
Monte Carlo estimator over the same probability space so agreement can be
adjudicated at stated standard-error tolerances.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy import special as sc

from .bernstein import exp_functional_laplace, g_eval
from .errors import ConvergenceError, DomainError
from .kernels import dk_value
from .laplace import gaver_stehfest
from .specfun import incomplete_beta, mittag_leffler
from .subsim import _as_generator, sample_inverse_batch

__all__ = [
    "MomentReport",
    "circular_moment",
    "circular_moment_mc",
    "moment_laplace_paper",
    "joint_exp_laplace",
    "covariance_laplace",
    "mixed_moment_mc",
    "mixed_moment_stable",
    "mixed_moment_integral",
    "nd_covariance",
    "convention_report",
]


@dataclass
class MomentReport:
    """Analytic value vs Monte Carlo estimate with a 3-sigma verdict.

    ``analytic`` and ``passed`` are None when no closed form exists for the
    requested parameters (the estimate is still reported).
    """

    quantity: str
    params: dict = field(default_factory=dict)
    analytic: float = None
    mc: float = 0.0
    se: float = 0.0
    passed: bool = None

    def __post_init__(self):
        if self.se < 0.0:
            raise DomainError("standard error cannot be negative")

    def to_json(self):
        return json.dumps(
            {
                "quantity": self.quantity,
                "params": self.params,
                "analytic": self.analytic,
                "mc": self.mc,
                "se": self.se,
                "pass": self.passed,
            }
        )


def _adjudicate(quantity, params, analytic, samples, slack=0.0):
    """Fold MC samples into a report; pass iff |mc - analytic| <= 3 se + slack."""
    samples = np.asarray(samples, dtype=float)
    n = samples.size
    mc = float(samples.mean())
    se = float(samples.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    passed = None
    if analytic is not None:
        analytic = float(analytic)
        passed = abs(mc - analytic) <= 3.0 * se + slack
    return MomentReport(quantity, params, analytic, mc, se, passed)


def circular_moment(spec, r, t, table=None):
    """E[(e^{i Theta(t)})^r] = E[e^{-(r^2/2) E_g(t)}] = d_r(t).

    The Gaussian characteristic function forces the r^2/2 exponent; see
    ``moment_laplace_paper`` for the printed r/2 variant and
    ``convention_report`` for the simulation-based adjudication.
    """
    r = int(r)
    if r < 0:
        raise DomainError(f"moment order must be >= 0, got {r}")
    if t == 0.0 or r == 0:
        return 1.0
    if table is not None:
        return table.value(r, t)
    return dk_value(spec, float(r * r), float(t))


def circular_moment_mc(spec, r, t, N, step_dt, rng=None):
    """MC adjudication of circular_moment over the inverse-clock law.

    Conditioning on the clock turns e^{irB(E)} into e^{-(r^2/2)E}, so the
    estimator averages that exact conditional expectation over sampled E
    (same mean, strictly smaller variance than simulating B).  The grid
    inverse overshoots E by at most step_dt, so the verdict includes an
    r^2/2 * step_dt bias allowance.
    """
    r = int(r)
    t = float(t)
    ev = sample_inverse_batch(spec, [t], step_dt, rng, n_paths=int(N))[:, 0]
    samples = np.exp(-0.5 * r * r * ev)
    analytic = circular_moment(spec, r, t)
    return _adjudicate(
        "circular_moment",
        {"r": r, "t": t, "N": int(N), "step_dt": step_dt},
        analytic,
        samples,
        slack=0.5 * r * r * step_dt,
    )


def moment_laplace_paper(spec, r, theta):
    """Printed Laplace transform of the r-th moment: 2g / (theta (r + 2g)).

    Kept verbatim for fidelity; it equals exp_functional_laplace at
    eta = r/2, whereas the stochastic representation gives eta = r^2/2.
    The two agree only for r in {0, 1}.
    """
    theta = float(theta)
    if theta <= 0.0:
        raise DomainError(f"theta must be > 0, got {theta}")
    r = float(r)
    if r == 0.0:
        return 1.0 / theta
    return exp_functional_laplace(spec, 0.5 * r, theta)


def joint_exp_laplace(spec, eta1, eta2, theta1, theta2):
    """Double Laplace transform of E[e^{-eta1 E(t1) - eta2 E(t2)}].

    Closed two-variable form: with g_i = g(theta_i), g12 = g(theta1+theta2),

        (1/(th1 th2)) [g1/(eta1+g1) + g2/(eta2+g2) - 1]
        + (eta1 eta2/(th1 th2)) (eta1+eta2+g1+g2)
          / ((eta1+eta2+g12)(eta1+g1)(eta2+g2)).

    Reduces to 1/(th1 th2) at eta1 = eta2 = 0 and marginalizes to
    exp_functional_laplace when either eta vanishes.
    """
    eta1, eta2 = float(eta1), float(eta2)
    theta1, theta2 = float(theta1), float(theta2)
    if eta1 < 0.0 or eta2 < 0.0:
        raise DomainError("eta values must be >= 0")
    if theta1 <= 0.0 or theta2 <= 0.0:
        raise DomainError("theta values must be > 0")
    g1 = float(g_eval(spec, theta1))
    g2 = float(g_eval(spec, theta2))
    g12 = float(g_eval(spec, theta1 + theta2))
    single = g1 / (eta1 + g1) + g2 / (eta2 + g2) - 1.0
    cross = (
        eta1
        * eta2
        * (eta1 + eta2 + g1 + g2)
        / ((eta1 + eta2 + g12) * (eta1 + g1) * (eta2 + g2))
    )
    return (single + cross) / (theta1 * theta2)


def covariance_laplace(spec, theta1, theta2):
    """Double Laplace transform of E[W(t1) W(t2)] (no conjugate), as printed:

        [4 g1 g2 (g12 + 2) + 3 (g1 + g2 - g12)]
        / (th1 th2 (2 + g12)(3 + 2 g1)(1 + 2 g2)).

    Identical to joint_exp_laplace(3/2, 1/2, th1, th2); the stated-for
    t1 < t2 asymmetry is surfaced by callers, not symmetrized here.
    """
    theta1, theta2 = float(theta1), float(theta2)
    if theta1 <= 0.0 or theta2 <= 0.0:
        raise DomainError("theta values must be > 0")
    g1 = float(g_eval(spec, theta1))
    g2 = float(g_eval(spec, theta2))
    g12 = float(g_eval(spec, theta1 + theta2))
    num = 4.0 * g1 * g2 * (g12 + 2.0) + 3.0 * (g1 + g2 - g12)
    den = theta1 * theta2 * (2.0 + g12) * (3.0 + 2.0 * g1) * (1.0 + 2.0 * g2)
    return num / den


def mixed_moment_mc(spec, s, t, N, step_dt, rng=None):
    """MC estimate of E[W(t) conj(W(s))] = E[e^{-(E(t)-E(s))/2}], s <= t.

    Both clock values come from one path so the joint law is preserved;
    the Brownian factor is integrated out exactly.  At s = t every sample
    is exactly 1.
    """
    s, t = float(s), float(t)
    if not 0.0 <= s <= t:
        raise DomainError(f"need 0 <= s <= t, got s={s}, t={t}")
    analytic = mixed_moment_stable(spec.alpha, s, t) if spec.mu == 0.0 else None
    if s == t:
        samples = np.ones(int(N))
    else:
        ev = sample_inverse_batch(spec, [s, t], step_dt, rng, n_paths=int(N))
        samples = np.exp(-0.5 * (ev[:, 1] - ev[:, 0]))
    return _adjudicate(
        "mixed_moment",
        {"s": s, "t": t, "N": int(N), "step_dt": step_dt},
        analytic,
        samples,
        slack=0.5 * step_dt,
    )


def mixed_moment_stable(alpha, s, t, j_max=200, tail_tol=1e-10):
    """Incomplete-beta series for the stable-clock mixed moment.

    With T = max(s,t), S = min(s,t), x = S/T:

        E_alpha(-T^a/2) + (T^a/(2 Gamma(a))) sum_j ((-T^a/2)^j/Gamma(aj+1))
                          * B(a, aj+1; x)

    where B(a, b; x) is the unregularized incomplete beta.  Equals 1 at
    s = t and E_alpha(-t^a/2) at s = 0.  The tail past j_max is bounded by
    replacing B(.; x) with the complete beta; the bound must stay below
    tail_tol relative or ConvergenceError is raised.
    """
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"alpha must be in (0, 1], got {alpha}")
    s, t = float(s), float(t)
    if s < 0.0 or t < 0.0:
        raise DomainError("times must be >= 0")
    if alpha == 1.0:
        return math.exp(-0.5 * abs(t - s))
    big = max(s, t)
    small = min(s, t)
    if big == 0.0:
        return 1.0
    x = small / big
    ta = big ** alpha
    head = mittag_leffler(alpha, -0.5 * ta)
    if small == 0.0:
        return head
    pref = ta / (2.0 * math.gamma(alpha))
    terms = []
    for j in range(int(j_max) + 1):
        lmag = j * math.log(0.5 * ta) - sc.gammaln(alpha * j + 1.0)
        if lmag < -745.0:
            break
        term = (-1.0) ** j * math.exp(lmag) * incomplete_beta(
            alpha, alpha * j + 1.0, x
        )
        terms.append(term)
    total = head + pref * math.fsum(terms)
    # tail bound: |B(a, aj+1; x)| <= B(a, aj+1) = G(a)G(aj+1)/G(aj+1+a)
    j0 = len(terms)
    bound = 0.0
    for j in range(j0, j0 + 400):
        lmag = (
            j * math.log(0.5 * ta)
            + sc.gammaln(alpha)
            - sc.gammaln(alpha * j + 1.0 + alpha)
        )
        b = math.exp(lmag) if lmag > -745.0 else 0.0
        bound += b
        if b < 1e-18 * max(abs(total), 1e-300):
            break
    bound *= pref
    if bound > tail_tol * max(abs(total), 1.0):
        raise ConvergenceError(
            f"mixed-moment series tail bound {bound:.3e} exceeds "
            f"{tail_tol:.1e} at j_max={j_max}; increase j_max"
        )
    return total


def mixed_moment_integral(spec, s, t, quad_tol=1e-10):
    """Renewal-integral route to the same mixed moment, stable clocks only.

    E[W(t) conj(W(s))] = d_1(T) + (1/2) int_0^S d_1(T - tau) dU(tau) with
    U(tau) = tau^a/Gamma(a+1).  The substitution tau = u^{1/a} absorbs the
    tau^{a-1} endpoint singularity:

        d_1(T) + (1/(2 Gamma(a+1))) int_0^{S^a} E_a(-(T - u^{1/a})^a/2) du.
    """
    if spec.family != "stable" and spec.mu != 0.0:
        raise DomainError(
            "the renewal measure is only available in closed form for the "
            "stable clock"
        )
    alpha = spec.alpha
    s, t = float(s), float(t)
    if s < 0.0 or t < 0.0:
        raise DomainError("times must be >= 0")
    big = max(s, t)
    small = min(s, t)
    if big == 0.0:
        return 1.0
    if alpha == 1.0:
        head = math.exp(-0.5 * big)
    else:
        head = mittag_leffler(alpha, -0.5 * big ** alpha)
    if small == 0.0:
        return head

    def integrand(u):
        w = big - u ** (1.0 / alpha)
        if alpha == 1.0:
            return math.exp(-0.5 * w)
        return mittag_leffler(alpha, -0.5 * w ** alpha)

    val, err = integrate.quad(
        integrand,
        0.0,
        small ** alpha,
        epsabs=0.1 * quad_tol,
        epsrel=0.1 * quad_tol,
        limit=200,
    )
    if err > quad_tol * max(abs(val), 1.0):
        raise ConvergenceError(
            f"mixed-moment quadrature error {err:.3e} exceeds {quad_tol:.1e}"
        )
    return head + val / (2.0 * math.gamma(alpha + 1.0))


def nd_covariance(spec, z, t, table=None):
    """Covariance matrix of the n-D wrapped process sharing one clock.

    With D1 = E[e^{-E(t)/2}] and D2 = E[e^{-2E(t)}]:

        q_ij = z_i z_j (D2 - D1^2)   for i != j,
        q_ii = z_i^2 (1 - D1^2).

    ``table`` may supply d_1 and d_2 (effective k^2 of 1 and 4); otherwise
    the kernels are evaluated directly.  Zero matrix at t = 0.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if z.ndim != 1 or z.size == 0:
        raise DomainError("z must be a nonempty vector")
    if np.any(np.abs(z) > 1.0 + 1e-12):
        raise DomainError("all coordinates must lie on the closed unit disk")
    t = float(t)
    if t == 0.0:
        return np.zeros((z.size, z.size), dtype=complex)
    if table is not None:
        d1 = table.value(1, t)
        d2 = table.value(2, t)
    else:
        d1 = dk_value(spec, 1.0, t)
        d2 = dk_value(spec, 4.0, t)
    off = d2 - d1 * d1
    diag = 1.0 - d1 * d1
    q = np.outer(z, z) * off
    np.fill_diagonal(q, z * z * diag)
    return q


def convention_report(spec, t, rs=(1, 2, 3), N=10 ** 5, step_dt=1e-3, rng=None,
                      n_terms=16):
    """Adjudicate the r/2 vs r^2/2 exponent by simulation.

    For each r, Gaver-Stehfest inverts exp_functional_laplace at both
    eta = r^2/2 (stochastic representation) and eta = r/2 (printed moment
    formula) and compares each against the same MC circular-moment samples.
    The r^2/2 rows should pass and the r/2 rows fail for r >= 2; r = 1
    cannot separate them.  Returns a list of MomentReport, two per r.
    """
    t = float(t)
    if t <= 0.0:
        raise DomainError(f"t must be > 0, got {t}")
    ev = sample_inverse_batch(spec, [t], step_dt, rng, n_paths=int(N))[:, 0]
    reports = []
    for r in rs:
        r = int(r)
        samples = np.exp(-0.5 * r * r * ev)
        for label, eta in (("r^2/2", 0.5 * r * r), ("r/2", 0.5 * r)):
            inverted = gaver_stehfest(
                lambda th, eta=eta: exp_functional_laplace(spec, eta, th),
                t,
                n_terms=n_terms,
            )
            reports.append(
                _adjudicate(
                    f"circular_moment[eta={label}]",
                    {"r": r, "t": t, "N": int(N), "step_dt": step_dt},
                    inverted,
                    samples,
                    slack=0.5 * r * r * step_dt,
                )
            )
    return reports

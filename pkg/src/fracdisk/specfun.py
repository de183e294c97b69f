"""Special functions: Mittag-Leffler, Wright, incomplete gamma and beta.

All routines are float64 and scalar.  The two Mittag-Leffler entry points
evaluate the power series while monitoring cancellation and switch to a
real-integral representation on the negative axis when the series would lose
too many digits.  The reciprocal-gamma convention is used throughout:
1/Gamma(z) = 0 at non-positive integers, so series terms whose gamma argument
hits a pole simply drop out.
"""

import math

import numpy as np
from scipy import integrate
from scipy import special as sc

from .errors import AccuracyLossError, ConvergenceError, DomainError

__all__ = [
    "mittag_leffler",
    "mittag_leffler2",
    "wright",
    "wright_xmax",
    "mwright",
    "upper_incomplete_gamma",
    "incomplete_beta",
    "onesided_stable_pdf",
]

# Series terms carry relative noise ~1e-14 from the log-space evaluation, so a
# cancellation ratio of 1e3 keeps the summed result near 1e-10 relative.  Past
# that the integral route takes over.
_ML_CANCEL_BUDGET = 1.0e3
_MAX_TERMS = 4000
_TINY = 1e-300


def _log_term(k, alpha, beta, x):
    """Signed series term x^k / Gamma(alpha*k + beta) via log space."""
    arg = alpha * k + beta
    if arg <= 0.0 and arg == round(arg):
        return 0.0
    sign = sc.gammasgn(arg)
    if k == 0:
        mag = -sc.gammaln(arg)
    elif x == 0.0:
        return 0.0
    else:
        mag = k * math.log(abs(x)) - sc.gammaln(arg)
    if mag > 700.0:
        raise OverflowError(
            f"Mittag-Leffler series term overflows at k={k} (x={x!r})"
        )
    if x < 0.0 and k % 2 == 1:
        sign = -sign
    return sign * math.exp(mag)


def _ml_series(alpha, beta, x):
    """Raw series with cancellation monitor.

    Returns (value, cancel_ratio, converged).
    """
    terms = []
    running = 0.0
    max_abs = 0.0
    small_run = 0
    for k in range(_MAX_TERMS):
        t = _log_term(k, alpha, beta, x)
        terms.append(t)
        running += t
        at = abs(t)
        if at > max_abs:
            max_abs = at
        # terms eventually decay monotonically; three consecutive negligible
        # terms past the peak is a safe stop (running sum is only a scale)
        if at <= 1e-17 * max(abs(running), _TINY) and k * alpha + beta > 1.0:
            small_run += 1
            if small_run >= 3:
                total = math.fsum(terms)
                ratio = max_abs / max(abs(total), _TINY)
                return total, ratio, True
        else:
            small_run = 0
    total = math.fsum(terms)
    ratio = max_abs / max(abs(total), _TINY)
    return total, ratio, False


def _ml_neg_integral(alpha, beta, x):
    """E_{alpha,beta}(x) for x < 0, 0 < alpha < 1, beta < 1 + alpha.

    Real-integral representation: the Hankel contour collapses onto the
    negative axis giving an absolutely convergent integral with kernel

        K(r) = (1/(alpha*pi)) r^{(1-beta)/alpha} exp(-r^{1/alpha})
               * [r sin(pi(1-beta)) + lam sin(pi(1-beta+alpha))]
               / (r^2 + 2 r lam cos(alpha pi) + lam^2),   lam = -x.

    The denominator develops a sharp minimum near r0 = -lam cos(alpha pi)
    for alpha > 1/2, and the exp factor sets the decay scale, so quadrature
    break points are placed at both.
    """
    lam = -x
    ia = 1.0 / alpha
    s1 = math.sin(math.pi * (1.0 - beta))
    s2 = math.sin(math.pi * (1.0 - beta + alpha))
    c = math.cos(math.pi * alpha)

    def kern(r):
        if r <= 0.0:
            return 0.0
        e = ia * math.log(r)
        if e > 690.0:
            return 0.0
        num = r * s1 + lam * s2
        den = (r + lam * c) ** 2 + (lam * math.sin(math.pi * alpha)) ** 2
        lg = (1.0 - beta) * ia * math.log(r) - math.exp(e)
        if lg < -700.0:
            return 0.0
        return math.exp(lg) * num / den / (alpha * math.pi)

    pts = set()
    if c < 0.0:
        r0 = -lam * c
        w = lam * math.sin(math.pi * alpha)
        for p in (r0 - w, r0 - 0.5 * w, r0, r0 + 0.5 * w, r0 + w, r0 + 3 * w):
            if p > 0.0:
                pts.add(p)
    # decay scale of exp(-r^{1/alpha})
    for u in (1.0, 4.0, 9.0, 16.0, 25.0, 36.0):
        pts.add(u ** alpha)
    upper = max(46.0 ** alpha, *(2.0 * p for p in pts))
    pts = sorted(p for p in pts if p < upper)

    val, err = integrate.quad(
        kern, 0.0, upper, points=pts, limit=300, epsabs=1e-280, epsrel=1e-13
    )
    tail, terr = integrate.quad(kern, upper, np.inf, limit=100, epsabs=1e-280)
    total = val + tail
    if err + terr > 1e-8 * max(abs(total), _TINY):
        raise ConvergenceError(
            f"Mittag-Leffler integral quadrature error {err + terr:.2e} too "
            f"large relative to result {total:.3e}"
        )
    return total


def mittag_leffler2(alpha, beta, x):
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(x).

    Parameters
    ----------
    alpha : float
        Must be positive.  The negative-axis integral fallback requires
        0 < alpha <= 1; outside that range only the series domain is covered.
    beta : float
        Any real number (reciprocal-gamma convention at the poles).
    x : float
        Real argument.

    Returns
    -------
    float

    Raises
    ------
    DomainError
        If alpha <= 0.
    OverflowError
        If the value exceeds float64 range (large positive x).
    ConvergenceError
        If neither the series nor the integral route reaches its target.

    Notes
    -----
    The power series sum_k x^k / Gamma(alpha k + beta) is evaluated with
    compensated summation while tracking max|term| / |sum|.  If that ratio
    exceeds ~1e3 the result is recomputed from the integral representation
    (x < 0), reducing beta first via

        E_{alpha,beta}(z) = (E_{alpha,beta-alpha}(z) - 1/Gamma(beta-alpha)) / z

    until beta < 1 + alpha.
    """
    alpha = float(alpha)
    beta = float(beta)
    x = float(x)
    if not alpha > 0.0:
        raise DomainError(f"mittag_leffler2 requires alpha > 0, got {alpha}")
    if not (math.isfinite(beta) and math.isfinite(x)):
        raise DomainError("mittag_leffler2 requires finite beta and x")

    if alpha == 1.0:
        return _ml_alpha1(beta, x)
    if x == 0.0:
        return float(sc.rgamma(beta))

    try:
        val, ratio, ok = _ml_series(alpha, beta, x)
    except OverflowError:
        if x > 0.0:
            raise OverflowError(
                f"E_({alpha},{beta})({x}) exceeds float64 range"
            ) from None
        ok = False
        ratio = math.inf
    if ok and ratio <= _ML_CANCEL_BUDGET:
        return val

    if x < 0.0 and 0.0 < alpha < 1.0:
        # reduce beta below 1 + alpha, then integrate
        shifts = 0
        b = beta
        while b >= 1.0 + alpha:
            b -= alpha
            shifts += 1
        val = _ml_neg_integral(alpha, b, x)
        for _ in range(shifts):
            val = (val - sc.rgamma(b)) / x
            b += alpha
        return val
    if not ok:
        raise ConvergenceError(
            f"Mittag-Leffler series did not converge for alpha={alpha}, "
            f"beta={beta}, x={x}"
        )
    raise AccuracyLossError(
        f"Mittag-Leffler series lost too many digits (ratio {ratio:.2e}) and "
        f"no integral route applies for alpha={alpha}, x={x}",
        ratio=ratio,
        budget=_ML_CANCEL_BUDGET,
    )


def _ml_alpha1(beta, x):
    """E_{1,beta}(x).  Classical limit; reduces to elementary functions."""
    if beta == round(beta) and beta <= 1.0:
        # E_{1,beta}(x) = x^{1-beta} e^x for integer beta <= 1
        n = int(round(1.0 - beta))
        if x == 0.0:
            return 1.0 if n == 0 else 0.0
        return x ** n * math.exp(x)
    if abs(x) > 650.0:
        if x > 0.0:
            raise OverflowError(f"E_(1,{beta})({x}) exceeds float64 range")
        # hyp1f1(1, beta, x) underflow-safe asymptotic: (beta-1)/(-x)
        return float((beta - 1.0) * sc.rgamma(beta) / (-x))
    return float(sc.hyp1f1(1.0, beta, x) * sc.rgamma(beta))


def mittag_leffler(alpha, x):
    """One-parameter Mittag-Leffler function E_alpha(x) = E_{alpha,1}(x).

    E_1(x) = exp(x); E_{1/2}(-1) = 0.4275835761558070...  Completely monotone
    in t along x = -lam * t^alpha for lam >= 0, 0 < alpha <= 1.
    """
    alpha = float(alpha)
    if not alpha > 0.0:
        raise DomainError(f"mittag_leffler requires alpha > 0, got {alpha}")
    if alpha == 1.0:
        x = float(x)
        if x > 700.0:
            raise OverflowError(f"E_1({x}) exceeds float64 range")
        return math.exp(x)
    return mittag_leffler2(alpha, 1.0, x)


# -- Wright function ---------------------------------------------------------

# With float64 term evaluation the absolute error is roughly
# cancel_ratio * 1e-15 * max|term| scale, so the default budget bounds the
# worst-case loss; callers needing 1e-8 relative should stay below ~1e7.
_WRIGHT_BUDGET = 1.0e8


def _wright_series(beta, gamma, x):
    """Raw Wright series sum_k x^k / (k! Gamma(beta k + gamma)).

    Returns (value, cancel_ratio, converged).
    """
    terms = []
    running = 0.0
    max_abs = 0.0
    small_run = 0
    lax = math.log(abs(x)) if x != 0.0 else -math.inf
    for k in range(_MAX_TERMS):
        arg = beta * k + gamma
        if arg <= 0.0 and arg == round(arg):
            t = 0.0
        elif k > 0 and x == 0.0:
            t = 0.0
        else:
            mag = (k * lax if k else 0.0) - sc.gammaln(k + 1.0) - sc.gammaln(arg)
            if mag > 700.0:
                raise OverflowError(
                    f"Wright series term overflows at k={k} (x={x!r})"
                )
            t = sc.gammasgn(arg) * math.exp(mag) if mag > -745.0 else 0.0
            if x < 0.0 and k % 2 == 1:
                t = -t
        terms.append(t)
        running += t
        at = abs(t)
        if at > max_abs:
            max_abs = at
        if x == 0.0:
            return terms[0], 1.0, True
        if at <= 1e-17 * max(abs(running), _TINY) and k > abs(x):
            small_run += 1
            if small_run >= 3:
                total = math.fsum(terms)
                ratio = max_abs / max(abs(total), _TINY)
                return total, ratio, True
        else:
            small_run = 0
    total = math.fsum(terms)
    return total, max_abs / max(abs(total), _TINY), False


def wright(beta, gamma, x, cancel_budget=_WRIGHT_BUDGET):
    """Wright function W_{beta,gamma}(x) = sum_k x^k / (k! Gamma(beta k + gamma)).

    Parameters
    ----------
    beta : float
        Index in (-1, 1).  The series diverges for beta <= -1.
    gamma : float
        Any real number.
    x : float
        Real argument.
    cancel_budget : float, optional
        Maximum tolerated max|term| / |sum| ratio.  The float64 absolute
        error scales like ratio * 1e-15, so results near the default budget
        carry roughly 1e-7 absolute noise; tighten the budget when more is
        needed.

    Raises
    ------
    DomainError
        If beta is outside (-1, 1).
    AccuracyLossError
        If the cancellation ratio exceeds ``cancel_budget``.
    """
    beta = float(beta)
    gamma = float(gamma)
    x = float(x)
    if not -1.0 < beta < 1.0:
        raise DomainError(f"wright requires -1 < beta < 1, got {beta}")
    val, ratio, ok = _wright_series(beta, gamma, x)
    if not ok:
        raise ConvergenceError(
            f"Wright series did not converge for beta={beta}, gamma={gamma}, "
            f"x={x}"
        )
    if ratio > cancel_budget:
        raise AccuracyLossError(
            f"Wright series cancellation ratio {ratio:.2e} exceeds budget "
            f"{cancel_budget:.1e} at beta={beta}, gamma={gamma}, x={x}",
            ratio=ratio,
            budget=cancel_budget,
        )
    return val


def wright_xmax(beta, gamma, cancel_budget=_WRIGHT_BUDGET, span=400.0):
    """Largest y such that W_{beta,gamma}(-y) stays within the budget.

    Bisects the cancellation ratio, which grows monotonically in y on the
    negative axis for beta < 0.  Returns ``span`` if the whole range is safe.
    """
    def ratio_at(y):
        try:
            _, r, ok = _wright_series(beta, gamma, -y)
        except OverflowError:
            return math.inf
        return r if ok else math.inf

    if ratio_at(span) <= cancel_budget:
        return float(span)
    lo, hi = 0.0, float(span)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ratio_at(mid) <= cancel_budget:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-6 * max(1.0, hi):
            break
    return lo


def mwright(nu, y, cancel_budget=_WRIGHT_BUDGET):
    """M-Wright density M_nu(y) = W_{-nu,1-nu}(-y) for y >= 0, 0 < nu < 1.

    M_{1/2}(y) = exp(-y^2/4)/sqrt(pi).  Integrates to 1 over [0, inf).
    """
    nu = float(nu)
    if not 0.0 < nu < 1.0:
        raise DomainError(f"mwright requires 0 < nu < 1, got {nu}")
    if y < 0.0:
        raise DomainError(f"mwright requires y >= 0, got {y}")
    return wright(-nu, 1.0 - nu, -float(y), cancel_budget=cancel_budget)


# -- incomplete gamma and beta ----------------------------------------------


def upper_incomplete_gamma(rho, x):
    """Upper incomplete gamma Gamma(rho, x) = int_x^inf s^{rho-1} e^{-s} ds.

    Parameters
    ----------
    rho : float
        Real, but not zero or a negative integer.
    x : float
        Must be positive when rho <= 0.  x = 0 returns Gamma(rho) for rho > 0.

    Notes
    -----
    For rho < 0 the value is built from the positive-rho region by the upward
    recurrence Gamma(rho, x) = (Gamma(rho+1, x) - x^rho e^{-x}) / rho applied
    downward.  Each step can lose about one digit when x is large; the
    package only needs a single step (rho in (-1, 0)).
    """
    rho = float(rho)
    x = float(x)
    if rho <= 0.0 and rho == round(rho):
        raise DomainError(
            f"upper_incomplete_gamma rejects non-positive integer rho={rho}"
        )
    if x < 0.0:
        raise DomainError(f"upper_incomplete_gamma requires x >= 0, got {x}")
    if rho > 0.0:
        if x == 0.0:
            return float(sc.gamma(rho))
        return float(sc.gammaincc(rho, x) * sc.gamma(rho))
    if x == 0.0:
        raise DomainError("upper_incomplete_gamma diverges at x=0 for rho < 0")
    m = int(math.ceil(-rho))
    top = upper_incomplete_gamma(rho + m, x)
    lx = math.log(x)
    for j in range(m, 0, -1):
        r = rho + j - 1.0
        top = (top - math.exp(r * lx - x)) / r
    return top


def incomplete_beta(a, b, x):
    """Lower incomplete beta B(a, b; x) = int_0^x y^{a-1} (1-y)^{b-1} dy.

    Not regularized: B(a, b; 1) = B(a, b).  Requires a, b > 0 and x in [0, 1].
    """
    a = float(a)
    b = float(b)
    x = float(x)
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"incomplete_beta requires a, b > 0, got {a}, {b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"incomplete_beta requires 0 <= x <= 1, got {x}")
    return float(sc.betainc(a, b, x) * sc.beta(a, b))


# -- one-sided stable density ------------------------------------------------


def onesided_stable_pdf(alpha, x):
    """Density at x of the positive stable law with E[e^{-theta X}] = e^{-theta^alpha}.

    Uses the single-integral representation

        h(x) = (alpha/(pi(1-alpha))) x^{-1/(1-alpha)}
               int_0^pi A(u) exp(-x^{-alpha/(1-alpha)} A(u)) du,
        A(u) = [sin(alpha u)^alpha sin((1-alpha)u)^{1-alpha} / sin(u)]^{1/(1-alpha)},

    whose integrand is positive and bounded.  Requires 0 < alpha < 1, x > 0
    (the density vanishes for x <= 0).
    """
    alpha = float(alpha)
    x = float(x)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"onesided_stable_pdf requires 0 < alpha < 1, got {alpha}")
    if x <= 0.0:
        return 0.0
    q = 1.0 / (1.0 - alpha)
    cx = x ** (-alpha * q)

    def integrand(u):
        su = math.sin(u)
        if su <= 0.0:
            return 0.0
        la = q * (
            alpha * math.log(math.sin(alpha * u))
            + (1.0 - alpha) * math.log(math.sin((1.0 - alpha) * u))
            - math.log(su)
        )
        if la > 690.0:
            return 0.0
        a = math.exp(la)
        e = -cx * a
        if e < -745.0:
            return 0.0
        return a * math.exp(e)

    val, err = integrate.quad(integrand, 0.0, math.pi, limit=200, epsabs=1e-280, epsrel=1e-12)
    pref = alpha * q / math.pi * x ** (-q)
    out = pref * val
    if err * pref > 1e-8 * max(out, _TINY) and out > 1e-280:
        raise ConvergenceError(
            f"stable pdf quadrature error too large at alpha={alpha}, x={x}"
        )
    return out

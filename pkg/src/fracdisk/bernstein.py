"""Bernstein functions of subordinators and their Laplace-domain objects.

A clock specification holds the family (stable or tempered stable), its
exponent, tempering rate, and an optional linear drift.  The drift is carried
for bookkeeping but excluded from ``g_eval``: every Laplace-domain formula in
this package is for the pure-jump part, and samplers add ``drift_b * dt``
explicitly.
"""

import json
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

from .errors import DomainError
from .specfun import upper_incomplete_gamma

__all__ = [
    "BernsteinSpec",
    "g_eval",
    "tail_levy",
    "dk_laplace",
    "exp_functional_laplace",
]

_FAMILIES = ("stable", "tempered")


@dataclass(frozen=True)
class BernsteinSpec:
    """Clock family: g(theta) = theta^alpha or (theta+mu)^alpha - mu^alpha.

    Parameters
    ----------
    family : str
        "stable" or "tempered".
    alpha : float
        Exponent in (0, 1].  alpha = 1 is the classical clock g(theta) = theta.
    mu : float
        Tempering rate, >= 0; must be 0 for the stable family.
    drift_b : float
        Optional drift coefficient, >= 0.  Stored, not part of g_eval.
    """

    family: str
    alpha: float
    mu: float = 0.0
    drift_b: float = 0.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown family {self.family!r}; expected one of {_FAMILIES}")
        if not 0.0 < self.alpha <= 1.0:
            raise DomainError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.mu < 0.0:
            raise DomainError(f"mu must be >= 0, got {self.mu}")
        if self.family == "stable" and self.mu != 0.0:
            raise DomainError("stable family requires mu = 0")
        if self.drift_b < 0.0:
            raise DomainError(f"drift_b must be >= 0, got {self.drift_b}")

    @classmethod
    def stable(cls, alpha, drift_b=0.0):
        return cls("stable", float(alpha), 0.0, float(drift_b))

    @classmethod
    def tempered(cls, alpha, mu, drift_b=0.0):
        return cls("tempered", float(alpha), float(mu), float(drift_b))

    def to_json(self):
        """Serialize to the interchange dict {family, alpha, mu, drift_b}."""
        return {
            "family": self.family,
            "alpha": self.alpha,
            "mu": self.mu,
            "drift_b": self.drift_b,
        }

    @classmethod
    def from_json(cls, obj):
        """Build from a dict or JSON string; unknown keys are rejected."""
        if isinstance(obj, str):
            obj = json.loads(obj)
        allowed = {"family", "alpha", "mu", "drift_b"}
        extra = set(obj) - allowed
        if extra:
            raise DomainError(f"unknown clock fields: {sorted(extra)}")
        if "family" not in obj or "alpha" not in obj:
            raise DomainError("clock spec requires 'family' and 'alpha'")
        return cls(
            family=obj["family"],
            alpha=float(obj["alpha"]),
            mu=float(obj.get("mu", 0.0)),
            drift_b=float(obj.get("drift_b", 0.0)),
        )


def g_eval(spec, theta):
    """Laplace exponent g(theta) of the pure-jump part.

    Real theta must be positive.  Complex theta is accepted anywhere off the
    branch cut (principal branch; contour inversion relies on this).  The
    drift term b*theta is deliberately not included.
    """
    theta = np.asarray(theta)
    if np.isrealobj(theta) and np.any(theta.real <= 0.0):
        raise DomainError("g_eval requires theta > 0")
    if spec.family == "stable" or spec.mu == 0.0:
        out = theta ** spec.alpha
    else:
        out = (theta + spec.mu) ** spec.alpha - spec.mu ** spec.alpha
    if out.ndim == 0:
        return out[()]
    return out


def tail_levy(spec, s):
    """Tail Levy measure w(s) = nu((s, inf)) of the clock's jump measure.

    Stable: s^{-alpha} / Gamma(1-alpha).
    Tempered: alpha mu^alpha Gamma(-alpha, mu s) / Gamma(1-alpha).

    The bridge identity g(theta) = theta * int_0^inf e^{-theta s} w(s) ds
    ties this to ``g_eval`` and is enforced by tests.  alpha = 1 has no jump
    part (w = 0).
    """
    s = float(s)
    if s <= 0.0:
        raise DomainError(f"tail_levy requires s > 0, got {s}")
    a = spec.alpha
    if a == 1.0:
        return 0.0
    if spec.family == "stable" or spec.mu == 0.0:
        return s ** (-a) * sc.rgamma(1.0 - a)
    return (
        a
        * spec.mu ** a
        * upper_incomplete_gamma(-a, spec.mu * s)
        * sc.rgamma(1.0 - a)
    )


def exp_functional_laplace(spec, eta, theta):
    """Laplace transform in t of E[exp(-eta * E(t))] for the inverse clock E.

    Value: g(theta) / (theta * (eta + g(theta))).  eta >= 0; theta > 0 real
    or complex with positive real part (used by contour inversion).
    """
    if np.isrealobj(np.asarray(eta)) and np.any(np.asarray(eta) < 0.0):
        raise DomainError("exp_functional_laplace requires eta >= 0")
    g = g_eval(spec, theta)
    return g / (np.asarray(theta) * (eta + g))


def dk_laplace(spec, k, theta):
    """Laplace transform in t of the mode-k kernel d_k(t).

    d_k(t) = E[exp(-(k^2/2) E(t))], so this is ``exp_functional_laplace``
    at eta = k^2 / 2.  k = 0 gives 1/theta (d_0 = 1).
    """
    k = float(k)
    return exp_functional_laplace(spec, 0.5 * k * k, theta)

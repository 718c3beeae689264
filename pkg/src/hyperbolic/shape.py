"""Shape triangle coordinates and erosion/deposition dynamics.

The invariant coordinates of a hyperbolic (or NIG) law are

    xi  = 1 / sqrt(1 + delta*gamma)
    chi = xi * beta / alpha

and fill the open triangle ``0 <= |chi| < xi < 1``. The normal law sits at
the bottom vertex (0, 0) and Laplace-type laws along the top edge ``xi = 1``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .dist import GhParams
from .errors import DomainError, ParameterError


@dataclass(frozen=True)
class ShapePoint:
    chi: float
    xi: float

    def __post_init__(self):
        if not (0.0 <= abs(self.chi) < self.xi < 1.0):
            raise DomainError(f"({self.chi}, {self.xi}) is outside the shape triangle")


def shape_coords(p):
    """Shape-triangle position of a hyperbolic or NIG law."""
    if p.family not in ("hyperbolic", "nig"):
        raise ParameterError(f"shape coordinates are defined for hyperbolic and NIG laws, not {p.family!r}")
    zeta = p.delta * p.gamma
    if not (p.alpha > 0 and math.isfinite(zeta) and zeta > 0):
        raise ParameterError("shape coordinates need alpha > 0 and 0 < delta*gamma < inf")
    xi = 1.0 / math.sqrt(1.0 + zeta)
    return ShapePoint(xi * p.beta / p.alpha, xi)


def shape_inverse(s, delta, mu=0.0, lam=1.0):
    """The law with shape ``s``, scale ``delta`` and location ``mu``.

    ``(chi, xi)`` is free of scale and location, so both must be supplied.
    ``lam`` selects the hyperbolic (1) or NIG (-1/2) family.
    """
    if not (0.0 <= abs(s.chi) < s.xi < 1.0):
        raise DomainError("shape point must lie strictly inside the triangle")
    if not delta > 0:
        raise DomainError("delta must be positive")
    gamma = (s.xi ** -2 - 1.0) / delta
    rho = s.chi / s.xi
    alpha = gamma / math.sqrt(1.0 - rho * rho)
    return GhParams(lam, alpha, rho * alpha, delta, mu)


def erosion_shift(p, epsilon, t):
    """Power-law erosion for a period ``t``: beta -> beta + epsilon*t.

    Removing grains at a rate that leaves a fraction proportional to
    ``size**(epsilon*t)`` multiplies the log-size density by
    ``exp(epsilon*t*x)``; the family is closed under this tilt.
    """
    if p.family != "hyperbolic":
        raise ParameterError("erosion_shift acts on hyperbolic laws")
    beta = p.beta + epsilon * t
    if not abs(beta) < p.alpha:
        raise DomainError(
            f"erosion drives parameters to boundary: |beta + epsilon*t| = {abs(beta)} >= alpha = {p.alpha}"
        )
    return p.replace(beta=beta)


@dataclass(frozen=True)
class SortingCurve:
    """Erosion/deposition trajectory ``alpha' = -kappa``, ``beta' = -(epsilon + kappa*beta/alpha)``.

    ``delta`` and ``mu`` stay fixed along the curve; they are needed only to
    place the trajectory in the shape triangle.
    """

    alpha0: float
    beta0: float
    kappa: float
    epsilon: float
    delta: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        if not (self.kappa != 0 and self.epsilon != 0 and self.kappa / self.epsilon < 0):
            raise ParameterError("sorting curve requires kappa/epsilon < 0")
        if not self.alpha0 > abs(self.beta0):
            raise ParameterError("sorting curve requires alpha0 > |beta0|")
        if not self.delta > 0:
            raise ParameterError("sorting curve requires delta > 0")

    @property
    def c0(self):
        return self.kappa * self.beta0 / self.alpha0 - self.epsilon * math.log(self.alpha0)


@dataclass(frozen=True)
class SortingTrace:
    t: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    chi: np.ndarray
    xi: np.ndarray
    truncated: bool = False
    truncated_at: float | None = None

    def rows(self):
        return zip(self.t.tolist(), self.alpha.tolist(), self.beta.tolist(),
                   self.chi.tolist(), self.xi.tolist())


def sorting_curve_eval(c, t_grid):
    """Evaluate a sorting curve on ``t_grid``.

    ``alpha(t) = alpha0 - kappa*t`` and beta(t) from the conserved quantity
    ``kappa*beta/alpha - epsilon*log(alpha) = c0``. The trace stops at the
    first grid time where the law leaves the hyperbolic domain
    (``alpha <= |beta|``), and ``truncated_at`` records that time.
    """
    t = np.asarray(t_grid, dtype=float)
    alpha = c.alpha0 - c.kappa * t
    with np.errstate(invalid="ignore", divide="ignore"):
        beta = alpha * (c.c0 + c.epsilon * np.log(alpha)) / c.kappa
    bad = ~((alpha > 0) & (alpha > np.abs(beta)))
    truncated_at = None
    if bad.any():
        k = int(np.argmax(bad))
        truncated_at = float(t[k])
        t, alpha, beta = t[:k], alpha[:k], beta[:k]
    gamma = np.sqrt(alpha * alpha - beta * beta)
    xi = 1.0 / np.sqrt(1.0 + c.delta * gamma)
    chi = xi * beta / alpha
    return SortingTrace(t, alpha, beta, chi, xi, truncated_at is not None, truncated_at)


def skew_kurt_approx(s):
    """Rough (skewness, kurtosis) proxy ``(3 chi, 3 xi**2)``; good for small |beta|/alpha."""
    return 3.0 * s.chi, 3.0 * s.xi**2

"""Special functions: modified Bessel K of real order, log-gamma, incomplete beta.

The Bessel routines follow the classic Temme series (x < 2) and Steed's
continued fraction (x >= 2) for a seed order in [-1/2, 1/2), then recur
upward in the order. The recurrence is carried on ratios so the log-space
result never overflows.
"""
from dataclasses import dataclass

import numpy as np
from scipy import special

from ._backend import kernels
from .errors import DomainError, RangeError

_LOG_DBL_MAX = np.log(np.finfo(float).max)


@dataclass(frozen=True)
class EvalPolicy:
    """Accuracy contract for the special functions.

    The kernels always iterate to machine precision; the policy records what
    callers and tests may rely on.
    """

    rel_tol: float = 1e-10
    max_terms: int = 100000

    def __post_init__(self):
        if not 0.0 < self.rel_tol <= 1e-4:
            raise DomainError(f"rel_tol must lie in (0, 1e-4], got {self.rel_tol}")
        if self.max_terms < 50:
            raise DomainError(f"max_terms must be >= 50, got {self.max_terms}")


DEFAULT_POLICY = EvalPolicy()


def _prepare(order, x):
    order, x = (np.array(a) for a in np.broadcast_arrays(np.asarray(order, dtype=float),
                                                          np.asarray(x, dtype=float)))
    if np.any(~(x > 0)):
        raise DomainError("Bessel K requires x > 0")
    if np.any(~np.isfinite(order)):
        raise DomainError("Bessel K requires a finite order")
    return order, x


def log_bessel_k_ratio(order, x):
    """Return ``log K_order(x)`` and ``K_{|order|+1}(x) / K_|order|(x)``.

    The ratio gives the logarithmic derivative
    ``d/dx log K_v(x) = |v|/x - K_{|v|+1}(x)/K_|v|(x)``.
    """
    order, x = _prepare(order, x)
    shape = x.shape
    lk, r = kernels.log_bessel_k(order.ravel(), x.ravel())
    lk = lk.reshape(shape)
    r = r.reshape(shape)
    if shape == ():
        return float(lk), float(r)
    return lk, r


def log_bessel_k(order, x):
    """Natural log of the modified Bessel function of the second kind.

    Parameters
    ----------
    order : float or array_like
        Real order; ``K_{-v} = K_v``.
    x : float or array_like
        Positive argument.

    Returns
    -------
    float or ndarray
        ``log K_order(x)``, finite wherever the inputs are.

    Raises
    ------
    DomainError
        If any ``x <= 0``.
    """
    return log_bessel_k_ratio(order, x)[0]


def bessel_k(order, x):
    """Modified Bessel function of the second kind ``K_order(x)``.

    Raises
    ------
    DomainError
        If any ``x <= 0``.
    RangeError
        If the value overflows a double; call :func:`log_bessel_k` instead.
    """
    lk = np.asarray(log_bessel_k(order, x))
    if np.any(lk > _LOG_DBL_MAX):
        raise RangeError("K overflows for this order/argument; use log_bessel_k")
    out = np.exp(lk)
    return float(out) if out.shape == () else out


def log_gamma(x):
    """``log Gamma(x)`` for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("log_gamma requires x > 0")
    out = special.gammaln(x)
    return float(out) if out.shape == () else out


def reg_inc_beta(a, b, x):
    """Regularized incomplete beta function ``I_x(a, b)``."""
    a, b, x = (np.asarray(v, dtype=float) for v in (a, b, x))
    if np.any(~(a > 0)) or np.any(~(b > 0)):
        raise DomainError("reg_inc_beta requires a > 0 and b > 0")
    if np.any(~((x >= 0) & (x <= 1))):
        raise DomainError("reg_inc_beta requires 0 <= x <= 1")
    out = special.betainc(a, b, x)
    return float(out) if out.shape == () else out

"""Maximum-likelihood fitting of GH laws to univariate samples.

The optimizer works on standardized data ``z = (x - m)/s`` in the
unconstrained coordinates ``u = (mu, beta, log delta, log gamma[, lambda])``
and maps the optimum back, so fits are affine equivariant up to rounding.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize

from .dist import GhParams, gh_logpdf, gh_mean_var
from .errors import DegenerateSampleError, ParameterError
from .shape import shape_coords
from .specfun import log_bessel_k, log_bessel_k_ratio

_LOG2PI = math.log(2.0 * math.pi)
_FAMILY_LAMBDA = {"nig": -0.5, "hyperbolic": 1.0}
COMPONENTS = ("mu", "beta", "delta", "gamma", "lambda")


@dataclass(frozen=True)
class FitConfig:
    """Fitting options.

    ``family`` is "nig", "hyperbolic" or "gh". For "gh", ``fix_lambda`` pins
    lambda; leaving it as None fits lambda as well.
    """

    family: str = "nig"
    fix_lambda: float | None = None
    max_iter: int = 500
    grad_tol: float = 1e-6
    multistart: int = 3

    def __post_init__(self):
        if self.family not in ("nig", "hyperbolic", "gh"):
            raise ParameterError(f"cannot fit family {self.family!r}; use nig, hyperbolic or gh")
        if self.family != "gh" and self.fix_lambda is not None \
                and self.fix_lambda != _FAMILY_LAMBDA[self.family]:
            raise ParameterError(f"{self.family} has lambda {_FAMILY_LAMBDA[self.family]}")
        if self.max_iter < 1:
            raise ParameterError("max_iter must be at least 1")
        if not 0 < self.grad_tol <= 1e-2:
            raise ParameterError("grad_tol must lie in (0, 1e-2]")
        if self.multistart < 1:
            raise ParameterError("multistart must be at least 1")

    @property
    def lam(self):
        if self.family in _FAMILY_LAMBDA:
            return _FAMILY_LAMBDA[self.family]
        return self.fix_lambda

    @property
    def free_lambda(self):
        return self.lam is None


@dataclass
class FitReport:
    params: GhParams
    loglik: float
    converged: bool
    iterations: int
    grad_norm: float
    stderr_diag: dict
    shape: object = None
    n: int = 0
    family: str = ""
    stderr_note: str = "approximate: from a finite-difference Hessian at the optimum"

    def to_dict(self):
        from .dist import params_to_dict
        d = {"params": params_to_dict(self.params), "loglik": self.loglik,
             "converged": self.converged, "iterations": self.iterations,
             "grad_norm": self.grad_norm, "n": self.n, "family": self.family,
             "stderr_diag": self.stderr_diag, "stderr_note": self.stderr_note}
        if self.shape is not None:
            d["shape"] = {"chi": self.shape.chi, "xi": self.shape.xi}
        return d


# ---------------------------------------------------------------------------
# log-likelihood in unconstrained coordinates


def _dlogk(nu, zz, ratio):
    """d/dz log K_nu(z) from the ratio K_{|nu|+1}/K_|nu|."""
    return abs(nu) / zz - ratio


def _mean_ll_grad4(x, mu, beta, ldelta, lgamma, lam):
    """Mean log-likelihood and its gradient in (mu, beta, log delta, log gamma)."""
    delta, gamma = math.exp(ldelta), math.exp(lgamma)
    alpha = math.hypot(beta, gamma)
    nu = lam - 0.5
    y = x - mu
    q = np.sqrt(delta * delta + y * y)
    lk, r = log_bessel_k_ratio(nu, alpha * q)
    zeta = delta * gamma
    lk0, r0 = log_bessel_k_ratio(lam, zeta)
    ll = (lam * (lgamma - ldelta) - lk0 - 0.5 * _LOG2PI
          + lk + nu * (np.log(q) - math.log(alpha)) + beta * y)
    dk = _dlogk(nu, alpha * q, r)
    dk0 = _dlogk(lam, zeta, r0)
    g_mu = -(dk * alpha + nu / q) * y / q - beta
    g_beta = (dk * q - nu / alpha) * beta / alpha + y
    g_ld = -lam - dk0 * zeta + (dk * alpha + nu / q) * delta * delta / q
    g_lg = lam - dk0 * zeta + (dk * q - nu / alpha) * gamma * gamma / alpha
    g = np.array([g_mu.mean(), g_beta.mean(), g_ld.mean(), g_lg.mean()])
    return float(ll.mean()), g


def _mean_ll_grad(x, u, lam):
    """Mean log-likelihood and gradient; ``lam=None`` means u[4] is lambda."""
    if lam is not None:
        return _mean_ll_grad4(x, *u[:4], lam)
    ll, g4 = _mean_ll_grad4(x, *u[:4], u[4])
    h = 1e-6 * max(1.0, abs(u[4]))
    lp = _mean_ll_grad4(x, *u[:4], u[4] + h)[0]
    lm = _mean_ll_grad4(x, *u[:4], u[4] - h)[0]
    return ll, np.append(g4, (lp - lm) / (2 * h))


def _safe(fun):
    def wrapped(u):
        try:
            ll, g = fun(u)
        except (ValueError, FloatingPointError, OverflowError):
            return np.inf, np.zeros_like(u)
        if not (math.isfinite(ll) and np.all(np.isfinite(g))):
            return np.inf, np.zeros_like(u)
        return -ll, -g
    return wrapped


def _fd_hessian(grad, u, rel=1e-5):
    k = u.size
    h = np.empty((k, k))
    for i in range(k):
        e = np.zeros(k)
        e[i] = rel * max(1.0, abs(u[i]))
        h[:, i] = (grad(u + e) - grad(u - e)) / (2 * e[i])
    return 0.5 * (h + h.T)


def _maximize(x, u0, lam, max_iter, free_mask=None):
    """BFGS then a Newton polish on the mean log-likelihood.

    ``free_mask`` selects the optimized coordinates; the others stay at u0.
    Returns (u, mean loglik, gradient over the free coordinates, iterations).
    """
    u0 = np.asarray(u0, dtype=float)
    mask = np.ones(u0.size, bool) if free_mask is None else np.asarray(free_mask)
    full = _safe(lambda u: _mean_ll_grad(x, u, lam))

    def fg(v):
        u = u0.copy()
        u[mask] = v
        f, g = full(u)
        return f, g[mask]

    res = minimize(fg, u0[mask], jac=True, method="BFGS",
                   options={"maxiter": max_iter, "gtol": 1e-10})
    v, f = res.x, res.fun
    iters = int(res.nit)
    _, g = fg(v)
    for _ in range(20):
        if np.linalg.norm(g) <= 1e-11:
            break
        hess = _fd_hessian(lambda w: fg(w)[1], v)
        try:
            step = np.linalg.solve(hess, g)
        except np.linalg.LinAlgError:
            break
        s = 1.0
        while s > 1e-6:
            fn, gn = fg(v - s * step)
            if fn <= f + 1e-14 * abs(f) and np.linalg.norm(gn) < np.linalg.norm(g):
                break
            s *= 0.5
        else:
            break
        v, f, g = v - s * step, fn, gn
        iters += 1
    u = u0.copy()
    u[mask] = v
    return u, -f, g, iters


# ---------------------------------------------------------------------------
# initialization


def _standardize(samples):
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 5:
        raise DegenerateSampleError("need at least 5 observations")
    if not np.all(np.isfinite(x)):
        raise DegenerateSampleError("observations must be finite")
    m = float(x.mean())
    s = float(x.std())
    if not s > 0 or np.all(x == x[0]):
        raise DegenerateSampleError("all observations are equal")
    return x, m, s


def _kurtosis_ratio(lam, zeta):
    """K_{lam+2} K_lam / K_{lam+1}**2, a third of the symmetric-law kurtosis."""
    return math.exp(log_bessel_k(lam + 2, zeta) + log_bessel_k(lam, zeta)
                    - 2 * log_bessel_k(lam + 1, zeta))


def _zeta_from_kurtosis(lam, kurt):
    target = kurt / 3.0
    lo, hi = 1e-3, 1e4
    f = lambda lz: _kurtosis_ratio(lam, math.exp(lz)) - target
    if f(math.log(hi)) >= 0:
        return hi
    if f(math.log(lo)) <= 0:
        return lo
    return math.exp(brentq(f, math.log(lo), math.log(hi), xtol=1e-12))


def _moment_start(mean, var, kurt, lam, zeta_mult=1.0):
    zeta = _zeta_from_kurtosis(lam, kurt) * zeta_mult
    w1 = math.exp(log_bessel_k(lam + 1, zeta) - log_bessel_k(lam, zeta))
    c = var / w1  # delta/gamma
    delta = math.sqrt(zeta * c)
    gamma = math.sqrt(zeta / c)
    return GhParams(lam, gamma, 0.0, delta, mean)


def fit_init_moments(samples, family="nig", lam=None):
    """Symmetric (beta = 0) start matching sample mean and variance.

    delta*gamma is chosen from the sample kurtosis, then delta/gamma from
    the variance. For family "gh" the start uses ``lam`` (default 1).
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 5:
        raise DegenerateSampleError("need at least 5 observations")
    var = float(x.var())
    if not var > 0:
        raise DegenerateSampleError("sample has zero variance")
    if lam is None:
        lam = _FAMILY_LAMBDA.get(family, 1.0)
    mean = float(x.mean())
    kurt = float(np.mean((x - mean) ** 4) / var**2)
    return _moment_start(mean, var, kurt, lam)


# ---------------------------------------------------------------------------
# coordinates


def _to_u(p, free_lambda):
    u = [p.mu, p.beta, math.log(p.delta), math.log(p.gamma)]
    if free_lambda:
        u.append(p.lam)
    return np.array(u)


def _from_u(u, lam):
    lam = u[4] if lam is None else lam
    gamma = math.exp(u[3])
    return GhParams(float(lam), math.hypot(u[1], gamma), float(u[1]), math.exp(u[2]), float(u[0]))


def _z_to_x(uz, m, s):
    """Map unconstrained coordinates fitted on z = (x - m)/s back to x."""
    ux = np.array(uz, dtype=float)
    ux[0] = m + s * uz[0]
    ux[1] = uz[1] / s
    ux[2] = uz[2] + math.log(s)
    ux[3] = uz[3] - math.log(s)
    return ux


def _x_to_z(ux, m, s):
    uz = np.array(ux, dtype=float)
    uz[0] = (ux[0] - m) / s
    uz[1] = ux[1] * s
    uz[2] = ux[2] - math.log(s)
    uz[3] = ux[3] + math.log(s)
    return uz


def _stderr(x, ux, lam):
    """Delta-method standard errors of (alpha, beta, delta, mu[, lambda])."""
    n = x.size
    grad = lambda u: n * _mean_ll_grad(x, u, lam)[1]
    names = ["alpha", "beta", "delta", "mu"] + (["lambda"] if lam is None else [])
    try:
        h = _fd_hessian(grad, ux)
        cov_u = np.linalg.inv(-h)
    except np.linalg.LinAlgError:
        return {k: math.nan for k in names}
    mu, beta, delta, gamma = ux[0], ux[1], math.exp(ux[2]), math.exp(ux[3])
    alpha = math.hypot(beta, gamma)
    k = ux.size
    jac = np.zeros((len(names), k))
    jac[0, 1] = beta / alpha
    jac[0, 3] = gamma * gamma / alpha
    jac[1, 1] = 1.0
    jac[2, 2] = delta
    jac[3, 0] = 1.0
    if lam is None:
        jac[4, 4] = 1.0
    var = np.diag(jac @ cov_u @ jac.T)
    return {k_: (math.sqrt(v) if v > 0 else math.nan) for k_, v in zip(names, var)}


def _better(a, b):
    """Higher loglik wins; near-ties go to the smaller parameter norm."""
    if b is None:
        return True
    if abs(a[1] - b[1]) <= 1e-12 * max(1.0, abs(b[1])):
        return np.linalg.norm(a[0]) < np.linalg.norm(b[0])
    return a[1] > b[1]


def _multistart(z, cfg, lam, fixed=None):
    """Best local maximum over the moment-based starts (in z coordinates)."""
    var, kurt = float(z.var()), float(np.mean((z - z.mean()) ** 4) / z.var() ** 2)
    lam0 = -0.5 if lam is None else lam
    best = None
    for mult in (1.0, 0.3, 3.0, 0.1, 10.0)[: cfg.multistart]:
        try:
            p0 = _moment_start(float(z.mean()), var, kurt, lam0, mult)
        except (ValueError, ParameterError):
            continue
        u0 = _to_u(p0, lam is None)
        mask = None
        if fixed is not None:
            idx, val = fixed
            u0[idx] = val
            mask = np.ones(u0.size, bool)
            mask[idx] = False
        u, ll, g, it = _maximize(z, u0, lam, cfg.max_iter, mask)
        if math.isfinite(ll) and _better((u, ll), best and best[:2]):
            best = (u, ll, g, it)
    if best is None:
        raise ParameterError("no start point produced a finite likelihood")
    return best


def fit_mle(samples, cfg=None):
    """Maximum-likelihood fit.

    Returns
    -------
    FitReport
        ``converged`` is True when the gradient of the mean log-likelihood
        in (mu, beta, log delta, log gamma[, lambda]) has norm at most
        ``cfg.grad_tol``; otherwise the best iterate is reported.
    """
    cfg = cfg or FitConfig()
    x, m, s = _standardize(samples)
    z = (x - m) / s
    lam = cfg.lam
    uz, _, _, iters = _multistart(z, cfg, lam)
    ux = _z_to_x(uz, m, s)
    params = _from_u(ux, lam)
    gnorm = float(np.linalg.norm(_mean_ll_grad(x, ux, lam)[1]))
    loglik = float(np.sum(gh_logpdf(params, x)))
    shape = None
    if params.family in ("nig", "hyperbolic"):
        try:
            shape = shape_coords(params)
        except (ParameterError, ValueError):
            shape = None
    return FitReport(params, loglik, gnorm <= cfg.grad_tol, iters, gnorm,
                     _stderr(x, ux, lam), shape, x.size, cfg.family)


@dataclass
class ProfilePoint:
    value: float
    loglik: float
    converged: bool
    error: str = None


def profile_loglik(samples, component, grid, cfg=None):
    """Profile log-likelihood over ``component`` (mu, beta, delta, gamma or lambda).

    A grid point whose inner maximization fails is reported with
    ``loglik = nan`` and the error text; the sweep continues.
    """
    cfg = cfg or FitConfig()
    if component not in COMPONENTS:
        raise ParameterError(f"unknown component {component!r}; choose from {COMPONENTS}")
    x, m, s = _standardize(samples)
    z = (x - m) / s
    if component == "lambda":
        lam, idx = None, 4
    else:
        lam, idx = cfg.lam, COMPONENTS.index(component)
    out = []
    for v in grid:
        v = float(v)
        try:
            if component in ("delta", "gamma") and not v > 0:
                raise ParameterError(f"{component} must be positive")
            ux = np.zeros(5 if lam is None else 4)
            ux[idx] = math.log(v) if component in ("delta", "gamma") else v
            uz_fixed = _x_to_z(ux, m, s)[idx]
            if component == "lambda":
                uz, ll, g, _ = _multistart(z, cfg, None, (4, v))
            else:
                uz, ll, g, _ = _multistart(z, cfg, lam, (idx, uz_fixed))
            out.append(ProfilePoint(v, ll * x.size - x.size * math.log(s),
                                    float(np.linalg.norm(g)) <= cfg.grad_tol))
        except (ValueError, ArithmeticError) as exc:
            out.append(ProfilePoint(v, math.nan, False, str(exc)))
    return out

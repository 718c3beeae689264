"""Generalized inverse Gaussian, generalized hyperbolic and related laws.

All densities are evaluated in log space; the linear-space functions are thin
wrappers. The generalized hyperbolic law is the normal variance-mean mixture

    X | W=w ~ N(mu + beta*w, w),    W ~ GIG(lambda, delta, gamma),

with ``gamma = sqrt(alpha**2 - beta**2)``. The samplers use exactly this
two-stage construction.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import ConvolutionError, DomainError, ParameterError, UndefinedMomentError
from .specfun import log_bessel_k, reg_inc_beta

SCHEMA_VERSION = 1
_LOG2 = math.log(2.0)
_LOG2PI = math.log(2.0 * math.pi)


# ---------------------------------------------------------------------------
# random streams


def random_stream(seed=None):
    """Return a reproducible counter-based generator for ``seed``.

    Identical seeds give bit-identical sample sequences. An existing
    ``numpy.random.Generator`` is passed through untouched.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = 0
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


# ---------------------------------------------------------------------------
# parameter types


def _check_gig_domain(lam, delta, gamma, what="GIG"):
    if not (np.isfinite(lam) and np.isfinite(delta) and np.isfinite(gamma)):
        raise ParameterError(f"{what}: parameters must be finite")
    if delta < 0 or gamma < 0:
        raise ParameterError(f"{what}: delta and gamma must be nonnegative")
    if lam < 0 and not delta > 0:
        raise ParameterError(f"{what}: lambda < 0 requires delta > 0")
    if lam == 0 and not (delta > 0 and gamma > 0):
        raise ParameterError(f"{what}: lambda = 0 requires delta > 0 and gamma > 0")
    if lam > 0 and not gamma > 0:
        raise ParameterError(f"{what}: lambda > 0 requires gamma > 0")


@dataclass(frozen=True)
class GigParams:
    """GIG(lambda, delta, gamma), density proportional to
    ``w**(lambda-1) * exp(-(delta**2/w + gamma**2*w)/2)``."""

    lam: float
    delta: float
    gamma: float

    def __post_init__(self):
        _check_gig_domain(self.lam, self.delta, self.gamma)


@dataclass(frozen=True)
class GhParams:
    """GH(lambda, alpha, beta, delta, mu).

    Construction validates the parameter domain and stores a subfamily tag in
    ``family``: ``"vg"`` (delta = 0), ``"asym_t"`` (alpha = |beta|, lambda < 0),
    ``"nig"`` (lambda = -1/2), ``"hyperbolic"`` (lambda = 1) or ``"gh"``.
    """

    lam: float
    alpha: float
    beta: float
    delta: float
    mu: float = 0.0
    family: str = field(init=False, compare=False)

    def __post_init__(self):
        lam, a, b, d = self.lam, self.alpha, self.beta, self.delta
        if not all(np.isfinite(v) for v in (lam, a, b, d, self.mu)):
            raise ParameterError("GH: parameters must be finite")
        if d < 0 or a < 0:
            raise ParameterError("GH: alpha and delta must be nonnegative")
        if lam > 0 and not a > abs(b):
            raise ParameterError("GH: lambda > 0 requires alpha > |beta|")
        if lam == 0 and not (d > 0 and a > abs(b)):
            raise ParameterError("GH: lambda = 0 requires delta > 0 and alpha > |beta|")
        if lam < 0 and not (d > 0 and a >= abs(b)):
            raise ParameterError("GH: lambda < 0 requires delta > 0 and alpha >= |beta|")
        if d == 0:
            tag = "vg"
        elif a == abs(b):
            tag = "asym_t"
        elif lam == -0.5:
            tag = "nig"
        elif lam == 1.0:
            tag = "hyperbolic"
        else:
            tag = "gh"
        object.__setattr__(self, "family", tag)

    @property
    def gamma(self):
        return math.sqrt(max(self.alpha**2 - self.beta**2, 0.0))

    @property
    def mixing(self):
        """The GIG law of the variance in the mixture representation."""
        return GigParams(self.lam, self.delta, self.gamma)

    @classmethod
    def nig(cls, alpha, beta, delta, mu=0.0):
        return cls(-0.5, alpha, beta, delta, mu)

    @classmethod
    def hyperbolic(cls, alpha, beta, delta, mu=0.0):
        return cls(1.0, alpha, beta, delta, mu)

    @classmethod
    def vg(cls, lam, alpha, beta, mu=0.0):
        return cls(lam, alpha, beta, 0.0, mu)

    @classmethod
    def student_t(cls, df, loc=0.0, scale=1.0, beta=0.0):
        """Asymmetric scaled t: ``lambda = -df/2``, ``alpha = |beta|``.

        At ``beta = 0`` this is ``loc + scale * T`` with ``T`` Student-t on
        ``df`` degrees of freedom (``delta = scale * sqrt(df)``).
        """
        return cls(-0.5 * df, abs(beta), beta, scale * math.sqrt(df), loc)

    def replace(self, **changes):
        kw = dict(lam=self.lam, alpha=self.alpha, beta=self.beta, delta=self.delta, mu=self.mu)
        kw.update(changes)
        return GhParams(**kw)


@dataclass(frozen=True)
class GenLogisticParams:
    """Generalized logistic law; ``(X - mu)/sigma`` is the logit of a Beta(alpha, beta)."""

    alpha: float
    beta: float
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0 and self.sigma > 0 and np.isfinite(self.mu)):
            raise ParameterError("generalized logistic requires alpha, beta, sigma > 0")


@dataclass(frozen=True, eq=False)
class MvGhParams:
    """n-dimensional GH law: ``X | W=w ~ N_n(mu + w*Delta@beta, w*Delta)``,
    ``W ~ GIG(lam, delta, gamma)``."""

    lam: float
    mu: np.ndarray
    beta: np.ndarray
    delta: float
    gamma: float
    Delta: np.ndarray

    def __post_init__(self):
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        beta = np.atleast_1d(np.asarray(self.beta, dtype=float))
        Delta = np.atleast_2d(np.asarray(self.Delta, dtype=float))
        n = mu.shape[0]
        if mu.ndim != 1 or beta.shape != (n,) or Delta.shape != (n, n):
            raise ParameterError("multivariate GH: dimension mismatch among mu, beta, Delta")
        if not np.allclose(Delta, Delta.T, rtol=1e-12, atol=0.0):
            raise ParameterError("multivariate GH: Delta must be symmetric")
        try:
            chol = np.linalg.cholesky(Delta)
        except np.linalg.LinAlgError:
            raise ParameterError("multivariate GH: Delta must be positive definite") from None
        _check_gig_domain(self.lam, self.delta, self.gamma, "multivariate GH")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "Delta", Delta)
        object.__setattr__(self, "_chol", chol)

    @property
    def n(self):
        return self.mu.shape[0]

    @property
    def alpha(self):
        return math.sqrt(float(self.beta @ self.Delta @ self.beta) + self.gamma**2)

    @property
    def mixing(self):
        return GigParams(self.lam, self.delta, self.gamma)


# ---------------------------------------------------------------------------
# log-space building blocks with their boundary limits


def _log_gig_norm(lam, delta, gamma):
    """log[(gamma/delta)**lam / K_lam(delta*gamma)], with the delta=0 / gamma=0 limits."""
    if delta > 0 and gamma > 0:
        return lam * math.log(gamma / delta) - log_bessel_k(lam, delta * gamma)
    if delta == 0:
        # K_lam(z) ~ Gamma(lam) 2**(lam-1) z**-lam
        return 2.0 * lam * math.log(gamma) - math.lgamma(lam) - (lam - 1.0) * _LOG2
    # gamma == 0, lam < 0
    return -2.0 * lam * math.log(delta) - math.lgamma(-lam) + (lam + 1.0) * _LOG2


def _log_kpow(nu, alpha, s):
    """log[K_nu(alpha*s) * (s/alpha)**nu] for arrays s >= 0, with alpha=0 and s=0 limits."""
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    pos = s > 0
    if alpha > 0:
        sp = s[pos]
        out[pos] = log_bessel_k(nu, alpha * sp) + nu * (np.log(sp) - math.log(alpha))
        if (~pos).any():
            if nu > 0:
                out[~pos] = math.lgamma(nu) + (nu - 1.0) * _LOG2 - 2.0 * nu * math.log(alpha)
            else:
                out[~pos] = np.inf
    else:
        # alpha = 0 requires nu < 0: K_nu(z) z**nu... -> Gamma(-nu) 2**(-nu-1) s**(2 nu)
        out[pos] = math.lgamma(-nu) + (-nu - 1.0) * _LOG2 + 2.0 * nu * np.log(s[pos])
        out[~pos] = np.inf
    return out


def _as_array(x):
    x = np.asarray(x, dtype=float)
    return x, x.shape == ()


def _ret(out, scalar):
    return float(out) if scalar else out


# ---------------------------------------------------------------------------
# GIG


def gig_logpdf(p, w):
    """Log density of GIG(lambda, delta, gamma) at ``w > 0``."""
    w, scalar = _as_array(w)
    if np.any(~(w > 0)):
        raise DomainError("GIG density requires w > 0")
    lam, d, g = p.lam, p.delta, p.gamma
    if d > 0 and g > 0:
        out = _log_gig_norm(lam, d, g) - _LOG2 + (lam - 1.0) * np.log(w) - 0.5 * (d * d / w + g * g * w)
    elif d == 0:
        rate = 0.5 * g * g
        out = lam * math.log(rate) - math.lgamma(lam) + (lam - 1.0) * np.log(w) - rate * w
    else:
        scale = 0.5 * d * d
        out = -lam * math.log(scale) - math.lgamma(-lam) + (lam - 1.0) * np.log(w) - scale / w
    return _ret(out, scalar)


def gig_pdf(p, w):
    return _ret(np.exp(gig_logpdf(p, w)), np.ndim(w) == 0)


def gig_moment(p, k):
    """``E W**k`` for ``W ~ GIG(p)``.

    Raises
    ------
    UndefinedMomentError
        For the gamma limit when ``lam + k <= 0`` and for the reciprocal-gamma
        limit when ``k >= -lam``.
    """
    if k == 0:
        return 1.0
    lam, d, g = p.lam, p.delta, p.gamma
    if d > 0 and g > 0:
        z = d * g
        return math.exp(k * math.log(d / g) + log_bessel_k(lam + k, z) - log_bessel_k(lam, z))
    if d == 0:
        if lam + k <= 0:
            raise UndefinedMomentError(f"E W^{k} is infinite for the gamma law with shape {lam}")
        return math.exp(math.lgamma(lam + k) - math.lgamma(lam) + k * math.log(2.0 / (g * g)))
    if k >= -lam:
        raise UndefinedMomentError(f"E W^{k} is infinite for the reciprocal gamma law with shape {-lam}")
    return math.exp(math.lgamma(-lam - k) - math.lgamma(-lam) + k * math.log(0.5 * d * d))


def ig_sample(delta, gamma, rng, n):
    """Inverse Gaussian draws, GIG(-1/2, delta, gamma): mean delta/gamma, shape delta**2.

    Uses the transformation-with-multiple-roots method of Michael, Schucany
    and Haas.
    """
    if not (delta > 0 and gamma > 0):
        raise ParameterError("inverse Gaussian requires delta > 0 and gamma > 0")
    m = delta / gamma
    shape = delta * delta
    y = rng.standard_normal(n) ** 2
    my = m * y
    # smaller root of the quadratic, written as m**2 / (larger root) to avoid cancellation
    x = m * m / (m + m * my / (2.0 * shape) + (m / (2.0 * shape)) * np.sqrt(4.0 * m * shape * y + my * my))
    u = rng.random(n)
    return np.where(u <= m / (m + x), x, m * m / x)


def _gig_mode(lam, omega):
    if lam >= 1.0:
        return ((lam - 1.0) + math.sqrt((lam - 1.0) ** 2 + omega * omega)) / omega
    return omega / (math.sqrt((1.0 - lam) ** 2 + omega * omega) + 1.0 - lam)


def _collect(n, draw, rng):
    """Gather ``n`` accepted variates from batched proposals ``draw(m, rng)``."""
    out = np.empty(n)
    filled = 0
    batch = max(64, int(1.5 * n))
    while filled < n:
        cand = draw(batch, rng)
        take = min(cand.size, n - filled)
        out[filled:filled + take] = cand[:take]
        filled += take
        batch = max(64, int(1.5 * (n - filled)) + 16)
    return out


def _gig_rou_shift(lam, omega):
    """Ratio-of-uniforms with mode shift (Dagpunar; Lehner) for y**(lam-1) exp(-omega/2 (y+1/y))."""
    m = _gig_mode(lam, omega)

    def t(y):
        return (lam - 1.0) * np.log(y) - 0.5 * omega * (y + 1.0 / y)

    tm = t(m)
    # extrema of (y - m) sqrt(g(y)) solve y^3 + a2 y^2 + a1 y + a0 = 0
    a2 = -(2.0 * (lam + 1.0) / omega + m)
    a1 = 2.0 * (lam - 1.0) * m / omega - 1.0
    a0 = m
    roots = np.roots([1.0, a2, a1, a0])
    roots = roots[np.abs(roots.imag) < 1e-9 * (1.0 + np.abs(roots.real))].real
    above = roots[roots > m]
    below = roots[(roots > 0) & (roots < m)]

    def v(y):
        return (y - m) * np.exp(0.5 * (t(y) - tm))

    v_plus = max(v(y) for y in above)
    v_minus = min(v(y) for y in below)

    def draw(size, rng):
        u = rng.random(size)
        vv = v_minus + (v_plus - v_minus) * rng.random(size)
        with np.errstate(divide="ignore", invalid="ignore"):
            y = vv / u + m
            ok = (y > 0) & (u > 0)
            ok[ok] &= 2.0 * np.log(u[ok]) <= t(y[ok]) - tm
        return y[ok]

    return draw


def _gig_small_omega(lam, omega):
    """Rejection from a three-piece hat for 0 <= lam < 1 and small omega (Hoermann-Leydold)."""
    b = omega
    m = _gig_mode(lam, b)
    x0 = b / (1.0 - lam)
    xs = max(x0, 2.0 / b)

    def logg(y):
        return (lam - 1.0) * np.log(y) - 0.5 * b * (y + 1.0 / y)

    k1 = math.exp(float(logg(m)))
    A1 = k1 * x0
    if x0 < 2.0 / b:
        k2 = math.exp(-b)
        A2 = k2 * (xs**lam - x0**lam) / lam if lam > 0 else k2 * math.log(2.0 / (b * b))
    else:
        k2 = 0.0
        A2 = 0.0
    k3 = xs ** (lam - 1.0)
    A3 = 2.0 * k3 * math.exp(-xs * b / 2.0) / b
    A = A1 + A2 + A3

    def draw(size, rng):
        u = rng.random(size)
        v = A * rng.random(size)
        y = np.empty(size)
        h = np.empty(size)
        r1 = v <= A1
        r2 = (~r1) & (v <= A1 + A2)
        r3 = ~(r1 | r2)
        y[r1] = x0 * v[r1] / A1
        h[r1] = k1
        if r2.any():
            vv = v[r2] - A1
            y[r2] = b * np.exp(vv * math.exp(b)) if lam == 0 else (x0**lam + vv * lam / k2) ** (1.0 / lam)
            h[r2] = k2 * y[r2] ** (lam - 1.0)
        vv = v[r3] - (A1 + A2)
        with np.errstate(divide="ignore", invalid="ignore"):
            y[r3] = -2.0 / b * np.log(np.exp(-xs * b / 2.0) - vv * b / (2.0 * k3))
        h[r3] = k3 * np.exp(-y[r3] * b / 2.0)
        ok = (y > 0) & np.isfinite(y)
        with np.errstate(divide="ignore"):
            ok[ok] &= np.log(u[ok] * h[ok]) <= logg(y[ok])
        return y[ok]

    return draw


def gig_sample(p, rng, n):
    """Draw ``n`` variates from GIG(p).

    Boundary cases use the gamma / reciprocal-gamma laws, lambda = -1/2 the
    exact inverse Gaussian sampler, and everything else rejection sampling
    on the standardized law ``y**(lam-1) exp(-omega/2 (y + 1/y))``,
    ``omega = delta*gamma``, scaled by ``delta/gamma``.
    """
    rng = random_stream(rng)
    lam, d, g = p.lam, p.delta, p.gamma
    if d == 0:
        return rng.gamma(lam, 2.0 / (g * g), size=n)
    if g == 0:
        return 1.0 / rng.gamma(-lam, 2.0 / (d * d), size=n)
    if lam == -0.5:
        return ig_sample(d, g, rng, n)
    omega = d * g
    a = abs(lam)
    if a < 1.0 and omega <= (2.0 / 3.0) * math.sqrt(1.0 - a):
        draw = _gig_small_omega(a, omega)
    else:
        draw = _gig_rou_shift(a, omega)
    y = _collect(n, draw, rng)
    if lam < 0:
        y = 1.0 / y
    return (d / g) * y


# ---------------------------------------------------------------------------
# GH


def _gh_general_logpdf(p, x):
    """Generic mixture-density formula, with only the delta/gamma boundary limits."""
    y = x - p.mu
    q = np.sqrt(p.delta**2 + y * y)
    return (
        -0.5 * _LOG2PI
        + _log_gig_norm(p.lam, p.delta, p.gamma)
        + _log_kpow(p.lam - 0.5, p.alpha, q)
        + p.beta * y
    )


def gh_logpdf(p, x):
    """Log density of GH(p) at ``x``.

    NIG and hyperbolic parameters use their closed forms; the variance-gamma
    (delta = 0) and alpha = |beta| boundaries use their analytic limits.
    """
    x, scalar = _as_array(x)
    y = x - p.mu
    if p.family == "nig" and p.alpha > 0:
        q = np.sqrt(p.delta**2 + y * y)
        out = (math.log(p.alpha * p.delta / math.pi) + p.delta * p.gamma
               + log_bessel_k(1.0, p.alpha * q) - np.log(q) + p.beta * y)
    elif p.family == "hyperbolic":
        g = p.gamma
        out = (math.log(g / (2.0 * p.alpha * p.delta)) - log_bessel_k(1.0, p.delta * g)
               - p.alpha * np.sqrt(p.delta**2 + y * y) + p.beta * y)
    else:
        out = _gh_general_logpdf(p, x)
    return _ret(out, scalar)


def gh_pdf(p, x):
    return _ret(np.exp(gh_logpdf(p, x)), np.ndim(x) == 0)


def gh_mean_var(p):
    """Mean and variance of GH(p) from the GIG moments of the mixing law."""
    g = p.mixing
    m1 = gig_moment(g, 1)
    try:
        m2 = gig_moment(g, 2)
    except UndefinedMomentError:
        if p.beta != 0:
            raise
        m2 = math.inf
    mean = p.mu + p.beta * m1
    var = m1 + p.beta**2 * (m2 - m1 * m1) if p.beta != 0 else m1
    return mean, var


def gh_sample(p, rng, n):
    """Two-stage mixture sampler: W ~ GIG, then X | W ~ N(mu + beta W, W)."""
    rng = random_stream(rng)
    w = gig_sample(p.mixing, rng, n)
    z = rng.standard_normal(n)
    return p.mu + p.beta * w + np.sqrt(w) * z


# Gauss-Legendre rule on [0, 1]
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W


def _gl_integrate(logpdf, a, b):
    """Vectorized 16-point Gauss-Legendre integral of exp(logpdf) over [a_i, b_i]."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    h = b - a
    nodes = a[:, None] + h[:, None] * _GL_X[None, :]
    vals = np.exp(logpdf(nodes.ravel())).reshape(nodes.shape)
    return h * (vals @ _GL_W)


def _knots(logpdf, mu, centre, scale, max_knots=20000):
    """Panel boundaries for piecewise quadrature of a unimodal-ish density.

    Panels are graded geometrically toward ``mu`` (the only possible
    non-smooth point), uniform over the bulk and geometric in the tails,
    extended until the density drops below 1e-16 of its peak.
    """
    h = scale / 8.0
    lo = min(mu, centre) - 6.0 * scale
    hi = max(mu, centre) + 6.0 * scale
    inner = np.arange(lo, hi + h, h)
    inner = inner[np.abs(inner - mu) >= h]
    grade = h * 2.0 ** -np.arange(0, 60)
    core = np.concatenate([inner, mu - grade, mu + grade, [mu]])
    core = np.unique(core)
    logpeak = np.max(logpdf(inner))
    floor = logpeak + math.log(1e-16)

    def tail(start, step_sign):
        pts = []
        x = start
        w = h
        while len(pts) < max_knots:
            w *= 1.25
            x = x + step_sign * w
            pts.append(x)
            if abs(x) > 1e300 or logpdf(np.array([x]))[0] < floor:
                break
        return pts

    left = tail(core[0], -1.0)
    right = tail(core[-1], 1.0)
    return np.unique(np.concatenate([left, core, right]))


def _cdf_1d(logpdf, x, mu, centre, scale, singular_at_mu=False):
    """CDF by piecewise Gauss-Legendre from the left truncation point."""
    from scipy.integrate import quad

    x, scalar = _as_array(x)
    knots = _knots(logpdf, mu, centre, scale)
    a, b = knots[:-1], knots[1:]
    panel = _gl_integrate(logpdf, a, b)
    f = lambda t: math.exp(logpdf(np.array([t]))[0])
    if singular_at_mu:
        for j in np.flatnonzero((a == mu) | (b == mu)):
            panel[j] = quad(f, a[j], b[j], epsabs=1e-14, epsrel=1e-12, limit=200)[0]
    cum = np.concatenate([[0.0], np.cumsum(panel)])
    flat = x.ravel()
    out = np.empty_like(flat)
    below = flat <= knots[0]
    above = flat >= knots[-1]
    out[below] = 0.0
    out[above] = cum[-1]
    mid = ~(below | above)
    if mid.any():
        xm = flat[mid]
        j = np.searchsorted(knots, xm, side="right") - 1
        part = np.zeros_like(xm)
        open_ = xm > knots[j]
        part[open_] = _gl_integrate(logpdf, knots[j][open_], xm[open_])
        if singular_at_mu:
            touch = open_ & ((knots[j] == mu) | (knots[np.minimum(j + 1, knots.size - 1)] == mu))
            for i in np.flatnonzero(touch):
                part[i] = quad(f, knots[j[i]], xm[i], epsabs=1e-14, epsrel=1e-12, limit=200)[0]
        out[mid] = cum[j] + part
    out = np.clip(out, 0.0, 1.0).reshape(x.shape)
    return _ret(out, scalar)


def _gh_scale(p):
    try:
        mean, var = gh_mean_var(p)
        if math.isfinite(var) and var > 0:
            return mean, math.sqrt(var)
    except UndefinedMomentError:
        pass
    return p.mu, p.delta


def gh_cdf(p, x):
    """Distribution function of GH(p), absolute error below 1e-8.

    Integrates the log-space density panel by panel from a left truncation
    point where the density is below 1e-16 of its peak.
    """
    centre, scale = _gh_scale(p)
    singular = p.family == "vg"
    return _cdf_1d(lambda t: gh_logpdf(p, t), x, p.mu, centre, scale, singular)


def nig_convolve(p1, p2):
    """NIG(a, b, d1, m1) * NIG(a, b, d2, m2) = NIG(a, b, d1 + d2, m1 + m2)."""
    if p1.family != "nig" or p2.family != "nig":
        raise ConvolutionError("nig_convolve requires two NIG laws")
    if p1.alpha != p2.alpha or p1.beta != p2.beta:
        raise ConvolutionError("NIG laws convolve in closed form only for equal alpha and beta")
    return GhParams.nig(p1.alpha, p1.beta, p1.delta + p2.delta, p1.mu + p2.mu)


def vg_convolve(p1, p2):
    """VG(l1, a, b, m1) * VG(l2, a, b, m2) = VG(l1 + l2, a, b, m1 + m2)."""
    if p1.family != "vg" or p2.family != "vg":
        raise ConvolutionError("vg_convolve requires two variance gamma laws")
    if p1.alpha != p2.alpha or p1.beta != p2.beta:
        raise ConvolutionError("VG laws convolve in closed form only for equal alpha and beta")
    return GhParams.vg(p1.lam + p2.lam, p1.alpha, p1.beta, p1.mu + p2.mu)


# ---------------------------------------------------------------------------
# generalized logistic


def genlog_logpdf(p, x):
    x, scalar = _as_array(x)
    z = (x - p.mu) / p.sigma
    out = (p.alpha * z - (p.alpha + p.beta) * np.logaddexp(0.0, z)
           - math.log(p.sigma) - special.betaln(p.alpha, p.beta))
    return _ret(out, scalar)


def genlog_pdf(p, x):
    return _ret(np.exp(genlog_logpdf(p, x)), np.ndim(x) == 0)


def genlog_cdf(p, x):
    x, scalar = _as_array(x)
    z = (x - p.mu) / p.sigma
    out = reg_inc_beta(p.alpha, p.beta, special.expit(z))
    return _ret(np.asarray(out), scalar)


def genlog_sample(p, rng, n):
    """``mu + sigma * logit(B)`` with ``B ~ Beta(alpha, beta)``."""
    rng = random_stream(rng)
    # log B - log(1-B) via two gammas keeps the extreme tails exact
    ga = rng.standard_gamma(p.alpha, n)
    gb = rng.standard_gamma(p.beta, n)
    return p.mu + p.sigma * (np.log(ga) - np.log(gb))


# ---------------------------------------------------------------------------
# multivariate GH


def mvgh_logpdf(p, x):
    """Log density of the n-dimensional GH law; ``x`` has shape (n,) or (m, n)."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != p.n:
        raise DomainError(f"expected points of dimension {p.n}, got {x.shape[1]}")
    y = x - p.mu
    sol = np.linalg.solve(p._chol, y.T)
    Q = np.sum(sol * sol, axis=0)
    logdet = 2.0 * np.sum(np.log(np.diag(p._chol)))
    s = np.sqrt(p.delta**2 + Q)
    out = (
        -0.5 * p.n * _LOG2PI
        - 0.5 * logdet
        + _log_gig_norm(p.lam, p.delta, p.gamma)
        + _log_kpow(p.lam - 0.5 * p.n, p.alpha, s)
        + y @ p.beta
    )
    return float(out[0]) if single else out


def mvgh_sample(p, rng, n):
    """``mu + W Delta beta + sqrt(W) L Z`` with ``W ~ GIG``; returns shape (n, dim)."""
    rng = random_stream(rng)
    w = gig_sample(p.mixing, rng, n)
    z = rng.standard_normal((n, p.n))
    return p.mu + w[:, None] * (p.Delta @ p.beta) + np.sqrt(w)[:, None] * (z @ p._chol.T)


# ---------------------------------------------------------------------------
# serialization


def params_to_dict(p):
    """Flat JSON-ready description of any parameter object in this module."""
    if isinstance(p, GhParams):
        return {"schema_version": SCHEMA_VERSION, "family": p.family, "lambda": p.lam,
                "alpha": p.alpha, "beta": p.beta, "delta": p.delta, "mu": p.mu}
    if isinstance(p, GigParams):
        return {"schema_version": SCHEMA_VERSION, "family": "gig", "lambda": p.lam,
                "delta": p.delta, "gamma": p.gamma}
    if isinstance(p, GenLogisticParams):
        return {"schema_version": SCHEMA_VERSION, "family": "genlog", "alpha": p.alpha,
                "beta": p.beta, "mu": p.mu, "sigma": p.sigma}
    if isinstance(p, MvGhParams):
        return {"schema_version": SCHEMA_VERSION, "family": "mvgh", "n": p.n, "lambda": p.lam,
                "mu": p.mu.tolist(), "beta": p.beta.tolist(), "delta": p.delta,
                "gamma": p.gamma, "Delta": p.Delta.tolist()}
    raise TypeError(f"cannot serialize {type(p).__name__}")


_FIXED_LAMBDA = {"nig": -0.5, "hyperbolic": 1.0}


def params_from_dict(d):
    """Inverse of :func:`params_to_dict`; ``lambda`` may be omitted for nig/hyperbolic."""
    try:
        fam = d.get("family", "gh").lower()
        if fam in ("gh", "nig", "hyperbolic", "vg", "asym_t"):
            lam = d.get("lambda", _FIXED_LAMBDA.get(fam))
            if lam is None:
                raise ParameterError(f"family {fam!r} needs 'lambda'")
            if fam in _FIXED_LAMBDA and float(lam) != _FIXED_LAMBDA[fam]:
                raise ParameterError(f"family {fam!r} has lambda {_FIXED_LAMBDA[fam]}, got {lam}")
            delta = 0.0 if fam == "vg" else float(d["delta"])
            return GhParams(float(lam), float(d["alpha"]), float(d.get("beta", 0.0)), delta,
                            float(d.get("mu", 0.0)))
        if fam == "gig":
            return GigParams(float(d["lambda"]), float(d["delta"]), float(d["gamma"]))
        if fam == "genlog":
            return GenLogisticParams(float(d["alpha"]), float(d["beta"]), float(d.get("mu", 0.0)),
                                     float(d.get("sigma", 1.0)))
        if fam == "mvgh":
            p = MvGhParams(float(d["lambda"]), d["mu"], d["beta"], float(d["delta"]),
                           float(d["gamma"]), d["Delta"])
            if "n" in d and int(d["n"]) != p.n:
                raise ParameterError(f"declared n={d['n']} does not match mu of length {p.n}")
            return p
    except KeyError as exc:
        raise ParameterError(f"missing parameter field {exc.args[0]!r}") from None
    raise ParameterError(f"unknown family {d.get('family')!r}")

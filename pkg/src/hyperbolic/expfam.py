"""Exact inference for exponential families on a finite support.

A model assigns each outcome ``x`` a canonical statistic ``t(x)`` in R^k and
a base weight ``b(x)``; the density is ``b(x) exp(theta . t(x) - kappa(theta))``.
On a finite support every quantity below is an exact finite sum, so existence,
inversion and cut claims can be checked to rounding error.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .dist import random_stream
from .errors import DomainError, ExistenceError, HyperbolicError, ParameterError

INTERIOR = "Interior"
BOUNDARY = "Boundary"
EXTERIOR = "Exterior"

HULL_TOL = 1e-9
RANK_TOL = 1e-10


@dataclass(frozen=True)
class ExpFamModel:
    """Finite-support exponential family.

    Parameters
    ----------
    support_points : sequence
        Outcome labels.
    t_values : array_like, shape (N, k)
        Canonical statistic per outcome.
    log_b : array_like, shape (N,), optional
        Log base weight per outcome; zeros by default.
    theta_domain : str
        Description of the parameter domain; the whole of R^k by default.
    """

    support_points: tuple
    t_values: np.ndarray
    log_b: np.ndarray = None
    theta_domain: str = "R^k"

    def __post_init__(self):
        t = np.asarray(self.t_values, dtype=float)
        if t.ndim == 1:
            t = t[:, None]
        n = t.shape[0]
        if n == 0:
            raise ParameterError("support must be nonempty")
        if len(self.support_points) != n:
            raise ParameterError(f"{len(self.support_points)} support points but {n} t-values")
        lb = np.zeros(n) if self.log_b is None else np.asarray(self.log_b, dtype=float)
        if lb.shape != (n,):
            raise ParameterError("log_b must have one entry per support point")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(lb))):
            raise ParameterError("t_values and log_b must be finite")
        object.__setattr__(self, "support_points", tuple(self.support_points))
        object.__setattr__(self, "t_values", t)
        object.__setattr__(self, "log_b", lb)
        _check_minimal(t)

    @property
    def k(self):
        return self.t_values.shape[1]

    @property
    def size(self):
        return self.t_values.shape[0]

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(d["support_points"], d["t_values"], d.get("log_b"),
                       d.get("theta_domain", "R^k"))
        except KeyError as exc:
            raise ParameterError(f"model descriptor lacks {exc.args[0]!r}") from None

    def to_dict(self):
        return {"support_points": list(self.support_points), "t_values": self.t_values.tolist(),
                "log_b": self.log_b.tolist(), "theta_domain": self.theta_domain}


def _check_minimal(t):
    """Affine independence of the statistic over the support, one column at a time."""
    a = np.column_stack([np.ones(t.shape[0]), t])
    for j in range(1, a.shape[1]):
        sv = np.linalg.svd(a[:, : j + 1], compute_uv=False)
        if sv.size < j + 1 or sv[-1] <= RANK_TOL * sv[0]:
            raise ParameterError(
                f"representation is not minimal: t component {j - 1} is affinely dependent "
                "on the constant and the earlier components over the support"
            )


def _theta(model, theta):
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (model.k,):
        raise DomainError(f"theta has shape {theta.shape}, model dimension is {model.k}")
    return theta


def _logits(model, theta):
    return model.t_values @ theta + model.log_b


def _lse(z):
    m = z.max()
    return m + np.log(np.exp(z - m).sum())


def kappa(model, theta):
    """Log normalizer ``log sum_x b(x) exp(theta . t(x))``."""
    return float(_lse(_logits(model, _theta(model, theta))))


def probabilities(model, theta):
    z = _logits(model, _theta(model, theta))
    return np.exp(z - _lse(z))


def tau(model, theta):
    """Mean-value map ``E_theta t(X)``, the gradient of kappa."""
    return probabilities(model, theta) @ model.t_values


def tau_cov(model, theta):
    """Covariance of ``t(X)`` under theta, the Hessian of kappa."""
    w = probabilities(model, theta)
    c = model.t_values - w @ model.t_values
    return (c * w[:, None]).T @ c


# ---------------------------------------------------------------------------
# existence of the MLE


@dataclass(frozen=True)
class ExistenceVerdict:
    classification: str
    certificate: np.ndarray = None
    margin: float = float("nan")

    def __post_init__(self):
        if (self.certificate is None) != (self.classification == INTERIOR):
            raise ValueError("certificate is present exactly when the point is not interior")

    def to_dict(self):
        cert = None if self.certificate is None else np.asarray(self.certificate).tolist()
        return {"classification": self.classification, "certificate": cert, "margin": self.margin}


def mle_exists(model, t_obs):
    """Classify ``t_obs`` against the interior of the convex hull C of the t-values.

    The LP finds a direction ``d`` with ``d . (t_obs - centroid) > 0`` that
    minimises ``z = max_i d . (t_i - t_obs)``. ``z > 0`` for every such d
    exactly when t_obs is interior; otherwise the minimising d is a
    supporting direction (``d . t_i <= d . t_obs`` for all i). Points with
    margin ``|z| <= 1e-9`` are Boundary.

    Returns
    -------
    ExistenceVerdict
        Certificate is the unit separating direction when not Interior.
    """
    t_obs = np.atleast_1d(np.asarray(t_obs, dtype=float))
    if t_obs.shape != (model.k,):
        raise DomainError(f"t_obs has shape {t_obs.shape}, model dimension is {model.k}")
    t = model.t_values
    centre = t.mean(axis=0)
    v = t_obs - centre
    spread = float(np.abs(t - centre).max())
    if np.linalg.norm(v) <= 1e-14 * max(spread, 1.0):
        # the centroid of an affinely spanning set is interior
        return ExistenceVerdict(INTERIOR, None, float("inf"))
    k = model.k
    # variables (d, z): minimise z
    c = np.zeros(k + 1)
    c[-1] = 1.0
    a_ub = np.column_stack([t - t_obs, -np.ones(t.shape[0])])
    b_ub = np.zeros(t.shape[0])
    a_eq = np.append(v / np.linalg.norm(v), 0.0)[None, :]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=[1.0],
                  bounds=[(None, None)] * (k + 1), method="highs")
    if res.status != 0:
        raise HyperbolicError(f"hull LP failed: {res.message}")
    d = res.x[:k]
    # re-evaluate the margin exactly for the returned direction (an upper bound on the optimum)
    z = float(np.max((t - t_obs) @ d) / (d @ v))
    if z > HULL_TOL:
        return ExistenceVerdict(INTERIOR, None, z)
    cls = BOUNDARY if z >= -HULL_TOL else EXTERIOR
    return ExistenceVerdict(cls, d / np.linalg.norm(d), z)


def _newton(grad_hess, f, x0, tol, max_iter=200):
    """Damped Newton for a smooth strictly convex objective."""
    x = np.array(x0, dtype=float)
    fx = f(x)
    for _ in range(max_iter):
        g, h = grad_hess(x)
        if np.linalg.norm(g) <= tol:
            return x, g
        step = np.linalg.solve(h, g)
        gnorm = np.linalg.norm(g)
        s = 1.0
        while True:
            xn = x - s * step
            fn = f(xn)
            if fn <= fx - 1e-4 * s * (g @ step) or s < 1e-12:
                break
            # close to the optimum f is flat to rounding; fall back on the gradient norm
            if fn <= fx + 1e-13 * max(1.0, abs(fx)) and np.linalg.norm(grad_hess(xn)[0]) < gnorm:
                break
            s *= 0.5
        x, fx = xn, fn
    g, _ = grad_hess(x)
    return x, g


def tau_inverse(model, t_target, tol=1e-12):
    """Maximum likelihood estimate ``theta_hat = tau^{-1}(t_target)``.

    Newton iteration on ``kappa(theta) - theta . t_target`` with the
    covariance of t as Hessian.

    Raises
    ------
    ExistenceError
        If ``t_target`` is not interior to the hull; carries the verdict.
    """
    t_target = np.atleast_1d(np.asarray(t_target, dtype=float))
    verdict = mle_exists(model, t_target)
    if verdict.classification != INTERIOR:
        raise ExistenceError(f"no MLE: t is {verdict.classification} to the convex support",
                             verdict)

    def f(th):
        return kappa(model, th) - th @ t_target

    def gh(th):
        w = probabilities(model, th)
        m = w @ model.t_values
        c = model.t_values - m
        return m - t_target, (c * w[:, None]).T @ c

    theta, g = _newton(gh, f, np.zeros(model.k), tol)
    if np.linalg.norm(g) > 1e-10:
        raise HyperbolicError(f"tau_inverse stalled with residual {np.linalg.norm(g):.3g}")
    return theta


# ---------------------------------------------------------------------------
# mixed parametrization


def _split(model, split):
    i1 = np.atleast_1d(np.asarray(split, dtype=int))
    if i1.size == 0 or i1.size >= model.k or len(set(i1.tolist())) != i1.size \
            or i1.min() < 0 or i1.max() >= model.k:
        raise DomainError("split must name a nonempty proper subset of the statistic components")
    i2 = np.setdiff1d(np.arange(model.k), i1)
    return i1, i2


def mixed_param(model, split, theta):
    """``(tau^(1)(theta), theta^(2))`` for the block of components listed in ``split``."""
    theta = _theta(model, theta)
    i1, i2 = _split(model, split)
    return tau(model, theta)[i1], theta[i2]


def _conditional_model(model, i1, i2, theta2):
    """Family in theta^(1) alone, with the theta^(2) tilt folded into the base weights."""
    return ExpFamModel(model.support_points, model.t_values[:, i1],
                       model.log_b + model.t_values[:, i2] @ theta2)


def mixed_param_inverse(model, split, tau1, theta2):
    """Recover theta from the mixed coordinates ``(tau^(1), theta^(2))``."""
    i1, i2 = _split(model, split)
    theta2 = np.atleast_1d(np.asarray(theta2, dtype=float))
    sub = _conditional_model(model, i1, i2, theta2)
    theta = np.empty(model.k)
    theta[i1] = tau_inverse(sub, tau1)
    theta[i2] = theta2
    return theta


@dataclass
class CutReport:
    max_abs_diff: float
    passed: bool
    n_rectangles: int
    tolerance: float
    warning: str = None
    diffs: list = field(default_factory=list, repr=False)

    def to_dict(self):
        return {"max_abs_diff": self.max_abs_diff, "passed": self.passed,
                "n_rectangles": self.n_rectangles, "tolerance": self.tolerance,
                "warning": self.warning}


def cut_check(model, split, grid, tol=1e-6):
    """Numerical additive-separability test of theta^(1) in mixed coordinates.

    If t^(1) is a cut then ``theta^(1) = phi(tau^(1)) + chi(theta^(2))``.
    Each pair of grid points a, b spans a rectangle with corners
    ``(tau1_a | tau1_b) x (theta2_a | theta2_b)`` and the mixed difference

        theta1(tau1_b, theta2_b) - theta1(tau1_b, theta2_a)
            - theta1(tau1_a, theta2_b) + theta1(tau1_a, theta2_a)

    vanishes under separability. The test is necessary, not sufficient;
    variation independence of the blocks is not checked.
    """
    i1, i2 = _split(model, split)
    coords = [mixed_param(model, i1, th) for th in grid]
    m = len(coords)
    if m < 2:
        msg = "cut_check on fewer than two grid points is vacuous"
        warnings.warn(msg, stacklevel=2)
        return CutReport(0.0, True, 0, tol, msg)
    th1 = np.empty((m, m, i1.size))  # th1[a, b] = theta1(tau1_a, theta2_b)
    for b in range(m):
        sub = _conditional_model(model, i1, i2, coords[b][1])
        for a in range(m):
            th1[a, b] = tau_inverse(sub, coords[a][0])
    diffs = []
    for a in range(m):
        for b in range(a + 1, m):
            d = th1[b, b] - th1[b, a] - th1[a, b] + th1[a, a]
            diffs.append(float(np.max(np.abs(d))))
    worst = max(diffs)
    return CutReport(worst, worst <= tol, len(diffs), tol, None, diffs)


# ---------------------------------------------------------------------------
# plausibility and the Neyman-Scott example


def plausibility(model, x_obs):
    """Return ``theta -> f(x_obs; theta) / max_y f(y; theta)``."""
    try:
        idx = model.support_points.index(x_obs)
    except ValueError:
        raise DomainError(f"{x_obs!r} is not a support point") from None

    def pi(theta):
        z = _logits(model, _theta(model, theta))
        return float(np.exp(z[idx] - z.max()))

    return pi


@dataclass(frozen=True)
class NeymanScottSummary:
    n_pairs: int
    sigma2: float
    reps: int
    mean_hat: float
    se_hat: float
    mean_tilde: float
    se_tilde: float
    ssd_scaled_mean: float
    ssd_scaled_var: float

    def to_dict(self):
        return dict(self.__dict__)


def neyman_scott_sim(n_pairs, sigma2, xi, rng, reps):
    """Monte Carlo for pairs ``X_ij ~ N(xi_i, sigma2)``, j = 1, 2.

    ``sigma_hat2 = SSD/(2n)`` is the full MLE and ``sigma_tilde2 = SSD/n`` the
    estimator based on SSD alone, with ``SSD = sum_ij (X_ij - Xbar_i)**2``.
    ``ssd_scaled_*`` summarise ``SSD / (2 sigma2)``.
    """
    n_pairs = int(n_pairs)
    reps = int(reps)
    if n_pairs < 2 or reps < 1:
        raise ParameterError("need n_pairs >= 2 and reps >= 1")
    if not sigma2 > 0:
        raise ParameterError("sigma2 must be positive")
    xi = np.broadcast_to(np.asarray(xi, dtype=float), (n_pairs,))
    rng = random_stream(rng)
    x = xi[None, :, None] + np.sqrt(sigma2) * rng.standard_normal((reps, n_pairs, 2))
    ssd = 0.5 * ((x[..., 0] - x[..., 1]) ** 2).sum(axis=1)
    hat = ssd / (2 * n_pairs)
    tilde = ssd / n_pairs
    scaled = ssd / (2.0 * sigma2)
    se = (lambda a: float(a.std(ddof=1) / np.sqrt(reps)) if reps > 1 else float("nan"))
    return NeymanScottSummary(n_pairs, float(sigma2), reps, float(hat.mean()), se(hat),
                              float(tilde.mean()), se(tilde), float(scaled.mean()),
                              float(scaled.var(ddof=1)) if reps > 1 else float("nan"))

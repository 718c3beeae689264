"""Simulators and diagnostics for hyperbolic-type stochastic processes."""
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .dist import GhParams, ig_sample, random_stream
from .errors import DomainError, ParameterError

_CHUNK = 1 << 20


@dataclass(frozen=True)
class PathGrid:
    t0: float
    dt: float
    n_steps: int

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ParameterError("grid step dt must be positive")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ParameterError("grid needs n_steps >= 1")
        object.__setattr__(self, "n_steps", int(self.n_steps))

    @property
    def times(self):
        return self.t0 + self.dt * np.arange(self.n_steps + 1)

    @classmethod
    def parse(cls, text):
        """Parse ``"t0=0,dt=0.01,n=10000"``."""
        try:
            kv = dict(item.split("=", 1) for item in text.replace(" ", "").split(",") if item)
            return cls(float(kv.get("t0", 0.0)), float(kv["dt"]), int(kv["n"]))
        except (KeyError, ValueError) as exc:
            raise ParameterError(f"bad grid {text!r}: expected t0=..,dt=..,n=..") from exc


@dataclass(frozen=True)
class SamplePath:
    grid: PathGrid
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.grid.n_steps + 1:
            raise ParameterError("path length must be n_steps + 1")

    @property
    def times(self):
        return self.grid.times


# ---------------------------------------------------------------------------
# hyperbolic diffusion


def hyp_drift(p, sigma, x):
    """Drift ``sigma**2/2 * (beta - alpha (x - mu) / sqrt(delta**2 + (x - mu)**2))``."""
    y = np.asarray(x, dtype=float) - p.mu
    return 0.5 * sigma * sigma * (p.beta - p.alpha * y / np.sqrt(p.delta**2 + y * y))


def sim_hyp_diffusion(p, sigma, x0, grid, rng, thin=1):
    """Euler-Maruyama path of the hyperbolic diffusion.

    The stationary law of the continuous process is H(alpha, beta, delta, mu).
    ``thin`` keeps every thin-th state, so the returned grid has step
    ``dt*thin``; the noise sequence is the same whatever ``thin`` is.
    """
    if p.family != "hyperbolic":
        raise ParameterError("the hyperbolic diffusion needs hyperbolic parameters")
    if not sigma > 0:
        raise ParameterError("sigma must be positive")
    thin = int(thin)
    if thin < 1 or grid.n_steps % thin:
        raise ParameterError("thin must be a positive divisor of n_steps")
    rng = random_stream(rng)
    out = [np.array([float(x0)])]
    x = float(x0)
    left = grid.n_steps
    chunk = max(thin, (_CHUNK // thin) * thin)
    while left:
        m = min(chunk, left)
        z = rng.standard_normal(m)
        x, kept = kernels.hyp_diffusion(x, z, thin, p.alpha, p.beta, p.delta, p.mu, sigma, grid.dt)
        out.append(kept)
        left -= m
    return SamplePath(PathGrid(grid.t0, grid.dt * thin, grid.n_steps // thin), np.concatenate(out))


# ---------------------------------------------------------------------------
# Levy processes


def sim_ig(delta, gamma, rng, n):
    """Inverse Gaussian draws, the GIG(-1/2, delta, gamma) law."""
    return ig_sample(delta, gamma, random_stream(rng), n)


def _levy_path(grid, increments):
    return SamplePath(grid, np.concatenate(([0.0], np.cumsum(increments))))


def sim_nig_levy(unit, grid, rng):
    """NIG Levy path started at 0: increments NIG(alpha, beta, delta*dt, mu*dt).

    Each increment is ``mu*dt + beta*W + sqrt(W)*Z`` with ``W ~ IG(delta*dt, gamma)``.
    """
    if unit.family != "nig":
        raise ParameterError("sim_nig_levy needs NIG unit parameters")
    if not unit.gamma > 0:
        raise ParameterError("sim_nig_levy needs alpha > |beta|")
    rng = random_stream(rng)
    n, dt = grid.n_steps, grid.dt
    w = ig_sample(unit.delta * dt, unit.gamma, rng, n)
    z = rng.standard_normal(n)
    return _levy_path(grid, unit.mu * dt + unit.beta * w + np.sqrt(w) * z)


def sim_vg_levy(unit, grid, rng):
    """VG Levy path: increments VG(lambda*dt, alpha, beta, mu*dt) by gamma subordination."""
    if unit.family != "vg":
        raise ParameterError("sim_vg_levy needs VG unit parameters")
    rng = random_stream(rng)
    n, dt = grid.n_steps, grid.dt
    w = rng.gamma(unit.lam * dt, 2.0 / unit.gamma**2, n)
    z = rng.standard_normal(n)
    return _levy_path(grid, unit.mu * dt + unit.beta * w + np.sqrt(w) * z)


# ---------------------------------------------------------------------------
# AR(1) and OU superpositions


@dataclass(frozen=True)
class Ar1SuperpositionSpec:
    """Sum of independent stationary Gaussian AR(1) components.

    ``phi`` are the shares of the total stationary ``variance`` carried by
    each component, so the autocorrelation is ``sum phi_i rho_i**k``.
    """

    rho: np.ndarray
    phi: np.ndarray
    variance: float = 1.0

    def __post_init__(self):
        rho = np.atleast_1d(np.asarray(self.rho, dtype=float))
        phi = np.atleast_1d(np.asarray(self.phi, dtype=float))
        if rho.shape != phi.shape or rho.ndim != 1 or rho.size == 0:
            raise ParameterError("rho and phi must be nonempty vectors of equal length")
        if np.any(np.abs(rho) >= 1):
            raise ParameterError("AR(1) components need |rho| < 1")
        if np.any(phi < 0) or abs(phi.sum() - 1.0) > 1e-12:
            raise ParameterError("phi must be nonnegative and sum to 1")
        if not self.variance > 0:
            raise ParameterError("variance must be positive")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "phi", phi)

    @property
    def m(self):
        return self.rho.size

    @property
    def innovation_std(self):
        return np.sqrt(self.phi * self.variance * (1.0 - self.rho**2))


def sim_ar1_superposition(spec, grid, rng):
    """Sum of m stationary AR(1) paths, each started from its stationary law."""
    rng = random_stream(rng)
    n = grid.n_steps
    total = np.zeros(n + 1)
    for r, ph, s in zip(spec.rho, spec.phi, spec.innovation_std):
        x0 = math.sqrt(ph * spec.variance) * rng.standard_normal()
        eps = s * rng.standard_normal(n)
        total += kernels.ar1_filter(float(r), x0, eps)
    return SamplePath(grid, total)


def ar1_superposition_acf(spec, k):
    """``sum_i phi_i rho_i**k``."""
    k = np.asarray(k)
    return np.sum(spec.phi * spec.rho ** k[..., None], axis=-1)


@dataclass(frozen=True)
class OuSuperpositionSpec:
    gamma: np.ndarray
    weight: np.ndarray

    def __post_init__(self):
        g = np.atleast_1d(np.asarray(self.gamma, dtype=float))
        w = np.atleast_1d(np.asarray(self.weight, dtype=float))
        if g.shape != w.shape or g.ndim != 1 or g.size == 0:
            raise ParameterError("gamma and weight must be nonempty vectors of equal length")
        if np.any(g <= 0):
            raise ParameterError("OU rates must be positive")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ParameterError("weights must be nonnegative and sum to 1")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "weight", w)

    @property
    def m(self):
        return self.gamma.size


def ou_superposition_acf(spec, lag):
    """``sum_i delta_i exp(-gamma_i * lag)`` for ``lag >= 0``."""
    lag = np.asarray(lag, dtype=float)
    if np.any(lag < 0):
        raise DomainError("lag must be nonnegative")
    return np.sum(spec.weight * np.exp(-spec.gamma * lag[..., None]), axis=-1)


# ---------------------------------------------------------------------------
# spectra


def periodogram(path):
    """Periodogram ``I_j = |sum_t x_t e^{-2 pi i j t/n}|**2 / n`` of the demeaned path.

    Returned at the positive Fourier frequencies ``f_j = j / (n dt)``,
    ``j = 1..n//2``. For white noise ``E I_j`` is the variance.
    """
    if isinstance(path, SamplePath):
        x, dt = np.asarray(path.values, dtype=float), path.grid.dt
    else:
        x, dt = np.asarray(path, dtype=float), 1.0
    n = x.size
    if n < 65:
        raise DomainError("periodogram needs at least 64 steps")
    spec = np.abs(np.fft.rfft(x - x.mean())) ** 2 / n
    j = np.arange(1, n // 2 + 1)
    return j / (n * dt), spec[1:]


def parseval_variance(estimates, n):
    """Variance (ddof 0) implied by the periodogram of a length-``n`` path."""
    s = 2.0 * np.sum(estimates)
    if n % 2 == 0:
        s -= estimates[-1]
    return s / n


def inertial_slope(freqs, estimates, band):
    """OLS slope of log estimate on log frequency over ``band = (f_lo, f_hi)``."""
    freqs = np.asarray(freqs, dtype=float)
    estimates = np.asarray(estimates, dtype=float)
    lo, hi = band
    sel = (freqs >= lo) & (freqs <= hi) & (estimates > 0)
    if sel.sum() < 10:
        raise DomainError(f"band {band} holds {int(sel.sum())} frequencies, need at least 10")
    return float(np.polyfit(np.log(freqs[sel]), np.log(estimates[sel]), 1)[0])


# ---------------------------------------------------------------------------
# sand grains


@dataclass(frozen=True)
class GrainHopSpec:
    hop_rate: float
    mean_hop: float
    burial_rate: float
    mean_burial: float

    def __post_init__(self):
        for name in ("hop_rate", "mean_hop", "burial_rate", "mean_burial"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ParameterError(f"{name} must be positive and finite")


@dataclass
class GrainHops:
    horizon: float
    hop_times: np.ndarray
    displacements: np.ndarray
    burials: np.ndarray = field(repr=False)

    @property
    def total_displacement(self):
        return float(self.displacements.sum())

    @property
    def buried_fraction(self):
        if self.burials.size == 0:
            return 0.0
        return float(np.sum(np.minimum(self.burials[:, 1], self.horizon) - self.burials[:, 0]) / self.horizon)


def sim_grain_hops(spec, horizon, rng):
    """Grain moving by exponential hops at Poisson times, interrupted by burials.

    The grain alternates between active periods, ending at rate
    ``burial_rate``, and buried periods of mean length ``mean_burial``.
    Hops occur only while active. ``burials`` holds (start, end) rows.
    """
    if not horizon > 0:
        raise ParameterError("horizon must be positive")
    rng = random_stream(rng)
    times, burials = [], []
    t = 0.0
    while t < horizon:
        end = min(t + rng.exponential(1.0 / spec.burial_rate), horizon)
        k = rng.poisson(spec.hop_rate * (end - t))
        times.append(np.sort(rng.uniform(t, end, k)))
        if end >= horizon:
            break
        b = rng.exponential(spec.mean_burial)
        burials.append((end, end + b))
        t = end + b
    hop_times = np.concatenate(times) if times else np.empty(0)
    disp = rng.exponential(spec.mean_hop, hop_times.size)
    return GrainHops(float(horizon), hop_times, disp, np.array(burials).reshape(-1, 2))


def nig_genesis_sim(mu, beta, barrier, drift, rng, n):
    """Log-sizes from the first-passage construction.

    The passage time of a unit-variance Brownian motion with ``drift`` to
    ``barrier`` is IG with delta = barrier, gamma = drift; the log-size is
    then N(mu + beta*tau, tau), which is NIG(sqrt(drift**2 + beta**2), beta, barrier, mu).
    """
    if not (barrier > 0 and drift > 0):
        raise ParameterError("barrier and drift must be positive")
    rng = random_stream(rng)
    tau = ig_sample(barrier, drift, rng, n)
    return mu + beta * tau + np.sqrt(tau) * rng.standard_normal(n)


def genesis_params(mu, beta, barrier, drift):
    return GhParams.nig(math.hypot(drift, beta), beta, barrier, mu)

"""Pure-Python/numpy twin of the compiled ``_kernels`` extension.

Same signatures, same algorithms. Used when the extension is unavailable or
when ``HYPERBOLIC_PURE_PYTHON`` is set.
"""
import math

import numpy as np
from scipy.signal import lfilter

EPS = 1.0e-16
MAXIT = 100000

# Taylor coefficients of 1/Gamma(1+x) about 0.
RGAM = np.array([
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
])


def _temme_gammas(mu):
    mu2 = mu * mu
    even = np.zeros_like(mu)
    odd = np.zeros_like(mu)
    for j in range(24, -1, -2):
        even = even * mu2 + RGAM[j]
    for j in range(23, 0, -2):
        odd = odd * mu2 + RGAM[j]
    return -odd, even, even + mu * odd, even - mu * odd


def _temme(xmu, x):
    """Series for log K_mu(x) and K_{mu+1}/K_mu, |mu| <= 1/2, x < 2."""
    xmu2 = xmu * xmu
    x2 = 0.5 * x
    pimu = np.pi * xmu
    with np.errstate(invalid="ignore", divide="ignore"):
        fact = np.where(np.abs(pimu) < EPS, 1.0, pimu / np.sin(pimu))
        d = -np.log(x2)
        e = xmu * d
        fact2 = np.where(np.abs(e) < EPS, 1.0, np.sinh(e) / e)
    gam1, gam2, gampl, gammi = _temme_gammas(xmu)
    ff = fact * (gam1 * np.cosh(e) + gam2 * fact2 * d)
    s = ff.copy()
    e = np.exp(e)
    p = 0.5 * e / gampl
    q = 0.5 / (e * gammi)
    c = np.ones_like(x)
    d = x2 * x2
    s1 = p.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, MAXIT):
        ff = np.where(active, (i * ff + p + q) / (i * i - xmu2), ff)
        c = np.where(active, c * d / i, c)
        p = np.where(active, p / (i - xmu), p)
        q = np.where(active, q / (i + xmu), q)
        dl = np.where(active, c * ff, 0.0)
        s = s + dl
        s1 = s1 + np.where(active, c * (p - i * ff), 0.0)
        active &= ~(np.abs(dl) < np.abs(s) * EPS)
        if not active.any():
            break
    return np.log(s), s1 * (2.0 / x) / s


def _steed(xmu, x):
    """Continued fraction for log K_mu(x) and K_{mu+1}/K_mu, x >= 2."""
    xmu2 = xmu * xmu
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d.copy()
    delh = d.copy()
    q1 = np.zeros_like(x)
    q2 = np.ones_like(x)
    a1 = 0.25 - xmu2
    q = a1.copy()
    c = a1.copy()
    a = -a1
    s = 1.0 + q * delh
    active = np.ones(x.shape, dtype=bool)
    for i in range(2, MAXIT):
        a = a - 2 * (i - 1)
        c = -a * c / i
        with np.errstate(invalid="ignore", divide="ignore"):
            qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q = q + c * qnew
        b = b + 2.0
        d = 1.0 / (b + a * d)
        delh_new = (b * d - 1.0) * delh
        dels = q * delh_new
        h = np.where(active, h + delh_new, h)
        s = np.where(active, s + dels, s)
        delh = delh_new
        active &= ~(np.abs(dels / s) < EPS)
        if not active.any():
            break
    h = a1 * h
    return 0.5 * np.log(np.pi / (2.0 * x)) - x - np.log(s), (xmu + x + 0.5 - h) / x


def log_bessel_k(nu, x):
    """Elementwise (log K_|nu|(x), K_{|nu|+1}(x)/K_|nu|(x)) for 1-d float arrays."""
    nu = np.abs(np.asarray(nu, dtype=np.float64))
    x = np.asarray(x, dtype=np.float64)
    nl = np.floor(nu + 0.5).astype(np.int64)
    xmu = nu - nl
    lk = np.empty_like(x)
    r = np.empty_like(x)
    small = x < 2.0
    if small.any():
        lk[small], r[small] = _temme(xmu[small], x[small])
    big = ~small
    if big.any():
        lk[big], r[big] = _steed(xmu[big], x[big])
    xi2 = 2.0 / x
    top = int(nl.max()) if nl.size else 0
    for i in range(1, top + 1):
        m = nl >= i
        lk = np.where(m, lk + np.log(r), lk)
        r = np.where(m, (xmu + i) * xi2 + 1.0 / r, r)
    return lk, r


def hyp_diffusion(x0, z, thin, alpha, beta, delta, mu, sigma, dt):
    """Euler-Maruyama steps of the hyperbolic Langevin SDE driven by normals ``z``.

    Returns the final state and every ``thin``-th state.
    """
    half = 0.5 * sigma * sigma * dt
    sq = sigma * math.sqrt(dt)
    d2 = delta * delta
    sqrt = math.sqrt
    out = []
    x = float(x0)
    k = 0
    for zi in np.asarray(z, dtype=np.float64).tolist():
        y = x - mu
        x = x + half * (beta - alpha * y / sqrt(d2 + y * y)) + sq * zi
        k += 1
        if k == thin:
            out.append(x)
            k = 0
    return x, np.array(out, dtype=np.float64)


def ar1_filter(rho, x0, eps):
    """x[0] = x0, x[k] = rho * x[k-1] + eps[k-1]."""
    eps = np.asarray(eps, dtype=np.float64)
    body = lfilter([1.0], [1.0, -rho], eps, zi=[rho * x0])[0]
    return np.concatenate(([float(x0)], body))

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Mirrors :mod:`hyperbolic._kernels_py` function for function; the two must
agree to rounding on identical inputs.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, log, sin, sinh, cosh, fabs, M_PI

cnp.import_array()

cdef double EPS = 1.0e-16
cdef int MAXIT = 100000

# Taylor coefficients of 1/Gamma(1+x) about 0.
cdef double RGAM[25]
RGAM[:] = [
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
]


cdef inline void _temme_gammas(double mu, double* gam1, double* gam2,
                               double* gampl, double* gammi) nogil:
    cdef double even = 0.0, odd = 0.0, mu2 = mu * mu
    cdef int j
    for j in range(24, -1, -2):
        even = even * mu2 + RGAM[j]
    for j in range(23, 0, -2):
        odd = odd * mu2 + RGAM[j]
    gampl[0] = even + mu * odd
    gammi[0] = even - mu * odd
    gam1[0] = -odd
    gam2[0] = even


cdef void _log_bessel_k(double nu, double x, double* logk, double* ratio) nogil:
    """log K_|nu|(x) and K_{|nu|+1}(x) / K_|nu|(x) for x > 0."""
    cdef int nl, i
    cdef double xmu, xmu2, xi, xi2, r, lk
    cdef double x2, pimu, fact, d, e, fact2, gam1, gam2, gampl, gammi
    cdef double ff, s, p, q, c, dl, dl1, s1
    cdef double b, h, delh, q1, q2, a1, a, qnew, dels

    nu = fabs(nu)
    nl = <int>(nu + 0.5)
    xmu = nu - nl
    xmu2 = xmu * xmu
    xi = 1.0 / x
    xi2 = 2.0 * xi
    if x < 2.0:
        x2 = 0.5 * x
        pimu = M_PI * xmu
        fact = 1.0 if fabs(pimu) < EPS else pimu / sin(pimu)
        d = -log(x2)
        e = xmu * d
        fact2 = 1.0 if fabs(e) < EPS else sinh(e) / e
        _temme_gammas(xmu, &gam1, &gam2, &gampl, &gammi)
        ff = fact * (gam1 * cosh(e) + gam2 * fact2 * d)
        s = ff
        e = exp(e)
        p = 0.5 * e / gampl
        q = 0.5 / (e * gammi)
        c = 1.0
        d = x2 * x2
        s1 = p
        for i in range(1, MAXIT):
            ff = (i * ff + p + q) / (i * i - xmu2)
            c *= d / i
            p /= i - xmu
            q /= i + xmu
            dl = c * ff
            s += dl
            dl1 = c * (p - i * ff)
            s1 += dl1
            if fabs(dl) < fabs(s) * EPS:
                break
        lk = log(s)
        r = s1 * xi2 / s
    else:
        b = 2.0 * (1.0 + x)
        d = 1.0 / b
        h = d
        delh = d
        q1 = 0.0
        q2 = 1.0
        a1 = 0.25 - xmu2
        q = a1
        c = a1
        a = -a1
        s = 1.0 + q * delh
        for i in range(2, MAXIT):
            a -= 2 * (i - 1)
            c = -a * c / i
            qnew = (q1 - b * q2) / a
            q1 = q2
            q2 = qnew
            q += c * qnew
            b += 2.0
            d = 1.0 / (b + a * d)
            delh = (b * d - 1.0) * delh
            h += delh
            dels = q * delh
            s += dels
            if fabs(dels / s) < EPS:
                break
        h = a1 * h
        lk = 0.5 * log(M_PI / (2.0 * x)) - x - log(s)
        r = (xmu + x + 0.5 - h) * xi
    # upward recurrence carried on the ratio K_{m+1}/K_m, overflow-free
    for i in range(1, nl + 1):
        lk += log(r)
        r = (xmu + i) * xi2 + 1.0 / r
    logk[0] = lk
    ratio[0] = r


def log_bessel_k(nu, x):
    """Elementwise (log K_|nu|(x), K_{|nu|+1}(x)/K_|nu|(x)) for 1-d float arrays."""
    cdef double[::1] nv = np.ascontiguousarray(nu, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    out_l = np.empty(n)
    out_r = np.empty(n)
    cdef double[::1] lv = out_l
    cdef double[::1] rv = out_r
    with nogil:
        for i in range(n):
            _log_bessel_k(nv[i], xv[i], &lv[i], &rv[i])
    return out_l, out_r


def hyp_diffusion(double x0, z, Py_ssize_t thin, double alpha, double beta,
                  double delta, double mu, double sigma, double dt):
    """Euler-Maruyama steps of the hyperbolic Langevin SDE driven by normals ``z``.

    Returns the final state and every ``thin``-th state.
    """
    cdef double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t n = zv.shape[0], i, k = 0
    out = np.empty(n // thin)
    cdef double[::1] ov = out
    cdef double half = 0.5 * sigma * sigma * dt
    cdef double sq = sigma * sqrt(dt)
    cdef double d2 = delta * delta
    cdef double xs = x0, y
    with nogil:
        for i in range(n):
            y = xs - mu
            xs = xs + half * (beta - alpha * y / sqrt(d2 + y * y)) + sq * zv[i]
            if (i + 1) % thin == 0:
                ov[k] = xs
                k += 1
    return xs, out


def ar1_filter(double rho, double x0, eps):
    """x[0] = x0, x[k] = rho * x[k-1] + eps[k-1]."""
    cdef double[::1] ev = np.ascontiguousarray(eps, dtype=np.float64)
    cdef Py_ssize_t n = ev.shape[0], i
    out = np.empty(n + 1)
    cdef double[::1] ov = out
    ov[0] = x0
    with nogil:
        for i in range(n):
            ov[i + 1] = rho * ov[i] + ev[i]
    return out

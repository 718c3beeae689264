import math

import numpy as np
import pytest
from oracles import numeric_convolution
from scipy import integrate, special, stats

from hyperbolic.dist import (GenLogisticParams, GhParams, GigParams, MvGhParams,
                             _gh_general_logpdf, genlog_cdf, genlog_logpdf, genlog_pdf,
                             genlog_sample, gh_cdf, gh_logpdf, gh_mean_var, gh_pdf, gh_sample,
                             gig_logpdf, gig_moment, gig_pdf, gig_sample, mvgh_logpdf,
                             mvgh_sample, nig_convolve, params_from_dict, params_to_dict,
                             random_stream, vg_convolve)
from hyperbolic.errors import ConvolutionError, DomainError, ParameterError, UndefinedMomentError

GRID = np.linspace(-6, 6, 200)


# literal densities written with scipy.special.kv, independent of the package


def hyp_density(x, alpha, beta, delta, mu):
    g = math.sqrt(alpha**2 - beta**2)
    y = x - mu
    return g / (2 * alpha * delta * special.kv(1, delta * g)) * np.exp(
        -alpha * np.sqrt(delta**2 + y**2) + beta * y)


def nig_density(x, alpha, beta, delta, mu):
    g = math.sqrt(alpha**2 - beta**2)
    y = x - mu
    q = np.sqrt(delta**2 + y**2)
    return alpha * delta / math.pi * math.exp(delta * g) * special.kv(1, alpha * q) / q * np.exp(beta * y)


def vg_density(x, lam, alpha, beta, mu):
    g = math.sqrt(alpha**2 - beta**2)
    y = np.abs(x - mu)
    return (g ** (2 * lam) * y ** (lam - 0.5) * special.kv(lam - 0.5, alpha * y)
            / (math.sqrt(math.pi) * special.gamma(lam) * (2 * alpha) ** (lam - 0.5))
            * np.exp(beta * (x - mu)))


def gig_oracle(p):
    return stats.geninvgauss(p.lam, p.delta * p.gamma, scale=p.delta / p.gamma)


def integrate_density(f, centre=0.0):
    pts = [centre - 1, centre, centre + 1]
    return sum(integrate.quad(f, a, b, limit=400, epsabs=1e-13)[0]
               for a, b in [(-np.inf, pts[0]), (pts[0], pts[1]), (pts[1], pts[2]), (pts[2], np.inf)])


SPANNING = [
    GhParams(1.0, 2.0, 1.0, 1.0, 0.0),
    GhParams(-0.5, 2.0, 0.5, 1.0, 0.3),
    GhParams.vg(1.3, 2.0, 0.4, 0.0),
    GhParams(0.0, 1.5, -0.3, 0.8, 0.0),
    GhParams(-2.0, 1.2, 0.2, 1.5, -0.5),
    GhParams(-3.0, 0.7, 0.7, 2.0, 0.0),
]


# ---------------------------------------------------------------------------
# GIG


def test_gig_inverse_gaussian_at_one():
    assert gig_pdf(GigParams(-0.5, 1.0, 1.0), 1.0) == pytest.approx((2 * math.pi) ** -0.5, rel=1e-13)


def test_gig_gamma_limit():
    p = GigParams(1.0, 0.0, math.sqrt(2.0))
    w = np.array([0.1, 1.0, 3.0])
    np.testing.assert_allclose(gig_pdf(p, w), np.exp(-w), rtol=1e-12)


def test_gig_special_cases_closed_form():
    w = np.geomspace(1e-3, 30, 50)
    ig = GigParams(-0.5, 1.3, 0.7)
    mean, shape = ig.delta / ig.gamma, ig.delta**2
    np.testing.assert_allclose(gig_pdf(ig, w), stats.invgauss.pdf(w, mean / shape, scale=shape),
                               rtol=1e-12)
    ga = GigParams(2.5, 0.0, 1.1)
    np.testing.assert_allclose(gig_pdf(ga, w), stats.gamma.pdf(w, 2.5, scale=2 / 1.1**2), rtol=1e-12)
    inv = GigParams(-1.5, 0.9, 0.0)
    np.testing.assert_allclose(gig_pdf(inv, w), stats.invgamma.pdf(w, 1.5, scale=0.9**2 / 2),
                               rtol=1e-12)


@pytest.mark.parametrize("p", [GigParams(0.7, 1.2, 0.8), GigParams(-2.0, 0.5, 3.0),
                               GigParams(4.0, 1e-3, 2.0), GigParams(0.0, 2.0, 2.0)])
def test_gig_normalized(p):
    total = integrate.quad(lambda w: gig_pdf(p, w), 0, np.inf, limit=400)[0]
    assert total == pytest.approx(1.0, abs=1e-8)


def test_gig_matches_scipy_geninvgauss():
    p = GigParams(0.7, 1.2, 0.8)
    w = np.geomspace(0.01, 40, 30)
    np.testing.assert_allclose(gig_logpdf(p, w), gig_oracle(p).logpdf(w), rtol=1e-11)


def test_gig_domain():
    with pytest.raises(DomainError):
        gig_pdf(GigParams(1.0, 1.0, 1.0), 0.0)
    for bad in [(-1.0, 0.0, 1.0), (0.0, 0.0, 1.0), (1.0, 1.0, 0.0), (1.0, -1.0, 1.0)]:
        with pytest.raises(ParameterError):
            GigParams(*bad)


def test_gig_moments():
    assert gig_moment(GigParams(-0.5, 1.0, 2.0), 1) == pytest.approx(0.5, rel=1e-13)
    assert gig_moment(GigParams(0.7, 1.2, 0.8), 0) == 1.0
    # quadrature in mpmath at 40 digits: 20.737817941499734006
    assert gig_moment(GigParams(0.7, 1.2, 0.8), 2) == pytest.approx(20.737817941499734006, rel=1e-10)
    with pytest.raises(UndefinedMomentError):
        gig_moment(GigParams(-1.5, 1.0, 0.0), 2)
    with pytest.raises(UndefinedMomentError):
        gig_moment(GigParams(0.5, 0.0, 1.0), -1)


def test_gig_sample_ig_mean():
    w = gig_sample(GigParams(-0.5, 1.0, 2.0), random_stream(11), 100_000)
    se = math.sqrt(1.0 / 2.0**3) / math.sqrt(w.size)  # IG variance delta/gamma**3
    assert abs(w.mean() - 0.5) < 4 * se


def test_gig_sample_exponential_case():
    w = gig_sample(GigParams(1.0, 0.0, math.sqrt(2.0)), random_stream(12), 100_000)
    assert stats.kstest(w, "expon").pvalue > 0.01


@pytest.mark.parametrize("p", [GigParams(0.7, 1.2, 0.8), GigParams(0.2, 0.1, 0.1),
                               GigParams(-3.0, 2.0, 5.0), GigParams(5.0, 0.3, 1.0),
                               GigParams(-0.2, 0.05, 0.4), GigParams(-1.5, 2.0, 0.0)])
def test_gig_sample_ks(p):
    w = gig_sample(p, random_stream(13), 100_000)
    if p.gamma > 0:
        # scipy's ratio-of-uniforms sampler is an independent route
        ref = gig_oracle(p).rvs(100_000, random_state=np.random.default_rng(14))
        assert stats.ks_2samp(w, ref).pvalue > 0.01
    else:
        assert stats.kstest(w, stats.invgamma(-p.lam, scale=p.delta**2 / 2).cdf).pvalue > 0.01


# ---------------------------------------------------------------------------
# GH densities


def test_hyperbolic_at_centre():
    p = GhParams(1.0, 1.0, 0.0, 1.0, 0.0)
    # mpmath: log(1/(2 K_1(1))) - 1 = -1.1854952323491929785
    assert gh_logpdf(p, 0.0) == pytest.approx(-1.1854952323491929785, rel=1e-12)
    assert gh_logpdf(p, 0.0) == pytest.approx(math.log(1 / (2 * special.kv(1, 1.0))) - 1, rel=1e-12)


def test_nig_at_centre():
    p = GhParams.nig(1.0, 0.0, 1.0)
    # mpmath: log(e K_1(1) / pi) = -0.65238183406015250509
    assert gh_logpdf(p, 0.0) == pytest.approx(-0.65238183406015250509, rel=1e-12)


@pytest.mark.parametrize("args", [(2.0, 1.0, 1.0, 0.0), (1.0, 0.0, 0.5, 1.0), (5.0, -4.0, 2.0, -1.0)])
def test_reduces_to_hyperbolic(args):
    p = GhParams.hyperbolic(*args)
    ref = np.log(hyp_density(GRID, *args))
    np.testing.assert_allclose(gh_logpdf(p, GRID), ref, rtol=1e-10)
    np.testing.assert_allclose(_gh_general_logpdf(p, GRID), ref, rtol=1e-10)


@pytest.mark.parametrize("args", [(2.0, 0.5, 1.0, 0.0), (1.0, 0.0, 1.0, 0.0), (3.0, -2.9, 0.2, 1.0)])
def test_reduces_to_nig(args):
    p = GhParams.nig(*args)
    ref = np.log(nig_density(GRID, *args))
    np.testing.assert_allclose(gh_logpdf(p, GRID), ref, rtol=1e-10)
    np.testing.assert_allclose(_gh_general_logpdf(p, GRID), ref, rtol=1e-10)


@pytest.mark.parametrize("args", [(1.0, 2.0, 0.0, 0.0), (2.3, 1.5, 0.5, 0.4), (0.4, 3.0, -1.0, 0.0)])
def test_reduces_to_vg(args):
    p = GhParams.vg(*args)
    x = GRID[GRID != args[3]]
    np.testing.assert_allclose(gh_logpdf(p, x), np.log(vg_density(x, *args)), rtol=1e-10)


def test_vg_density_at_centre_is_finite_for_large_lambda():
    p = GhParams.vg(2.0, 1.5, 0.3)
    inner = gh_pdf(p, np.array([-1e-9, 1e-9]))
    assert gh_pdf(p, 0.0) == pytest.approx(inner.mean(), rel=1e-6)


@pytest.mark.parametrize("p", SPANNING + [GhParams.vg(0.3, 2.0, 0.5), GhParams.student_t(3.0, 0, 1, 0.4)])
def test_gh_normalized(p):
    f = lambda x: gh_pdf(p, x)
    assert integrate_density(f, p.mu) == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("df", [1.0, 2.5, 7.0])
def test_student_t_correspondence(df):
    p = GhParams.student_t(df, loc=0.5, scale=1.7)
    assert p.family == "asym_t"
    np.testing.assert_allclose(gh_logpdf(p, GRID), stats.t.logpdf(GRID, df, 0.5, 1.7), rtol=1e-10)
    # the other candidate reading, lambda = -df, is a different law
    q = GhParams(-df, 0.0, 0.0, 1.7 * math.sqrt(df), 0.5)
    assert np.max(np.abs(gh_logpdf(q, GRID) - stats.t.logpdf(GRID, df, 0.5, 1.7))) > 1e-2


def test_family_tags():
    assert GhParams(1.0, 2.0, 1.0, 1.0).family == "hyperbolic"
    assert GhParams(-0.5, 2.0, 1.0, 1.0).family == "nig"
    assert GhParams(-0.5, 2.0, 2.0, 1.0).family == "asym_t"
    assert GhParams(0.5, 2.0, 1.0, 0.0).family == "vg"
    assert GhParams(-2.0, 1.0, -1.0, 1.0).family == "asym_t"
    assert GhParams(0.0, 2.0, 1.0, 1.0).family == "gh"


@pytest.mark.parametrize("bad", [(1.0, 1.0, 1.0, 1.0), (0.0, 2.0, 1.0, 0.0), (-1.0, 1.0, 0.5, 0.0),
                                 (1.0, 1.0, 2.0, 1.0), (1.0, 2.0, 1.0, -1.0)])
def test_invalid_gh_params(bad):
    with pytest.raises(ParameterError):
        GhParams(*bad)


# ---------------------------------------------------------------------------
# CDF, moments, sampling


def test_cdf_symmetry_and_limits():
    p = GhParams(0.3, 1.5, 0.0, 0.7, 2.0)
    assert gh_cdf(p, 2.0) == pytest.approx(0.5, abs=1e-12)
    assert gh_cdf(p, -1e6) == 0.0
    assert gh_cdf(p, 1e6) == pytest.approx(1.0, abs=1e-12)
    c = gh_cdf(p, GRID)
    assert np.all(np.diff(c) >= 0)


@pytest.mark.parametrize("p", SPANNING + [GhParams.vg(0.3, 2.0, 0.5)])
def test_cdf_matches_quadrature(p):
    for x in (p.mu - 2.0, p.mu, p.mu + 0.7):
        ref = integrate.quad(lambda t: gh_pdf(p, t), -np.inf, min(x, p.mu), limit=400, epsabs=1e-13)[0]
        if x > p.mu:
            ref += integrate.quad(lambda t: gh_pdf(p, t), p.mu, x, limit=400, epsabs=1e-13)[0]
        assert gh_cdf(p, x) == pytest.approx(ref, abs=1e-8)


def test_cdf_monte_carlo():
    p = GhParams(1.0, 2.0, 1.0, 1.0, 0.0)
    x = gh_sample(p, random_stream(21), 1_000_000)
    emp = np.mean(x <= 1.0)
    c = gh_cdf(p, 1.0)
    # 4 standard errors keeps the false-alarm rate near 1e-4
    assert abs(emp - c) < 4 * math.sqrt(c * (1 - c) / x.size)


def test_mean_var():
    assert gh_mean_var(GhParams(1.0, 2.0, 0.0, 1.0, 0.7))[0] == pytest.approx(0.7, abs=1e-15)
    assert gh_mean_var(GhParams.nig(2.0, 1.0, 1.0))[0] == pytest.approx(1 / math.sqrt(3), rel=1e-13)
    p = GhParams(1.0, 2.0, 0.5, 1.0, -1.0)
    mean, var = gh_mean_var(p)
    x = gh_sample(p, random_stream(22), 1_000_000)
    assert abs(x.mean() - mean) < 3 * math.sqrt(var / x.size)
    m4 = np.mean((x - x.mean()) ** 4)
    assert abs(x.var() - var) < 3 * math.sqrt((m4 - var**2) / x.size)


@pytest.mark.parametrize("p", SPANNING)
def test_mixture_sampler_ks(p):
    x = gh_sample(p, random_stream(23), 100_000)
    assert stats.kstest(x, lambda t: gh_cdf(p, t)).pvalue > 0.01


def test_symmetric_sample_skewness():
    x = gh_sample(GhParams(1.0, 2.0, 0.0, 1.0, 0.0), random_stream(24), 100_000)
    assert abs(stats.skew(x)) < 0.05


def test_reproducible_streams():
    p = GhParams(-0.5, 2.0, 0.5, 1.0)
    a = gh_sample(p, random_stream(99), 1000)
    b = gh_sample(p, random_stream(99), 1000)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, gh_sample(p, random_stream(100), 1000))


# ---------------------------------------------------------------------------
# convolution


def test_nig_convolve_closed_form():
    out = nig_convolve(GhParams.nig(1, 0, 1, 0), GhParams.nig(1, 0, 2, 1))
    assert out == GhParams.nig(1, 0, 3, 1)
    with pytest.raises(ConvolutionError):
        nig_convolve(GhParams.nig(1, 0, 1, 0), GhParams.nig(2, 0, 1, 0))
    with pytest.raises(ConvolutionError):
        nig_convolve(GhParams.nig(1, 0, 1, 0), GhParams.nig(1, 0.5, 1, 0))


def test_vg_convolve_closed_form():
    assert vg_convolve(GhParams.vg(1, 2, 0, 0), GhParams.vg(2, 2, 0, 1)) == GhParams.vg(3, 2, 0, 1)
    with pytest.raises(ConvolutionError):
        vg_convolve(GhParams.vg(1, 2, 0, 0), GhParams.vg(1, 3, 0, 0))


def test_convolution_identity_limit():
    p = GhParams.nig(1.5, 0.5, 1.0, 0.2)
    q = nig_convolve(p, GhParams.nig(1.5, 0.5, 1e-12, 0.0))
    np.testing.assert_allclose(gh_logpdf(q, GRID), gh_logpdf(p, GRID), rtol=1e-10)


@pytest.mark.parametrize("pair,conv", [
    ((GhParams.nig(2.0, 0.5, 1.0, 0.0), GhParams.nig(2.0, 0.5, 0.5, 1.0)), nig_convolve),
    ((GhParams.vg(1.0, 2.0, 0.3, 0.0), GhParams.vg(2.0, 2.0, 0.3, 1.0)), vg_convolve),
    ((GhParams.vg(0.8, 2.5, -0.7, 0.0), GhParams.vg(0.6, 2.5, -0.7, 0.3)), vg_convolve),
])
def test_convolution_matches_numeric(pair, conv):
    p1, p2 = pair
    x = np.linspace(-4, 6, 101)
    np.testing.assert_allclose(numeric_convolution(p1, p2, x), gh_pdf(conv(p1, p2), x), atol=1e-6)
    rng = random_stream(31)
    s = gh_sample(p1, rng, 100_000) + gh_sample(p2, rng, 100_000)
    res = conv(p1, p2)
    assert stats.kstest(s, lambda t: gh_cdf(res, t)).pvalue > 0.01


# ---------------------------------------------------------------------------
# generalized logistic


def test_genlog_values():
    assert genlog_pdf(GenLogisticParams(1, 1, 0, 1), 0.0) == pytest.approx(0.25, rel=1e-14)
    p = GenLogisticParams(2.5, 2.5, 1.0, 0.5)
    np.testing.assert_allclose(genlog_pdf(p, 1.0 + GRID), genlog_pdf(p, 1.0 - GRID), rtol=1e-12)
    q = GenLogisticParams(2, 3, 0, 1)
    assert integrate_density(lambda x: genlog_pdf(q, x)) == pytest.approx(1.0, abs=1e-8)


def test_genlog_is_logit_of_beta():
    # change of variables: z = logit(B) has density beta_pdf(expit z) * expit(z) * (1 - expit(z))
    a, b = 2.0, 3.0
    s = special.expit(GRID)
    ref = stats.beta.pdf(s, a, b) * s * (1 - s)
    np.testing.assert_allclose(genlog_pdf(GenLogisticParams(a, b, 0, 1), GRID), ref, rtol=1e-12)


def test_genlog_cdf():
    p = GenLogisticParams(2, 3, 0.5, 1.5)
    for x in (-3.0, 0.0, 2.0):
        ref = integrate.quad(lambda t: genlog_pdf(p, t), -np.inf, x)[0]
        assert genlog_cdf(p, x) == pytest.approx(ref, abs=1e-10)


def test_genlog_sampling():
    x = genlog_sample(GenLogisticParams(1, 1, 0, 1), random_stream(41), 100_000)
    assert stats.kstest(x, "logistic").pvalue > 0.01
    p = GenLogisticParams(2, 3, 0, 1)
    y = genlog_sample(p, random_stream(42), 100_000)
    assert stats.kstest(y, lambda t: genlog_cdf(p, t)).pvalue > 0.01
    z = genlog_sample(GenLogisticParams(2, 3, 1, 2), random_stream(42), 100_000)
    np.testing.assert_allclose(z, 1 + 2 * y, rtol=1e-14)


def test_genlog_positive_domain():
    with pytest.raises(ParameterError):
        GenLogisticParams(-1, 1, 0, 1)
    with pytest.raises(ParameterError):
        GenLogisticParams(1, 1, 0, 0)


# ---------------------------------------------------------------------------
# multivariate


def test_mvgh_one_dimensional_reduction():
    for p in SPANNING[:2] + SPANNING[3:5]:
        mp = MvGhParams(p.lam, [p.mu], [p.beta], p.delta, p.gamma, [[1.0]])
        np.testing.assert_allclose(mvgh_logpdf(mp, GRID[:, None]), gh_logpdf(p, GRID), rtol=1e-13)


def test_mvgh_bivariate_centre_and_normalization():
    lam, delta, gamma = 0.8, 1.2, 1.5
    p = MvGhParams(lam, [0.3, -0.2], [0.0, 0.0], delta, gamma, np.eye(2))
    # literal density at x = mu (Delta = I, beta = 0, alpha = gamma)
    a = gamma
    ref = ((gamma / delta) ** lam / ((2 * math.pi) * special.kv(lam, delta * gamma))
           * special.kv(lam - 1, a * delta) * (delta / a) ** (lam - 1))
    assert math.exp(mvgh_logpdf(p, np.array([0.3, -0.2]))) == pytest.approx(ref, rel=1e-12)
    radial = integrate.quad(lambda r: 2 * math.pi * r * math.exp(mvgh_logpdf(p, [0.3 + r, -0.2])),
                            0, np.inf, limit=200)[0]
    assert radial == pytest.approx(1.0, abs=1e-8)
    skew = MvGhParams(lam, [0.0, 0.0], [0.4, -0.3], delta, gamma, [[1.0, 0.3], [0.3, 0.8]])
    tot = integrate.dblquad(lambda y, x: math.exp(mvgh_logpdf(skew, [x, y])), -25, 25, -25, 25,
                            epsabs=1e-10)[0]
    assert tot == pytest.approx(1.0, abs=1e-6)


def test_mvgh_three_dimensional_smoke():
    p = MvGhParams(2.0, [0, 0, 0], [0.2, 0, -0.1], 1.0, 1.0, np.eye(3))
    vals = mvgh_logpdf(p, np.random.default_rng(0).normal(size=(50, 3)) * 3)
    assert np.all(np.isfinite(vals))


def test_mvgh_invalid():
    with pytest.raises(ParameterError):
        MvGhParams(1.0, [0, 0], [0, 0], 1.0, 1.0, [[1.0, 2.0], [2.0, 1.0]])
    p = MvGhParams(1.0, [0, 0], [0, 0], 1.0, 1.0, np.eye(2))
    with pytest.raises(DomainError):
        mvgh_logpdf(p, [0.0, 0.0, 0.0])


def test_mvgh_sampling():
    p1 = MvGhParams(1.0, [0.5], [0.4], 1.0, 1.5, [[1.0]])
    x = mvgh_sample(p1, random_stream(51), 50_000)[:, 0]
    g = GhParams(1.0, p1.alpha, 0.4, 1.0, 0.5)
    assert stats.kstest(x, lambda t: gh_cdf(g, t)).pvalue > 0.01
    sym = MvGhParams(-0.5, [1.0, -2.0], [0, 0], 1.0, 1.0, [[1.0, 0.5], [0.5, 2.0]])
    y = mvgh_sample(sym, random_stream(52), 100_000)
    assert np.all(np.abs(y.mean(axis=0) - sym.mu) < 4 * y.std(axis=0) / math.sqrt(y.shape[0]))
    # projection vs an independent mixture sampler built on scipy's GIG
    p2 = MvGhParams(0.5, [0.2, 0.1], [0.3, -0.5], 1.2, 0.9, [[1.0, 0.4], [0.4, 1.5]])
    rng = np.random.default_rng(53)
    w = stats.geninvgauss(0.5, 1.2 * 0.9, scale=1.2 / 0.9).rvs(50_000, random_state=rng)
    chol = np.linalg.cholesky(p2.Delta)
    ref = p2.mu + w[:, None] * (p2.Delta @ p2.beta) + np.sqrt(w)[:, None] * (rng.standard_normal((50_000, 2)) @ chol.T)
    z = mvgh_sample(p2, random_stream(54), 50_000)
    for v in (np.array([1.0, 0.0]), np.array([0.6, -0.8])):
        assert stats.ks_2samp(z @ v, ref @ v).pvalue > 0.01


# ---------------------------------------------------------------------------
# serialization


@pytest.mark.parametrize("p", SPANNING + [GigParams(0.7, 1.2, 0.8), GenLogisticParams(2, 3, 0, 1)])
def test_params_round_trip(p):
    assert params_from_dict(params_to_dict(p)) == p


def test_params_from_minimal_dict():
    p = params_from_dict({"family": "nig", "alpha": 2, "beta": 0.5, "delta": 1})
    assert p == GhParams.nig(2, 0.5, 1, 0)
    with pytest.raises(ParameterError):
        params_from_dict({"family": "nig", "alpha": 2})
    with pytest.raises(ParameterError):
        params_from_dict({"family": "nig", "lambda": 1.0, "alpha": 2, "delta": 1})

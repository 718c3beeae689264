"""Command line front end.

Exit status is 0 on success, 1 on a usage error and 2 on a domain or
numerical error or unreadable input. Every output carries a metadata block
with the program version, seed and the full parameter set.
"""
import argparse
import math
import sys

import numpy as np

from . import __version__, dist, expfam, fit, proc, shape
from ._svg import loglog_svg, triangle_svg
from .errors import ConvolutionError, DomainError, HyperbolicError, ParameterError
from .io import InputError, dumps_csv, dumps_json, metadata, read_column, read_json, read_table

DEFAULT_SEED = 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# helpers


def _emit(args, text, path=None):
    path = path or args.out
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _meta(args, params):
    return metadata(__version__, args.command_path, getattr(args, "seed", None), params)


def _need(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise UsageError(f"{args.command_path}: --{n.replace('_', '-')} is required")


def _params(args):
    _need(args, "params")
    return read_json(args.params)


def _floats(text, what):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None


def _x_values(args):
    if args.input is not None:
        return read_column(args.input, args.column)
    if args.grid is not None:
        return proc.PathGrid.parse(args.grid).times
    if args.x is not None:
        return np.array(_floats(args.x, "--x"))
    raise UsageError(f"{args.command_path}: give --input, --grid or --x")


def _seed(args):
    return DEFAULT_SEED if args.seed is None else args.seed


# ---------------------------------------------------------------------------
# dist


def _dist_density(args, cdf):
    doc = _params(args)
    p = dist.params_from_dict(doc)
    x = _x_values(args)
    if isinstance(p, dist.GhParams):
        val = dist.gh_cdf(p, x) if cdf else dist.gh_pdf(p, x)
    elif isinstance(p, dist.GenLogisticParams):
        val = dist.genlog_cdf(p, x) if cdf else dist.genlog_pdf(p, x)
    elif isinstance(p, dist.GigParams) and not cdf:
        val = dist.gig_pdf(p, x)
    else:
        raise UsageError(f"{args.command_path}: not available for family {doc.get('family')!r}")
    name = "cdf" if cdf else "pdf"
    _emit(args, dumps_csv(_meta(args, dist.params_to_dict(p)), ["x", name], [x, np.atleast_1d(val)]))


def cmd_dist_pdf(args):
    _dist_density(args, cdf=False)


def cmd_dist_cdf(args):
    _dist_density(args, cdf=True)


def cmd_dist_sample(args):
    p = dist.params_from_dict(_params(args))
    args.seed = _seed(args)
    rng = dist.random_stream(args.seed)
    if isinstance(p, dist.GhParams):
        cols, header = [dist.gh_sample(p, rng, args.n)], ["x"]
    elif isinstance(p, dist.GigParams):
        cols, header = [dist.gig_sample(p, rng, args.n)], ["w"]
    elif isinstance(p, dist.GenLogisticParams):
        cols, header = [dist.genlog_sample(p, rng, args.n)], ["x"]
    else:
        x = dist.mvgh_sample(p, rng, args.n)
        cols, header = list(x.T), [f"x{i + 1}" for i in range(p.n)]
    meta = _meta(args, dist.params_to_dict(p))
    meta["n"] = args.n
    _emit(args, dumps_csv(meta, header, cols))


def cmd_dist_convolve(args):
    _need(args, "params", "params2")
    p1 = dist.params_from_dict(read_json(args.params))
    p2 = dist.params_from_dict(read_json(args.params2))
    if p1.family == "nig":
        out = dist.nig_convolve(p1, p2)
    elif p1.family == "vg":
        out = dist.vg_convolve(p1, p2)
    else:
        raise ConvolutionError("closed-form convolution exists for NIG and VG laws only")
    meta = _meta(args, {"left": dist.params_to_dict(p1), "right": dist.params_to_dict(p2)})
    _emit(args, dumps_json(meta, dist.params_to_dict(out)))


# ---------------------------------------------------------------------------
# fit


def cmd_fit(args):
    _need(args, "input")
    x = read_column(args.input, args.column)
    cfg = fit.FitConfig(args.family, args.fix_lambda, args.max_iter, args.grad_tol, args.multistart)
    rep = fit.fit_mle(x, cfg)
    params = {"family": cfg.family, "fix_lambda": cfg.fix_lambda, "max_iter": cfg.max_iter,
              "grad_tol": cfg.grad_tol, "multistart": cfg.multistart, "input": args.input}
    _emit(args, dumps_json(_meta(args, params), rep.to_dict()))


# ---------------------------------------------------------------------------
# shape


def cmd_shape_coords(args):
    p = dist.params_from_dict(_params(args))
    s = shape.shape_coords(p)
    sk, ku = shape.skew_kurt_approx(s)
    _emit(args, dumps_json(_meta(args, dist.params_to_dict(p)),
                           {"chi": s.chi, "xi": s.xi, "skewness_approx": sk, "kurtosis_approx": ku}))


def cmd_shape_inverse(args):
    _need(args, "chi", "xi", "delta")
    lam = -0.5 if args.family == "nig" else 1.0
    p = shape.shape_inverse(shape.ShapePoint(args.chi, args.xi), args.delta, args.mu, lam)
    params = {"chi": args.chi, "xi": args.xi, "delta": args.delta, "mu": args.mu,
              "family": args.family}
    _emit(args, dumps_json(_meta(args, params), dist.params_to_dict(p)))


def _curve_from(doc):
    keys = ("alpha0", "beta0", "kappa", "epsilon", "delta", "mu")
    try:
        return shape.SortingCurve(**{k: float(doc[k]) for k in keys if k in doc})
    except TypeError as exc:
        raise ParameterError(f"sorting curve document: {exc}") from None


def _curve_grid(args, doc):
    if args.grid is not None:
        return proc.PathGrid.parse(args.grid).times
    if "t" in doc:
        return np.asarray(doc["t"], dtype=float)
    g = doc.get("grid")
    if isinstance(g, str):
        return proc.PathGrid.parse(g).times
    raise UsageError("sorting curve needs --grid or a 't'/'grid' entry in the curve document")


def cmd_shape_curve(args):
    doc = _params(args)
    c = _curve_from(doc)
    tr = shape.sorting_curve_eval(c, _curve_grid(args, doc))
    meta = _meta(args, {**doc, "c0": c.c0, "grid": args.grid})
    meta["truncated"] = tr.truncated
    meta["truncated_at"] = tr.truncated_at
    _emit(args, dumps_csv(meta, ["t", "alpha", "beta", "chi", "xi"],
                          [tr.t, tr.alpha, tr.beta, tr.chi, tr.xi]))


def cmd_shape_triangle(args):
    points, traces, params = [], [], {}
    if args.params is not None:
        doc = read_json(args.params)
        docs = doc if isinstance(doc, list) else [doc]
        for i, d in enumerate(docs):
            s = shape.shape_coords(dist.params_from_dict(d))
            points.append((s.chi, s.xi, d.get("label", "")))
        params["points"] = docs
    if args.curve is not None:
        doc = read_json(args.curve)
        c = _curve_from(doc)
        tr = shape.sorting_curve_eval(c, _curve_grid(args, doc))
        traces.append(list(zip(tr.chi.tolist(), tr.xi.tolist())))
        params["curve"] = {**doc, "c0": c.c0, "truncated_at": tr.truncated_at}
    if not points and not traces:
        raise UsageError(f"{args.command_path}: give --params and/or --curve")
    svg = triangle_svg(points, traces)
    meta = _meta(args, params)
    svg = svg.replace("<svg ", "<!-- " + dumps_json(meta, None).replace("--", "- -").strip()
                      + " -->\n<svg ", 1)
    _emit(args, svg, args.svg or args.out)


# ---------------------------------------------------------------------------
# sim


def _grid(args):
    _need(args, "grid")
    return proc.PathGrid.parse(args.grid)


def _emit_path(args, path, params):
    meta = _meta(args, {**params, "grid": args.grid})
    _emit(args, dumps_csv(meta, ["time", "value"], [path.times, path.values]))


def cmd_sim_diffusion(args):
    doc = _params(args)
    p = dist.params_from_dict({**doc, "family": doc.get("family", "hyperbolic")})
    sigma = float(doc.get("sigma", 1.0)) if args.sigma is None else args.sigma
    x0 = float(doc.get("x0", p.mu)) if args.x0 is None else args.x0
    args.seed = _seed(args)
    path = proc.sim_hyp_diffusion(p, sigma, x0, _grid(args), args.seed, args.thin)
    _emit_path(args, path, {**dist.params_to_dict(p), "sigma": sigma, "x0": x0, "thin": args.thin})


def cmd_sim_nig_levy(args):
    doc = _params(args)
    p = dist.params_from_dict({**doc, "family": doc.get("family", "nig")})
    args.seed = _seed(args)
    _emit_path(args, proc.sim_nig_levy(p, _grid(args), args.seed), dist.params_to_dict(p))


def cmd_sim_vg_levy(args):
    doc = _params(args)
    p = dist.params_from_dict({**doc, "family": doc.get("family", "vg")})
    args.seed = _seed(args)
    _emit_path(args, proc.sim_vg_levy(p, _grid(args), args.seed), dist.params_to_dict(p))


def cmd_sim_ar1(args):
    doc = _params(args)
    try:
        spec = proc.Ar1SuperpositionSpec(doc["rho"], doc["phi"], float(doc.get("variance", 1.0)))
    except KeyError as exc:
        raise ParameterError(f"AR(1) spec lacks {exc.args[0]!r}") from None
    args.seed = _seed(args)
    path = proc.sim_ar1_superposition(spec, _grid(args), args.seed)
    _emit_path(args, path, {"rho": spec.rho, "phi": spec.phi, "variance": spec.variance,
                            "innovation_std": spec.innovation_std})


def cmd_sim_grains(args):
    doc = _params(args)
    try:
        spec = proc.GrainHopSpec(float(doc["hop_rate"]), float(doc["mean_hop"]),
                                 float(doc["burial_rate"]), float(doc["mean_burial"]))
    except KeyError as exc:
        raise ParameterError(f"grain-hop spec lacks {exc.args[0]!r}") from None
    horizon = float(doc.get("horizon", 100.0)) if args.horizon is None else args.horizon
    args.seed = _seed(args)
    ev = proc.sim_grain_hops(spec, horizon, args.seed)
    res = {"hop_times": ev.hop_times, "displacements": ev.displacements,
           "burials": ev.burials, "total_displacement": ev.total_displacement,
           "buried_fraction": ev.buried_fraction}
    _emit(args, dumps_json(_meta(args, {**doc, "horizon": horizon}), res))


def cmd_sim_genesis(args):
    doc = _params(args)
    try:
        mu, beta = float(doc.get("mu", 0.0)), float(doc.get("beta", 0.0))
        barrier, drift = float(doc["barrier"]), float(doc["drift"])
    except KeyError as exc:
        raise ParameterError(f"genesis spec lacks {exc.args[0]!r}") from None
    args.seed = _seed(args)
    x = proc.nig_genesis_sim(mu, beta, barrier, drift, args.seed, args.n)
    params = {"mu": mu, "beta": beta, "barrier": barrier, "drift": drift, "n": args.n,
              "nig": dist.params_to_dict(proc.genesis_params(mu, beta, barrier, drift))}
    _emit(args, dumps_csv(_meta(args, params), ["log_size"], [x]))


def cmd_sim_spectrum(args):
    _need(args, "input")
    header, data = read_table(args.input)
    if data.shape[1] >= 2:
        t = data[:, 0]
        y = data[:, header.index("value") if header and "value" in header else -1]
        dt = float(np.mean(np.diff(t))) if t.size > 1 else 1.0
    else:
        y, dt = data[:, 0], 1.0
    if args.dt is not None:
        dt = args.dt
    path = proc.SamplePath(proc.PathGrid(0.0, dt, y.size - 1), y)
    f, est = proc.periodogram(path)
    params = {"input": args.input, "dt": dt, "band": args.band}
    meta = _meta(args, params)
    line = None
    if args.band is not None:
        band = tuple(_floats(args.band, "--band"))
        if len(band) != 2:
            raise UsageError("--band takes two numbers: f_lo,f_hi")
        slope = proc.inertial_slope(f, est, band)
        sel = (f >= band[0]) & (f <= band[1])
        icpt = float(np.mean(np.log(est[sel])) - slope * np.mean(np.log(f[sel])))
        meta["slope"] = slope
        line = (slope, icpt, band)
    meta["parseval_variance"] = proc.parseval_variance(est, y.size)
    _emit(args, dumps_csv(meta, ["frequency", "estimate"], [f, est]))
    if args.svg:
        _emit(args, loglog_svg(f, est, line), args.svg)


# ---------------------------------------------------------------------------
# expfam


def _model(args):
    return expfam.ExpFamModel.from_dict(_params(args))


def _vec(args, name):
    _need(args, name)
    return np.array(_floats(getattr(args, name), "--" + name.replace("_", "-")))


def _split(args):
    _need(args, "split")
    return [int(v) for v in _floats(args.split, "--split")]


def cmd_expfam_exists(args):
    m = _model(args)
    t = _vec(args, "t")
    v = expfam.mle_exists(m, t)
    _emit(args, dumps_json(_meta(args, {"model": m.to_dict(), "t": t}), v.to_dict()))


def cmd_expfam_tau(args):
    m = _model(args)
    th = _vec(args, "theta")
    res = {"kappa": expfam.kappa(m, th), "tau": expfam.tau(m, th)}
    _emit(args, dumps_json(_meta(args, {"model": m.to_dict(), "theta": th}), res))


def cmd_expfam_tau_inverse(args):
    m = _model(args)
    t = _vec(args, "t")
    th = expfam.tau_inverse(m, t)
    res = {"theta": th, "residual": float(np.linalg.norm(expfam.tau(m, th) - t))}
    _emit(args, dumps_json(_meta(args, {"model": m.to_dict(), "t": t}), res))


def cmd_expfam_cut_check(args):
    m = _model(args)
    split = _split(args)
    _need(args, "input")
    _, grid = read_table(args.input)
    rep = expfam.cut_check(m, split, list(grid))
    params = {"model": m.to_dict(), "split": split, "grid": grid}
    _emit(args, dumps_json(_meta(args, params), rep.to_dict()))


def cmd_expfam_plausibility(args):
    m = _model(args)
    _need(args, "x_obs")
    labels = {str(s): s for s in m.support_points}
    if args.x_obs not in labels:
        raise DomainError(f"{args.x_obs!r} is not a support point")
    pi = expfam.plausibility(m, labels[args.x_obs])
    th = _vec(args, "theta")
    res = {"plausibility": pi(th)}
    _emit(args, dumps_json(_meta(args, {"model": m.to_dict(), "x_obs": args.x_obs, "theta": th}),
                           res))


def cmd_expfam_neyman_scott(args):
    args.seed = _seed(args)
    xi = np.zeros(args.n_pairs) if args.xi is None else np.array(_floats(args.xi, "--xi"))
    s = expfam.neyman_scott_sim(args.n_pairs, args.sigma2, xi, args.seed, args.reps)
    params = {"n_pairs": args.n_pairs, "sigma2": args.sigma2, "reps": args.reps, "xi": xi}
    _emit(args, dumps_json(_meta(args, params), s.to_dict()))


# ---------------------------------------------------------------------------
# parser


def _common(p, params=True, seed=False, grid=False, inp=False):
    p.add_argument("--out", help="output path (default: stdout)")
    if params:
        p.add_argument("--params", help="JSON parameter document")
    if seed:
        p.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
    if grid:
        p.add_argument("--grid", help="time grid, e.g. t0=0,dt=0.01,n=10000")
    if inp:
        p.add_argument("--input", help="CSV input")
        p.add_argument("--column", help="column name or index in --input")


def build_parser():
    top = _Parser(prog="hyperbolic", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=f"hyperbolic {__version__}")
    groups = top.add_subparsers(dest="group", parser_class=_Parser, required=True)

    g = groups.add_parser("dist", help="densities, sampling, convolution")
    sub = g.add_subparsers(dest="action", parser_class=_Parser, required=True)
    for name, fn in (("pdf", cmd_dist_pdf), ("cdf", cmd_dist_cdf)):
        p = sub.add_parser(name)
        _common(p, grid=True, inp=True)
        p.add_argument("--x", help="comma-separated evaluation points")
        p.set_defaults(func=fn)
    p = sub.add_parser("sample")
    _common(p, seed=True)
    p.add_argument("--n", type=int, default=1000)
    p.set_defaults(func=cmd_dist_sample)
    p = sub.add_parser("convolve")
    _common(p)
    p.add_argument("--params2", help="JSON document of the second law")
    p.set_defaults(func=cmd_dist_convolve)

    p = groups.add_parser("fit", help="maximum-likelihood fit")
    _common(p, params=False, inp=True)
    p.add_argument("--family", choices=("nig", "hyperbolic", "gh"), default="nig")
    p.add_argument("--fix-lambda", type=float)
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--grad-tol", type=float, default=1e-6)
    p.add_argument("--multistart", type=int, default=3)
    p.set_defaults(func=cmd_fit, action=None)

    g = groups.add_parser("shape", help="shape triangle and sorting curves")
    sub = g.add_subparsers(dest="action", parser_class=_Parser, required=True)
    p = sub.add_parser("coords")
    _common(p)
    p.set_defaults(func=cmd_shape_coords)
    p = sub.add_parser("inverse")
    _common(p, params=False)
    p.add_argument("--chi", type=float)
    p.add_argument("--xi", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--family", choices=("hyperbolic", "nig"), default="hyperbolic")
    p.set_defaults(func=cmd_shape_inverse)
    p = sub.add_parser("curve")
    _common(p, grid=True)
    p.set_defaults(func=cmd_shape_curve)
    for name in ("triangle-svg", "triangle"):
        p = sub.add_parser(name)
        _common(p, grid=True)
        p.add_argument("--curve", help="JSON sorting-curve document")
        p.add_argument("--svg", help="SVG output path (same as --out)")
        p.set_defaults(func=cmd_shape_triangle)

    g = groups.add_parser("sim", help="process simulation and spectra")
    sub = g.add_subparsers(dest="action", parser_class=_Parser, required=True)
    p = sub.add_parser("diffusion")
    _common(p, seed=True, grid=True)
    p.add_argument("--sigma", type=float)
    p.add_argument("--x0", type=float)
    p.add_argument("--thin", type=int, default=1)
    p.set_defaults(func=cmd_sim_diffusion)
    for name, fn in (("nig-levy", cmd_sim_nig_levy), ("vg-levy", cmd_sim_vg_levy),
                     ("ar1", cmd_sim_ar1)):
        p = sub.add_parser(name)
        _common(p, seed=True, grid=True)
        p.set_defaults(func=fn)
    p = sub.add_parser("grains")
    _common(p, seed=True)
    p.add_argument("--horizon", type=float)
    p.set_defaults(func=cmd_sim_grains)
    p = sub.add_parser("genesis")
    _common(p, seed=True)
    p.add_argument("--n", type=int, default=1000)
    p.set_defaults(func=cmd_sim_genesis)
    p = sub.add_parser("spectrum")
    _common(p, params=False, inp=True)
    p.add_argument("--dt", type=float)
    p.add_argument("--band", help="f_lo,f_hi for the log-log slope")
    p.add_argument("--svg", help="write a log-log plot here")
    p.set_defaults(func=cmd_sim_spectrum)

    g = groups.add_parser("expfam", help="finite-support exponential families")
    sub = g.add_subparsers(dest="action", parser_class=_Parser, required=True)
    p = sub.add_parser("exists")
    _common(p)
    p.add_argument("--t", help="observed statistic, comma-separated")
    p.set_defaults(func=cmd_expfam_exists)
    p = sub.add_parser("tau")
    _common(p)
    p.add_argument("--theta")
    p.set_defaults(func=cmd_expfam_tau)
    p = sub.add_parser("tau-inverse")
    _common(p)
    p.add_argument("--t")
    p.set_defaults(func=cmd_expfam_tau_inverse)
    p = sub.add_parser("cut-check")
    _common(p, inp=True)
    p.add_argument("--split", help="indices of the first block, comma-separated")
    p.set_defaults(func=cmd_expfam_cut_check)
    p = sub.add_parser("plausibility")
    _common(p)
    p.add_argument("--x-obs")
    p.add_argument("--theta")
    p.set_defaults(func=cmd_expfam_plausibility)
    p = sub.add_parser("neyman-scott")
    _common(p, params=False, seed=True)
    p.add_argument("--n-pairs", type=int, default=50)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--reps", type=int, default=10000)
    p.add_argument("--xi", help="pair means, comma-separated (default zeros)")
    p.set_defaults(func=cmd_expfam_neyman_scott)
    return top


def run(argv=None):
    """Dispatch ``argv`` and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.command_path = " ".join(v for v in (args.group, args.action) if v)
        args.func(args)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (HyperbolicError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

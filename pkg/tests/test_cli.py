import json
import math
import subprocess
import sys

import numpy as np
import pytest

from hyperbolic import __version__
from hyperbolic.cli import run
from hyperbolic.dist import GhParams, gh_pdf


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def read_csv(path):
    lines = open(path).read().splitlines()
    assert lines[0].startswith("# metadata: ")
    meta = json.loads(lines[0][len("# metadata: "):])
    header = lines[1].split(",")
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[2:]])
    return meta, header, rows


def read_out(path):
    doc = json.load(open(path))
    return doc["metadata"], doc["result"]


@pytest.fixture
def nig_doc(tmp_path):
    return write_json(tmp_path / "nig.json", {"family": "nig", "alpha": 2.0, "beta": 0.5,
                                              "delta": 1.0, "mu": 0.0})


def test_pdf_grid(tmp_path, nig_doc):
    out = tmp_path / "pdf.csv"
    assert run(["dist", "pdf", "--params", nig_doc, "--grid", "t0=-2,dt=0.5,n=8", "--out", str(out)]) == 0
    meta, header, rows = read_csv(out)
    assert header == ["x", "pdf"]
    assert meta["program"] == "hyperbolic" and meta["version"] == __version__
    assert meta["params"]["alpha"] == 2.0 and meta["command"] == "dist pdf"
    np.testing.assert_allclose(rows[:, 1], gh_pdf(GhParams.nig(2.0, 0.5, 1.0), rows[:, 0]), rtol=1e-15)


def test_cdf_points(tmp_path, nig_doc):
    out = tmp_path / "cdf.csv"
    assert run(["dist", "cdf", "--params", nig_doc, "--x=-1,0,1", "--out", str(out)]) == 0
    _, _, rows = read_csv(out)
    assert np.all(np.diff(rows[:, 1]) > 0)


def test_sample_then_fit_round_trip(tmp_path, nig_doc):
    sample = tmp_path / "s.csv"
    assert run(["dist", "sample", "--params", nig_doc, "--n", "10000", "--seed", "5",
                "--out", str(sample)]) == 0
    meta, header, rows = read_csv(sample)
    assert meta["seed"] == 5 and meta["n"] == 10000 and rows.shape == (10000, 1)
    report = tmp_path / "r.json"
    assert run(["fit", "--family", "nig", "--input", str(sample), "--out", str(report)]) == 0
    meta, res = read_out(report)
    assert meta["params"]["family"] == "nig" and res["converged"]
    for k, true in (("alpha", 2.0), ("beta", 0.5), ("delta", 1.0), ("mu", 0.0)):
        assert abs(res["params"][k] - true) <= 3 * res["stderr_diag"][k]
    assert res["params"]["schema_version"] == 1


def test_default_seed_is_echoed(tmp_path, nig_doc):
    out = tmp_path / "s.csv"
    assert run(["dist", "sample", "--params", nig_doc, "--n", "5", "--out", str(out)]) == 0
    assert read_csv(out)[0]["seed"] == 0


def test_convolve(tmp_path, nig_doc):
    other = write_json(tmp_path / "b.json", {"family": "nig", "alpha": 2.0, "beta": 0.5,
                                             "delta": 2.0, "mu": 1.0})
    out = tmp_path / "c.json"
    assert run(["dist", "convolve", "--params", nig_doc, "--params2", other, "--out", str(out)]) == 0
    _, res = read_out(out)
    assert (res["delta"], res["mu"]) == (3.0, 1.0)
    bad = write_json(tmp_path / "d.json", {"family": "nig", "alpha": 3.0, "beta": 0.5, "delta": 1.0})
    assert run(["dist", "convolve", "--params", nig_doc, "--params2", bad, "--out", str(out)]) == 2


def test_levy_path_byte_identical(tmp_path, nig_doc):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(["sim", "nig-levy", "--params", nig_doc, "--grid", "t0=0,dt=0.01,n=10000",
                    "--seed", "3", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    meta, header, rows = read_csv(a)
    assert header == ["time", "value"] and rows.shape == (10001, 2)
    assert meta["seed"] == 3 and meta["params"]["grid"] == "t0=0,dt=0.01,n=10000"


def test_sim_commands(tmp_path):
    hyp = write_json(tmp_path / "h.json", {"family": "hyperbolic", "alpha": 1, "beta": 0, "delta": 1,
                                           "sigma": 1.0})
    out = tmp_path / "o.csv"
    assert run(["sim", "diffusion", "--params", hyp, "--grid", "dt=0.01,n=1000", "--thin", "10",
                "--out", str(out)]) == 0
    assert read_csv(out)[2].shape == (101, 2)
    vg = write_json(tmp_path / "v.json", {"family": "vg", "lambda": 1, "alpha": 2, "beta": 0})
    assert run(["sim", "vg-levy", "--params", vg, "--grid", "dt=0.1,n=100", "--out", str(out)]) == 0
    ar = write_json(tmp_path / "a.json", {"rho": [0.9, 0.2], "phi": [0.7, 0.3]})
    assert run(["sim", "ar1", "--params", ar, "--grid", "dt=1,n=4095", "--out", str(out)]) == 0
    spec = tmp_path / "spec.csv"
    svg = tmp_path / "spec.svg"
    assert run(["sim", "spectrum", "--input", str(out), "--band", "0.01,0.4", "--svg", str(svg),
                "--out", str(spec)]) == 0
    meta, header, rows = read_csv(spec)
    assert header == ["frequency", "estimate"] and rows.shape == (2048, 2)
    assert "slope" in meta and math.isfinite(meta["parseval_variance"])
    assert svg.read_text().lstrip().startswith("<svg")
    gr = write_json(tmp_path / "g.json", {"hop_rate": 1, "mean_hop": 1, "burial_rate": 0.5,
                                          "mean_burial": 1})
    gout = tmp_path / "g.out.json"
    assert run(["sim", "grains", "--params", gr, "--horizon", "50", "--out", str(gout)]) == 0
    assert 0 <= read_out(gout)[1]["buried_fraction"] <= 1
    ge = write_json(tmp_path / "ge.json", {"barrier": 1, "drift": 2, "beta": 0.3})
    assert run(["sim", "genesis", "--params", ge, "--n", "50", "--out", str(out)]) == 0
    meta, header, rows = read_csv(out)
    assert header == ["log_size"] and rows.shape == (50, 1) and meta["params"]["nig"]["family"] == "nig"


def test_shape_commands(tmp_path):
    hyp = write_json(tmp_path / "h.json", {"family": "hyperbolic", "alpha": 2, "beta": 1, "delta": 1})
    out = tmp_path / "o.json"
    assert run(["shape", "coords", "--params", hyp, "--out", str(out)]) == 0
    res = read_out(out)[1]
    assert res["xi"] == pytest.approx(0.60500033370605560912, rel=1e-15)
    assert run(["shape", "inverse", "--chi", str(res["chi"]), "--xi", str(res["xi"]), "--delta", "1",
                "--out", str(out)]) == 0
    back = read_out(out)[1]
    assert back["alpha"] == pytest.approx(2.0, rel=1e-12) and back["family"] == "hyperbolic"
    curve = write_json(tmp_path / "c.json", {"alpha0": 3, "beta0": 0.5, "kappa": 0.2, "epsilon": -0.1})
    csv = tmp_path / "c.csv"
    assert run(["shape", "curve", "--params", curve, "--grid", "t0=0,dt=0.5,n=80", "--out", str(csv)]) == 0
    meta, header, rows = read_csv(csv)
    assert header == ["t", "alpha", "beta", "chi", "xi"]
    assert meta["truncated"] and rows.shape[0] < 81
    assert np.all((np.abs(rows[:, 3]) < rows[:, 4]) & (rows[:, 4] < 1))


def test_triangle_svg(tmp_path):
    pts = write_json(tmp_path / "p.json", [{"family": "hyperbolic", "alpha": 2, "beta": 1, "delta": 1,
                                            "label": "sample A"},
                                           {"family": "nig", "alpha": 1, "beta": 0, "delta": 1}])
    curve = write_json(tmp_path / "c.json", {"alpha0": 3, "beta0": 0.5, "kappa": 0.2,
                                             "epsilon": -0.1, "t": list(np.linspace(0, 10, 21))})
    svg = tmp_path / "t.svg"
    assert run(["shape", "triangle", "--params", pts, "--curve", curve, "--svg", str(svg)]) == 0
    text = svg.read_text()
    assert 'class="triangle"' in text and 'class="trace"' in text
    assert text.count('class="point"') == 2 and "sample A" in text
    assert '"seed"' in text and '"version"' in text
    alias = tmp_path / "u.svg"
    assert run(["shape", "triangle-svg", "--params", pts, "--out", str(alias)]) == 0


def test_expfam_commands(tmp_path):
    model = write_json(tmp_path / "m.json", {"support_points": [0, 1], "t_values": [[0], [1]]})
    out = tmp_path / "o.json"
    assert run(["expfam", "exists", "--params", model, "--t", "0", "--out", str(out)]) == 0
    res = read_out(out)[1]
    assert res["classification"] == "Boundary" and res["certificate"] == [-1.0]
    assert run(["expfam", "tau-inverse", "--params", model, "--t", "0.8", "--out", str(out)]) == 0
    assert read_out(out)[1]["theta"][0] == pytest.approx(math.log(4), rel=1e-12)
    assert run(["expfam", "tau-inverse", "--params", model, "--t", "1", "--out", str(out)]) == 2
    assert run(["expfam", "tau", "--params", model, "--theta", "0", "--out", str(out)]) == 0
    assert read_out(out)[1]["tau"] == [0.5]
    assert run(["expfam", "plausibility", "--params", model, "--x-obs", "0",
                "--theta", str(math.log(3)), "--out", str(out)]) == 0
    assert read_out(out)[1]["plausibility"] == pytest.approx(1 / 3)
    prod = write_json(tmp_path / "p.json", {"support_points": [0, 1, 2, 3],
                                            "t_values": [[0, 0], [0, 1], [1, 0], [1, 1]]})
    grid = tmp_path / "grid.csv"
    grid.write_text("theta1,theta2\n0,0\n1,-0.5\n-0.7,1.2\n")
    assert run(["expfam", "cut-check", "--params", prod, "--split", "0", "--input", str(grid),
                "--out", str(out)]) == 0
    assert read_out(out)[1]["passed"] is True
    assert run(["expfam", "neyman-scott", "--n-pairs", "10", "--reps", "200", "--out", str(out)]) == 0
    meta, res = read_out(out)
    assert meta["seed"] == 0 and res["reps"] == 200


def test_exit_codes(tmp_path, nig_doc, capsys):
    missing = str(tmp_path / "nope.csv")
    assert run(["fit", "--input", missing]) == 2
    assert "nope.csv" in capsys.readouterr().err
    bad = tmp_path / "bad.csv"
    bad.write_text("value\n1.0\n2.0\nfoo\n")
    assert run(["fit", "--input", str(bad)]) == 2
    assert "bad.csv:4" in capsys.readouterr().err
    assert run(["fit", "--bogus"]) == 1
    assert run(["dist", "pdf", "--params", nig_doc]) == 1
    assert run(["shape", "inverse", "--chi", "0.6", "--xi", "0.5", "--delta", "1"]) == 2
    assert run(["fit", "--family", "vg", "--input", str(bad)]) == 1
    assert run(["--version"]) == 0
    assert run([]) == 1


def test_module_entry_point(tmp_path, nig_doc):
    out = subprocess.run([sys.executable, "-m", "hyperbolic.cli", "dist", "pdf", "--params", nig_doc,
                          "--x", "0"], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.splitlines()[1] == "x,pdf"

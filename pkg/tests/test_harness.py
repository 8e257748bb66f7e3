import io
import json
import math

import numpy as np
import pytest

from modcont import harness as hs
from modcont.cli import main
from modcont.coefficients import Coefficient
from modcont.errors import PeriodMismatch
from modcont.modulus import ModulusFunction, odd_periodic_extension
from modcont.solver import Dirichlet, Periodic, SolverConfig, Trajectory, solve
from modcont.supersolution import minimal_supersolution


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def test_seed_override(monkeypatch):
    monkeypatch.setenv("MODCONT_SEED", "17")
    assert hs.default_seed() == 17
    a = hs.random_fourier_data(64, 1.0, 17)
    b = hs.random_fourier_data(64, 1.0, 17)
    assert np.array_equal(a.values, b.values)
    assert a.osc == pytest.approx(1.0)


def test_perturbed_coefficient_dominates():
    g = hs.perturbed_coefficient(Coefficient.csf(), 1.0)
    x = np.linspace(0, 1, 50)
    p = np.linspace(-3, 3, 50)
    assert np.all(g.values(x, 0.0, 0 * x, p) >= Coefficient.csf().values(p))


def _stationary(values, period, n):
    cfg = SolverConfig(n, 1.0, Periodic(period), output_times=(0.0,))
    f = np.asarray(values, dtype=float)[None, :]
    return Trajectory(np.array([0.0]), cfg.grid(), f, cfg)


def test_constant_u_passes():
    u = _stationary(np.ones(32), 1.0, 32)
    phi_cfg = SolverConfig(16, 1.0, Dirichlet((0, 0.5)), output_times=(0.0,))
    phi = Trajectory(np.array([0.0]), phi_cfg.grid(), np.full((1, 17), 0.3), phi_cfg)
    rep = hs.two_point_check(u, phi)
    assert rep.passed and rep.max_Z < 0


def test_period_mismatch():
    u = _stationary(np.ones(32), 1.0, 32)
    phi_cfg = SolverConfig(16, 1.0, Dirichlet((0, 1.0)), output_times=(0.0,))
    phi = Trajectory(np.array([0.0]), phi_cfg.grid(), np.full((1, 17), 0.3), phi_cfg)
    with pytest.raises(PeriodMismatch):
        hs.two_point_check(u, phi)


def test_equality_case_odd_extension():
    psi = ModulusFunction.constant(1.0, 2.0)
    cfg = SolverConfig(64, 0.02, Dirichlet((0, 1)), output_times=(0.0, 0.01, 0.02))
    br = minimal_supersolution(Coefficient.heat(), psi, 8, cfg)
    u0 = odd_periodic_extension(br.lower.at(0.0), 2.0)
    u = solve(Coefficient.heat(), u0.values, SolverConfig(128, 0.02, Periodic(2.0),
                                                          output_times=tuple(br.times)))
    rep = hs.two_point_check(u, br.lower)
    # attained on the antidiagonal y = -x (mod period) up to discretisation
    assert abs(rep.max_Z) < 1e-3
    assert math.remainder(rep.witness[0] + rep.witness[1], 2.0) == pytest.approx(0.0, abs=1e-9)


def test_random_data_modulus_experiment():
    u0 = hs.random_fourier_data(64, 1.0, 3)
    cfg = SolverConfig(64, 0.01, Dirichlet((0, 0.5)), output_times=tuple(np.linspace(0, 0.01, 6)))
    for coeff in (Coefficient.heat(), Coefficient.csf()):
        assert hs.modulus_experiment(coeff, u0, 8, cfg).passed
        perturbed = hs.perturbed_coefficient(coeff, 1.0)
        assert hs.modulus_experiment(coeff, u0, 8, cfg, run_coeff=perturbed).passed


def test_sharpness_small():
    cfg = SolverConfig(64, 0.04, Dirichlet((0, 1)))
    psi = ModulusFunction.constant(1.0, 2.0)
    ratios = [hs.sharpness_experiment(Coefficient.heat(), psi, k, 0.5, 0.04, cfg).ratio for k in (4, 16)]
    assert ratios[0] < ratios[1] <= 1.0 + 1e-9
    with pytest.raises(ValueError):
        hs.sharpness_experiment(Coefficient.heat(), psi, 4, 1.5, 0.04, cfg)


# ---------------------------------------------------------------------------
# command line

def test_cli_classify():
    code, out = run(["classify", "--coeff", "csf", "--json"])
    assert code == 0
    assert json.loads(out) == {"bounded_above": "yes", "bounded_below": "yes"}


def test_cli_bound():
    code, out = run(["bound", "--coeff", "heat", "--psi", "const:M=1", "--t", "0.25", "--json"])
    assert code == 0
    assert json.loads(out)["upper"] == pytest.approx(2.828427, abs=1e-6)
    code, out = run(["bound", "--coeff", "hom:gamma=3", "--psi", "const:M=1", "--t", "0.1", "--json"])
    res = json.loads(out)
    assert (res["upper"], res["lower"]) == ("+inf", "-inf")


def test_cli_usage_errors(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,u\n0,1\n0.5,oops\n")
    assert run(["solve", "--coeff", "heat", "--init", str(bad), "--T", "0.1"])[0] == 2
    assert run(["nonsense"])[0] == 2
    assert run(["bound", "--coeff", "wave", "--psi", "const:M=1", "--t", "1"])[0] == 2


def test_cli_numeric_error():
    code, _ = run(["bound", "--coeff", "hom:gamma=3", "--psi", "hoelder:K=1,beta=0.5", "--t", "0.1"])
    assert code == 3


def test_cli_solve_and_verify(tmp_path):
    x = np.arange(32) / 32
    init = tmp_path / "u.csv"
    init.write_text("x,u\n" + "".join(f"{float(a)!r},{math.sin(2 * math.pi * a)!r}\n" for a in x))
    out = tmp_path / "traj.csv"
    code, _ = run(["solve", "--coeff", "heat", "--init", str(init), "--T", "0.01", "--out", str(out),
                   "--frames", "3"])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,x,u" and len(lines) == 1 + 3 * 32
    code, text = run(["verify-modulus", "--field", str(init), "--psi", "const:M=1"])
    assert code == 0 and json.loads(text)["pass"]
    code, text = run(["verify-modulus", "--field", str(init), "--psi", "const:M=0.5"])
    assert code == 1
    code, text = run(["verify-modulus", "--field", str(init), "--psi", "const:M=1", "--coeff", "csf",
                      "--T", "0.005", "--k", "8"])
    assert code == 0 and json.loads(text)["evolution"]["pass"]


def test_cli_translator_and_supersolution(tmp_path):
    out = tmp_path / "tr.csv"
    assert run(["translator", "--coeff", "csf", "--speed", "1", "--prange=-1:1", "--n", "5",
                "--out", str(out)])[0] == 0
    rows = out.read_text().splitlines()
    assert rows[0] == "p,x,v" and len(rows) == 6
    out = tmp_path / "ss.csv"
    assert run(["supersolution", "--coeff", "heat", "--psi", "const:M=1", "--L", "2", "--k", "4",
                "--T", "0.01", "--N", "16", "--out", str(out)])[0] == 0
    assert out.read_text().splitlines()[0] == "t,z,lower,upper"


def test_cli_sharpness_and_examples():
    code, out = run(["sharpness", "--coeff", "heat", "--psi", "const:M=1", "--k", "8", "--t", "0.04",
                     "--N", "64"])
    assert code == 0 and 0.8 < json.loads(out)["ratio"] <= 1.0
    code, out = run(["examples", "--json"])
    res = json.loads(out)
    assert code == 0 and set(res) == {"heat_constant", "heat_hoelder_exponents", "power_law_criteria"}

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcont.errors import BoundaryNonzero, PeriodMismatch
from modcont.modulus import (ModulusFunction, PeriodicField, check_modulus, legendre_b,
                             legendre_b_tilde, measured_modulus, mollify_psi,
                             odd_periodic_extension, parse_modulus, upper_concave_hull)


def brute_b(psi, z, n=200001):
    # uniform plus log-spaced points so tiny maximisers are resolved
    X = psi.half_period
    x = np.concatenate((np.linspace(0.0, X, n), np.geomspace(1e-14, X, n)))
    return float(np.max(psi(x) - x * z))


@given(K=st.floats(0.2, 3.0), beta=st.floats(0.1, 1.0), z=st.floats(-3.0, 30.0))
@settings(max_examples=80, deadline=None)
def test_legendre_hoelder_matches_brute_force(K, beta, z):
    psi = ModulusFunction.hoelder(K, beta, 2.0)
    assert legendre_b(psi, z) == pytest.approx(brute_b(psi, z), rel=1e-6, abs=1e-6)


@given(M=st.floats(0.1, 5.0), z=st.floats(-10.0, 10.0))
def test_legendre_constant(M, z):
    psi = ModulusFunction.constant(M, 3.0)
    assert legendre_b(psi, z) == pytest.approx(M + max(0.0, -z) * 1.5)
    assert legendre_b_tilde(psi, z) == pytest.approx(legendre_b(psi, z) + 1.5 * z)


def test_legendre_piecewise_linear():
    psi = ModulusFunction.piecewise_linear([0, 0.25, 0.5, 1.0], [0, 1.0, 1.2, 0.0])
    for z in (-2.0, 0.0, 0.5, 1.0, 5.0):
        assert legendre_b(psi, z) == pytest.approx(brute_b(psi, z), abs=1e-9)


def test_piecewise_linear_rejects_convex():
    with pytest.raises(ValueError):
        ModulusFunction.piecewise_linear([0, 0.5, 1.0], [0, 0.1, 1.0])


def test_parse_modulus(tmp_path):
    assert parse_modulus("const:M=2", 1.0).M == 2.0
    psi = parse_modulus("hoelder:K=1,beta=0.5", 2.0)
    assert psi.sup == pytest.approx(1.0)
    path = tmp_path / "psi.csv"
    path.write_text("z,psi\n0,0\n0.5,1\n1,0\n")
    assert parse_modulus(f"pl:{path}", 2.0)(0.25) == 0.5
    with pytest.raises(ValueError):
        parse_modulus(f"pl:{path}", 3.0)
    with pytest.raises(ValueError):
        parse_modulus("cosine:M=1", 1.0)


def test_check_modulus_sine():
    n, L = 128, 2 * math.pi
    u = PeriodicField(L, np.sin(np.arange(n) * L / n))
    # sin(y) - sin(x) = 2 cos((x+y)/2) sin((y-x)/2) <= 2 sin((y-x)/2)
    # nodes at every pair half-distance, so the interpolant is exact there
    z = np.linspace(0, math.pi, n + 1)
    good = ModulusFunction.piecewise_linear(z, np.sin(z) + 1e-12)
    assert check_modulus(u, good).holds
    bad = ModulusFunction.constant(0.9, L)
    rep = check_modulus(u, bad)
    assert not rep.holds and rep.worst_violation > 0
    with pytest.raises(PeriodMismatch):
        check_modulus(u, ModulusFunction.constant(1.0, 1.0))


@given(seed=st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_measured_modulus_is_a_tight_concave_modulus(seed):
    rng = np.random.default_rng(seed)
    u = PeriodicField(1.0, rng.standard_normal(48).cumsum() * 0 + rng.standard_normal(48))
    psi = measured_modulus(u)
    assert check_modulus(u, psi).holds
    # concave and vanishing at both ends
    h = psi.heights
    assert h[0] == 0 and h[-1] == pytest.approx(0, abs=1e-12)
    assert np.all(np.diff(h, 2) <= 1e-12)
    # tight: any uniform shrink fails somewhere
    shrunk = ModulusFunction.piecewise_linear(psi.nodes, 0.99 * h)
    assert not check_modulus(u, shrunk).holds


def test_upper_concave_hull():
    x = np.array([0, 1, 2, 3, 4.0])
    y = np.array([0, 2, 1, 2.5, 0.0])
    hx, hy = upper_concave_hull(x, y)
    assert list(hx) == [0, 1, 3, 4]
    assert np.all(np.interp(x, hx, hy) >= y)


def test_odd_extension():
    v = np.array([0.0, 1.0, 1.5, 1.0, 0.0])
    u = odd_periodic_extension(v, 2.0)
    assert u.n == 8
    assert np.allclose(u.values, [0, 1, 1.5, 1, 0, -1, -1.5, -1])
    with pytest.raises(BoundaryNonzero):
        odd_periodic_extension(np.array([0.1, 1.0, 0.0]), 1.0)


@pytest.mark.parametrize("psi", [
    ModulusFunction.constant(1.0, 2.0),
    ModulusFunction.hoelder(1.0, 0.5, 2.0),
    ModulusFunction.piecewise_linear([0, 0.5, 1.0], [0, 1.0, 0.0]),
], ids=["const", "hoelder", "tent"])
@pytest.mark.parametrize("k", [1, 4, 64])
def test_mollified_sandwich(psi, k):
    mol = mollify_psi(psi, k)
    X = psi.half_period
    z = np.linspace(0, X, 4001)
    pk = mol.psi_k
    assert pk(0.0) == 0 and pk(X) == 0
    assert np.all(pk(z) <= psi(z) + 1e-12)
    r = k / (1.0 + k)
    upper = pk(0.25 * 2 * X + r * (z - 0.5 * X)) / r
    assert np.all(psi(z[1:-1]) <= upper[1:-1] + 1e-12)
    assert np.all(np.diff(pk.heights, 2) <= 1e-12)

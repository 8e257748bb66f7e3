import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcont.coefficients import CSF, HEAT, HOMOGENEOUS, NPCSF, Coefficient
from modcont.errors import DomainError, OutOfRange
from modcont.translators import (asymptotic_endpoints, build_translator, closed_form_translator,
                                 eval_translator)


def test_heat_parabola():
    prof = build_translator(Coefficient.heat(), 2.0, p_range=(-5, 5))
    for x in np.linspace(-2.4, 2.4, 13):
        assert eval_translator(prof, x) == pytest.approx(x * x, abs=1e-12)


def test_grim_reaper():
    V = 1.3
    prof = build_translator(Coefficient.csf(), V, p_range=(-60, 60))
    for s in np.linspace(-1.4 / V, 1.4 / V, 15):
        assert eval_translator(prof, s) == pytest.approx(-math.log(math.cos(V * s)) / V, abs=1e-10)


def test_semicircle():
    prof = build_translator(Coefficient.npcsf(), 1.0, anchor=(0.0, -1.0), p_range=(-200, 200))
    for s in np.linspace(-0.99, 0.99, 11):
        assert eval_translator(prof, s) == pytest.approx(-math.sqrt(1 - s * s), abs=1e-10)


@given(V=st.floats(0.2, 5.0), t=st.floats(0.0, 3.0), s=st.floats(-0.9, 0.9))
@settings(max_examples=50, deadline=None)
def test_translation_in_time(V, t, s):
    prof = build_translator(Coefficient.csf(), V, p_range=(-40, 40))
    x = s * (math.pi / 2) / V
    assert eval_translator(prof, x, t) == pytest.approx(eval_translator(prof, x) + V * t, abs=1e-9)


@pytest.mark.parametrize("coeff", [Coefficient.heat(), Coefficient.csf(), Coefficient.npcsf(),
                                   Coefficient.asymptotically_homogeneous(2.5)],
                         ids=lambda c: c.describe())
def test_profile_ode_residual(coeff):
    # alpha(v') v'' = V along the sampled profile
    V = 0.7
    prof = build_translator(coeff, V, p_range=(-3, 3))
    x0, x1 = prof.x_range
    xs = np.linspace(x0, x1, 41)[5:-5]
    h = 1e-4 * (x1 - x0)
    for x in xs:
        vm, v0, vp = (eval_translator(prof, x + d) for d in (-h, 0.0, h))
        p = (vp - vm) / (2 * h)
        vpp = (vp - 2 * v0 + vm) / (h * h)
        assert coeff.values(p) * vpp == pytest.approx(V, rel=1e-4)


@given(g=st.floats(0.3, 4.0).filter(lambda g: abs(g - 1) > 0.05 and abs(g - 2) > 0.05),
       V=st.floats(0.3, 3.0), s=st.floats(0.2, 3.0))
@settings(max_examples=60, deadline=None)
def test_homogeneous_closed_form_solves_descending_equation(g, V, s):
    f = lambda q: closed_form_translator(HOMOGENEOUS, V, q, gamma=g)  # noqa: E731
    h = 1e-4 * s
    p = (f(s + h) - f(s - h)) / (2 * h)
    vpp = (f(s + h) - 2 * f(s) + f(s - h)) / (h * h)
    assert abs(p) ** (-g) * vpp == pytest.approx(-V, rel=1e-3)


@pytest.mark.parametrize("g", [1.0, 2.0])
def test_homogeneous_special_exponents(g):
    V, s, h = 1.5, 0.8, 1e-4
    f = lambda q: closed_form_translator(HOMOGENEOUS, V, q, gamma=g)  # noqa: E731
    p = (f(s + h) - f(s - h)) / (2 * h)
    vpp = (f(s + h) - 2 * f(s) + f(s - h)) / (h * h)
    assert abs(p) ** (-g) * vpp == pytest.approx(-V, rel=1e-4)
    assert closed_form_translator(HOMOGENEOUS, 1.0, 1.0, gamma=2.0) == 0.0


def test_closed_forms_and_errors():
    assert closed_form_translator(HEAT, 2.0, 3.0) == 9.0
    assert closed_form_translator(NPCSF, 1.0, 0.6) == pytest.approx(-0.8)
    with pytest.raises(DomainError):
        closed_form_translator(CSF, 1.0, 2.0)
    with pytest.raises(DomainError):
        closed_form_translator("tabulated", 1.0, 0.0)
    with pytest.raises(ValueError):
        closed_form_translator(HEAT, 0.0, 1.0)


def test_asymptotic_endpoints():
    lo, hi = asymptotic_endpoints(Coefficient.csf(), 1.0)
    assert (lo, hi) == (pytest.approx(-math.pi / 2), pytest.approx(math.pi / 2))
    assert asymptotic_endpoints(Coefficient.npcsf(), 2.0) == (pytest.approx(-0.5), pytest.approx(0.5))
    assert asymptotic_endpoints(Coefficient.heat(), 1.0) == (-math.inf, math.inf)


def test_out_of_range_and_inverse():
    prof = build_translator(Coefficient.csf(), 1.0, p_range=(-2, 2))
    with pytest.raises(OutOfRange):
        prof.slope_at(1.5)
    for p in (-1.9, -0.3, 0.0, 1.1):
        assert prof.slope_at(prof.x(p)) == pytest.approx(p, abs=1e-10)
    with pytest.raises(DomainError):
        build_translator(Coefficient.homogeneous(1.5), 1.0, p_range=(-1, 1), p_ref=0.5)

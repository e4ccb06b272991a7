import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdcavity import CavityModel, ConfigError, DomainError, PoleError
from mdcavity.materials import (
    eval_magnetodielectric,
    eval_metal,
    identity_residuals,
    omega_from_epsilon,
    refractive_index,
)


def test_derived_constants_default_parameters():
    m = CavityModel(omega_r=2.0)
    assert m.eps_tilde == pytest.approx(1.25, rel=1e-15)
    assert m.mu_tilde == pytest.approx(1.64, rel=1e-15)
    assert math.isclose(m.Delta, 4.0 * 1.05)
    assert math.isclose(m.delta, 4.0 * 0.16)


@pytest.mark.parametrize(
    "kw",
    [dict(chi_eps=0.0), dict(omega_r=-1.0), dict(chi_mu=-1.5), dict(omega_r=float("nan")), dict(omega_r=1.0, omega_p=2.0)],
)
def test_invalid_models_rejected(kw):
    with pytest.raises(ConfigError):
        CavityModel(**kw)


def test_metal_plasma_edge():
    m = CavityModel(omega_r=0.7)
    eps, mu = eval_metal(m, 0.7)
    assert eps == 0.0 and mu == 1.0
    with pytest.raises(DomainError):
        eval_metal(m, 0.0)


def test_resonance_guard():
    m = CavityModel(omega_r=1.0)
    with pytest.raises(PoleError):
        eval_magnetodielectric(m, 1.0)
    eps, mu = eval_magnetodielectric(m, 0.0)
    assert eps == pytest.approx(1.25) and mu == pytest.approx(1.64)


def test_refractive_index_branches():
    m = CavityModel()
    # righthanded, lefthanded, Reststrahlen
    assert refractive_index(m, 0.5).real > 0
    w_lh = 1.05
    eps, mu = eval_magnetodielectric(m, w_lh)
    assert eps < 0 and mu < 0
    assert refractive_index(m, w_lh).real < 0
    w_rb = 1.2
    eps, mu = eval_magnetodielectric(m, w_rb)
    assert eps * mu < 0
    n = refractive_index(m, w_rb)
    assert n.real == 0 and n.imag > 0


@settings(max_examples=200, deadline=None)
@given(
    wr=st.floats(0.01, 50.0),
    ratio=st.floats(0.01, 10.0).filter(lambda r: abs(r - 1.0) > 1e-6),
)
def test_product_identities(wr, ratio):
    # rounding in the Lorentz factor grows like 1/|1 - ratio^2|
    m = CavityModel(omega_r=wr)
    r1, r2 = identity_residuals(m, wr * ratio)
    tol = 1e-14 / abs(1.0 - ratio * ratio) + 1e-14
    assert r1 < tol and r2 < tol


@settings(max_examples=100, deadline=None)
@given(x=st.floats(-1e6, 0.999))
def test_epsilon_round_trip(x):
    m = CavityModel(omega_r=0.3)
    w = omega_from_epsilon(m, x)
    assert eval_metal(m, w).eps == pytest.approx(x, rel=1e-9, abs=1e-12)


def test_vectorized_evaluation():
    m = CavityModel()
    w = np.linspace(0.1, 0.9, 5)
    eps, mu = eval_magnetodielectric(m, w)
    assert eps.shape == (5,) and np.all(mu > eps)

import math

import numpy as np
import pytest

from mdcavity import Branch, CavityModel, DomainError, Medium, Zone
from mdcavity.spectrum import (
    band_limit_curve,
    band_limit_epsilons,
    band_limit_omega,
    band_limits_at_k,
    classify_zone,
    classify_zones,
    kappa,
    kappa_squared,
    spectral_point,
)


def test_branch_conventions(model):
    # evanescent: real positive
    assert kappa(model, 0.5, 2.0, Medium.VACUUM) == pytest.approx(math.sqrt(4.0 - 0.25))
    # propagating vacuum: -i
    k0 = kappa(model, 2.0, 1.0, Medium.VACUUM)
    assert k0.real == 0 and k0.imag < 0
    # lefthanded band: +i
    w = 1.05
    kr = kappa(model, w, 0.1, Medium.RIGHT)
    assert kr.real == 0 and kr.imag > 0


def test_k_zero_band_limits(model):
    b = band_limits_at_k(model, 0.0)
    assert b["plus"] == pytest.approx(math.sqrt(1.25))
    assert b["minus_propagating"] == pytest.approx(math.sqrt(1.64))
    assert b["metal"] == 1.0


@pytest.mark.parametrize("k", [0.01, 0.3, 1.0, 5.0, 40.0])
def test_band_limits_zero_kappa(models, k):
    b = band_limits_at_k(models, k)
    for key in ("plus", "minus_evanescent", "minus_propagating"):
        w = b[key]
        k2 = kappa_squared(models, w, k, Medium.RIGHT)
        scale = k * k + w * w * 10
        assert abs(k2) < 1e-12 * scale
    assert b["minus_evanescent"] < models.omega_r < b["plus"] < b["minus_propagating"]


def test_z_and_k_parametrizations_agree(model):
    z = np.array([-1.0, -0.3, 0.2, 3.0])
    w = band_limit_omega(model, Branch.PLUS, z)
    k = np.sqrt(z + w * w)
    wk = [band_limits_at_k(model, kk)["plus"] for kk in k]
    assert np.allclose(w, wk, rtol=1e-12)


def test_band_limit_support(model):
    with pytest.raises(DomainError):
        band_limit_omega(model, Branch.MINUS_EVANESCENT, -0.1)
    with pytest.raises(DomainError):
        band_limit_omega(model, Branch.PLUS, -10.0)
    ep, em = band_limit_epsilons(model, 1.0)
    assert ep > 0 > em


def test_band_limit_curve_asymptotes(model):
    c = band_limit_curve(model, Branch.PLUS, z=np.geomspace(1.0, 1e8, 20))
    assert c.omega[-1] == pytest.approx(model.omega_r, rel=1e-3)
    assert np.all(np.diff(c.omega) < 0)


@pytest.mark.parametrize(
    "w,k,zone",
    [
        (0.5, 2.0, Zone.I),
        (0.95, 0.5, Zone.II),
        (1.02, 0.05, Zone.III),
        (1.2, 0.3, Zone.IV),
        (3.0, 0.5, Zone.V),
    ],
)
def test_zone_samples(model, w, k, zone):
    got = classify_zone(model, w, k)
    assert got in (zone, Zone(zone.value + "a")) if zone in (Zone.III, Zone.IV) else got is zone


def test_zone_grid_matches_scalar(model):
    w = np.linspace(0.05, 2.5, 23)
    k = np.linspace(0.0, 3.0, 19)
    W, K = np.meshgrid(w, k)
    grid = classify_zones(model, W, K)
    for i in range(0, 19, 3):
        for j in range(0, 23, 4):
            if grid[i, j] is not None:
                assert grid[i, j] is classify_zone(model, W[i, j], K[i, j])


def test_spectral_point(model):
    p = spectral_point(model, 0.8, 1.2)
    assert p.z == pytest.approx(1.44 - 0.64, rel=1e-12)
    assert p.kappa_0.real > 0

import math
import warnings

import numpy as np
import pytest

from mdcavity import CavityModel, ConvergenceError, DomainError
from mdcavity import casimir as C


@pytest.mark.parametrize("k", [0.05, 0.7, 2.5])
@pytest.mark.parametrize("pol", [0, 1])
def test_real_and_imaginary_slices_agree(models, k, pol):
    a = C.density_integral(models, k, pol)
    b = C.log_integral(models, k, pol)
    assert a == pytest.approx(b, rel=1e-6, abs=1e-12)


@pytest.mark.parametrize("k", [0.2, 1.0, 3.0])
def test_perfect_slice_matches_bessel_series(k):
    from scipy.special import k1

    m = np.arange(1, 400)
    ref = -np.sum(k * k1(2 * m * k) / (m * math.pi))
    assert C._perfect_density_integral(k) == pytest.approx(ref, rel=1e-9, abs=1e-13)


def test_imaginary_perfect_limit():
    assert C.eta_total_imaginary_freq(CavityModel(), perfect=True) == pytest.approx(C.PERFECT_ETA, abs=1e-9)
    assert C.PERFECT_ETA == pytest.approx(-0.1722570927, abs=1e-10)
    assert C.N_NORM * C.PERFECT_ETA == pytest.approx(-1.0)


def _metal_vs_static_dielectric(ce, cm):
    """Perfect conductor facing a nondispersive (1 + ce, 1 + cm) half-space."""
    from scipy.integrate import dblquad

    e, mu = 1 + ce, 1 + cm

    def f(x, k):
        k0 = math.hypot(k, x)
        kr = math.sqrt(k * k + e * mu * x * x)
        rs = (mu * k0 - kr) / (mu * k0 + kr)
        rp = (e * k0 - kr) / (e * k0 + kr)
        ex = math.exp(-2 * k0)
        return k * (math.log1p(rs * ex) + math.log1p(-rp * ex)) / math.pi

    return dblquad(f, 0, 30, 0, 30, epsabs=1e-13)[0]


def test_large_distance_limit():
    # only the metal becomes a perfect mirror; the other wall keeps its static response
    ref = _metal_vs_static_dielectric(0.25, 0.64)
    assert ref > 0
    e1 = C.eta_total_imaginary_freq(CavityModel(omega_r=100.0))
    e2 = C.eta_total_imaginary_freq(CavityModel(omega_r=1000.0))
    assert abs(e2 / ref - 1) < abs(e1 / ref - 1) < 0.05
    assert e2 == pytest.approx(ref, rel=0.01)


def test_beta_is_cached():
    C.beta_coefficients.cache_clear()
    a = C.beta_coefficients(0.25)
    b = C.beta_coefficients(0.25)
    assert a is b
    assert a[0] > 0 > a[1]


def test_asymptote_warns_outside_small_distance():
    with pytest.warns(RuntimeWarning):
        C.eta_polariton_asymptotic(CavityModel(omega_r=1.0), "p+")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        C.eta_polariton_asymptotic(CavityModel(omega_r=0.1), "s+")


def test_s_polariton_needs_magnetic_response():
    assert C.eta_polariton(CavityModel(chi_mu=0.0, omega_r=0.5), "s+") == 0.0
    with pytest.raises(DomainError):
        C.eta_polariton(CavityModel(), "s0+")


def test_polariton_signs_small_grid():
    for wr in (0.2, 1.5):
        m = CavityModel(omega_r=wr)
        assert C.eta_polariton(m, "s+") > 0
        assert C.eta_polariton(m, "p+") > 0
        assert C.eta_polariton(m, "p-") < 0


def test_bulk_identity_and_forms():
    m = CavityModel(omega_r=0.1)
    b = C.eta_bulk(m, "s")
    assert b.eta_bulk == pytest.approx(-b.eta_0 + b.eta_gt + b.eta_lt, rel=1e-14)
    k = C.eta_bulk(m, "s", form="k")
    assert math.isnan(k.eta_0) and math.isfinite(k.eta_bulk)
    with pytest.raises(DomainError):
        C.eta_bulk(m, "s", form="x")


def test_force_of_constant_eta_is_perfect_scaling():
    pts = C.casimir_force(CavityModel(), [0.5, 1.0, 2.0], energy=lambda m: C.PERFECT_ETA)
    for p in pts:
        assert p.force_norm == pytest.approx(1.0 / p.omega_r**4, rel=1e-9)


def test_force_noise_is_detected():
    rng = np.random.default_rng(0)
    with pytest.raises(ConvergenceError):
        C.casimir_force(CavityModel(), [1.0], energy=lambda m: 1e-3 + 1e-4 * rng.standard_normal())


def test_sign_changes_interpolates():
    pts = [C.ForcePoint(1.0, 1.0, 0, 0), C.ForcePoint(2.0, -1.0, 0, 0), C.ForcePoint(3.0, -2.0, 0, 0)]
    assert C.sign_changes(pts) == [1.5]


def test_breakdown_row_columns():
    b = C.EnergyBreakdown(0.1, 1, 2, -3, C.BulkParts(0, 1, 2, 3), C.BulkParts(0, 0, 0, 0), 4, 5)
    assert tuple(b.row()) == C.BREAKDOWN_COLUMNS
    assert b.eta_total == 9 and b.eta_polaritons == 0

"""Propagation constants, band limits and the zone map of the W-K plane.

Curves are parametrized by ``z = K^2 - W^2`` wherever possible, with
``K = sqrt(z + W^2)`` recovered on demand.  The magneto-dielectric band
limits are the solutions of ``kappa_R = 0``; in terms of ``x = eps_L`` they
solve ``x^2 z + Delta x - delta = 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import BoundaryError, DomainError, PoleError
from .materials import POLE_GUARD, CavityModel, eval_magnetodielectric, omega_from_epsilon

#: absolute tolerance used to reject points sitting on a zone boundary
BOUNDARY_TOL = 1e-10


class Medium(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    VACUUM = "vacuum"


class Branch(enum.Enum):
    PLUS = "plus"
    MINUS_EVANESCENT = "minus_evanescent"
    MINUS_PROPAGATING = "minus_propagating"
    METAL = "metal"


class Zone(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IIIa = "IIIa"
    IV = "IV"
    IVa = "IVa"
    V = "V"
    METAL_BULK = "METAL_BULK"
    METAL_EVANESCENT = "METAL_EVANESCENT"
    LIGHTCONE_PROP = "LIGHTCONE_PROP"
    LIGHTCONE_EVAN = "LIGHTCONE_EVAN"


@dataclass
class ModeCurve:
    """A dispersion branch sampled in the ``z`` parametrization."""

    label: str
    z: np.ndarray
    omega: np.ndarray
    endpoint: float = float("nan")
    asymptote: float = float("nan")
    residual: np.ndarray | None = field(default=None, repr=False)

    @property
    def k(self) -> np.ndarray:
        return np.sqrt(np.maximum(self.z + self.omega**2, 0.0))

    def __len__(self) -> int:
        return len(self.z)


@dataclass(frozen=True)
class SpectralPoint:
    omega: float
    k_par: float
    z: float
    kappa_L: complex
    kappa_R: complex
    kappa_0: complex
    zone: Zone


# ---------------------------------------------------------------------------
# propagation constants


def _branch_sqrt(k2, lefthanded=False):
    k2 = np.asarray(k2, dtype=float)
    s = np.sqrt(np.abs(k2))
    lh = np.asarray(lefthanded, dtype=bool)
    out = np.where(k2 >= 0.0, s + 0j, np.where(lh, 1j, -1j) * s)
    return complex(out) if out.ndim == 0 else out


def kappa_squared(model: CavityModel, omega, k_par, medium: Medium):
    """``kappa_i^2 = z - W^2 (eps_i mu_i - 1)`` for the chosen medium."""
    w = np.asarray(omega, dtype=float)
    k = np.asarray(k_par, dtype=float)
    z = k * k - w * w
    if medium is Medium.VACUUM:
        return z
    if medium is Medium.LEFT:
        return z + model.omega_r**2
    eps, mu = eval_magnetodielectric(model, w)
    return k * k - np.asarray(eps) * np.asarray(mu) * w * w


def kappa(model: CavityModel, omega, k_par, medium: Medium | str):
    """Propagation constant with the fixed branch convention.

    Real and non-negative for ``kappa^2 >= 0``.  For ``kappa^2 < 0`` the
    imaginary part is negative, except in the lefthanded band of the
    magneto-dielectric (``eps_R, mu_R < 0``) where it is positive.
    """
    medium = Medium(medium)
    w = np.asarray(omega, dtype=float)
    k = np.asarray(k_par, dtype=float)
    if np.any(w < 0) or np.any(k < 0):
        raise DomainError("omega and k_par must be non-negative")
    k2 = kappa_squared(model, w, k, medium)
    lh = False
    if medium is Medium.RIGHT:
        eps, mu = eval_magnetodielectric(model, w)
        lh = (np.asarray(eps) < 0) & (np.asarray(mu) < 0)
    return _branch_sqrt(k2, lh)


# ---------------------------------------------------------------------------
# band limits


def band_limit_epsilons(model: CavityModel, z):
    """Roots ``eps_+, eps_-`` of ``x^2 z + Delta x - delta = 0``.

    ``eps_pm = delta / (Delta/2 +- sqrt(Delta^2/4 + z delta))``.  At ``z = 0``
    the minus root is infinite.
    """
    z = np.asarray(z, dtype=float)
    D, d = model.Delta, model.delta
    disc = D * D / 4.0 + z * d
    if np.any(disc < 0):
        raise DomainError("negative discriminant: z below the band-limit support")
    s = np.sqrt(disc)
    with np.errstate(divide="ignore"):
        ep = d / (D / 2.0 + s)
        em = d / (D / 2.0 - s)
    if ep.ndim == 0:
        return float(ep), float(em)
    return ep, em


def _k0_roots(model: CavityModel) -> tuple[float, float]:
    """Squared frequencies where the magneto-dielectric band limits meet K = 0."""
    wr2 = model.omega_r**2
    a, b = wr2 * model.eps_tilde, wr2 * model.mu_tilde
    return min(a, b), max(a, b)


def branch_z_domain(model: CavityModel, branch: Branch | str) -> tuple[float, float]:
    """Closed-open ``z`` interval on which a band-limit branch is physical."""
    branch = Branch(branch)
    lo, hi = _k0_roots(model)
    if branch is Branch.PLUS:
        return -lo, math.inf
    if branch is Branch.MINUS_EVANESCENT:
        return 0.0, math.inf
    if branch is Branch.MINUS_PROPAGATING:
        return -hi, model.delta - model.Delta
    return -model.omega_r**2, math.inf


def band_limit_omega(model: CavityModel, branch: Branch | str, z):
    """Band-limit frequency at given ``z`` on one branch."""
    branch = Branch(branch)
    if branch is Branch.METAL:
        # kappa_L = 0 is the vertical line z = -W_r^2
        raise DomainError("the metal band limit is the line z = -W_r^2; use band_limits_at_k")
    z = np.asarray(z, dtype=float)
    lo, hi = branch_z_domain(model, branch)
    tol = 1e-12 * max(1.0, model.omega_r**2)
    if branch is Branch.MINUS_EVANESCENT:
        bad = z <= 0.0
    else:
        bad = (z < lo - tol) | (z >= hi)
    if np.any(bad):
        raise DomainError(f"z outside the {branch.value} band-limit support [{lo}, {hi})")
    ep, em = band_limit_epsilons(model, np.maximum(z, lo))
    x = ep if branch is Branch.PLUS else em
    w = model.omega_r / np.sqrt(1.0 - np.asarray(x))
    return float(w) if w.ndim == 0 else w


def _cubic(model: CavityModel, k2: float):
    wr2 = model.omega_r**2
    et, mt = model.eps_tilde, model.mu_tilde

    def h(u):
        return (et * wr2 - u) * (mt * wr2 - u) * u - k2 * (wr2 - u) ** 2

    return h


def band_limits_at_k(model: CavityModel, k_par: float) -> dict[str, float]:
    """All band-limit frequencies at fixed ``K``.

    Keys: ``minus_evanescent`` (below W_r, zero at K = 0), ``plus`` (upper
    edge of the lefthanded band), ``minus_propagating`` (onset of the
    righthanded band above the Reststrahlenband) and ``metal``.
    """
    k = float(k_par)
    if k < 0:
        raise DomainError("k_par must be non-negative")
    wr2 = model.omega_r**2
    lo, hi = _k0_roots(model)
    h = _cubic(model, k * k)
    out = {"metal": math.sqrt(k * k + wr2)}
    if k == 0.0:
        out["minus_evanescent"] = 0.0
        out["plus"] = math.sqrt(lo)
        out["minus_propagating"] = math.sqrt(hi)
        return out
    u1 = brentq(h, 0.0, wr2, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    u2 = brentq(h, wr2, lo, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    top = max(hi, k * k) * 2.0 + wr2
    while h(top) < 0:
        top *= 2.0
    u3 = brentq(h, hi, top, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    out["minus_evanescent"] = math.sqrt(u1)
    out["plus"] = math.sqrt(u2)
    out["minus_propagating"] = math.sqrt(u3)
    return out


def band_limit_curve(
    model: CavityModel,
    branch: Branch | str,
    z: np.ndarray | None = None,
    k: np.ndarray | None = None,
) -> ModeCurve:
    """Sample one band-limit branch on a ``z`` grid or a ``K`` grid."""
    branch = Branch(branch)
    if (z is None) == (k is None):
        raise DomainError("give exactly one of z or k")
    wr = model.omega_r
    if k is not None:
        k = np.asarray(k, dtype=float)
        key = {
            Branch.PLUS: "plus",
            Branch.MINUS_EVANESCENT: "minus_evanescent",
            Branch.MINUS_PROPAGATING: "minus_propagating",
            Branch.METAL: "metal",
        }[branch]
        w = np.array([band_limits_at_k(model, kk)[key] for kk in k])
        zz = k * k - w * w
    else:
        zz = np.asarray(z, dtype=float)
        if branch is Branch.METAL:
            raise DomainError("the metal band limit is z = -W_r^2; sample it on a K grid")
        w = np.asarray(band_limit_omega(model, branch, zz), dtype=float)
    asym = {
        Branch.PLUS: wr,
        Branch.MINUS_EVANESCENT: wr,
        Branch.MINUS_PROPAGATING: math.inf,
        Branch.METAL: math.inf,
    }[branch]
    lo, _ = branch_z_domain(model, branch)
    return ModeCurve(branch.value, zz, w, endpoint=lo, asymptote=asym)


def metal_band_limit(model: CavityModel, k_par):
    """``W_m(K) = sqrt(K^2 + W_r^2)``."""
    k = np.asarray(k_par, dtype=float)
    w = np.sqrt(k * k + model.omega_r**2)
    return float(w) if w.ndim == 0 else w


# ---------------------------------------------------------------------------
# zones


def _zone_codes(model: CavityModel, w: np.ndarray, k: np.ndarray, tol: float):
    wr = model.omega_r
    wr2 = wr * wr
    with np.errstate(divide="ignore", invalid="ignore"):
        lor = wr2 / (wr2 - w * w)
    eps = 1.0 + model.chi_eps * lor
    mu = 1.0 + model.chi_mu * lor
    kr2 = k * k - eps * mu * w * w
    wm = np.sqrt(k * k + wr2)
    scale = np.maximum(1.0, k * k + np.abs(eps * mu) * w * w)
    boundary = (
        (np.abs(w - wr) <= max(tol, POLE_GUARD * wr))
        | (np.abs(kr2) <= tol * scale)
        | (np.abs(w - wm) <= tol)
    )
    lh = (eps < 0) & (mu < 0)
    code = np.full(w.shape, -1, dtype=int)
    above_m = w > wm
    code = np.where((kr2 > 0) & (w < wr), 0, code)  # I
    code = np.where((kr2 > 0) & (w > wr), np.where(above_m, 4, 3), code)  # IV / IVa
    code = np.where((kr2 < 0) & (w < wr), 1, code)  # II
    code = np.where((kr2 < 0) & lh, np.where(above_m, 6, 5), code)  # III / IIIa
    code = np.where((kr2 < 0) & (w > wr) & ~lh, 2, code)  # V
    return code, boundary


_CODE2ZONE = {0: Zone.I, 1: Zone.II, 2: Zone.V, 3: Zone.IV, 4: Zone.IVa, 5: Zone.III, 6: Zone.IIIa}


def classify_zones(model: CavityModel, omega, k_par, tol: float = BOUNDARY_TOL) -> np.ndarray:
    """Vectorized zone map; boundary points are returned as ``None``."""
    w = np.asarray(omega, dtype=float)
    k = np.asarray(k_par, dtype=float)
    w, k = np.broadcast_arrays(w, k)
    code, boundary = _zone_codes(model, w, k, tol)
    out = np.empty(w.shape, dtype=object)
    for c, zone in _CODE2ZONE.items():
        out[code == c] = zone
    out[boundary | (code < 0)] = None
    return out


def classify_zone(model: CavityModel, omega: float, k_par: float, tol: float = BOUNDARY_TOL) -> Zone:
    """Zone of the magneto-dielectric spectrum containing ``(W, K)``.

    I: evanescent below W_r; II: propagating below W_r; III: lefthanded band;
    IV: Reststrahlenband; V: righthanded band above it.  IIIa / IVa mark the
    parts of III / IV lying above the metal band limit.
    """
    if omega < 0 or k_par < 0:
        raise DomainError("omega and k_par must be non-negative")
    zone = classify_zones(model, np.array([omega]), np.array([k_par]), tol)[0]
    if zone is None:
        raise BoundaryError(f"(W={omega}, K={k_par}) lies on a zone boundary")
    return zone


def classify_metal(model: CavityModel, omega: float, k_par: float, tol: float = BOUNDARY_TOL) -> Zone:
    """``METAL_BULK`` above ``W_m(K)``, ``METAL_EVANESCENT`` below."""
    wm = metal_band_limit(model, k_par)
    if abs(omega - wm) <= tol:
        raise BoundaryError("point on the metal band limit")
    return Zone.METAL_BULK if omega > wm else Zone.METAL_EVANESCENT


def classify_vacuum(omega: float, k_par: float, tol: float = BOUNDARY_TOL) -> Zone:
    """``LIGHTCONE_PROP`` above the light cone, ``LIGHTCONE_EVAN`` below."""
    if abs(omega - k_par) <= tol:
        raise BoundaryError("point on the light cone")
    return Zone.LIGHTCONE_PROP if omega > k_par else Zone.LIGHTCONE_EVAN


def spectral_point(model: CavityModel, omega: float, k_par: float) -> SpectralPoint:
    if abs(omega - model.omega_r) <= POLE_GUARD * model.omega_r:
        raise PoleError("spectral point at the resonance")
    return SpectralPoint(
        omega=float(omega),
        k_par=float(k_par),
        z=float(k_par * k_par - omega * omega),
        kappa_L=kappa(model, omega, k_par, Medium.LEFT),
        kappa_R=kappa(model, omega, k_par, Medium.RIGHT),
        kappa_0=kappa(model, omega, k_par, Medium.VACUUM),
        zone=classify_zone(model, omega, k_par),
    )

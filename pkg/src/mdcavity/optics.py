"""Surface impedances, reflection coefficients and the spectral density.

Square roots follow one convention everywhere: ``kappa = sqrt(kappa^2)`` is
real and positive for evanescent fields and ``-i sqrt|kappa^2|`` for
propagating ones (``+i`` in the lefthanded band of the right mirror).

Reflection coefficients are written as

    r_i = (h_i kappa_0 - kappa_i) / (h_i kappa_0 + kappa_i) = (Z_i - 1)/(Z_i + 1),

``h = mu`` for s and ``h = eps`` for p, ``Z_i = h_i kappa_0 / kappa_i``.
This gives ``r_s -> -1`` and ``r_p -> +1`` for a perfect conductor.  The
alternative sign ``(1 - Z)/(1 + Z)`` is available as ``convention="impedance"``;
the product ``r_L r_R`` and therefore every cavity quantity is the same in
both conventions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError
from .materials import CavityModel, eval_magnetodielectric, eval_metal
from .spectrum import Medium, classify_zones, kappa

#: infinitesimal loss used by :func:`spectral_density` when ``theta`` is given
THETA = 1e-8
POLE_TOL = 1e-14


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class Pol(str, enum.Enum):
    S = "s"
    P = "p"


def pol_index(pol) -> int:
    if isinstance(pol, Pol):
        return 0 if pol is Pol.S else 1
    if pol in (0, "s", "S"):
        return 0
    if pol in (1, "p", "P"):
        return 1
    raise DomainError(f"unknown polarization {pol!r}")


@dataclass(frozen=True)
class ReflectionData:
    z_imp: complex
    r: complex
    side: Side
    pol: Pol
    pole: bool = False


def _response(model: CavityModel, omega: float, side: Side) -> tuple[float, float]:
    if side is Side.LEFT:
        eps, mu = eval_metal(model, omega)
    else:
        eps, mu = eval_magnetodielectric(model, omega)
    return float(eps), float(mu)


def surface_impedance(model: CavityModel, omega: float, k_par: float, pol, side) -> complex:
    """``Z_s = mu sqrt(z)/kappa`` or ``Z_p = eps sqrt(z)/kappa`` of one mirror."""
    side = Side(side)
    p = pol_index(pol)
    eps, mu = _response(model, omega, side)
    k0 = kappa(model, omega, k_par, Medium.VACUUM)
    ki = kappa(model, omega, k_par, Medium.LEFT if side is Side.LEFT else Medium.RIGHT)
    h = mu if p == 0 else eps
    if ki == 0:
        return complex(math.inf, 0.0)
    return complex(h * k0 / ki)


def reflection(model: CavityModel, omega: float, k_par: float, pol, side, convention: str = "standard") -> ReflectionData:
    """Reflection coefficient of one mirror seen from the vacuum gap.

    A vanishing denominator (an isolated surface polariton) is reported
    through ``pole=True`` with ``r`` infinite, not as an exception.
    """
    side = Side(side)
    p = pol_index(pol)
    if convention not in ("standard", "impedance"):
        raise DomainError(f"unknown convention {convention!r}")
    eps, mu = _response(model, omega, side)
    k0 = kappa(model, omega, k_par, Medium.VACUUM)
    ki = kappa(model, omega, k_par, Medium.LEFT if side is Side.LEFT else Medium.RIGHT)
    h = mu if p == 0 else eps
    num, den = h * k0 - ki, h * k0 + ki
    z_imp = complex(h * k0 / ki) if ki != 0 else complex(math.inf, 0.0)
    scale = abs(h * k0) + abs(ki)
    if abs(den) <= POLE_TOL * max(scale, 1e-300):
        return ReflectionData(z_imp, complex(math.inf, 0.0), side, Pol("s" if p == 0 else "p"), True)
    r = complex(num / den)
    if convention == "impedance":
        r = -r
    return ReflectionData(z_imp, r, side, Pol("s" if p == 0 else "p"), False)


def spectral_density(model: CavityModel, omega, k_par: float, pol, theta: float | None = THETA, perfect: bool = False):
    """``D = (1/pi) Im ln(1 - r_L r_R e^{-2 kappa_0})`` on the principal branch.

    With ``theta`` the frequency is shifted to ``W (1 + i theta)`` and
    principal square roots are used.  ``theta=None`` evaluates the exact
    lossless limit with the branch rules above; the integrators use that
    form because the shift leaves an ``O(theta W^2 / kappa)`` error at large
    ``K``.  ``perfect=True`` forces ``r_s = -1``, ``r_p = +1``.
    """
    p = pol_index(pol)
    wr, ce, cm = model.params
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if np.any(w <= 0):
        raise DomainError("omega must be positive")
    if theta is None or perfect:
        out = _kernels.density_array(w, float(k_par), wr, ce, cm, p, perfect)
    else:
        out = np.array([_kernels.density_theta(float(x), float(k_par), wr, ce, cm, p, float(theta)) for x in w])
    return float(out[0]) if np.ndim(omega) == 0 else out


def theta_drift(model: CavityModel, omega: float, k_par: float, pol, theta: float = THETA) -> float:
    """Absolute change of ``D`` when the loss parameter is halved."""
    a = spectral_density(model, omega, k_par, pol, theta=theta)
    b = spectral_density(model, omega, k_par, pol, theta=theta / 2.0)
    return abs(a - b)


@dataclass(frozen=True)
class PhaseSweep:
    """Accumulated ``D`` along ``W`` at fixed ``K``.

    ``phase`` is continuous except for unit steps at discrete modes and
    single-surface poles; ``jumps`` lists ``(W, step)`` for those.
    """

    k_par: float
    omega: np.ndarray
    phase: np.ndarray
    jumps: list


def accumulated_phase(
    model: CavityModel,
    k_par: float,
    pol,
    omega_lo: float,
    omega_hi: float,
    h0: float | None = None,
    max_step: float = 0.4,
    h_min: float | None = None,
) -> PhaseSweep:
    """Sweep ``D`` from ``omega_lo`` to ``omega_hi``, unwrapping ``2 pi`` wraps.

    Steps with ``|dD| > max_step`` are halved.  A change that persists down
    to ``h_min`` is a genuine discontinuity and is recorded as a jump.
    """
    p = pol_index(pol)
    wr, ce, cm = model.params
    k = float(k_par)
    span = omega_hi - omega_lo
    if span <= 0:
        raise DomainError("omega_hi must exceed omega_lo")
    h = span / 200.0 if h0 is None else h0
    hmin = 1e-13 * max(omega_hi, 1.0) if h_min is None else h_min
    d = lambda x: _kernels.density(x, k, wr, ce, cm, p, False)  # noqa: E731
    ws, ph, jumps = [omega_lo], [d(omega_lo)], []
    w, cur, raw = omega_lo, ph[0], ph[0]
    while w < omega_hi:
        step = min(h, omega_hi - w)
        nxt = d(w + step)
        diff = nxt - raw
        diff -= 2.0 * round(diff / 2.0)
        if abs(diff) > max_step and step > hmin:
            h = step / 2.0
            continue
        if abs(diff) > max_step:
            jumps.append((w + step / 2.0, round(diff)))
        w += step
        raw = nxt
        cur += diff
        ws.append(w)
        ph.append(cur)
        h = min(step * 2.0, span / 50.0)
    return PhaseSweep(k, np.array(ws), np.array(ph), jumps)


def dos_grid(model: CavityModel, omega: np.ndarray, k_par: np.ndarray):
    """``D_s``, ``D_p`` and zone labels on a tensor grid ``(K, W)``.

    Returns arrays of shape ``(len(k_par), len(omega))``.  Points on the
    resonance get NaN densities; zone boundaries get ``None``.
    """
    w = np.asarray(omega, dtype=float)
    kk = np.asarray(k_par, dtype=float)
    wr, ce, cm = model.params
    ds = np.empty((kk.size, w.size))
    dp = np.empty_like(ds)
    for i, k in enumerate(kk):
        ds[i] = _kernels.density_array(w, k, wr, ce, cm, 0)
        dp[i] = _kernels.density_array(w, k, wr, ce, cm, 1)
    W, K = np.meshgrid(w, kk)
    zones = classify_zones(model, W, K)
    return ds, dp, zones

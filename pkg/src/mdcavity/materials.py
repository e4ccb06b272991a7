"""Material response of the two mirrors.

Left mirror: lossless plasma metal, ``eps_L = 1 - W_r^2 / W^2``, ``mu_L = 1``.
Right mirror: lossless Lorentz magneto-dielectric with a common resonance,
``eps_R = 1 + chi_eps W_r^2 / (W_r^2 - W^2)`` and likewise for ``mu_R``.

All quantities are dimensionless: frequencies are ``W = omega a / c`` and
wave vectors ``K = k a``, with ``a`` the cavity width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DomainError, PoleError

#: relative guard band around the resonance
POLE_GUARD = 1e-12

DEFAULT_CHI_EPS = 0.25
DEFAULT_CHI_MU = 0.64


@dataclass(frozen=True)
class CavityModel:
    """Physical parameters of the metal / magneto-dielectric cavity.

    Parameters
    ----------
    chi_eps : float
        Static electric susceptibility of the magneto-dielectric (> 0).
    chi_mu : float
        Static magnetic susceptibility (negative for a diamagnet).
    omega_r : float
        Dimensionless resonance frequency ``W_r = omega_r a / c``; the metal
        plasma frequency is taken equal to it.
    omega_p : float or None
        Reserved for a separate metal plasma frequency.  Any value other than
        ``None`` or ``omega_r`` is rejected.
    """

    chi_eps: float = DEFAULT_CHI_EPS
    chi_mu: float = DEFAULT_CHI_MU
    omega_r: float = 1.0
    omega_p: float | None = None

    def __post_init__(self) -> None:
        for name in ("chi_eps", "chi_mu", "omega_r"):
            v = getattr(self, name)
            if not isinstance(v, (int, float, np.floating, np.integer)) or not math.isfinite(v):
                raise ConfigError(f"{name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if self.chi_eps <= 0.0:
            raise ConfigError("chi_eps must be positive")
        if self.omega_r <= 0.0:
            raise ConfigError("omega_r must be positive")
        if self.chi_mu <= -1.0:
            raise ConfigError("chi_mu must exceed -1")
        if self.omega_p is not None and not math.isclose(float(self.omega_p), self.omega_r, rel_tol=1e-15):
            raise ConfigError("omega_p != omega_r: distinct plasma and resonance frequencies are not implemented")

    # derived constants are recomputed on access
    @property
    def eps_tilde(self) -> float:
        return 1.0 + self.chi_eps

    @property
    def mu_tilde(self) -> float:
        return 1.0 + self.chi_mu

    @property
    def Delta(self) -> float:
        ce, cm = self.chi_eps, self.chi_mu
        return self.omega_r**2 * (cm * ce + cm + ce)

    @property
    def delta(self) -> float:
        return self.omega_r**2 * self.chi_mu * self.chi_eps

    @property
    def params(self) -> tuple[float, float, float]:
        """``(omega_r, chi_eps, chi_mu)`` in kernel argument order."""
        return self.omega_r, self.chi_eps, self.chi_mu

    def with_omega_r(self, omega_r: float) -> "CavityModel":
        return CavityModel(self.chi_eps, self.chi_mu, omega_r)


class ResponsePair(NamedTuple):
    eps: float | np.ndarray
    mu: float | np.ndarray


def _positive(omega, name="omega"):
    w = np.asarray(omega, dtype=float)
    if np.any(~np.isfinite(w)) or np.any(w <= 0.0):
        raise DomainError(f"{name} must be positive and finite")
    return w


def _off_resonance(model: CavityModel, w: np.ndarray) -> None:
    if np.any(np.abs(w - model.omega_r) <= POLE_GUARD * model.omega_r):
        raise PoleError(f"frequency within the guard band of the resonance W_r = {model.omega_r}")


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def eval_metal(model: CavityModel, omega) -> ResponsePair:
    """Plasma-model permittivity of the metal mirror; ``mu = 1``."""
    w = _positive(omega)
    eps = 1.0 - model.omega_r**2 / w**2
    return ResponsePair(_out(eps), _out(np.ones_like(eps)))


def eval_magnetodielectric(model: CavityModel, omega) -> ResponsePair:
    """Lorentz permittivity and permeability of the magneto-dielectric."""
    w = np.asarray(omega, dtype=float)
    if np.any(~np.isfinite(w)) or np.any(w < 0.0):
        raise DomainError("omega must be non-negative and finite")
    _off_resonance(model, w)
    wr2 = model.omega_r**2
    lor = wr2 / (wr2 - w**2)
    return ResponsePair(_out(1.0 + model.chi_eps * lor), _out(1.0 + model.chi_mu * lor))


def refractive_index(model: CavityModel, omega):
    """Refractive index ``n_R = sqrt(eps_R mu_R)`` with the physical sign.

    Negative real part where ``eps_R`` and ``mu_R`` are both negative,
    positive imaginary part where their product is negative.  With this
    choice ``i kappa_R(K=0) = n_R W``.
    """
    w = _positive(omega)
    eps, mu = eval_magnetodielectric(model, w)
    eps, mu = np.asarray(eps), np.asarray(mu)
    prod = eps * mu
    root = np.sqrt(np.abs(prod))
    n = np.where(prod >= 0.0, np.where((eps < 0) & (mu < 0), -root, root) + 0j, 1j * root)
    return complex(n) if np.ndim(n) == 0 else n


def epsilon_metal(model: CavityModel, omega):
    """``eps_L(W)``; the inverse of :func:`omega_from_epsilon`."""
    return eval_metal(model, omega).eps


def omega_from_epsilon(model: CavityModel, eps_alpha):
    """Frequency at which the metal permittivity equals ``eps_alpha`` (< 1)."""
    x = np.asarray(eps_alpha, dtype=float)
    if np.any(~(x < 1.0)):
        raise DomainError("eps_alpha must be < 1")
    return _out(model.omega_r / np.sqrt(1.0 - x))


def identity_residuals(model: CavityModel, omega) -> tuple[np.ndarray, np.ndarray]:
    """Relative residuals of the two product identities linking both mirrors.

    ``eps_L eps_R = eps~ eps_L - chi_eps`` and ``eps_L mu_R = mu~ eps_L - chi_mu``.
    """
    eL = np.asarray(eval_metal(model, omega).eps)
    eR, mR = (np.asarray(v) for v in eval_magnetodielectric(model, omega))
    a = eL * eR
    b = model.eps_tilde * eL - model.chi_eps
    c = eL * mR
    d = model.mu_tilde * eL - model.chi_mu
    scale1 = np.maximum(np.abs(a), 1.0)
    scale2 = np.maximum(np.abs(c), 1.0)
    return np.abs(a - b) / scale1, np.abs(c - d) / scale2

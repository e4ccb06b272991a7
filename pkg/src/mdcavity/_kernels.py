"""Hot inner-loop kernels.

Every scalar kernel is written against ``math``/``cmath`` so the same source
runs either compiled by numba or as plain Python.  Array kernels have two
implementations: a numba loop and a vectorized numpy version.  Setting the
environment variable ``MDCAVITY_DISABLE_NUMBA=1`` (or running without numba
installed) selects plain Python scalars and the numpy array path.

Argument order for material data is always ``(wr, ce, cm)``: resonance
frequency, electric and magnetic susceptibility.  ``pol`` is 0 for s and 1
for p.
"""

from __future__ import annotations

import cmath
import math
import os

import numpy as np

_DISABLED = os.environ.get("MDCAVITY_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True

    def jit(fn):
        return _njit(cache=True, fastmath=False)(fn)

except ImportError:  # pragma: no cover - exercised via env flag in a subprocess test
    HAVE_NUMBA = False

    def jit(fn):
        return fn


BACKEND = "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# scalar kernels, exact real-frequency limit


@jit
def kappa_real(k2, lefthanded):
    """Square root of a real kappa^2 with the physical branch.

    Positive root for k2 >= 0, ``-i sqrt|k2|`` for propagation, ``+i sqrt|k2|``
    inside a lefthanded band.
    """
    if k2 >= 0.0:
        return complex(math.sqrt(k2), 0.0)
    s = math.sqrt(-k2)
    if lefthanded:
        return complex(0.0, s)
    return complex(0.0, -s)


@jit
def round_trip(om, k, wr, ce, cm, pol, perfect):
    """Round-trip factor r_L r_R exp(-2 kappa_0) at real frequency."""
    om2 = om * om
    wr2 = wr * wr
    z = k * k - om2
    k0 = kappa_real(z, False)
    if perfect:
        return cmath.exp(-2.0 * k0)
    den = wr2 - om2
    if den == 0.0 or om == 0.0:
        return complex(math.nan, math.nan)
    eL = 1.0 - wr2 / om2
    eR = 1.0 + ce * wr2 / den
    mR = 1.0 + cm * wr2 / den
    kL = kappa_real(z + wr2, False)
    kR = kappa_real(k * k - eR * mR * om2, eR < 0.0 and mR < 0.0)
    if pol == 0:
        hL = 1.0
        hR = mR
    else:
        hL = eL
        hR = eR
    rL = (hL * k0 - kL) / (hL * k0 + kL)
    rR = (hR * k0 - kR) / (hR * k0 + kR)
    return rL * rR * cmath.exp(-2.0 * k0)


@jit
def mode_function(om, k, wr, ce, cm, pol, perfect):
    """Cavity mode function 1 - r_L r_R exp(-2 kappa_0)."""
    return 1.0 - round_trip(om, k, wr, ce, cm, pol, perfect)


@jit
def density(om, k, wr, ce, cm, pol, perfect):
    """Spectral density (1/pi) arg f on the real axis (lossless limit)."""
    f = mode_function(om, k, wr, ce, cm, pol, perfect)
    return math.atan2(f.imag, f.real) / math.pi


@jit
def density_theta(om, k, wr, ce, cm, pol, theta):
    """Spectral density evaluated at the shifted frequency om (1 + i theta)."""
    w = complex(om, om * theta)
    w2 = w * w
    wr2 = wr * wr
    den = wr2 - w2
    eL = 1.0 - wr2 / w2
    eR = 1.0 + ce * wr2 / den
    mR = 1.0 + cm * wr2 / den
    k0 = cmath.sqrt(k * k - w2)
    kL = cmath.sqrt(k * k - eL * w2)
    kR = cmath.sqrt(k * k - eR * mR * w2)
    if pol == 0:
        hL = 1.0 + 0j
        hR = mR
    else:
        hL = eL
        hR = eR
    rL = (hL * k0 - kL) / (hL * k0 + kL)
    rR = (hR * k0 - kR) / (hR * k0 + kR)
    f = 1.0 - rL * rR * cmath.exp(-2.0 * k0)
    return math.atan2(f.imag, f.real) / math.pi


@jit
def evanescent_parts(om, k, wr, ce, cm, pol):
    """Real numerator and pole factors of the mode function for z > 0.

    Valid where the vacuum gap and the magneto-dielectric are both
    evanescent.  Returns ``(N, P_L, P_R)`` with
    f = N / (P_L * P_R) up to a positive factor.  Zeros of ``N`` are
    cavity modes, zeros of ``P_L`` / ``P_R`` are single-surface modes.
    """
    om2 = om * om
    wr2 = wr * wr
    z = k * k - om2
    sz = math.sqrt(z)
    den = wr2 - om2
    eL = 1.0 - wr2 / om2
    eR = 1.0 + ce * wr2 / den
    mR = 1.0 + cm * wr2 / den
    kL = math.sqrt(z + wr2)
    kR2 = k * k - eR * mR * om2
    kR = math.sqrt(kR2) if kR2 > 0.0 else 0.0
    if pol == 0:
        hL = 1.0
        hR = mR
    else:
        hL = eL
        hR = eR
    zl = hL * sz / kL
    pl = 1.0 + zl
    pr = kR + hR * sz
    n = pl * pr - (1.0 - zl) * (kR - hR * sz) * math.exp(-2.0 * sz)
    return n, pl, pr


@jit
def imag_log(x, k, wr, ce, cm, pol, perfect):
    """ln(1 - r_L r_R exp(-2 kappa_0)) at imaginary frequency i x."""
    x2 = x * x
    k0 = math.sqrt(k * k + x2)
    if perfect:
        return math.log(-math.expm1(-2.0 * k0))
    wr2 = wr * wr
    eR = 1.0 + ce * wr2 / (wr2 + x2)
    mR = 1.0 + cm * wr2 / (wr2 + x2)
    kL = math.sqrt(k * k + x2 + wr2)
    kR = math.sqrt(k * k + eR * mR * x2)
    if pol == 0:
        rL = (k0 - kL) / (k0 + kL)
        hR = mR
    else:
        # eps_L = 1 + wr^2/x^2 diverges at x = 0; divide it out
        g = kL * x2 / (x2 + wr2)
        rL = (k0 - g) / (k0 + g)
        hR = eR
    rr = rL * ((hR * k0 - kR) / (hR * k0 + kR))
    return math.log1p(-rr * math.exp(-2.0 * k0))


# ---------------------------------------------------------------------------
# array kernels


@jit
def _density_array_jit(om, k, wr, ce, cm, pol, perfect):
    out = np.empty(om.shape[0])
    for i in range(om.shape[0]):
        out[i] = density(om[i], k, wr, ce, cm, pol, perfect)
    return out


@jit
def _imag_log_array_jit(x, k, wr, ce, cm, pol, perfect):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = imag_log(x[i], k, wr, ce, cm, pol, perfect)
    return out


@jit
def _evanescent_parts_array_jit(om, k, wr, ce, cm, pol):
    out = np.empty((3, om.shape[0]))
    for i in range(om.shape[0]):
        n, pl, pr = evanescent_parts(om[i], k, wr, ce, cm, pol)
        out[0, i] = n
        out[1, i] = pl
        out[2, i] = pr
    return out


@jit
def _density_theta_array_jit(om, k, wr, ce, cm, pol, theta):
    out = np.empty(om.shape[0])
    for i in range(om.shape[0]):
        out[i] = density_theta(om[i], k, wr, ce, cm, pol, theta)
    return out


def _evanescent_parts_array_np(om, k, wr, ce, cm, pol):
    om2 = om * om
    wr2 = wr * wr
    z = k * k - om2
    with np.errstate(divide="ignore", invalid="ignore"):
        sz = np.sqrt(z)
        den = wr2 - om2
        eL = 1.0 - wr2 / om2
        eR = 1.0 + ce * wr2 / den
        mR = 1.0 + cm * wr2 / den
        kL = np.sqrt(z + wr2)
        kR = np.sqrt(np.maximum(k * k - eR * mR * om2, 0.0))
        hL, hR = (np.ones_like(om), mR) if pol == 0 else (eL, eR)
        zl = hL * sz / kL
        pl = 1.0 + zl
        pr = kR + hR * sz
        n = pl * pr - (1.0 - zl) * (kR - hR * sz) * np.exp(-2.0 * sz)
    return np.stack([n, pl, pr])


def _density_theta_array_np(om, k, wr, ce, cm, pol, theta):
    w = om * (1.0 + 1j * theta)
    w2 = w * w
    wr2 = wr * wr
    with np.errstate(divide="ignore", invalid="ignore"):
        den = wr2 - w2
        eL = 1.0 - wr2 / w2
        eR = 1.0 + ce * wr2 / den
        mR = 1.0 + cm * wr2 / den
        k0 = np.sqrt(k * k - w2)
        kL = np.sqrt(k * k - eL * w2)
        kR = np.sqrt(k * k - eR * mR * w2)
        hL, hR = (np.ones_like(w), mR) if pol == 0 else (eL, eR)
        rL = (hL * k0 - kL) / (hL * k0 + kL)
        rR = (hR * k0 - kR) / (hR * k0 + kR)
        f = 1.0 - rL * rR * np.exp(-2.0 * k0)
    return np.arctan2(f.imag, f.real) / np.pi


@jit
def _round_trip_array_jit(om, k, wr, ce, cm, pol, perfect):
    out = np.empty(om.shape[0], dtype=np.complex128)
    for i in range(om.shape[0]):
        out[i] = round_trip(om[i], k, wr, ce, cm, pol, perfect)
    return out


def _kappa_real_np(k2, lefthanded):
    s = np.sqrt(np.abs(k2))
    return np.where(k2 >= 0.0, s + 0j, np.where(lefthanded, 1j, -1j) * s)


def _round_trip_array_np(om, k, wr, ce, cm, pol, perfect):
    om2 = om * om
    wr2 = wr * wr
    z = k * k - om2
    k0 = _kappa_real_np(z, False)
    e = np.exp(-2.0 * k0)
    if perfect:
        return e
    with np.errstate(divide="ignore", invalid="ignore"):
        den = wr2 - om2
        eL = 1.0 - wr2 / om2
        eR = 1.0 + ce * wr2 / den
        mR = 1.0 + cm * wr2 / den
        kL = _kappa_real_np(z + wr2, False)
        kR = _kappa_real_np(k * k - eR * mR * om2, (eR < 0.0) & (mR < 0.0))
        hL, hR = (np.ones_like(om), mR) if pol == 0 else (eL, eR)
        rL = (hL * k0 - kL) / (hL * k0 + kL)
        rR = (hR * k0 - kR) / (hR * k0 + kR)
        return rL * rR * e


def _density_array_np(om, k, wr, ce, cm, pol, perfect):
    om2 = om * om
    wr2 = wr * wr
    z = k * k - om2
    k0 = _kappa_real_np(z, False)
    e = np.exp(-2.0 * k0)
    if perfect:
        f = 1.0 - e
    else:
        with np.errstate(divide="ignore", invalid="ignore"):
            den = wr2 - om2
            eL = 1.0 - wr2 / om2
            eR = 1.0 + ce * wr2 / den
            mR = 1.0 + cm * wr2 / den
            kL = _kappa_real_np(z + wr2, False)
            kR = _kappa_real_np(k * k - eR * mR * om2, (eR < 0.0) & (mR < 0.0))
            hL, hR = (np.ones_like(om), mR) if pol == 0 else (eL, eR)
            rL = (hL * k0 - kL) / (hL * k0 + kL)
            rR = (hR * k0 - kR) / (hR * k0 + kR)
            f = 1.0 - rL * rR * e
    return np.arctan2(f.imag, f.real) / np.pi


def _imag_log_array_np(x, k, wr, ce, cm, pol, perfect):
    x2 = x * x
    k0 = np.sqrt(k * k + x2)
    if perfect:
        return np.log(-np.expm1(-2.0 * k0))
    wr2 = wr * wr
    eR = 1.0 + ce * wr2 / (wr2 + x2)
    mR = 1.0 + cm * wr2 / (wr2 + x2)
    kL = np.sqrt(k * k + x2 + wr2)
    kR = np.sqrt(k * k + eR * mR * x2)
    g = kL if pol == 0 else kL * x2 / (x2 + wr2)
    hR = mR if pol == 0 else eR
    rr = ((k0 - g) / (k0 + g)) * ((hR * k0 - kR) / (hR * k0 + kR))
    return np.log1p(-rr * np.exp(-2.0 * k0))


def density_array(om, k, wr, ce, cm, pol, perfect=False):
    """Vectorized :func:`density` over a 1-d frequency array."""
    om = np.ascontiguousarray(om, dtype=float)
    if HAVE_NUMBA:
        return _density_array_jit(om, float(k), float(wr), float(ce), float(cm), int(pol), bool(perfect))
    return _density_array_np(om, float(k), float(wr), float(ce), float(cm), int(pol), bool(perfect))


def imag_log_array(x, k, wr, ce, cm, pol, perfect=False):
    """Vectorized :func:`imag_log` over a 1-d imaginary-frequency array."""
    x = np.ascontiguousarray(x, dtype=float)
    if HAVE_NUMBA:
        return _imag_log_array_jit(x, float(k), float(wr), float(ce), float(cm), int(pol), bool(perfect))
    return _imag_log_array_np(x, float(k), float(wr), float(ce), float(cm), int(pol), bool(perfect))


def evanescent_parts_array(om, k, wr, ce, cm, pol):
    """Vectorized :func:`evanescent_parts`; returns an array of shape (3, n)."""
    om = np.ascontiguousarray(om, dtype=float)
    if HAVE_NUMBA:
        return _evanescent_parts_array_jit(om, float(k), float(wr), float(ce), float(cm), int(pol))
    return _evanescent_parts_array_np(om, float(k), float(wr), float(ce), float(cm), int(pol))


def density_theta_array(om, k, wr, ce, cm, pol, theta):
    """Vectorized :func:`density_theta`."""
    om = np.ascontiguousarray(om, dtype=float)
    if HAVE_NUMBA:
        return _density_theta_array_jit(om, float(k), float(wr), float(ce), float(cm), int(pol), float(theta))
    return _density_theta_array_np(om, float(k), float(wr), float(ce), float(cm), int(pol), float(theta))


def round_trip_array(om, k, wr, ce, cm, pol, perfect=False):
    """Vectorized :func:`round_trip`."""
    om = np.ascontiguousarray(om, dtype=float)
    if HAVE_NUMBA:
        return _round_trip_array_jit(om, float(k), float(wr), float(ce), float(cm), int(pol), bool(perfect))
    return _round_trip_array_np(om, float(k), float(wr), float(ce), float(cm), int(pol), bool(perfect))

"""Casimir energy of the cavity and its decomposition into modes.

Energies are reported as correction factors ``eta = E / |N E_C|`` with
``E_C`` the perfect-mirror energy and ``N = 180/pi^3``.  In the
dimensionless variables this is

    eta = int_0^inf K dK  int_0^inf dW  D(W, K)
        = (1/pi) int_0^inf K dK  int_0^inf dX  ln(1 - r_L r_R e^{-2 kappa_0})|_{W = iX}

summed over polarizations, so that perfect mirrors give ``-pi^3/180``.
The first form (real frequencies, lossless limit) is evaluated piecewise at
fixed ``K``: the density is piecewise constant where every field is
evanescent, smooth where a mirror transmits, and has unit steps at the
cavity modes where both mirrors reflect totally.  The second form is the
reference oracle.

Per-mode contributions use the ``z = K^2 - W^2`` parametrization,

    eta_alpha = 1/2 int_{z_alpha}^inf [W_alpha(z) - W~_alpha0(z)] dz,

with ``W~_alpha0`` the isolated partner continued along a band limit.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from . import _kernels
from .errors import ConvergenceError, DomainError, NoRootError
from .materials import CavityModel
from .optics import pol_index
from .polaritons import (
    ModeLabel,
    _extended_scalar,
    isolated_p0_minus_start,
    mode_omega,
    tangent_point,
)
from .spectrum import band_limit_epsilons, band_limits_at_k

N_NORM = 180.0 / math.pi**3
PERFECT_ETA = -(math.pi**3) / 180.0
#: force of perfect mirrors at W_r = 1, the Fig.-3 style scale
FORCE_SCALE = 3.0 * math.pi**3 / 180.0

SMALL_DISTANCE_LIMIT = 0.5


@dataclass(frozen=True)
class BulkParts:
    eta_0: float
    eta_gt: float
    eta_lt: float
    eta_bulk: float


@dataclass(frozen=True)
class ForcePoint:
    omega_r: float
    force_norm: float
    eta: float
    deta: float


@dataclass
class EnergyBreakdown:
    omega_r: float
    eta_s_plus: float
    eta_p_plus: float
    eta_p_minus: float
    bulk_s: BulkParts
    bulk_p: BulkParts
    eta_total_s: float
    eta_total_p: float
    force_norm: float = math.nan
    meta: dict = field(default_factory=dict)

    @property
    def eta_bulk_s(self) -> float:
        return self.bulk_s.eta_bulk

    @property
    def eta_bulk_p(self) -> float:
        return self.bulk_p.eta_bulk

    @property
    def eta_total(self) -> float:
        return self.eta_total_s + self.eta_total_p

    @property
    def eta_polaritons(self) -> float:
        return self.eta_s_plus + self.eta_p_plus + self.eta_p_minus

    def row(self) -> dict:
        """Flat record in the export column order."""
        return {
            "omega_r": self.omega_r,
            "eta_s_plus": self.eta_s_plus,
            "eta_p_plus": self.eta_p_plus,
            "eta_p_minus": self.eta_p_minus,
            "eta_bulk_s": self.eta_bulk_s,
            "eta_bulk_p": self.eta_bulk_p,
            "eta_total_s": self.eta_total_s,
            "eta_total_p": self.eta_total_p,
            "eta_total": self.eta_total,
            "force_norm": self.force_norm,
        }

    def as_dict(self) -> dict:
        d = asdict(self)
        d.update(self.row())
        return d


BREAKDOWN_COLUMNS = (
    "omega_r", "eta_s_plus", "eta_p_plus", "eta_p_minus", "eta_bulk_s", "eta_bulk_p",
    "eta_total_s", "eta_total_p", "eta_total", "force_norm",
)


# ---------------------------------------------------------------------------
# quadrature helper


def _quad(f, a: float, b: float, what: str, epsabs: float = 1e-13, epsrel: float = 1e-9, limit: int = 400, points=None) -> float:
    """``scipy.integrate.quad`` that raises :class:`ConvergenceError`.

    A result is accepted when quad succeeds, or when its own error estimate
    is within 100 times the requested tolerance.
    """
    if b <= a:
        return 0.0
    kw = dict(epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1)
    if points is not None and math.isfinite(b):
        pts = [p for p in points if a < p < b]
        if pts:
            kw["points"] = pts
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        res = quad(f, a, b, **kw)
    val, err, info = res[0], res[1], res[2]
    ok = len(res) == 3 or err <= 100.0 * max(epsabs, epsrel * abs(val))
    if not (math.isfinite(val) and ok):
        raise ConvergenceError(f"{what}: quadrature failed on [{a}, {b}] (value {val}, error {err})")
    return val


# ---------------------------------------------------------------------------
# polariton energies


def eta_polariton(model: CavityModel, label: ModeLabel | str, epsabs: float = 1e-13, epsrel: float = 1e-9) -> float:
    """Energy correction of one coupled polariton, ``s+``, ``p+`` or ``p-``.

    The integral runs in ``u = sqrt(z - z_alpha)`` so the ``e^{-2 sqrt z}``
    tail becomes an ordinary exponential.  Without a magnetic response the
    s-polariton does not exist and 0 is returned.
    """
    label = ModeLabel(label)
    if label not in (ModeLabel.S_PLUS, ModeLabel.P_PLUS, ModeLabel.P_MINUS):
        raise DomainError(f"{label.value} is not a coupled polariton")
    if label is ModeLabel.S_PLUS and model.chi_mu <= 0.0:
        return 0.0
    zt = tangent_point(model, label)
    wr2 = model.omega_r**2

    def diff(z):
        w = mode_omega(model, label, z)
        if not math.isfinite(w):
            if z - zt <= 1e-9 * max(1.0, abs(zt), wr2):
                return 0.0
            raise NoRootError(f"{label.value} lost at z = {z}")
        return w - _extended_scalar(model, label, z)

    g = lambda u: 2.0 * u * diff(zt + u * u)  # noqa: E731
    marks = [0.0, wr2, 10.0 * wr2, 1.0, 4.0, 16.0, 64.0]
    if label is ModeLabel.P_MINUS:
        marks.append(isolated_p0_minus_start(model))
    us = sorted({math.sqrt(m - zt) for m in marks if m > zt})
    top = max(us[-1], math.sqrt(max(100.0 - zt, 1.0)))
    val = _quad(g, 0.0, top, f"eta_{label.value}", epsabs, epsrel, points=us)
    val += _quad(g, top, math.inf, f"eta_{label.value} tail", epsabs, epsrel)
    return 0.5 * val


@lru_cache(maxsize=64)
def beta_coefficients(chi_eps: float) -> tuple[float, float]:
    """``(beta_+, beta_-)`` such that ``eta_p+- ~ beta_+- W_r`` at small ``W_r``.

    Computed from the large-``z`` closed form of the p-branches against their
    ``z -> inf`` limits, which is where the isolated partners sit when ``W_r -> 0``.
    """
    c = float(chi_eps)
    lim = 1.0 + c

    def integrand(u, sgn):
        root = math.sqrt(4.0 * c * math.exp(-2.0 * u) + lim * lim)
        # a - b = (a^2 - b^2)/(a + b) avoids cancellation in the tail
        a2, b2 = 3.0 + c + sgn * root, 3.0 + c + sgn * lim
        return 2.0 * u * sgn * (root - lim) / (math.sqrt(a2) + math.sqrt(b2))

    out = []
    for sgn in (1.0, -1.0):
        out.append(0.25 * _quad(lambda u: integrand(u, sgn), 0.0, math.inf, "beta", 1e-15, 1e-12))
    return out[0], out[1]


def eta_polariton_asymptotic(model: CavityModel, label: ModeLabel | str) -> float:
    """Closed-form short-distance limit of :func:`eta_polariton`.

    ``p+-``: ``beta_+- W_r``.  ``s+``: ``W_r^3 chi_mu / (16 sqrt 2 sqrt(2 + chi_mu))
    ln(1/(2 W_r^2))``, positive below ``W_r = 1/sqrt 2``.
    """
    label = ModeLabel(label)
    wr = model.omega_r
    if wr > SMALL_DISTANCE_LIMIT:
        warnings.warn(f"short-distance asymptote used at W_r = {wr} > {SMALL_DISTANCE_LIMIT}", RuntimeWarning, stacklevel=2)
    if label is ModeLabel.S_PLUS:
        cm = model.chi_mu
        if cm <= 0.0:
            return 0.0
        return wr**3 * cm / (16.0 * math.sqrt(2.0) * math.sqrt(2.0 + cm)) * -math.log(2.0 * wr * wr)
    bp, bm = beta_coefficients(model.chi_eps)
    if label is ModeLabel.P_PLUS:
        return bp * wr
    if label is ModeLabel.P_MINUS:
        return bm * wr
    raise DomainError(f"no asymptote for {label.value}")


# ---------------------------------------------------------------------------
# bulk continuum


def _x_to_w(model: CavityModel, x: float) -> float:
    return model.omega_r / math.sqrt(1.0 - x)


def _plasmon_omega(model: CavityModel, k: float) -> float:
    """Metal surface plasmon ``eps_L sqrt z = -kappa_L`` at fixed ``K``."""
    r = model.omega_r**2
    k2 = k * k
    return math.sqrt(k2 + r / 2.0 - math.sqrt(k2 * k2 + r * r / 4.0))


def eta_bulk(model: CavityModel, pol, form: str = "z", epsabs: float = 1e-13, epsrel: float = 1e-4) -> BulkParts:
    """Bulk-continuum correction of one polarization.

    ``form="z"`` integrates at fixed ``z``.  ``eta_gt`` covers ``z > 0`` between
    ``W_-^>`` and ``W_+``; ``eta_lt`` covers ``z < 0`` from ``K = 0`` up to ``W_+``;
    ``eta_0`` is the part of ``eta_lt`` with a propagating metal field
    (``z < -W_r^2``); ``eta_bulk = -eta_0 + eta_gt + eta_lt``.  Each inner
    integral is partially integrated,
    ``int W (-dD/dW) dW = int D dW - [W D]``.

    ``form="k"`` integrates the same partially integrated density at fixed
    ``K`` over ``W_-^>(K) < W < min(W_+(K), W_m(K))``; only ``eta_bulk`` is then
    defined and the other fields are NaN.
    """
    p = pol_index(pol)
    wr, ce, cm = model.params
    r = wr * wr
    dens = lambda w, k: _kernels.density(w, k, wr, ce, cm, p, False)  # noqa: E731
    tiny = 1e-12

    if form == "k":

        def per_k(k):
            if k <= 0.0:
                return 0.0
            b = band_limits_at_k(model, k)
            lo, hi = b["minus_evanescent"], min(b["plus"], b["metal"])
            pts = [wr, k] + ([_plasmon_omega(model, k)] if p == 1 else [])
            f = lambda w: dens(w, k)  # noqa: E731
            inner = _quad(f, lo, hi, "bulk K-slice", epsabs, epsrel, points=pts)
            edge = hi * dens(hi * (1 - tiny), k) - lo * dens(lo * (1 + tiny), k)
            return k * (inner - edge)

        ktop = 10.0 * max(1.0, wr)
        val = _quad(per_k, 0.0, ktop, "eta_bulk K", epsabs, epsrel, points=[wr, 2 * wr])
        val += _quad(per_k, ktop, math.inf, "eta_bulk K tail", epsabs, epsrel)
        nan = math.nan
        return BulkParts(nan, nan, nan, val)
    if form != "z":
        raise DomainError(f"unknown bulk form {form!r}")

    def dz(w, z):
        return dens(w, math.sqrt(max(z + w * w, 0.0)))

    def gt(z):
        ep, em = band_limit_epsilons(model, z)
        a, b = _x_to_w(model, em), _x_to_w(model, ep)
        pts = [wr]
        if p == 1 and z > 0:
            pts.append(_x_to_w(model, -math.sqrt(1.0 + r / z)))
        inner = _quad(lambda w: dz(w, z), a, b, "eta_gt slice", epsabs, epsrel, points=pts)
        return 0.5 * (inner - (b * dz(b * (1 - tiny), z) - a * dz(a * (1 + tiny), z)))

    def lt(z):
        ep, _ = band_limit_epsilons(model, z)
        a, b = math.sqrt(-z) * (1 + tiny), _x_to_w(model, ep)
        inner = _quad(lambda w: dz(w, z), a, b, "eta_lt slice", epsabs, epsrel, points=[wr])
        return 0.5 * (inner - (b * dz(b * (1 - tiny), z) - a * dz(a, z)))

    zbot = -model.eps_tilde * r
    egt = _quad(gt, 0.0, 10.0 * max(1.0, r), "eta_gt", epsabs, epsrel, points=[r, 1.0])
    egt += _quad(gt, 10.0 * max(1.0, r), math.inf, "eta_gt tail", epsabs, epsrel)
    e0 = _quad(lt, zbot, -r, "eta_0", epsabs, epsrel)
    elt = e0 + _quad(lt, -r, 0.0, "eta_lt", epsabs, epsrel)
    return BulkParts(e0, egt, elt, -e0 + egt + elt)


# ---------------------------------------------------------------------------
# real-frequency total


def _evanescent_integral(model: CavityModel, k: float, p: int, lo: float, hi: float, n: int = 256) -> float:
    """Integral of the piecewise-constant density where all fields are evanescent.

    Steps are located as sign changes of the mode numerator (-1) and of the
    single-surface pole factors (+1).  The starting value comes from the
    lossy prescription, which fixes the sign of ``D = +-1`` where ``f < 0``.
    """
    if hi <= lo:
        return 0.0
    wr, ce, cm = model.params
    pad = 1e-12 * hi
    for attempt in range(3):
        x = np.linspace(lo + pad, hi - pad, n + 1)
        parts = _kernels.evanescent_parts_array(x, k, wr, ce, cm, p)
        events = []
        for row, kind in ((0, -1), (1, 1), (2, 1)):
            v = parts[row]
            s = np.sign(v)
            for j in np.nonzero(s[:-1] * s[1:] < 0)[0]:
                fn = lambda t, row=row: _kernels.evanescent_parts(t, k, wr, ce, cm, p)[row]  # noqa: E731
                events.append((brentq(fn, x[j], x[j + 1], xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps), kind))
        events.sort()
        ends = _kernels.density_theta_array(np.array([x[0], x[-1]]), k, wr, ce, cm, p, 1e-10)
        d0, d1 = round(ends[0]), round(ends[1])
        if d0 + sum(kd for _, kd in events) == d1:
            break
        n *= 8
    else:
        raise ConvergenceError(f"inconsistent mode count at K = {k} on [{lo}, {hi}]")
    total, prev, d = 0.0, lo, d0
    for t, kind in events:
        total += d * (t - prev)
        d += kind
        prev = t
    return total + d * (hi - prev)


def _reflecting_integral(model: CavityModel, k: float, p: int, lo: float, hi: float, epsabs: float, epsrel: float) -> float:
    """Density integral where both mirrors reflect totally (``|r_L r_R| = 1``).

    Cavity modes sit where the round-trip phase crosses a multiple of ``2 pi``;
    the density is smooth between them.
    """
    if hi <= lo:
        return 0.0
    wr, ce, cm = model.params
    ymax = math.sqrt(max(hi * hi - k * k, 0.0))
    n = int(max(400, 40 * ymax))
    pad = 1e-13 * hi
    x = np.linspace(lo + pad, hi - pad, n)
    raw = np.angle(_kernels.round_trip_array(x, k, wr, ce, cm, p))
    ph = np.unwrap(raw)
    cuts = []
    for i in range(n - 1):
        a, b = ph[i], ph[i + 1]
        for m in range(int(math.floor(min(a, b) / (2 * math.pi))), int(math.ceil(max(a, b) / (2 * math.pi))) + 1):
            t = 2.0 * math.pi * m
            if (a - t) * (b - t) < 0:

                def g(s, i=i, t=t):
                    d = cmath_phase(_kernels.round_trip(s, k, wr, ce, cm, p, False)) - raw[i]
                    d = (d + math.pi) % (2 * math.pi) - math.pi
                    return ph[i] + d - t

                cuts.append(brentq(g, x[i], x[i + 1], xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps))
    br = [lo] + sorted(cuts) + [hi]
    f = lambda w: _kernels.density(w, k, wr, ce, cm, p, False)  # noqa: E731
    return sum(_quad(f, a, b, "reflecting slice", epsabs, epsrel) for a, b in zip(br[:-1], br[1:]))


def cmath_phase(c: complex) -> float:
    return math.atan2(c.imag, c.real)


def _period_mean(f, k: float, y0: float, epsabs: float, epsrel: float) -> float:
    """``(1/pi) int (y0 + pi - y) D dW`` over one period ``y in [y0, y0 + pi]``.

    Added to the integral up to ``y0`` this is the running integral averaged
    over one oscillation of ``e^{2iy}``, which cancels the oscillating remainder.
    """
    wa, wb = math.hypot(k, y0), math.hypot(k, y0 + math.pi)
    g = lambda w: (y0 + math.pi - math.sqrt(max(w * w - k * k, 0.0))) * f(w)  # noqa: E731
    return _quad(g, wa, wb, "frequency tail period", epsabs, epsrel) / math.pi


def density_integral(model: CavityModel, k: float, pol, epsabs: float = 1e-14, epsrel: float = 1e-10, tail_rtol: float = 1e-7) -> float:
    """``int_0^inf D(W, K) dW`` at fixed ``K`` in the lossless limit.

    The frequency axis is split at ``K``, ``W_r``, the band limits and the metal
    plasma edge.  Above the last breakpoint ``D`` oscillates with
    ``y = sqrt(W^2 - K^2)``; the integral is cut at a whole number of periods and
    averaged over the last one.  The cutoff is doubled until two consecutive
    averages agree to ``tail_rtol`` (relative to the total, absolute floor ``epsabs``).
    """
    p = pol_index(pol)
    wr, ce, cm = model.params
    f = lambda w: _kernels.density(w, k, wr, ce, cm, p, False)  # noqa: E731
    b = band_limits_at_k(model, k)
    lo, op, up, om = b["minus_evanescent"], b["plus"], b["minus_propagating"], b["metal"]
    pl = [_plasmon_omega(model, k)] if p == 1 else []
    tot = _evanescent_integral(model, k, p, 0.0, min(lo, k))
    if lo < k:
        tot += _quad(f, lo, min(wr, k), "zone II slice", epsabs, epsrel, points=pl)
        if k > wr:
            tot += _quad(f, wr, min(op, k), "zone III slice", epsabs, epsrel)
        if op < k:
            tot += _evanescent_integral(model, k, p, op, k)
    brk = sorted({v for v in (k, wr, op, om, up) if v >= k})
    for a, c in zip(brk[:-1], brk[1:]):
        mid = 0.5 * (a + c)
        if mid < om and op < mid < up:
            tot += _reflecting_integral(model, k, p, a, c, epsabs, epsrel)
        else:
            tot += _quad(f, a, c, "propagating slice", epsabs, epsrel)
    a = brk[-1]
    y = math.sqrt(max(a * a - k * k, 0.0)) + math.pi * math.ceil(8.0 * max(1.0, wr) / math.pi)
    tot += _quad(f, a, math.hypot(k, y), "frequency tail", epsabs, epsrel, limit=1000)
    est = tot + _period_mean(f, k, y, epsabs, epsrel)
    n = 4
    for _ in range(12):
        y1 = y + n * math.pi
        tot += _quad(f, math.hypot(k, y), math.hypot(k, y1), "frequency tail", epsabs, epsrel, limit=1000)
        new = tot + _period_mean(f, k, y1, epsabs, epsrel)
        if abs(new - est) <= tail_rtol * abs(new) + epsabs:
            return new
        y, est, n = y1, new, 2 * n
    raise ConvergenceError(f"frequency cutoff did not converge at K = {k}")


def _perfect_density_integral(k: float, periods: int = 200) -> float:
    """Same integral for perfect mirrors, regularized by period averaging.

    With ``y = sqrt(W^2 - K^2)`` the density is the sawtooth
    ``(y mod pi)/pi - 1/2`` and ``dW = y/sqrt(y^2 + K^2) dy``.  Whole periods
    are integrated and the remainder is replaced by its Euler-Maclaurin
    value ``-(pi/12) w(y_N) + (pi^3/720) w''(y_N)``.
    """
    w = lambda y: y / math.sqrt(y * y + k * k)  # noqa: E731
    # first period in closed form; the integrand has a kink scale K at y = 0
    r = math.hypot(math.pi, k)
    tot = (math.pi * r - k * k * math.asinh(math.pi / k)) / (2.0 * math.pi) - 0.5 * (r - k) if k > 0 else math.pi / 12.0
    t, wt = np.polynomial.legendre.leggauss(32)
    s = 0.5 * (t + 1.0)
    y = (np.arange(1, periods)[:, None] + s[None, :]) * math.pi
    tot += 0.5 * math.pi * float(np.sum(wt * (s - 0.5) * y / np.sqrt(y * y + k * k)))
    yn = periods * math.pi
    w2 = -3.0 * k * k * yn / (yn * yn + k * k) ** 2.5
    return tot - math.pi / 12.0 * w(yn) + math.pi**3 / 720.0 * w2


#: the K-integrand falls off like exp(-2K); beyond this it is below rounding
K_TOP = 20.0


def eta_total_real_freq(model: CavityModel, pol=None, perfect: bool = False, epsrel: float = 1e-6, tail_rtol: float = 1e-7) -> float:
    """Total correction from the real-frequency Lifshitz integral.

    ``pol=None`` sums both polarizations.  ``perfect=True`` forces ideal
    mirrors.
    """
    if pol is None:
        return sum(eta_total_real_freq(model, q, perfect, epsrel, tail_rtol) for q in (0, 1))
    p = pol_index(pol)
    if perfect:
        g = lambda k: k * _perfect_density_integral(k)  # noqa: E731
        return _quad(g, 0.0, K_TOP, "perfect K", 1e-13, 1e-9, points=[0.5, 2.0])
    g = lambda k: k * density_integral(model, k, p, tail_rtol=tail_rtol) if k > 0 else 0.0  # noqa: E731
    wr = model.omega_r
    pts = sorted({v for v in (0.5 * wr, wr, 2.0 * wr, 0.5, 1.0, 2.0, 4.0) if v < K_TOP})
    return _quad(g, 0.0, K_TOP, "real-frequency K", 1e-11, epsrel, limit=200, points=pts)


# ---------------------------------------------------------------------------
# imaginary-frequency oracle


X_TOP = 25.0


def log_integral(model: CavityModel, k: float, pol, perfect: bool = False, epsrel: float = 1e-11) -> float:
    """``(1/pi) int_0^inf ln(1 - r_L r_R e^{-2 kappa_0}) dX`` at fixed ``K``."""
    p = pol_index(pol)
    wr, ce, cm = model.params
    f = lambda x: _kernels.imag_log(x, k, wr, ce, cm, p, perfect)  # noqa: E731
    # |integrand| < exp(-2X): nothing is left beyond X_TOP
    pts = sorted({0.5, 2.0, 8.0, wr} - {X_TOP})
    return _quad(f, 0.0, X_TOP, "imaginary X", 1e-16, epsrel, points=pts) / math.pi


def eta_total_imaginary_freq(model: CavityModel, pol=None, perfect: bool = False, epsrel: float = 1e-10) -> float:
    """Reference total from the rotated (imaginary-frequency) Lifshitz integral."""
    if pol is None:
        return sum(eta_total_imaginary_freq(model, q, perfect, epsrel) for q in (0, 1))
    p = pol_index(pol)
    g = lambda k: k * log_integral(model, k, p, perfect, epsrel * 0.1)  # noqa: E731
    wr = model.omega_r
    top = 3.0 * max(1.0, wr)
    pts = sorted({0.25, 1.0, min(wr, top * 0.9)})
    return _quad(g, 0.0, top, "imaginary K", 1e-16, epsrel, points=pts) + _quad(g, top, math.inf, "imaginary K tail", 1e-16, epsrel)


# ---------------------------------------------------------------------------
# force


def force_from_eta(omega_r: float, eta: float, deta: float) -> float:
    """Attractive-positive force in units of the perfect-mirror force at ``W_r = 1``.

    At fixed resonance wavelength the energy scales as ``eta(W_r)/W_r^3``, so
    ``F ~ d(eta/W_r^3)/dW_r = (W_r eta' - 3 eta)/W_r^4``.
    """
    return (omega_r * deta - 3.0 * eta) / FORCE_SCALE / omega_r**4


def casimir_force(model: CavityModel, omega_r_grid, energy=None, rel_step: float = 1e-3, noise_tol: float = 0.01) -> list[ForcePoint]:
    """Force on a grid of ``W_r`` by central differences with one Richardson step.

    ``energy(model) -> eta`` defaults to :func:`eta_total_imaginary_freq`.
    Raises :class:`ConvergenceError` when the step ``h`` and ``h/2``
    estimates differ by more than ``noise_tol`` relative to the force terms.
    """
    energy = eta_total_imaginary_freq if energy is None else energy
    out = []
    for wr in np.atleast_1d(np.asarray(omega_r_grid, dtype=float)):
        wr = float(wr)
        h = rel_step * wr
        e = lambda v: energy(model.with_omega_r(v))  # noqa: E731
        e0 = e(wr)
        d1 = (e(wr + h) - e(wr - h)) / (2.0 * h)
        d2 = (e(wr + h / 2.0) - e(wr - h / 2.0)) / h
        rich = (4.0 * d2 - d1) / 3.0
        scale = wr * abs(rich) + 3.0 * abs(e0) + 1e-300
        if wr * abs(d2 - rich) > noise_tol * scale:
            raise ConvergenceError(f"differentiation noise at W_r = {wr}: estimates {d1}, {d2}")
        out.append(ForcePoint(wr, force_from_eta(wr, e0, rich), e0, rich))
    return out


def polariton_energy(model: CavityModel) -> float:
    """``eta_s+ + eta_p+ + eta_p-``."""
    return sum(eta_polariton(model, lab) for lab in (ModeLabel.S_PLUS, ModeLabel.P_PLUS, ModeLabel.P_MINUS))


def sign_changes(points: list[ForcePoint]) -> list[float]:
    """Linearly interpolated zeros of ``force_norm`` along a sweep."""
    zs = []
    for a, b in zip(points[:-1], points[1:]):
        if a.force_norm == 0.0:
            zs.append(a.omega_r)
        elif a.force_norm * b.force_norm < 0.0:
            t = a.force_norm / (a.force_norm - b.force_norm)
            zs.append(a.omega_r + t * (b.omega_r - a.omega_r))
    return zs


# ---------------------------------------------------------------------------
# full breakdown


def energy_breakdown(model: CavityModel, bulk_form: str = "z", with_force: bool = False, real_totals: bool = False) -> EnergyBreakdown:
    """All contributions at one ``W_r``.

    Totals come from the imaginary-frequency integral unless
    ``real_totals`` is set.  The identity ``eta_bulk = -eta_0 + eta_gt + eta_lt``
    is checked in-process.
    """
    es = eta_polariton(model, ModeLabel.S_PLUS)
    epp = eta_polariton(model, ModeLabel.P_PLUS)
    epm = eta_polariton(model, ModeLabel.P_MINUS)
    bs = eta_bulk(model, 0, bulk_form)
    bp = eta_bulk(model, 1, bulk_form)
    for b in (bs, bp):
        if bulk_form == "z" and not math.isclose(b.eta_bulk, -b.eta_0 + b.eta_gt + b.eta_lt, rel_tol=1e-12, abs_tol=1e-15):
            raise ConvergenceError("bulk identity violated")
    total = eta_total_real_freq if real_totals else eta_total_imaginary_freq
    ts, tp = total(model, 0), total(model, 1)
    fn = casimir_force(model, [model.omega_r])[0].force_norm if with_force else math.nan
    return EnergyBreakdown(model.omega_r, es, epp, epm, bs, bp, ts, tp, fn, {"bulk_form": bulk_form})

"""Surface polaritons: isolated, coupled, tangent points and contour closure.

Every branch is solved for ``x = eps_L`` at fixed ``z`` and converted with
``W = W_r / sqrt(1 - x)``.  For real ``z`` the coupling factors are written
in real form with

    t0(z) = tanh(sqrt z)/sqrt z   (= tan(y)/y for z = -y^2),
    q(z)  = 1/sqrt(z + W_r^2),
    S(z)  = sqrt(z) C_s = (1 + z t0 q) / (q + t0),

so that the unsquared cavity conditions read

    s:  (mu~ x - chi_mu) S            + x kappa_R = 0,
    p:  (eps~ x - chi_eps)(1 + z t0 q x) + x kappa_R (q x + t0) = 0,

with ``x^2 kappa_R^2 = x^2 z + Delta x - delta`` and ``kappa_R > 0``.
Squared forms give a quadratic (s) and a quartic (p); their roots are
candidates only and are kept after a bracketed solve of the unsquared
condition inside the admissible interval.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from . import _kernels
from .errors import DomainError, NoRootError, PoleError, SpuriousRootError, TrackingError
from .materials import CavityModel
from .spectrum import Branch, ModeCurve, band_limit_epsilons, band_limit_omega


class ModeLabel(str, enum.Enum):
    S0_PLUS = "s0+"
    P0_PLUS = "p0+"
    P0_MINUS = "p0-"
    S_PLUS = "s+"
    P_PLUS = "p+"
    P_MINUS = "p-"


_ISOLATED = {ModeLabel.S0_PLUS, ModeLabel.P0_PLUS, ModeLabel.P0_MINUS}
_COUPLED = {ModeLabel.S_PLUS, ModeLabel.P_PLUS, ModeLabel.P_MINUS}
_PARTNER = {ModeLabel.S_PLUS: ModeLabel.S0_PLUS, ModeLabel.P_PLUS: ModeLabel.P0_PLUS, ModeLabel.P_MINUS: ModeLabel.P0_MINUS}

_XTOL = 1e-15


@dataclass(frozen=True)
class CouplingFactors:
    """Cavity coupling factors at one value of ``z`` (complex for z < 0)."""

    z: float
    T0: complex
    Ts: complex
    Tp: complex
    Cs: complex
    Cp: complex


# ---------------------------------------------------------------------------
# real-form helpers


def _t0(z: float) -> float:
    if z > 0.0:
        s = math.sqrt(z)
        return math.tanh(s) / s
    if z < 0.0:
        y = math.sqrt(-z)
        return math.tan(y) / y
    return 1.0


def _q(model: CavityModel, z: float) -> float:
    return 1.0 / math.sqrt(z + model.omega_r**2)


def s_factor(model: CavityModel, z: float) -> float:
    """``S(z) = sqrt(z) C_s`` in real form."""
    t0, q = _t0(z), _q(model, z)
    return (1.0 + z * t0 * q) / (q + t0)


def _xk(model: CavityModel, x: float, z: float) -> float:
    """``x kappa_R`` with ``kappa_R >= 0``; NaN when kappa_R is imaginary."""
    v = x * x * z + model.Delta * x - model.delta
    if v < 0.0:
        if v > -1e-14 * max(1.0, x * x * abs(z), model.Delta * abs(x)):
            return 0.0
        return math.nan
    return math.copysign(math.sqrt(v), x)


class _Condition:
    """Unsquared cavity or single-interface condition at fixed ``z``.

    ``terms(x, kap)`` returns the two terms whose sum vanishes on the mode
    and a magnitude scale built from the unexpanded products.
    """

    def __init__(self, model: CavityModel, label: ModeLabel, z: float):
        self.model, self.label, self.z = model, label, z
        wr2 = model.omega_r**2
        if label is ModeLabel.P_PLUS or label is ModeLabel.P_MINUS:
            self.kind = "p"
            t0, q = _t0(z), _q(model, z)
            self.q, self.zt0q = q, z * t0 * q
            if z > 0.0:
                # 1 - z t0 q and t0 - q without cancellation at large z
                sz, sr = math.sqrt(z), math.sqrt(z + wr2)
                e = math.exp(-2.0 * sz)
                th1 = 2.0 * e / (1.0 + e)
                lead = wr2 / (sr * (sr + sz))
                self.one_m = lead + sz / sr * th1
                self.t0mq = (lead - th1) / sz
            else:
                self.one_m = 1.0 - self.zt0q
                self.t0mq = t0 - q
            self.t0 = t0
        else:
            self.kind = "s"
            if label is ModeLabel.S_PLUS:
                self.S, self.mt, self.c = s_factor(model, z), model.mu_tilde, model.chi_mu
                t0, q = _t0(z), _q(model, z)
                self.Smag = (1.0 + abs(z * t0 * q)) / abs(q + t0)
            else:
                self.S = math.sqrt(z)
                self.Smag = self.S
                if label is ModeLabel.S0_PLUS:
                    self.mt, self.c = model.mu_tilde, model.chi_mu
                else:
                    self.mt, self.c = model.eps_tilde, model.chi_eps

    def terms(self, x: float, kap: float) -> tuple[float, float, float]:
        m = self.model
        if self.kind == "s":
            a = (self.mt * x - self.c) * self.S
            b = x * kap
            return a, b, abs(self.mt * x - self.c) * self.Smag + abs(b)
        u = 1.0 + x
        f1 = m.eps_tilde * x - m.chi_eps
        a = f1 * (self.one_m + self.zt0q * u)
        b = x * kap * (self.t0mq + self.q * u)
        scale = abs(f1) * (1.0 + abs(self.zt0q * x)) + abs(x * kap) * (abs(self.q * x) + abs(self.t0))
        return a, b, scale

    def __call__(self, x: float, kap: float) -> float:
        a, b, _ = self.terms(x, kap)
        return a + b

    def residual(self, x: float, kap: float) -> float:
        a, b, scale = self.terms(x, kap)
        return abs(a + b) / (scale + 1e-300)


def _quadratic_roots(a: float, b: float, c: float) -> list[float]:
    if a == 0.0:
        return [] if b == 0.0 else [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        if disc > -1e-13 * b * b:
            disc = 0.0
        else:
            return []
    s = math.sqrt(disc)
    qq = -0.5 * (b + math.copysign(s, b))
    out = [qq / a]
    if qq != 0.0:
        out.append(c / qq)
    return out


# Admissible x-intervals are parametrized so that kappa_R enters linearly.
# With x = delta / (Delta/2 + s) one has kappa_R^2 = z - (s^2 - Delta^2/4)/delta.
#   sheet "A":  s = +sqrt(s_max^2 - delta kap^2), kap in [0, kap_A]   (x from eps_+ up to 2 delta/Delta)
#   sheet "B":  s in [s_lo, 0]                                        (x above 2 delta/Delta)
#   sheet "M":  s = -sqrt(s_max^2 - delta kap^2), kap in [0, sqrt z)  (x from eps_- down to -inf)
# Near a tangent point the root sits at small kap and stays resolvable.


class _Segment:
    def __init__(self, model: CavityModel, z: float):
        self.d, self.D = model.delta, model.Delta
        self.z = z
        self.smax2 = self.D * self.D / 4.0 + self.d * z
        if self.smax2 < 0.0:
            raise DomainError("z below the existence range of the band limits")
        self.smax = math.sqrt(self.smax2)

    def x_of_s(self, s: float) -> float:
        return self.d / (self.D / 2.0 + s)

    def kap_of_s(self, s: float) -> float:
        return math.sqrt(max(self.z - (s * s - self.D * self.D / 4.0) / self.d, 0.0))

    def s_of_kap(self, kap: float, sign: float) -> float:
        return sign * math.sqrt(max(self.smax2 - self.d * kap * kap, 0.0))

    def x_minus(self, kap: float) -> float:
        """Sheet "M" in rationalized form (no cancellation near eps_-)."""
        w = self.z - kap * kap
        return -(self.D / 2.0 + math.sqrt(max(self.D * self.D / 4.0 + self.d * w, 0.0))) / w


def _first_root(fun, lo: float, hi: float, n: int, reverse: bool = False) -> float:
    """First sign change of ``fun`` on a uniform scan of ``[lo, hi]``."""
    ts = np.linspace(lo, hi, n + 1)
    if reverse:
        ts = ts[::-1]
    prev_t, prev_v = ts[0], fun(ts[0])
    if prev_v == 0.0:
        return prev_t
    for t in ts[1:]:
        v = fun(t)
        if v == 0.0:
            return t
        if np.isfinite(prev_v) and np.isfinite(v) and prev_v * v < 0.0:
            a, b = (prev_t, t) if prev_t < t else (t, prev_t)
            return brentq(fun, a, b, xtol=_XTOL * max(1.0, abs(a)), rtol=4 * np.finfo(float).eps, maxiter=300)
        prev_t, prev_v = t, v
    return math.nan


def _local_root(fun, t0: float, lo: float, hi: float) -> float:
    """Root of ``fun`` bracketed by expanding an interval around ``t0``."""
    h = 1e-9 * max(abs(hi - lo), 1e-300)
    for _ in range(40):
        a, b = max(lo, t0 - h), min(hi, t0 + h)
        fa, fb = fun(a), fun(b)
        if np.isfinite(fa) and np.isfinite(fb) and fa * fb <= 0.0:
            if fa == 0.0:
                return a
            if fb == 0.0:
                return b
            return brentq(fun, a, b, xtol=_XTOL * max(1.0, abs(a)), rtol=4 * np.finfo(float).eps, maxiter=300)
        if a == lo and b == hi:
            break
        h *= 4.0
    return math.nan


def _polish_x(model: CavityModel, cond: _Condition, x0: float, kap0: float, lo: float, hi: float) -> tuple[float, float]:
    """Re-solve in ``x`` when ``kappa_R`` is well resolved there.

    The kappa parametrization loses digits to cancellation once ``kappa_R^2``
    is comparable to ``z``; the x parametrization loses them near ``kappa_R = 0``.
    """
    z = cond.z
    scale = abs(x0 * x0 * z) + abs(model.Delta * x0) + abs(model.delta)
    if not (x0 * x0 * kap0 * kap0 >= 1e-4 * scale):
        return x0, kap0
    fx = lambda x: cond(x, _xk(model, x, z) / x)  # noqa: E731
    x = _local_root(fx, x0, lo, hi)
    if not np.isfinite(x):
        return x0, kap0
    return x, _xk(model, x, z) / x


def _solve_upper(model: CavityModel, label: ModeLabel, z: float, seeds=()) -> tuple[float, float]:
    """Smallest root above ``W_r`` on the admissible interval; ``(x, kappa_R)``."""
    seg = _Segment(model, z)
    cond = _Condition(model, label, z)
    kap_a = seg.smax / math.sqrt(seg.d)
    fa = lambda k: cond(seg.x_of_s(seg.s_of_kap(k, 1.0)), k)  # noqa: E731
    s_lo = seg.d - seg.D / 2.0  # x = 1
    if z < 0.0:
        s_lo = max(s_lo, -seg.smax)
    fb = lambda s: cond(seg.x_of_s(s), seg.kap_of_s(s))  # noqa: E731
    xstar = 2.0 * seg.d / seg.D
    found = []
    for x in seeds:
        if not (np.isfinite(x) and 0.0 < x < 1.0):
            continue
        if x <= xstar:
            k0 = math.sqrt(max(z + (seg.D * x - seg.d) / (x * x), 0.0))
            k = _local_root(fa, min(k0, kap_a), 0.0, kap_a)
            if np.isfinite(k):
                found.append((seg.x_of_s(seg.s_of_kap(k, 1.0)), k))
        elif s_lo < 0.0:
            s0 = seg.d / x - seg.D / 2.0
            sr = _local_root(fb, min(max(s0, s_lo), 0.0), s_lo, 0.0)
            if np.isfinite(sr):
                found.append((seg.x_of_s(sr), seg.kap_of_s(sr)))
    k = _first_root(fa, 0.0, kap_a, 64)
    if np.isfinite(k):
        found.append((seg.x_of_s(seg.s_of_kap(k, 1.0)), k))
    elif s_lo < 0.0:
        sr = _first_root(fb, s_lo, 0.0, 64, reverse=True)
        if np.isfinite(sr):
            found.append((seg.x_of_s(sr), seg.kap_of_s(sr)))
    if not found:
        return math.nan, math.nan
    x, k = min(found)
    return _polish_x(model, cond, x, k, seg.x_of_s(seg.smax), seg.x_of_s(s_lo))


def _solve_p_minus(model: CavityModel, z: float, seeds=()) -> tuple[float, float]:
    seg = _Segment(model, z)
    cond = _Condition(model, ModeLabel.P_MINUS, z)
    kmax = math.sqrt(z)

    def f(k):
        x = seg.x_minus(k)
        return cond(x, k) / (1.0 + x * x)

    if not f(0.0) < 0.0:
        return math.nan, math.nan
    # g > 0 as x -> -inf, i.e. kap -> sqrt z; approach that end geometrically
    gap = 0.5
    while f(kmax * (1.0 - gap)) <= 0.0:
        gap /= 2.0
        if gap < 1e-15:
            return math.nan, math.nan
    top = kmax * (1.0 - gap)
    em = seg.x_minus(0.0)
    k = math.nan
    for x in seeds:
        if np.isfinite(x) and x <= em:
            k0 = math.sqrt(max(z + (seg.D * x - seg.d) / (x * x), 0.0))
            k = _local_root(f, min(k0, top), 0.0, top)
            if np.isfinite(k):
                break
    if not np.isfinite(k):
        k = brentq(f, 0.0, top, xtol=_XTOL * max(1.0, top), rtol=4 * np.finfo(float).eps, maxiter=300)
    return _polish_x(model, cond, seg.x_minus(k), k, seg.x_minus(top), em)


# ---------------------------------------------------------------------------
# coupling factors


def coupling_factors(model: CavityModel, z: float, eps_L: float | None = None) -> CouplingFactors:
    """``T_0 = tanh sqrt z``, ``T_s = sqrt(z/(z+W_r^2))``, ``T_p = eps_L T_s``
    and ``C_sigma = (1 + T_0 T_sigma)/(T_sigma + T_0)``.

    ``sqrt z`` is taken with negative imaginary part for ``z < 0``.  The
    p-factors need ``eps_L`` and are NaN without it.
    """
    wr2 = model.omega_r**2
    if abs(z + wr2) <= 1e-14 * max(1.0, wr2):
        raise PoleError("T_s has a pole at z = -W_r^2")
    sz = math.sqrt(z) if z >= 0 else -1j * math.sqrt(-z)
    T0 = complex(np.tanh(sz))
    kl = math.sqrt(z + wr2) if z + wr2 >= 0 else -1j * math.sqrt(-(z + wr2))
    Ts = complex(sz / kl)
    Cs = (1.0 + T0 * Ts) / (Ts + T0)
    if eps_L is None:
        Tp = Cp = complex(math.nan, math.nan)
    else:
        Tp = eps_L * Ts
        Cp = (1.0 + T0 * Tp) / (Tp + T0)
    return CouplingFactors(float(z), T0, Ts, Tp, Cs, Cp)


# ---------------------------------------------------------------------------
# branch solvers


def s_quadratic_candidates(model: CavityModel, label: ModeLabel | str, z: float) -> list[float]:
    """Roots of the squared s-type condition (candidates, unverified)."""
    label = ModeLabel(label)
    if label is ModeLabel.P0_PLUS:
        mt, c = model.eps_tilde, model.chi_eps
    else:
        mt, c = model.mu_tilde, model.chi_mu
    S = s_factor(model, z) if label is ModeLabel.S_PLUS else math.sqrt(z)
    S2 = S * S
    return _quadratic_roots(mt * mt * S2 - z, -(2.0 * mt * c * S2 + model.Delta), c * c * S2 + model.delta)


def p_quartic_coefficients(model: CavityModel, z: float) -> np.ndarray:
    """Ascending coefficients of the squared p-condition in ``x = eps_L``."""
    t0, q = _t0(z), _q(model, z)
    lhs = P.polymul(P.polypow([-model.chi_eps, model.eps_tilde], 2), P.polypow([1.0, z * t0 * q], 2))
    rhs = P.polymul(P.polypow([t0, q], 2), [-model.delta, model.Delta, z])
    return P.polysub(lhs, rhs)


def p_quartic_candidates(model: CavityModel, z: float) -> np.ndarray:
    """Real roots (to 1e-6 relative) of the squared p-condition, unverified."""
    c = np.trim_zeros(p_quartic_coefficients(model, z), "b")
    if len(c) < 2 or not np.all(np.isfinite(c)):
        return np.array([])
    r = P.polyroots(c)
    keep = np.abs(r.imag) <= 1e-6 * np.maximum(1.0, np.abs(r))
    return np.sort(r[keep].real)


def _solve(model: CavityModel, label: ModeLabel, z: float) -> tuple[float, float]:
    """``(eps_L, kappa_R)`` on a branch at ``z``; NaNs outside its support."""
    if label is ModeLabel.P0_MINUS:
        if z <= 0.0:
            return math.nan, math.nan
        x = -math.sqrt(1.0 + model.omega_r**2 / z)
        return x, math.sqrt(max(z + (model.Delta * x - model.delta) / (x * x), 0.0))
    if label in (ModeLabel.S0_PLUS, ModeLabel.P0_PLUS):
        if z <= 0.0:
            return math.nan, math.nan
        return _solve_upper(model, label, z, s_quadratic_candidates(model, label, z))
    zt = tangent_point(model, label)
    if label is ModeLabel.P_MINUS:
        if z <= zt:
            return math.nan, math.nan
        return _solve_p_minus(model, z, p_quartic_candidates(model, z))
    if z < zt:
        return math.nan, math.nan
    if label is ModeLabel.S_PLUS:
        seeds = s_quadratic_candidates(model, label, z)
    else:
        seeds = p_quartic_candidates(model, z)
    return _solve_upper(model, label, z, seeds)


def branch_x(model: CavityModel, label: ModeLabel | str, z: float) -> float:
    """``eps_L`` on any labelled branch; NaN outside its support."""
    return _solve(model, ModeLabel(label), float(z))[0]


def coupled_x(model: CavityModel, label: ModeLabel | str, z: float) -> float:
    label = ModeLabel(label)
    if label not in _COUPLED:
        raise DomainError(f"{label.value} is not a coupled mode")
    return branch_x(model, label, z)


def isolated_x(model: CavityModel, label: ModeLabel | str, z: float) -> float:
    label = ModeLabel(label)
    if label not in _ISOLATED:
        raise DomainError(f"{label.value} is not an isolated mode")
    return branch_x(model, label, z)


def _to_omega(model: CavityModel, x: float) -> float:
    return model.omega_r / math.sqrt(1.0 - x) if np.isfinite(x) else math.nan


def mode_omega(model: CavityModel, label: ModeLabel | str, z: float) -> float:
    """Scalar frequency on any labelled branch (NaN outside its support)."""
    return _to_omega(model, branch_x(model, label, z))


def branch_residual(model: CavityModel, label: ModeLabel | str, z: float) -> float:
    """Relative residual of the unsquared condition at the solved root."""
    label = ModeLabel(label)
    x, kap = _solve(model, label, float(z))
    if not np.isfinite(x):
        return math.nan
    if label is ModeLabel.P0_MINUS:
        return abs(x * x - 1.0 - model.omega_r**2 / z) / (x * x)
    return _Condition(model, label, float(z)).residual(x, kap)


def isolated_dispersion(model: CavityModel, label: ModeLabel | str, z):
    """Frequency of an isolated single-interface polariton.

    ``s0+`` and ``p0+`` live on the magneto-dielectric for ``z > 0``;
    ``p0-`` is the metal surface plasmon, reported for ``z >= z_p0-`` where it
    lies below the magneto-dielectric continuum.
    """
    label = ModeLabel(label)
    if label not in _ISOLATED:
        raise DomainError(f"{label.value} is not an isolated mode")
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    lo = isolated_p0_minus_start(model) if label is ModeLabel.P0_MINUS else 0.0
    if np.any(zz < lo) or np.any(zz <= 0):
        raise DomainError(f"{label.value} requires z >= {lo}")
    out = np.empty_like(zz)
    for i, zi in enumerate(zz):
        x = branch_x(model, label, float(zi))
        if not np.isfinite(x):
            raise SpuriousRootError(f"no verified {label.value} root at z = {zi}")
        out[i] = _to_omega(model, x)
    return float(out[0]) if np.ndim(z) == 0 else out


def isolated_p0_minus_start(model: CavityModel) -> float:
    """``z_p0-``: where the metal plasmon meets the lower band limit."""
    return _z_p0_minus(model.chi_eps, model.chi_mu, model.omega_r)


@lru_cache(maxsize=256)
def _z_p0_minus(ce: float, cm: float, wr: float) -> float:
    model = CavityModel(ce, cm, wr)

    def f(z):
        em = band_limit_epsilons(model, z)[1]
        return em + math.sqrt(1.0 + wr * wr / z)

    zs = np.geomspace(1e-14 * max(1.0, wr * wr), 1e4 * max(1.0, wr * wr), 400)
    fv = np.array([f(zz) for zz in zs])
    idx = np.nonzero(np.sign(fv[:-1]) != np.sign(fv[1:]))[0]
    if len(idx) == 0:
        raise NoRootError("no intersection of the metal plasmon with the band limit")
    i = idx[0]
    return brentq(f, zs[i], zs[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps)


def coupled_s_dispersion(model: CavityModel, z):
    """Coupled s-polarized cavity polariton ``W_s+(z)`` for ``z >= z_s+``."""
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    zt = tangent_point(model, ModeLabel.S_PLUS)
    if np.any(zz < zt):
        raise DomainError(f"s+ requires z >= z_s+ = {zt}")
    out = np.array([mode_omega(model, ModeLabel.S_PLUS, float(v)) for v in zz])
    if np.any(~np.isfinite(out)):
        raise SpuriousRootError("no verified s+ root")
    return float(out[0]) if np.ndim(z) == 0 else out


def coupled_p_dispersion(model: CavityModel, z):
    """Coupled p-polarized polaritons ``(W_p+, W_p-)``; NaN outside support."""
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(zz < tangent_point(model, ModeLabel.P_PLUS)):
        raise DomainError("p+ requires z >= z_p+")
    wp = np.array([mode_omega(model, ModeLabel.P_PLUS, float(v)) for v in zz])
    wm = np.array([mode_omega(model, ModeLabel.P_MINUS, float(v)) for v in zz])
    if np.ndim(z) == 0:
        return float(wp[0]), float(wm[0])
    return wp, wm


def p_large_z(model: CavityModel, z):
    """Closed-form ``(W_p+, W_p-)`` valid for large ``z``.

    ``W = (W_r/2) sqrt(3 + chi_eps +- sqrt(4 chi_eps e^{-2 sqrt z} + (1+chi_eps)^2))``
    with the upper sign on the antibinding branch.
    """
    z = np.asarray(z, dtype=float)
    ce = model.chi_eps
    root = np.sqrt(4.0 * ce * np.exp(-2.0 * np.sqrt(z)) + (1.0 + ce) ** 2)
    half = model.omega_r / 2.0
    return half * np.sqrt(3.0 + ce + root), half * np.sqrt(3.0 + ce - root)


# ---------------------------------------------------------------------------
# tangent points


def z_p_minus_threshold(model: CavityModel) -> float:
    """Resonance frequency above which ``z_p- > 0``: ``1/(chi_e + chi_m + chi_e chi_m)``."""
    ce, cm = model.chi_eps, model.chi_mu
    return 1.0 / (ce + cm + ce * cm)


def tangent_point(model: CavityModel, label: ModeLabel | str) -> float:
    """Parameter ``z_alpha`` where a coupled branch ends on a band limit."""
    label = ModeLabel(label)
    return _tangent(model.chi_eps, model.chi_mu, model.omega_r, label.value)


@lru_cache(maxsize=1024)
def _tangent(ce: float, cm: float, wr: float, label: str) -> float:
    model = CavityModel(ce, cm, wr)
    ymax = min(wr, math.pi / 2.0)
    if label == "s+":
        # y tan y = sqrt(W_r^2 - y^2), z = -y^2
        f = lambda y: y * math.sin(y) - math.cos(y) * math.sqrt(max(wr * wr - y * y, 0.0))  # noqa: E731
        y = brentq(f, 0.0, ymax, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        return -y * y
    if label == "p+":
        D, d = model.Delta, model.delta

        def f(y):
            ep = d / (D / 2.0 + math.sqrt(D * D / 4.0 - d * y * y))
            return ep * y * math.sin(y) - math.cos(y) * math.sqrt(max(wr * wr - y * y, 0.0))

        lo = 1e-9 * ymax
        if f(lo) * f(ymax) > 0:
            raise NoRootError("p+ tangent point not bracketed")
        y = brentq(f, lo, ymax, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        return -y * y
    if label == "p-":
        if wr <= z_p_minus_threshold(model):
            return 0.0
        D, d = model.Delta, model.delta

        def f(z):
            s = math.sqrt(z)
            return D / 2.0 + math.sqrt(D * D / 4.0 + d * z) - s / math.tanh(s) * math.sqrt(z + wr * wr)

        b = max(1.0, wr * wr)
        while f(b) > 0:
            b *= 2.0
        return brentq(f, 1e-300, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    raise DomainError(f"no tangent point for {label}")


# ---------------------------------------------------------------------------
# contour closure


def extended_isolated(model: CavityModel, label: ModeLabel | str, z):
    """Isolated partner of a coupled branch, continued along a band limit.

    For ``s+``/``p+`` the partner is ``s0+``/``p0+`` for ``z >= 0`` and the
    upper band limit ``W_+`` on ``[z_alpha, 0)``.  For ``p-`` it is the metal
    plasmon for ``z >= z_p0-`` and the lower band limit ``W_-^>`` below.
    ``label`` may name either the coupled branch or its isolated partner.
    """
    label = ModeLabel(label)
    coupled = {v: k for k, v in _PARTNER.items()}.get(label, label)
    if coupled not in _COUPLED:
        raise DomainError(f"unknown branch {label.value}")
    zt = tangent_point(model, coupled)
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(zz < zt - 1e-12):
        raise DomainError(f"extended isolated curve defined for z >= {zt}")
    out = np.array([_extended_scalar(model, coupled, float(v)) for v in zz])
    return float(out[0]) if np.ndim(z) == 0 else out


def _extended_scalar(model: CavityModel, coupled: ModeLabel, z: float) -> float:
    if coupled is ModeLabel.P_MINUS:
        z0 = isolated_p0_minus_start(model)
        if z >= z0:
            return mode_omega(model, ModeLabel.P0_MINUS, z)
        return float(band_limit_omega(model, Branch.MINUS_EVANESCENT, z))
    if z > 0.0:
        return mode_omega(model, _PARTNER[coupled], z)
    return float(band_limit_omega(model, Branch.PLUS, z))


# ---------------------------------------------------------------------------
# residuals and tracing


def mode_residual(model: CavityModel, omega: float, k_par: float, pol: str | int) -> complex:
    """``1 - r_L r_R exp(-2 sqrt z)`` at real ``(W, K)``."""
    p = _pol_index(pol)
    wr, ce, cm = model.params
    return complex(_kernels.mode_function(float(omega), float(k_par), wr, ce, cm, p, False))


def equation_residual(model: CavityModel, label: ModeLabel | str, z: float, omega: float) -> float:
    """Relative residual of the unsquared defining condition at ``(z, W)``.

    Each term is scaled by the sum of the term magnitudes.  Unlike
    ``1 - r_L r_R e^{-2 sqrt z}``, whose rounding error grows like
    ``e^{2 sqrt z}``, this stays meaningful at large ``z``.
    """
    label = ModeLabel(label)
    x = 1.0 - (model.omega_r / omega) ** 2
    if label is ModeLabel.P0_MINUS:
        return abs(x * x - 1.0 - model.omega_r**2 / z) / (x * x)
    xk = _xk(model, x, z)
    kap = xk / x if x != 0.0 else 0.0
    return _Condition(model, label, z).residual(x, kap)


def _pol_index(pol) -> int:
    if pol in (0, "s", "S"):
        return 0
    if pol in (1, "p", "P"):
        return 1
    raise DomainError(f"unknown polarization {pol!r}")


def _label_pol(label: ModeLabel) -> int:
    return 0 if label.value.startswith("s") else 1


def default_z_grid(model: CavityModel, label: ModeLabel | str, n: int = 400, z_max: float = 1e6) -> np.ndarray:
    """Geometric grid in ``z - z_alpha`` from just above the endpoint to ``z_max``."""
    label = ModeLabel(label)
    if label in _COUPLED:
        z0 = tangent_point(model, label)
    elif label is ModeLabel.P0_MINUS:
        z0 = isolated_p0_minus_start(model)
    else:
        z0 = 0.0
    scale = max(1e-10, 1e-10 * max(1.0, abs(z0)))
    return z0 + np.geomspace(scale, z_max - z0, n)


def trace_mode(model: CavityModel, label: ModeLabel | str, z: np.ndarray | None = None, n: int = 400) -> ModeCurve:
    """Trace a branch from large ``z`` downward and check continuity.

    A step more than 1000 times the median step triggers a midpoint
    check; a midpoint outside the step raises :class:`TrackingError`.
    """
    label = ModeLabel(label)
    zz = np.sort(np.asarray(default_z_grid(model, label, n) if z is None else z, dtype=float))[::-1]
    w = np.array([mode_omega(model, label, float(v)) for v in zz])
    ok = np.isfinite(w)
    zz, w = zz[ok], w[ok]
    if len(zz) >= 3:
        dw = np.abs(np.diff(w))
        ref = np.median(dw) + 1e-12
        for i in np.nonzero(dw > 1e3 * ref)[0]:
            mid = 0.5 * (zz[i] + zz[i + 1])
            wm = mode_omega(model, label, mid)
            lo, hi = sorted((w[i], w[i + 1]))
            if not (lo - 1e-12 <= wm <= hi + 1e-12):
                raise TrackingError(f"{label.value}: branch hop between z={zz[i + 1]} and z={zz[i]}")
    order = np.argsort(zz)
    zz, w = zz[order], w[order]
    res = np.array([branch_residual(model, label, zi) for zi in zz])
    if label in _COUPLED:
        endpoint = tangent_point(model, label)
    else:
        endpoint = isolated_p0_minus_start(model) if label is ModeLabel.P0_MINUS else 0.0
    return ModeCurve(label.value, zz, w, endpoint=endpoint, asymptote=asymptote(model, label), residual=res)


def asymptote(model: CavityModel, label: ModeLabel | str) -> float:
    """Large-``z`` limit of a branch."""
    label = ModeLabel(label)
    wr = model.omega_r
    if label in (ModeLabel.S_PLUS, ModeLabel.S0_PLUS):
        return wr * math.sqrt((model.mu_tilde + 1.0) / 2.0)
    if label in (ModeLabel.P_PLUS, ModeLabel.P0_PLUS):
        return wr * math.sqrt((model.eps_tilde + 1.0) / 2.0)
    return wr / math.sqrt(2.0)

"""Mode structure and Casimir energy of a metal / magneto-dielectric cavity."""

from types import ModuleType as _ModuleType

from ._kernels import BACKEND, HAVE_NUMBA
from .casimir import (
    FORCE_SCALE,
    N_NORM,
    PERFECT_ETA,
    BulkParts,
    EnergyBreakdown,
    ForcePoint,
    beta_coefficients,
    casimir_force,
    density_integral,
    energy_breakdown,
    eta_bulk,
    eta_polariton,
    eta_polariton_asymptotic,
    eta_total_imaginary_freq,
    eta_total_real_freq,
    force_from_eta,
    log_integral,
    polariton_energy,
    sign_changes,
)
from .errors import (
    BoundaryError,
    CavityError,
    ConfigError,
    ConvergenceError,
    DomainError,
    NoRootError,
    PoleError,
    SpuriousRootError,
    TrackingError,
)
from .materials import (
    CavityModel,
    eval_magnetodielectric,
    eval_metal,
    identity_residuals,
    omega_from_epsilon,
    refractive_index,
)
from .optics import Pol, ReflectionData, Side, accumulated_phase, dos_grid, reflection, spectral_density, surface_impedance
from .polaritons import (
    CouplingFactors,
    ModeLabel,
    coupled_p_dispersion,
    coupled_s_dispersion,
    coupling_factors,
    extended_isolated,
    isolated_dispersion,
    mode_omega,
    tangent_point,
    trace_mode,
)
from .spectrum import (
    Branch,
    Medium,
    ModeCurve,
    SpectralPoint,
    Zone,
    band_limit_curve,
    band_limit_omega,
    band_limits_at_k,
    classify_zone,
    classify_zones,
    kappa,
    spectral_point,
)

__all__ = [n for n, v in list(globals().items()) if not n.startswith("_") and not isinstance(v, _ModuleType)]

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from mdcavity import _kernels as K

PARAMS = (1.0, 0.25, 0.64)
PAIRS = [
    ("density_array", K._density_array_np, (False,)),
    ("imag_log_array", K._imag_log_array_np, (False,)),
    ("round_trip_array", K._round_trip_array_np, (False,)),
    ("evanescent_parts_array", K._evanescent_parts_array_np, ()),
    ("density_theta_array", K._density_theta_array_np, (1e-8,)),
]


def _grid(name):
    if name == "evanescent_parts_array":
        return np.linspace(0.05, 0.9, 97), 2.5
    return np.linspace(0.03, 4.0, 301), 0.8


@pytest.mark.parametrize("name,np_fn,extra", PAIRS)
@pytest.mark.parametrize("pol", [0, 1])
def test_numpy_path_matches_compiled(name, np_fn, extra, pol):
    om, k = _grid(name)
    om = om[np.abs(om - 1.0) > 1e-3]
    a = np.asarray(getattr(K, name)(om, k, *PARAMS, pol, *extra))
    b = np.asarray(np_fn(om, k, *PARAMS, pol, *extra))
    ok = np.isfinite(a) & np.isfinite(b)
    assert ok.mean() > 0.95
    assert np.allclose(a[ok], b[ok], rtol=1e-10, atol=1e-12)


def test_scalar_and_array_agree():
    om = np.linspace(0.1, 3.0, 50)
    arr = K.density_array(om, 1.2, *PARAMS, 1)
    sc = [K.density(float(w), 1.2, *PARAMS, 1, False) for w in om]
    assert np.allclose(arr, sc, atol=1e-14)


def test_disable_flag_selects_numpy_backend():
    code = (
        "import json, mdcavity\n"
        "from mdcavity import CavityModel, eta_total_imaginary_freq\n"
        "print(json.dumps([mdcavity.BACKEND, eta_total_imaginary_freq(CavityModel(omega_r=1.0))]))\n"
    )
    env = dict(os.environ, MDCAVITY_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True, timeout=600)
    backend, value = json.loads(out.stdout.strip().splitlines()[-1])
    assert backend == "numpy"
    from mdcavity import CavityModel, eta_total_imaginary_freq

    assert value == pytest.approx(eta_total_imaginary_freq(CavityModel(omega_r=1.0)), rel=1e-9)

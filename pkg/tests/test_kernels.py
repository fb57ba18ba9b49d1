"""Integrator kernels: accuracy against closed forms, lane agreement, failure modes."""

import math
import subprocess
import sys

import numpy as np
import pytest

from conftest import circular_monodromy
from floquet_atlas import (IntegrationFailure, ParamPoint, fundamental_solution, monodromy,
                           monodromy_fixed_step)
from floquet_atlas._kernels import _advance_dopri5, advance_dopri5, backend_name

TWO_PI = 2.0 * math.pi


def test_zero_coupling_gives_identity_monodromy():
    M = monodromy(ParamPoint(0.0, 0.7))
    assert np.abs(M.as_array() - np.eye(2)).max() < 1e-10


def test_beta_one_circular_is_pure_shear():
    M = monodromy(ParamPoint(1.0, 0.0))
    expected = np.array([[1.0, 0.0], [TWO_PI, 1.0]])
    assert np.abs(M.as_array() - expected).max() < 1e-10


def test_circular_case_against_similarity_oracle():
    # closed form: conjugated rotation with angle 2*pi*sqrt(1-beta)
    M = fundamental_solution(ParamPoint(0.36, 0.0), TWO_PI)
    assert np.abs(M.as_array() - circular_monodromy(0.36)).max() < 1e-10


def test_partial_interval_matches_oracle():
    g = fundamental_solution(ParamPoint(0.36, 0.0), 1.234)
    assert np.abs(g.as_array() - circular_monodromy(0.36, 1.234)).max() < 1e-10


@pytest.mark.parametrize("beta", [0.0, 0.3, 0.75, 0.95])
@pytest.mark.parametrize("ecc", [0.0, 0.4, 0.9])
def test_determinant_stays_unit_along_the_flow(beta, ecc):
    tol = 1e-12
    for t in np.linspace(0.1, TWO_PI, 7):
        g = fundamental_solution(ParamPoint(beta, ecc), float(t), tol)
        assert abs(g.det - 1.0) <= 10.0 * tol


@pytest.mark.parametrize("beta,ecc", [(0.2, 0.1), (0.75, 0.5), (0.9, 0.85), (0.5, 0.0)])
def test_adaptive_result_validated_by_richardson_rk4(beta, ecc):
    adaptive = monodromy(ParamPoint(beta, ecc)).as_array()
    fixed = monodromy_fixed_step(ParamPoint(beta, ecc)).as_array()
    assert np.abs(adaptive - fixed).max() < 1e-10


def test_pathological_tolerance_raises():
    with pytest.raises(IntegrationFailure):
        fundamental_solution(ParamPoint(0.5, 0.5), TWO_PI, tol=1e-30)


def test_t_end_outside_period_rejected():
    with pytest.raises(ValueError):
        fundamental_solution(ParamPoint(0.5, 0.5), -0.1)
    with pytest.raises(ValueError):
        fundamental_solution(ParamPoint(0.5, 0.5), 7.0)


def test_lanes_agree_bitwise_or_close():
    # the jitted kernel runs the same arithmetic as the python fallback
    args = (0.37, 0.62, 0.0, TWO_PI, 1e-12, 1e-12)
    jit_out = advance_dopri5(*args)
    py_out = _advance_dopri5(*args)
    assert jit_out[4] == py_out[4] == 0
    for a, b in zip(jit_out[:4], py_out[:4]):
        assert abs(a - b) < 1e-13


def test_numpy_lane_selectable_via_env_flag():
    import os

    code = ("import floquet_atlas._kernels as k; "
            "print(k.backend_name()); "
            "import math; r = k.advance_dopri5(0.5, 0.3, 0.0, 2*math.pi, 1e-12, 1e-12); "
            "print(r[4])")
    env = dict(os.environ, FLOQUET_ATLAS_NO_NUMBA="1")
    proc = subprocess.run([sys.executable, "-c", code], env=env,
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    lines = proc.stdout.split()
    assert lines[0] == "numpy"
    assert lines[1] == "0"


def test_backend_name_reports_a_known_lane():
    assert backend_name() in ("numba", "numpy")

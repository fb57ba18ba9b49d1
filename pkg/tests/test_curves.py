"""Half-period shooting, discriminant factorization, curve tracing, tangents."""

import math

import numpy as np
import pytest

from conftest import scipy_fundamental
from floquet_atlas import (DegeneracyCurve, InsufficientSamples, ParamPoint,
                           antiperiodic_discriminant, find_degenerate_betas,
                           half_period_values, kernel_dimension, monodromy,
                           tangent_at_origin, trace_curves)
from floquet_atlas.curves import bracketed_roots, tangent_seed_grid
from floquet_atlas.errors import CurveRangeExceeded, RootNotBracketed

# Regression fixtures: degeneracy betas computed by this package's own
# root-finder and cross-checked against an independent scipy integration
# during development.  Order: (ecc, odd-parity beta, even-parity beta).
CURVE_FIXTURES = [
    (0.01, 0.7462382590, 0.7537383030),
    (0.1, 0.7113033211, 0.7863475008),
    (0.3, 0.6261008942, 0.8523475385),
    (0.5, 0.5280886891, 0.9094537636),
]


# ------------------------------------------------------- half-period data ----

def test_half_period_at_seed_point():
    data = half_period_values(ParamPoint(0.75, 0.0))
    # y1 = cos(t/2), y2 = 2 sin(t/2): both shooting values vanish at pi
    assert abs(data.y1_pi) < 1e-10
    assert abs(data.dy2_pi) < 1e-10
    assert abs(data.y2_pi - 2.0) < 1e-10


def test_half_period_decoupled_case_is_harmonic():
    data = half_period_values(ParamPoint(0.0, 0.4))
    assert abs(data.y1_pi + 1.0) < 1e-10
    assert abs(data.dy2_pi + 1.0) < 1e-10


def test_half_period_circular_closed_form():
    theta = math.sqrt(0.3)
    data = half_period_values(ParamPoint(0.7, 0.0))
    assert abs(data.y1_pi - math.cos(math.pi * theta)) < 1e-10


def test_wronskian_invariant_on_grid():
    for beta in np.linspace(0.0, 1.0, 7):
        for ecc in (0.0, 0.5, 0.9):
            data = half_period_values(ParamPoint(float(beta), ecc))
            assert abs(data.wronskian - 1.0) < 1e-10


# ------------------------------------------------------------ discriminant ----

def test_discriminant_values():
    assert abs(antiperiodic_discriminant(ParamPoint(0.75, 0.0))) < 1e-8
    assert abs(antiperiodic_discriminant(ParamPoint(0.0, 0.3)) - 4.0) < 1e-9
    # circular case: trace = 2 cos(2 pi sqrt(1 - beta))
    expected = 2.0 * math.cos(math.sqrt(2.0) * math.pi) + 2.0
    got = antiperiodic_discriminant(ParamPoint(0.5, 0.0))
    assert abs(got - expected) < 1e-9
    assert abs(expected - 1.4674875623) < 1e-9  # frozen from the closed form


def test_factorization_identity_on_random_even_hill_potentials():
    # trace + 2 = 4 y1(pi) y2'(pi) holds for any even periodic restoring
    # coefficient; validated here with an independent scipy integration on
    # random even trigonometric polynomials before trusting it on the family.
    rng = np.random.default_rng(2024)
    for _ in range(20):
        coeffs = rng.uniform(-1.5, 1.5, size=5)

        def q(t, c=coeffs):
            return c[0] + sum(c[n] * math.cos(n * t) for n in range(1, 5))

        full = scipy_fundamental(q, 2.0 * math.pi)
        half = scipy_fundamental(q, math.pi)
        trace = full[0, 0] + full[1, 1]
        product = 4.0 * half[0, 0] * half[1, 1]  # y1(pi) * y2'(pi)
        assert abs(trace + 2.0 - product) < 1e-8


def test_factorization_identity_on_family_grid():
    for beta in np.linspace(0.0, 1.0, 10):
        for ecc in np.linspace(0.0, 0.85, 5):
            p = ParamPoint(float(beta), float(ecc))
            disc = monodromy(p).trace + 2.0
            data = half_period_values(p)
            assert abs(disc - 4.0 * data.y1_pi * data.dy2_pi) < 1e-8


# ------------------------------------------------------------- root finding ----

def test_roots_coincide_at_zero_eccentricity():
    (b_odd, p_odd), (b_even, p_even) = find_degenerate_betas(0.0)
    assert p_odd == "odd" and p_even == "even"
    assert abs(b_odd - 0.75) < 1e-8
    assert abs(b_even - 0.75) < 1e-8


@pytest.mark.parametrize("ecc,expected_odd,expected_even", CURVE_FIXTURES)
def test_degenerate_beta_regression_fixtures(ecc, expected_odd, expected_even):
    (b_odd, _), (b_even, _) = find_degenerate_betas(ecc)
    assert abs(b_odd - expected_odd) < 1e-8
    assert abs(b_even - expected_even) < 1e-8
    assert b_odd < b_even


def test_roots_satisfy_discriminant_and_interior_bounds():
    for ecc in (0.05, 0.45, 0.8):
        for beta, _parity in find_degenerate_betas(ecc):
            assert 0.0 < beta < 1.0
            assert abs(antiperiodic_discriminant(ParamPoint(beta, ecc))) <= 1e-8


def test_bracketed_roots_reports_absence():
    with pytest.raises(RootNotBracketed):
        from floquet_atlas.curves import _single_root
        _single_root(lambda x: 1.0 + x * x, 0.0, 1.0, 50, 1e-12, "test")


# ------------------------------------------------------------ curve tracing ----

def test_trace_single_point_grid():
    traced = trace_curves([0.0])
    assert len(traced.lower.eccs) == 1
    assert abs(traced.lower.betas[0] - 0.75) < 1e-8
    assert abs(traced.upper.betas[0] - 0.75) < 1e-8
    assert traced.lower.beta_at(0.0) == traced.lower.betas[0]
    with pytest.raises(CurveRangeExceeded):
        traced.lower.beta_at(0.1)


def test_traced_curves_shape_and_labels(traced_half):
    lower, upper = traced_half.lower, traced_half.upper
    assert lower.parity == "odd" and upper.parity == "even"
    assert lower.label == "lower" and upper.label == "upper"
    assert np.all(lower.betas <= upper.betas + 1e-12)
    assert np.all((lower.betas > 0.0) & (lower.betas < 1.0))
    assert np.all((upper.betas > 0.0) & (upper.betas < 1.0))
    # lower curve heads down, upper heads up near the seed
    assert lower.betas[4] < lower.betas[0]
    assert upper.betas[4] > upper.betas[0]
    assert traced_half.crossings == []


def test_traced_samples_pass_discriminant(traced_half):
    for curve in traced_half:
        for e, b in zip(curve.eccs[::5], curve.betas[::5]):
            assert abs(antiperiodic_discriminant(ParamPoint(float(b), float(e)))) <= 1e-8


def test_traced_samples_are_degenerate_spectrally(traced_half):
    from floquet_atlas import index_and_nullity
    lower = traced_half.lower
    mid = len(lower.eccs) // 2
    p = ParamPoint(float(lower.betas[mid]), float(lower.eccs[mid]))
    assert index_and_nullity(p, -1.0).nullity >= 1
    seed = index_and_nullity(ParamPoint(0.75, 0.0), -1.0)
    assert seed.nullity == 2


def test_kernel_vector_parity_along_curves(traced_half):
    # even-parity curve: antiperiodic eigenfunction has y'(0) = 0 when
    # normalized to y(0) = 1; odd-parity curve: y(0) = 0 with y'(0) = 1.
    for curve in traced_half:
        e = float(curve.eccs[-1])
        b = float(curve.betas[-1])
        M = monodromy(ParamPoint(b, e)).as_array()
        assert kernel_dimension(monodromy(ParamPoint(b, e)), -1.0) >= 1
        w, v = np.linalg.eigh((M + np.eye(2)).T @ (M + np.eye(2)))
        null_vec = v[:, 0]  # state ordering (velocity, position)
        velocity, position = null_vec
        if curve.parity == "even":
            assert abs(velocity / position) < 1e-6
        else:
            assert abs(position / velocity) < 1e-6


# ---------------------------------------------------------------- tangents ----

def test_tangent_slopes_at_origin(traced_half):
    # independent derivation: the even/odd branch slopes at the common seed
    # are +-(3/4) * (pi/2) / pi = +-3/8, and the extrapolation reproduces
    # them to far better than the 5e-3 reporting tolerance.
    lower = tangent_at_origin(traced_half.lower)
    upper = tangent_at_origin(traced_half.upper)
    assert abs(lower + 0.375) < 5e-3
    assert abs(upper - 0.375) < 5e-3
    assert abs(lower + 0.375) < 1e-6
    assert abs(upper - 0.375) < 1e-6


def test_tangent_of_flat_synthetic_curve_is_zero():
    flat = DegeneracyCurve(parity="even", label="upper",
                           eccs=np.array([0.0, 1e-3, 2e-3, 4e-3]),
                           betas=np.full(4, 0.4))
    assert tangent_at_origin(flat) == 0.0


def test_tangent_requires_seed_samples():
    sparse = DegeneracyCurve(parity="odd", label="lower",
                             eccs=np.array([0.0, 0.1, 0.2]),
                             betas=np.array([0.75, 0.71, 0.67]))
    with pytest.raises(InsufficientSamples):
        tangent_at_origin(sparse)


def test_tangent_seed_grid_contains_required_points():
    grid = tangent_seed_grid(0.5, 20)
    for target in (0.0, 1e-3, 2e-3, 4e-3):
        assert np.any(np.abs(grid - target) <= 1e-12)
    assert np.all(np.diff(grid) > 0)

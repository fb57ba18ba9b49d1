"""Fourier coefficients, Galerkin matrices, and index/nullity counting."""

import math

import numpy as np
import pytest

from floquet_atlas import (EccOutOfRange, ParamPoint, hill_matrix, index_and_nullity,
                           index_jump_check, inverse_kepler_fourier_coeffs,
                           kernel_dimension, monodromy)
from floquet_atlas.errors import NotOnUnitCircle


def fft_cosine_coeffs(ecc: float, n_max: int, samples: int = 4096) -> np.ndarray:
    """DFT oracle for the cosine coefficients of 1/(1 + ecc cos t)."""
    t = 2.0 * np.pi * np.arange(samples) / samples
    values = 1.0 / (1.0 + ecc * np.cos(t))
    spectrum = np.fft.rfft(values) / samples
    return np.real(spectrum[:n_max + 1])


# ------------------------------------------------------------ coefficients ----

def test_coeffs_circular_case():
    c = inverse_kepler_fourier_coeffs(0.0, 8)
    assert c[0] == 1.0 and np.all(c[1:] == 0.0)


def test_coeffs_known_values_at_e06():
    c = inverse_kepler_fourier_coeffs(0.6, 4)
    assert abs(c[0] - 1.25) < 1e-14
    assert abs(c[1] + 1.25 / 3.0) < 1e-14


@pytest.mark.parametrize("ecc", [0.1, 0.3, 0.5, 0.6, 0.8, 0.9])
def test_coeffs_against_fft_oracle(ecc):
    closed = inverse_kepler_fourier_coeffs(ecc, 40)
    oracle = fft_cosine_coeffs(ecc, 40)
    assert np.abs(closed - oracle).max() < 1e-12


def test_coeffs_decay_geometrically():
    for ecc in (0.2, 0.7, 0.95):
        c = inverse_kepler_fourier_coeffs(ecc, 30)
        r = ecc / (1.0 + math.sqrt(1.0 - ecc * ecc))
        ratios = np.abs(c[1:] / c[:-1])
        assert np.all(ratios < r + 1e-12)


def test_coeffs_reject_bad_ecc():
    with pytest.raises(EccOutOfRange):
        inverse_kepler_fourier_coeffs(1.0, 4)


# ------------------------------------------------------------- Hill matrix ----

def test_hill_matrix_diagonal_case():
    H = hill_matrix(ParamPoint(0.0, 0.3), -1.0, 16)
    k = np.arange(-16, 17)
    assert np.abs(H.entries - np.diag((k + 0.5) ** 2 - 1.0)).max() < 1e-15


def test_hill_matrix_double_kernel_at_seed_point():
    H = hill_matrix(ParamPoint(0.75, 0.0), -1.0, 16)
    diag = np.diagonal(H.entries)
    assert np.count_nonzero(np.abs(diag) < 1e-14) == 2  # modes k = 0, -1


def test_hill_matrix_periodic_beta1_kernel():
    H = hill_matrix(ParamPoint(1.0, 0.0), 1.0, 16)
    diag = np.diagonal(H.entries)
    assert np.count_nonzero(np.abs(diag) < 1e-14) == 1  # mode k = 0


def test_hill_matrix_is_symmetric_and_has_expected_diagonal():
    p = ParamPoint(0.6, 0.4)
    H = hill_matrix(p, 1j, 24)
    assert np.abs(H.entries - H.entries.T).max() < 1e-12
    c0 = inverse_kepler_fourier_coeffs(p.ecc, 0)[0]
    k = np.arange(-24, 25)
    expected = (k + 0.25) ** 2 - 1.0 + p.beta * c0
    assert np.abs(np.diagonal(H.entries) - expected).max() < 1e-12


def test_hill_matrix_rejects_small_truncation_and_bad_omega():
    with pytest.raises(ValueError):
        hill_matrix(ParamPoint(0.5, 0.0), -1.0, 4)
    with pytest.raises(NotOnUnitCircle):
        hill_matrix(ParamPoint(0.5, 0.0), 0.5, 16)


# ---------------------------------------------------------- index anchors ----

@pytest.mark.parametrize("beta,ecc,omega,expected", [
    (0.5, 0.0, -1.0, (2, 0)),
    (0.75, 0.0, -1.0, (0, 2)),
    (0.9, 0.0, -1.0, (0, 0)),
    (0.3, 0.5, 1.0, (1, 0)),
    (0.0, 0.2, 1.0, (1, 2)),
    (1.0, 0.4, -1.0, (0, 0)),
    (1.0, 0.4, 1.0, (0, 1)),
])
def test_index_and_nullity_anchors(beta, ecc, omega, expected):
    pair = index_and_nullity(ParamPoint(beta, ecc), omega)
    assert (pair.index, pair.nullity) == expected


def test_index_monotone_in_beta():
    for omega in (-1.0, 1j):
        for ecc in (0.0, 0.35):
            indices = [index_and_nullity(ParamPoint(float(b), ecc), omega, N=48).index
                       for b in np.linspace(0.0, 1.0, 50)]
            assert all(a >= b for a, b in zip(indices, indices[1:]))


def test_index_drop_equals_nullity_at_degeneracy():
    # antiperiodic degeneracy at the seed point: index jumps by the nullity
    eps = 1e-4
    high = index_and_nullity(ParamPoint(0.75 - eps, 0.0), -1.0)
    at = index_and_nullity(ParamPoint(0.75, 0.0), -1.0)
    assert high.index - at.index == at.nullity == 2


def test_nullity_matches_monodromy_kernel_dimension():
    for beta, ecc in [(0.3, 0.2), (0.75, 0.0), (0.9, 0.5), (0.5, 0.0)]:
        p = ParamPoint(beta, ecc)
        for omega in (1.0, -1.0):
            pair = index_and_nullity(p, omega)
            assert pair.nullity == kernel_dimension(monodromy(p), omega)


def test_antiperiodic_index_consistent_with_jump_identity():
    for beta in (0.1, 0.4, 0.65, 0.8, 0.97):
        for ecc in (0.0, 0.3, 0.6):
            p = ParamPoint(beta, ecc)
            pair1 = index_and_nullity(p, 1.0)
            pairm = index_and_nullity(p, -1.0)
            if pairm.nullity or pair1.nullity:
                continue  # jump identity is asserted off the degeneracy set
            assert pairm.index == index_jump_check(pair1.index, monodromy(p))

"""Morse index and nullity of the operator family by Fourier Galerkin truncation.

The self-adjoint operator

    A(beta, ecc) = -d^2/dt^2 - 1 + beta/(1 + ecc cos t)

acts on the domain { y : y(2pi) = omega y(0), y'(2pi) = omega y'(0) } for a
unit-modulus multiplier omega = e^{2 pi i sigma}.  In the twisted Fourier
basis e^{i (k + sigma) t} the operator becomes the real symmetric
Toeplitz-plus-diagonal matrix

    H[k, l] = ((k + sigma)^2 - 1) delta_{kl} + beta c_{|k - l|},

where the c_n are the cosine coefficients of 1/(1 + ecc cos t).  Counting
eigenvalues below / around zero yields the index and nullity; the count is
verified to be stable under doubling the truncation, which is cheap because
the c_n decay geometrically.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import EccOutOfRange, NotConverged, NotOnUnitCircle
from .hamiltonian import ParamPoint

DEFAULT_TRUNCATION = 128
DEFAULT_ZERO_TOL = 1e-8
MIN_TRUNCATION = 8


def inverse_kepler_fourier_coeffs(ecc: float, n_max: int) -> np.ndarray:
    """Cosine coefficients c_0..c_n_max of 1/(1 + ecc cos t).

    Normalization: 1/(1 + ecc cos t) = c_0 + 2 sum_{n>=1} c_n cos(n t).
    Closed form c_n = (-r)^n / sqrt(1 - ecc^2) with r = ecc/(1 + sqrt(1-ecc^2));
    the test suite validates this against an FFT of the sampled function.
    """
    if not 0.0 <= ecc < 1.0:
        raise EccOutOfRange(f"ecc must lie in [0, 1), got {ecc}")
    if ecc == 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    s = np.sqrt(1.0 - ecc * ecc)
    r = ecc / (1.0 + s)
    return (-r) ** np.arange(n_max + 1) / s


def _sigma_of(omega: complex) -> float:
    omega = complex(omega)
    if abs(abs(omega) - 1.0) > 1e-9:
        raise NotOnUnitCircle(f"|omega| = {abs(omega)!r}")
    return (cmath.phase(omega) % (2.0 * np.pi)) / (2.0 * np.pi)


@dataclass
class HillMatrix:
    """Galerkin matrix of A(beta, ecc) on the omega-twisted domain."""

    omega: complex
    sigma: float
    half_bandwidth: int          # modes run k = -N..N
    entries: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return 2 * self.half_bandwidth + 1


@dataclass(frozen=True)
class IndexPair:
    """Morse index (eigenvalues < 0) and nullity (kernel dimension <= 2)."""

    index: int
    nullity: int

    def __post_init__(self):
        if self.index < 0 or not 0 <= self.nullity <= 2:
            raise ValueError(f"invalid index pair ({self.index}, {self.nullity})")


@lru_cache(maxsize=64)
def _toeplitz_block(ecc: float, N: int) -> np.ndarray:
    # beta-independent Toeplitz part c_{|k-l|}; grids reuse it across beta
    coeffs = inverse_kepler_fourier_coeffs(ecc, 2 * N)
    k = np.arange(-N, N + 1)
    block = coeffs[np.abs(k[:, None] - k[None, :])]
    block.flags.writeable = False
    return block


def hill_matrix(p: ParamPoint, omega: complex, N: int) -> HillMatrix:
    """Assemble the (2N+1) x (2N+1) truncation at half-bandwidth N >= 8."""
    if N < MIN_TRUNCATION:
        raise ValueError(f"truncation must be at least {MIN_TRUNCATION}, got {N}")
    sigma = _sigma_of(omega)
    k = np.arange(-N, N + 1)
    H = p.beta * _toeplitz_block(p.ecc, N)
    H[np.diag_indices_from(H)] += (k + sigma) ** 2 - 1.0
    return HillMatrix(omega=complex(omega), sigma=sigma, half_bandwidth=N, entries=H)


def _counts(p: ParamPoint, omega: complex, N: int, zero_tol: float) -> tuple[int, int]:
    ev = np.linalg.eigvalsh(hill_matrix(p, omega, N).entries)
    negative = int(np.count_nonzero(ev < -zero_tol))
    kernel = int(np.count_nonzero(np.abs(ev) <= zero_tol))
    return negative, kernel


def index_and_nullity(p: ParamPoint, omega: complex, N: int = DEFAULT_TRUNCATION,
                      zero_tol: float = DEFAULT_ZERO_TOL) -> IndexPair:
    """Index and nullity of A(beta, ecc) on the omega-domain.

    Eigenvalues below -zero_tol count toward the index, those within
    [-zero_tol, zero_tol] toward the nullity.  Both counts are recomputed at
    truncation 2N and must agree, else :class:`NotConverged` is raised.
    """
    first = _counts(p, omega, N, zero_tol)
    second = _counts(p, omega, 2 * N, zero_tol)
    if first != second:
        raise NotConverged(
            f"counts {first} at N={N} vs {second} at N={2 * N} "
            f"for beta={p.beta}, ecc={p.ecc}, omega={omega}")
    return IndexPair(index=first[0], nullity=first[1])

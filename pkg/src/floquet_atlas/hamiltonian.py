"""Parametric system, fundamental solutions, and symplectic classification.

The object of study is the one-parameter-family Hill equation

    x'' + (1 - beta/(1 + ecc cos t)) x = 0,

rewritten first order for z = (x', x) as z' = J B(t) z with
B(t) = diag(1, 1 - beta/(1 + ecc cos t)) and J = [[0, -1], [1, 0]].
This module integrates the fundamental solution, classifies 2x2 symplectic
matrices into conjugacy normal forms (rotation R(theta), hyperbolic
D(lambda), shear N1(lambda, a), and +-identity), and evaluates the splitting
numbers and index-jump bookkeeping that connect the monodromy to the
antiperiodic Morse index computed spectrally elsewhere.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import IntegrationFailure, NotOnUnitCircle, NotSymplectic

TWO_PI = 2.0 * math.pi

DEFAULT_INTEGRATOR_TOL = 1e-12
DEFAULT_CLASSIFY_TOL = 1e-8
SYMPLECTIC_TOL = 1e-9
DEFAULT_RICHARDSON_STEPS = 2000


@dataclass(frozen=True)
class ParamPoint:
    """Parameter pair (beta, ecc) with beta in [0, 1] and ecc in [0, 1)."""

    beta: float
    ecc: float

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if not 0.0 <= self.ecc < 1.0:
            raise ValueError(f"ecc must lie in [0, 1), got {self.ecc}")


@dataclass(frozen=True)
class SymplecticMatrix2:
    """Real 2x2 matrix with unit determinant (within tolerance)."""

    m11: float
    m12: float
    m21: float
    m22: float

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def eigenvalues(self) -> tuple[complex, complex]:
        """Both eigenvalues; complex-conjugate pair when |trace| < 2."""
        tau = self.trace
        disc = tau * tau - 4.0
        root = cmath.sqrt(disc)
        return (tau + root) / 2.0, (tau - root) / 2.0

    @classmethod
    def from_array(cls, m, tol: float = SYMPLECTIC_TOL) -> "SymplecticMatrix2":
        m = np.asarray(m, dtype=float)
        out = cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))
        if abs(out.det - 1.0) > tol:
            raise NotSymplectic(f"det = {out.det!r} deviates from 1 by more than {tol}")
        return out


class NormalFormTag(Enum):
    ELLIPTIC_POSITIVE = "elliptic+"       # ~ R(theta), theta in (0, pi)
    ELLIPTIC_NEGATIVE = "elliptic-"       # ~ R(theta), theta in (pi, 2pi)
    HYPERBOLIC_POSITIVE = "hyperbolic+"   # ~ D(lambda), lambda > 1
    HYPERBOLIC_NEGATIVE = "hyperbolic-"   # ~ D(lambda), lambda < -1
    PARABOLIC_POSITIVE = "parabolic+"     # ~ N1(1, b), b = +-1
    PARABOLIC_NEGATIVE = "parabolic-"     # ~ N1(-1, a), a = +-1
    IDENTITY = "identity"
    MINUS_IDENTITY = "minus_identity"


_PARAM_FIELD = {
    NormalFormTag.ELLIPTIC_POSITIVE: "theta",
    NormalFormTag.ELLIPTIC_NEGATIVE: "theta",
    NormalFormTag.HYPERBOLIC_POSITIVE: "lam",
    NormalFormTag.HYPERBOLIC_NEGATIVE: "lam",
    NormalFormTag.PARABOLIC_POSITIVE: "b",
    NormalFormTag.PARABOLIC_NEGATIVE: "a",
    NormalFormTag.IDENTITY: None,
    NormalFormTag.MINUS_IDENTITY: None,
}


@dataclass(frozen=True)
class NormalFormClass:
    """Conjugacy class of a 2x2 symplectic matrix, with class parameter.

    Exactly the parameter matching the tag is set: ``theta`` for elliptic
    classes (rotation angle), ``lam`` for hyperbolic ones (the eigenvalue of
    modulus > 1), ``a``/``b`` for the shear classes N1(-1, a) / N1(1, b).
    """

    tag: NormalFormTag
    theta: float | None = None
    lam: float | None = None
    a: int | None = None
    b: int | None = None

    def __post_init__(self):
        want = _PARAM_FIELD[self.tag]
        for name in ("theta", "lam", "a", "b"):
            value = getattr(self, name)
            if name == want:
                if value is None:
                    raise ValueError(f"{self.tag} requires parameter {name}")
            elif value is not None:
                raise ValueError(f"{self.tag} does not take parameter {name}")
        if self.tag is NormalFormTag.ELLIPTIC_POSITIVE and not 0.0 < self.theta < math.pi:
            raise ValueError("elliptic+ angle must lie in (0, pi)")
        if self.tag is NormalFormTag.ELLIPTIC_NEGATIVE and not math.pi < self.theta < TWO_PI:
            raise ValueError("elliptic- angle must lie in (pi, 2pi)")
        if self.tag is NormalFormTag.HYPERBOLIC_POSITIVE and not self.lam > 1.0:
            raise ValueError("hyperbolic+ eigenvalue must exceed 1")
        if self.tag is NormalFormTag.HYPERBOLIC_NEGATIVE and not self.lam < -1.0:
            raise ValueError("hyperbolic- eigenvalue must be below -1")
        if self.tag in (NormalFormTag.PARABOLIC_POSITIVE, NormalFormTag.PARABOLIC_NEGATIVE):
            value = self.b if self.tag is NormalFormTag.PARABOLIC_POSITIVE else self.a
            if value not in (-1, 0, 1):
                raise ValueError("shear parameter must be -1, 0, or +1")

    @property
    def is_elliptic(self) -> bool:
        return self.tag in (NormalFormTag.ELLIPTIC_POSITIVE, NormalFormTag.ELLIPTIC_NEGATIVE)

    def label(self) -> str:
        """Compact deterministic text form, used by the CSV/JSON emitters."""
        field = _PARAM_FIELD[self.tag]
        if field is None:
            return self.tag.value
        value = getattr(self, field)
        if isinstance(value, int):
            return f"{self.tag.value}({value:+d})"
        return f"{self.tag.value}({value:.17g})"


def parse_normal_form_label(text: str) -> NormalFormClass:
    """Inverse of :meth:`NormalFormClass.label` (CSV round-trips)."""
    text = text.strip()
    if "(" not in text:
        return NormalFormClass(NormalFormTag(text))
    name, _, rest = text.partition("(")
    tag = NormalFormTag(name)
    raw = rest.rstrip(")")
    field = _PARAM_FIELD[tag]
    if field in ("a", "b"):
        return NormalFormClass(tag, **{field: int(raw)})
    return NormalFormClass(tag, **{field: float(raw)})


@dataclass(frozen=True)
class StabilityVerdict:
    spectrally_stable: bool
    linearly_stable: bool

    def __post_init__(self):
        if self.linearly_stable and not self.spectrally_stable:
            raise ValueError("linear stability implies spectral stability")


def system_matrix(p: ParamPoint, t: float) -> np.ndarray:
    """Coefficient matrix B(t) = diag(1, 1 - beta/(1 + ecc cos t)).

    Defined for every real t; 2pi-periodic and even. The lower-right entry is
    the restoring coefficient of the underlying scalar equation.
    """
    return np.array([[1.0, 0.0], [0.0, 1.0 - p.beta / (1.0 + p.ecc * math.cos(t))]])


def fundamental_solution(p: ParamPoint, t_end: float,
                         tol: float = DEFAULT_INTEGRATOR_TOL) -> SymplecticMatrix2:
    """Fundamental solution g(t_end) of z' = J B(t) z, g(0) = I.

    Integrated by an adaptive embedded 5(4) pair with absolute and relative
    tolerance both equal to ``tol``.  The determinant of the result is checked
    against 1 at 10 * tol.

    Raises
    ------
    IntegrationFailure
        If the step controller underflows (pathological ``tol``).
    """
    if not 0.0 <= t_end <= TWO_PI + 1e-12:
        raise ValueError(f"t_end must lie in [0, 2pi], got {t_end}")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    a, b, c, d, status = _kernels.advance_dopri5(p.beta, p.ecc, 0.0, t_end, tol, tol)
    if status != _kernels.STATUS_OK:
        raise IntegrationFailure(
            f"adaptive stepper failed (status {status}) at beta={p.beta}, ecc={p.ecc}, tol={tol}")
    out = SymplecticMatrix2(a, b, c, d)
    if abs(out.det - 1.0) > 10.0 * tol:
        raise IntegrationFailure(
            f"determinant drifted to {out.det!r} at beta={p.beta}, ecc={p.ecc}")
    return out


def monodromy(p: ParamPoint, tol: float = DEFAULT_INTEGRATOR_TOL) -> SymplecticMatrix2:
    """Fundamental solution over one full period, g(2pi)."""
    return fundamental_solution(p, TWO_PI, tol)


def monodromy_fixed_step(p: ParamPoint, t_end: float = TWO_PI,
                         nsteps: int = DEFAULT_RICHARDSON_STEPS) -> SymplecticMatrix2:
    """Richardson-extrapolated fixed-step RK4 result, (16 g_{h/2} - g_h) / 15.

    Independent of the adaptive path; used to validate it at 1e-10.
    """
    coarse = _kernels.advance_rk4(p.beta, p.ecc, 0.0, t_end, nsteps)
    fine = _kernels.advance_rk4(p.beta, p.ecc, 0.0, t_end, 2 * nsteps)
    vals = [(16.0 * f - c) / 15.0 for f, c in zip(fine, coarse)]
    return SymplecticMatrix2(*vals)


def _symplectic_product(u, v) -> float:
    # omega(u, v) = u1 v2 - u2 v1, the standard area form.
    return u[0] * v[1] - u[1] * v[0]


def classify(M: SymplecticMatrix2, tol: float = DEFAULT_CLASSIFY_TOL) -> NormalFormClass:
    """Normal-form class of ``M``, keyed on the trace.

    |trace| < 2 gives the elliptic classes; the rotation angle satisfies
    cos(theta) = trace / 2 and the branch is fixed by sign(m21), which is
    constant on each elliptic conjugacy class (trace^2 < 4 forces
    m12 m21 < 0, and R(theta) itself has m21 = sin theta).  At trace = -+2
    the shear parameter is read off the quadratic form q(v) = omega(v, Mv),
    which is semidefinite there and evaluates to -a v2^2 on N1(-1, a) and
    -b v2^2 on N1(1, b).
    """
    if abs(M.det - 1.0) > tol:
        raise NotSymplectic(f"det = {M.det!r} is not 1 within {tol}")
    tau = M.trace
    if abs(tau + 2.0) <= tol:
        residual = max(abs(M.m11 + 1.0), abs(M.m12), abs(M.m21), abs(M.m22 + 1.0))
        if residual <= tol:
            return NormalFormClass(NormalFormTag.MINUS_IDENTITY)
        return NormalFormClass(NormalFormTag.PARABOLIC_NEGATIVE, a=_shear_parameter(M))
    if abs(tau - 2.0) <= tol:
        residual = max(abs(M.m11 - 1.0), abs(M.m12), abs(M.m21), abs(M.m22 - 1.0))
        if residual <= tol:
            return NormalFormClass(NormalFormTag.IDENTITY)
        return NormalFormClass(NormalFormTag.PARABOLIC_POSITIVE, b=_shear_parameter(M))
    if abs(tau) < 2.0:
        base = math.acos(max(-1.0, min(1.0, tau / 2.0)))
        if M.m21 > 0.0:
            return NormalFormClass(NormalFormTag.ELLIPTIC_POSITIVE, theta=base)
        return NormalFormClass(NormalFormTag.ELLIPTIC_NEGATIVE, theta=TWO_PI - base)
    root = math.sqrt(tau * tau - 4.0)
    if tau > 2.0:
        return NormalFormClass(NormalFormTag.HYPERBOLIC_POSITIVE, lam=(tau + root) / 2.0)
    return NormalFormClass(NormalFormTag.HYPERBOLIC_NEGATIVE, lam=(tau - root) / 2.0)


def _shear_parameter(M: SymplecticMatrix2) -> int:
    # q(e1) = m21, q(e2) = -m12; both share a sign (q is semidefinite at
    # trace = -+2), so read the dominant one.
    q1 = M.m21
    q2 = -M.m12
    dominant = q1 if abs(q1) >= abs(q2) else q2
    return 1 if dominant < 0.0 else -1


def stability_verdict(M: SymplecticMatrix2, tol: float = DEFAULT_CLASSIFY_TOL) -> StabilityVerdict:
    """Spectral stability (eigenvalues on the unit circle, |trace| <= 2) and
    linear stability (bounded powers: identity, minus-identity, or elliptic)."""
    cls = classify(M, tol)
    spectral = abs(M.trace) <= 2.0 + tol
    linear = cls.tag in (NormalFormTag.IDENTITY, NormalFormTag.MINUS_IDENTITY,
                         NormalFormTag.ELLIPTIC_POSITIVE, NormalFormTag.ELLIPTIC_NEGATIVE)
    return StabilityVerdict(spectrally_stable=spectral, linearly_stable=linear)


def _unit_spectrum(cls: NormalFormClass) -> list[complex]:
    if cls.is_elliptic:
        return [cmath.exp(1j * cls.theta), cmath.exp(-1j * cls.theta)]
    if cls.tag in (NormalFormTag.IDENTITY, NormalFormTag.PARABOLIC_POSITIVE):
        return [1.0 + 0.0j]
    if cls.tag in (NormalFormTag.MINUS_IDENTITY, NormalFormTag.PARABOLIC_NEGATIVE):
        return [-1.0 + 0.0j]
    return []  # hyperbolic spectrum is off the circle


def splitting_numbers(M: SymplecticMatrix2, omega: complex,
                      tol: float = DEFAULT_CLASSIFY_TOL) -> tuple[int, int]:
    """Splitting numbers (S+, S-) of ``M`` at the unit-circle point ``omega``.

    These are conjugation invariants tabulated on the normal forms:
    (0, 0) off the spectrum; (1, 1) on N1(1, b) with b in {0, 1} and on
    N1(-1, a) with a in {-1, 0}; (0, 0) for the opposite shear signs;
    for an elliptic class with rotation angle alpha, (0, 1) at e^{i alpha}
    and (1, 0) at the conjugate eigenvalue.
    """
    omega = complex(omega)
    if abs(abs(omega) - 1.0) > 1e-9:
        raise NotOnUnitCircle(f"|omega| = {abs(omega)!r}")
    cls = classify(M, tol)
    spectrum = _unit_spectrum(cls)
    matches = [abs(omega - ev) <= max(tol, 1e-9) for ev in spectrum]
    if not any(matches):
        return (0, 0)
    if cls.is_elliptic:
        return (0, 1) if matches[0] else (1, 0)
    if cls.tag in (NormalFormTag.IDENTITY, NormalFormTag.MINUS_IDENTITY):
        return (1, 1)
    if cls.tag is NormalFormTag.PARABOLIC_POSITIVE:
        return (1, 1) if cls.b in (0, 1) else (0, 0)
    return (1, 1) if cls.a in (-1, 0) else (0, 0)


def kernel_dimension(M: SymplecticMatrix2, omega: complex,
                     rank_tol: float = 1e-6) -> int:
    """Geometric multiplicity dim ker(M - omega I), by singular-value rank."""
    shifted = M.as_array().astype(complex) - complex(omega) * np.eye(2)
    singular = np.linalg.svd(shifted, compute_uv=False)
    scale = max(1.0, float(singular[0]))
    return int(np.count_nonzero(singular <= rank_tol * scale))


def index_jump_check(i1: int, M: SymplecticMatrix2,
                     tol: float = DEFAULT_CLASSIFY_TOL) -> int:
    """Antiperiodic index predicted from the periodic index of the same path.

    Moving the boundary multiplier from 1 to -1 along the upper unit
    semicircle changes the index by S+ at 1, by (S+ - S-) at every eigenvalue
    crossed strictly in between, and by -S- at -1:

        i_{-1} = i_1 + S+(1) + sum (S+(w) - S-(w)) - S-(-1).

    Used as a cross-check against the spectrally computed antiperiodic index.
    """
    cls = classify(M, tol)
    total = i1
    total += splitting_numbers(M, 1.0, tol)[0]
    if cls.is_elliptic:
        # exactly one eigenvalue lies strictly inside the upper semicircle
        upper = cls.theta if cls.theta < math.pi else TWO_PI - cls.theta
        plus, minus = splitting_numbers(M, cmath.exp(1j * upper), tol)
        total += plus - minus
    total -= splitting_numbers(M, -1.0, tol)[1]
    return total

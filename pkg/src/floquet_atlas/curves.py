"""Location and continuation of the two antiperiodic degeneracy curves.

The coefficient 1 - beta/(1 + ecc cos t) is even in t, so the antiperiodic
eigenvalue problem splits into odd and even half-period shooting problems.
With y1, y2 the solutions of the scalar equation having (y(0), y'(0)) equal
to (1, 0) and (0, 1), evenness gives the factorization

    trace(monodromy) + 2 = 4 y1(pi) y2'(pi),

so the antiperiodic spectrum degenerates exactly where y1(pi) = 0 (even
eigenfunction) or y2'(pi) = 0 (odd eigenfunction).  For each eccentricity
there is exactly one root of each parity in beta; both start at beta = 3/4
when ecc = 0 and separate for ecc > 0.  The lower-beta branch is traced by
continuation as the "lower" curve and the other as "upper".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .config import default_e_max
from .errors import (ConsistencyViolation, CurveRangeExceeded, InsufficientSamples,
                     RootNotBracketed)
from .hamiltonian import DEFAULT_INTEGRATOR_TOL, ParamPoint, fundamental_solution, monodromy

DEGENERACY_TOL = 1e-8
WRONSKIAN_TOL = 1e-10
SCAN_PANELS = 200
SCAN_LO = 0.01
SCAN_HI = 0.999
CROSSING_TOL = 1e-9
TANGENT_BASE_STEP = 1e-3

PARITY_ODD = "odd"
PARITY_EVEN = "even"
LABEL_LOWER = "lower"
LABEL_UPPER = "upper"


@dataclass(frozen=True)
class HalfPeriodData:
    """Values at t = pi of the basis solutions y1 (cosine-type) and y2 (sine-type)."""

    y1_pi: float
    dy1_pi: float
    y2_pi: float
    dy2_pi: float

    @property
    def wronskian(self) -> float:
        return self.y1_pi * self.dy2_pi - self.dy1_pi * self.y2_pi


def half_period_values(p: ParamPoint, tol: float = DEFAULT_INTEGRATOR_TOL) -> HalfPeriodData:
    """Integrate the scalar equation over [0, pi].

    The fundamental solution in (velocity, position) ordering carries both
    basis solutions in its columns: y1 sits in column 2, y2 in column 1.
    """
    g = fundamental_solution(p, math.pi, tol)
    data = HalfPeriodData(y1_pi=g.m22, dy1_pi=g.m12, y2_pi=g.m21, dy2_pi=g.m11)
    if abs(data.wronskian - 1.0) > WRONSKIAN_TOL:
        raise ConsistencyViolation(
            f"half-period Wronskian {data.wronskian!r} deviates from 1", point=p)
    return data


def antiperiodic_discriminant(p: ParamPoint, tol: float = DEFAULT_INTEGRATOR_TOL) -> float:
    """trace(monodromy) + 2; zero exactly at antiperiodic degeneracy.

    Cross-checked against the half-period factorization 4 y1(pi) y2'(pi)
    at 1e-8 before being returned.
    """
    disc = monodromy(p, tol).trace + 2.0
    half = half_period_values(p, tol)
    product = 4.0 * half.y1_pi * half.dy2_pi
    if abs(disc - product) > DEGENERACY_TOL:
        raise ConsistencyViolation(
            f"discriminant {disc!r} vs half-period product {product!r}", point=p)
    return disc


def _shoot_odd(beta: float, ecc: float, tol: float) -> float:
    # y2'(pi); antisymmetric eigenfunction branch
    return fundamental_solution(ParamPoint(beta, ecc), math.pi, tol).m11


def _shoot_even(beta: float, ecc: float, tol: float) -> float:
    # y1(pi); symmetric eigenfunction branch
    return fundamental_solution(ParamPoint(beta, ecc), math.pi, tol).m22


def bracketed_roots(fn, lo: float, hi: float, panels: int, tol: float = 1e-12) -> list[float]:
    """All simple roots of ``fn`` found by a sign-change scan plus bisection.

    Each bisection result gets one Newton polish with a central finite
    difference, kept only when it reduces |fn|.
    """
    grid = np.linspace(lo, hi, panels + 1)
    values = [fn(x) for x in grid]
    roots = []
    for i in range(panels):
        va, vb = values[i], values[i + 1]
        if va == 0.0:
            roots.append(float(grid[i]))
            continue
        if va * vb >= 0.0:
            continue
        a, b = float(grid[i]), float(grid[i + 1])
        fa = va
        while b - a > tol:
            mid = 0.5 * (a + b)
            fm = fn(mid)
            if fa * fm <= 0.0:
                b = mid
            else:
                a, fa = mid, fm
        root = 0.5 * (a + b)
        froot = fn(root)
        step = 1e-7
        slope = (fn(root + step) - fn(root - step)) / (2.0 * step)
        if slope != 0.0:
            polished = root - froot / slope
            if a - tol <= polished <= b + tol and abs(fn(polished)) < abs(froot):
                root = polished
        roots.append(root)
    return roots


def _single_root(fn, lo: float, hi: float, panels: int, tol: float, what: str) -> float:
    roots = bracketed_roots(fn, lo, hi, panels, tol)
    if len(roots) != 1:
        raise RootNotBracketed(
            f"expected exactly one {what} root in [{lo}, {hi}], found {len(roots)}")
    return roots[0]


def find_degenerate_betas(e: float, tol: float = 1e-12,
                          ode_tol: float = DEFAULT_INTEGRATOR_TOL):
    """The two antiperiodic degeneracy betas at eccentricity ``e``.

    Returns ``((beta_odd, "odd"), (beta_even, "even"))``.  Each root is
    bracketed by a 200-panel sign scan over [0.01, 0.999], refined by
    bisection to ``tol``, and verified against the discriminant at 1e-8.
    """
    if not 0.0 <= e < default_e_max():
        raise ValueError(f"e must lie in [0, e_max), got {e}")
    out = []
    for parity, shoot in ((PARITY_ODD, _shoot_odd), (PARITY_EVEN, _shoot_even)):
        root = _single_root(lambda b: shoot(b, e, ode_tol),
                            SCAN_LO, SCAN_HI, SCAN_PANELS, tol, parity)
        _validate_root(root, e, ode_tol)
        out.append((root, parity))
    return tuple(out)


def _validate_root(beta: float, e: float, ode_tol: float) -> None:
    if not 0.0 < beta < 1.0:
        raise RootNotBracketed(f"root beta={beta} escaped (0, 1) at e={e}")
    disc = antiperiodic_discriminant(ParamPoint(beta, e), ode_tol)
    if abs(disc) > DEGENERACY_TOL:
        raise RootNotBracketed(
            f"root beta={beta} at e={e} has discriminant {disc!r} above {DEGENERACY_TOL}")


@dataclass
class DegeneracyCurve:
    """Sampled curve e -> beta(e) of one antiperiodic degeneracy branch."""

    parity: str
    label: str
    eccs: np.ndarray
    betas: np.ndarray
    _interp: PchipInterpolator | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.eccs = np.asarray(self.eccs, dtype=float)
        self.betas = np.asarray(self.betas, dtype=float)
        if self.eccs.shape != self.betas.shape or self.eccs.ndim != 1:
            raise ValueError("eccs and betas must be matching 1-d arrays")
        if len(self.eccs) > 1 and not np.all(np.diff(self.eccs) > 0):
            raise ValueError("curve samples must be strictly increasing in ecc")

    def beta_at(self, e: float) -> float:
        """Monotone-cubic interpolation of beta at eccentricity ``e``."""
        if e < self.eccs[0] - 1e-12 or e > self.eccs[-1] + 1e-12:
            raise CurveRangeExceeded(
                f"e={e} outside traced range [{self.eccs[0]}, {self.eccs[-1]}]")
        if len(self.eccs) == 1:
            return float(self.betas[0])
        if self._interp is None:
            self._interp = PchipInterpolator(self.eccs, self.betas)
        return float(self._interp(min(max(e, self.eccs[0]), self.eccs[-1])))


@dataclass(frozen=True)
class CrossingEvent:
    ecc: float
    beta: float
    gap: float


@dataclass
class TracedCurves:
    """The lower/upper degeneracy curves plus any detected near-crossings."""

    lower: DegeneracyCurve
    upper: DegeneracyCurve
    crossings: list[CrossingEvent]

    def __iter__(self):
        return iter((self.lower, self.upper))

    @property
    def max_ecc(self) -> float:
        return float(self.lower.eccs[-1])


def _continue_root(shoot, e, prev_root, prev_step, tol, ode_tol, what):
    fn = lambda b: shoot(b, e, ode_tol)
    width = max(0.02, 4.0 * abs(prev_step))
    for _ in range(6):
        lo = max(1e-6, prev_root - width)
        hi = min(0.999999, prev_root + width)
        panels = 24
        roots = bracketed_roots(fn, lo, hi, panels, tol)
        if len(roots) == 1:
            return roots[0]
        if len(roots) > 1:
            # keep the continuation branch: nearest to the previous root
            return min(roots, key=lambda r: abs(r - prev_root))
        width *= 3.0
    return _single_root(fn, SCAN_LO, SCAN_HI, SCAN_PANELS, tol, what)


def trace_curves(e_grid, tol: float = 1e-12,
                 ode_tol: float = DEFAULT_INTEGRATOR_TOL) -> TracedCurves:
    """Trace both degeneracy curves over an increasing eccentricity grid.

    The grid must start at 0, where both branches coincide at the seed root;
    subsequent roots are found by continuation (local re-bracketing around the
    previous sample).  Every accepted sample passes the discriminant check.
    Near-crossings of the two branches (gap below 1e-9 at e > 0) are recorded
    as events and the lower/upper assignment follows the pointwise min/max.
    """
    e_grid = np.asarray(list(e_grid), dtype=float)
    if e_grid.ndim != 1 or len(e_grid) == 0:
        raise ValueError("e_grid must be a non-empty 1-d sequence")
    if abs(e_grid[0]) > 1e-15:
        raise ValueError("e_grid must start at 0")
    if len(e_grid) > 1 and not np.all(np.diff(e_grid) > 0):
        raise ValueError("e_grid must be strictly increasing")
    if e_grid[-1] >= default_e_max():
        raise ValueError(f"e_grid exceeds e_max {default_e_max()}")

    branches = {PARITY_ODD: [], PARITY_EVEN: []}
    (seed_odd, _), (seed_even, _) = find_degenerate_betas(float(e_grid[0]), tol, ode_tol)
    branches[PARITY_ODD].append(seed_odd)
    branches[PARITY_EVEN].append(seed_even)
    steps = {PARITY_ODD: 0.0, PARITY_EVEN: 0.0}
    for e in e_grid[1:]:
        e = float(e)
        for parity, shoot in ((PARITY_ODD, _shoot_odd), (PARITY_EVEN, _shoot_even)):
            prev = branches[parity][-1]
            root = _continue_root(shoot, e, prev, steps[parity], tol, ode_tol, parity)
            _validate_root(root, e, ode_tol)
            steps[parity] = root - prev
            branches[parity].append(root)

    odd = np.array(branches[PARITY_ODD])
    even = np.array(branches[PARITY_EVEN])
    lower_vals = np.minimum(odd, even)
    upper_vals = np.maximum(odd, even)

    crossings = [CrossingEvent(ecc=float(e), beta=float(0.5 * (o + v)), gap=float(abs(o - v)))
                 for e, o, v in zip(e_grid, odd, even)
                 if e > 0.0 and abs(o - v) <= CROSSING_TOL]

    lower_parity, upper_parity = PARITY_ODD, PARITY_EVEN
    for o, v in zip(odd, even):
        if abs(o - v) > CROSSING_TOL:
            lower_parity = PARITY_ODD if o < v else PARITY_EVEN
            upper_parity = PARITY_EVEN if o < v else PARITY_ODD
            break

    return TracedCurves(
        lower=DegeneracyCurve(parity=lower_parity, label=LABEL_LOWER,
                              eccs=e_grid.copy(), betas=lower_vals),
        upper=DegeneracyCurve(parity=upper_parity, label=LABEL_UPPER,
                              eccs=e_grid.copy(), betas=upper_vals),
        crossings=crossings,
    )


def tangent_at_origin(curve: DegeneracyCurve) -> float:
    """Richardson-extrapolated slope d(beta)/d(ecc) of a curve at e = 0.

    Requires samples at e = 0, 1e-3, 2e-3, and 4e-3.  First-order slopes
    (beta(h) - beta(0)) / h are combined to cancel the h and h^2 error terms.
    """
    def sample_at(target: float) -> float:
        hits = np.nonzero(np.abs(curve.eccs - target) <= 1e-12)[0]
        if len(hits) == 0:
            raise InsufficientSamples(
                f"curve lacks a sample at e={target}; tangent extraction needs "
                f"e in {{0, 1e-3, 2e-3, 4e-3}}")
        return float(curve.betas[hits[0]])

    h = TANGENT_BASE_STEP
    base = sample_at(0.0)
    s1 = (sample_at(h) - base) / h
    s2 = (sample_at(2 * h) - base) / (2 * h)
    s4 = (sample_at(4 * h) - base) / (4 * h)
    u1 = 2.0 * s1 - s2
    u2 = 2.0 * s2 - s4
    return (4.0 * u1 - u2) / 3.0


def tangent_seed_grid(e_max: float, steps: int) -> np.ndarray:
    """Increasing grid over [0, e_max] including the tangent sample points."""
    h = TANGENT_BASE_STEP
    base = np.linspace(0.0, e_max, max(2, steps))
    grid = np.union1d(base, np.array([0.0, h, 2 * h, 4 * h]))
    return grid[grid <= e_max + 1e-15]

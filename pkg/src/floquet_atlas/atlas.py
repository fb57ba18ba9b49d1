"""Assembly of the (beta, ecc) stability atlas and the Robe-problem mapping.

The two degeneracy curves split the parameter rectangle [0,1] x [0, e_max)
into three regions with locked invariants:

    region I   (beta below both curves):   antiperiodic index 2, elliptic
               monodromy with rotation angle in (pi, 2pi)  (m21 < 0);
    region II  (between the curves):       index 1, trace < -2;
    region III (above both curves):        index 0, elliptic with angle in
               (0, pi)  (m21 > 0);

while the periodic index stays 1 for beta < 1.  Every sweep cell recomputes
the indices spectrally, the monodromy by integration, and cross-checks the
two routes through the splitting-number jump identity, so a finished sweep
certifies the whole table.  The vertical equilibrium of the restricted
shell-fluid three-body problem maps onto the same family via beta = 1 - mu.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .curves import (DegeneracyCurve, TracedCurves, bracketed_roots, find_degenerate_betas,
                     trace_curves)
from .errors import ConsistencyViolation, CurveRangeExceeded
from .hamiltonian import (DEFAULT_CLASSIFY_TOL, DEFAULT_INTEGRATOR_TOL, NormalFormClass,
                          NormalFormTag, ParamPoint, StabilityVerdict, SymplecticMatrix2,
                          classify, index_jump_check, monodromy, stability_verdict)
from .spectral import DEFAULT_TRUNCATION, DEFAULT_ZERO_TOL, index_and_nullity

REGION_I = "I"
REGION_II = "II"
REGION_III = "III"
ON_LOWER = "on_lower"
ON_UPPER = "on_upper"
BOUNDARY_BETA0 = "beta0"
BOUNDARY_BETA1 = "beta1"
REGION_LABELS = frozenset({REGION_I, REGION_II, REGION_III, ON_LOWER, ON_UPPER,
                           BOUNDARY_BETA0, BOUNDARY_BETA1})

ON_CURVE_TOL = 1e-6
CURVE_EXCLUSION = 1e-4
DEFAULT_SWEEP_SHAPE = (101, 50)
DEFAULT_SWEEP_EMAX = 0.9


@dataclass(frozen=True)
class AtlasCell:
    """One fully cross-checked sample of the stability atlas."""

    point: ParamPoint
    region: str
    i1: int
    nu1: int
    im1: int
    num1: int
    normal_form: NormalFormClass
    verdict: StabilityVerdict
    trace: float


@dataclass(frozen=True)
class RobeVerdict:
    """Atlas cell of the vertical Robe equilibrium with mass ratio ``mu``."""

    mu: float
    cell: AtlasCell


def classify_region(p: ParamPoint, curves: TracedCurves,
                    on_tol: float = ON_CURVE_TOL) -> str:
    """Region label of ``p`` relative to the traced curves.

    Exact beta = 0 / beta = 1 get boundary labels; points within ``on_tol``
    of a curve are reported as sitting on it, the lower curve winning ties
    (relevant where the curves meet at their common seed).
    """
    if p.beta == 0.0:
        return BOUNDARY_BETA0
    if p.beta == 1.0:
        return BOUNDARY_BETA1
    beta_low = curves.lower.beta_at(p.ecc)
    beta_up = curves.upper.beta_at(p.ecc)
    if abs(p.beta - beta_low) <= on_tol:
        return ON_LOWER
    if abs(p.beta - beta_up) <= on_tol:
        return ON_UPPER
    if p.beta < beta_low:
        return REGION_I
    if p.beta < beta_up:
        return REGION_II
    return REGION_III


def expected_antiperiodic_index(p: ParamPoint, curves: TracedCurves,
                                exclusion: float = CURVE_EXCLUSION) -> int | None:
    """Index demanded by the region table, or None within the exclusion band

    (the index jumps exactly on the curves, so cells within ``exclusion`` in
    beta of either curve are not asserted against the integer table).
    """
    beta_low = curves.lower.beta_at(p.ecc)
    beta_up = curves.upper.beta_at(p.ecc)
    if min(abs(p.beta - beta_low), abs(p.beta - beta_up)) <= exclusion:
        return None
    if p.beta < beta_low:
        return 2
    if p.beta < beta_up:
        return 1
    return 0


def _check_cell(cell: AtlasCell, M: SymplecticMatrix2, curves: TracedCurves,
                exclusion: float, classify_tol: float) -> None:
    p = cell.point
    expected = expected_antiperiodic_index(p, curves, exclusion)

    if p.beta == 1.0:
        if (cell.i1, cell.nu1) != (0, 1):
            raise ConsistencyViolation(
                f"periodic pair {(cell.i1, cell.nu1)} != (0, 1) on the beta=1 edge", point=p)
    elif cell.i1 != 1:
        raise ConsistencyViolation(f"periodic index {cell.i1} != 1", point=p)
    if p.beta == 0.0 and cell.nu1 != 2:
        raise ConsistencyViolation(f"periodic nullity {cell.nu1} != 2 on the beta=0 edge",
                                   point=p)

    if expected is not None:
        if cell.im1 != expected:
            raise ConsistencyViolation(
                f"antiperiodic index {cell.im1} != region value {expected}",
                point=p, details={"region": cell.region})
        predicted = index_jump_check(cell.i1, M, classify_tol)
        if predicted != cell.im1:
            raise ConsistencyViolation(
                f"jump identity predicts {predicted}, spectral route gives {cell.im1}",
                point=p)
        if 0.0 < p.beta < 1.0:
            tag = cell.normal_form.tag
            if expected == 2 and not (tag is NormalFormTag.ELLIPTIC_NEGATIVE and M.m21 < 0.0):
                raise ConsistencyViolation(
                    f"region I cell classed {cell.normal_form.label()} (m21={M.m21!r})",
                    point=p)
            if expected == 1 and not cell.trace < -2.0:
                raise ConsistencyViolation(
                    f"region II cell has trace {cell.trace!r} >= -2", point=p)
            if expected == 0 and not (tag is NormalFormTag.ELLIPTIC_POSITIVE and M.m21 > 0.0):
                raise ConsistencyViolation(
                    f"region III cell classed {cell.normal_form.label()} (m21={M.m21!r})",
                    point=p)


def build_cell(p: ParamPoint, curves: TracedCurves, *,
               ode_tol: float = DEFAULT_INTEGRATOR_TOL,
               truncation: int = DEFAULT_TRUNCATION,
               zero_tol: float = DEFAULT_ZERO_TOL,
               classify_tol: float = DEFAULT_CLASSIFY_TOL,
               check: bool = True,
               exclusion: float = CURVE_EXCLUSION) -> AtlasCell:
    """Evaluate one atlas cell: monodromy route plus spectral route."""
    M = monodromy(p, ode_tol)
    pair_per = index_and_nullity(p, 1.0, truncation, zero_tol)
    pair_anti = index_and_nullity(p, -1.0, truncation, zero_tol)
    cell = AtlasCell(
        point=p,
        region=classify_region(p, curves),
        i1=pair_per.index,
        nu1=pair_per.nullity,
        im1=pair_anti.index,
        num1=pair_anti.nullity,
        normal_form=classify(M, classify_tol),
        verdict=stability_verdict(M, classify_tol),
        trace=M.trace,
    )
    if check:
        _check_cell(cell, M, curves, exclusion, classify_tol)
    return cell


def atlas_sweep(n_beta: int = DEFAULT_SWEEP_SHAPE[0], n_ecc: int = DEFAULT_SWEEP_SHAPE[1],
                e_max: float = DEFAULT_SWEEP_EMAX, *,
                curves: TracedCurves | None = None,
                check: bool = True,
                exclusion: float = CURVE_EXCLUSION,
                jobs: int = 1,
                ode_tol: float = DEFAULT_INTEGRATOR_TOL,
                truncation: int = DEFAULT_TRUNCATION,
                zero_tol: float = DEFAULT_ZERO_TOL) -> list[AtlasCell]:
    """Sweep a regular grid over [0, 1] x [0, e_max], verifying every cell.

    The curves are traced on exactly the sweep's eccentricity grid unless a
    pre-traced pair is supplied.  Cells are returned in row-major order
    (ecc outer, beta inner) regardless of ``jobs``.
    """
    if n_beta < 2 or n_ecc < 2:
        raise ValueError("sweep needs at least a 2 x 2 grid")
    betas = np.linspace(0.0, 1.0, n_beta)
    eccs = np.linspace(0.0, e_max, n_ecc)
    if curves is None:
        curves = trace_curves(eccs, ode_tol=ode_tol)
    points = [ParamPoint(float(b), float(e)) for e in eccs for b in betas]

    def work(p: ParamPoint) -> AtlasCell:
        return build_cell(p, curves, ode_tol=ode_tol, truncation=truncation,
                          zero_tol=zero_tol, check=check, exclusion=exclusion)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(work, points))
    return [work(p) for p in points]


def robe_stability(mu: float, e: float, curves: TracedCurves | None = None,
                   **cell_kwargs) -> RobeVerdict:
    """Atlas cell governing the vertical oscillation of the Robe equilibrium.

    The linearized vertical equation coincides with the family at
    beta = 1 - mu, so the verdict is read off the atlas there.  ``mu`` must
    lie in (0, 1]; mu = 1 lands on the beta = 0 boundary column.
    """
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must lie in (0, 1], got {mu}")
    p = ParamPoint(1.0 - mu, e)
    if curves is None:
        grid = np.unique(np.array([0.0, e / 3.0, 2.0 * e / 3.0, e])) if e > 0.0 \
            else np.array([0.0])
        curves = trace_curves(grid, ode_tol=cell_kwargs.get("ode_tol", DEFAULT_INTEGRATOR_TOL))
    return RobeVerdict(mu=mu, cell=build_cell(p, curves, **cell_kwargs))


def verify_curve_normal_forms(curves: TracedCurves, *,
                              ode_tol: float = DEFAULT_INTEGRATOR_TOL,
                              classify_tol: float = DEFAULT_CLASSIFY_TOL) -> list[dict]:
    """Check the shear labels along both curves; return findings (empty = clean).

    Where the curves are separated, the lower one should carry the shear
    class N1(-1, +1) and the upper one N1(-1, -1); where they coincide the
    monodromy should be -I.  Mismatches are reported, not raised, so callers
    can surface them as findings.
    """
    findings = []
    for curve, want_a in ((curves.lower, 1), (curves.upper, -1)):
        for e, beta in zip(curve.eccs, curve.betas):
            other = curves.upper if curve.label == "lower" else curves.lower
            gap = abs(beta - other.beta_at(float(e)))
            cls = classify(monodromy(ParamPoint(float(beta), float(e)), ode_tol), classify_tol)
            if gap <= ON_CURVE_TOL:
                if cls.tag is not NormalFormTag.MINUS_IDENTITY:
                    findings.append({"curve": curve.label, "e": float(e), "beta": float(beta),
                                     "expected": "minus_identity", "got": cls.label()})
            elif not (cls.tag is NormalFormTag.PARABOLIC_NEGATIVE and cls.a == want_a):
                findings.append({"curve": curve.label, "e": float(e), "beta": float(beta),
                                 "expected": f"parabolic-({want_a:+d})", "got": cls.label()})
    return findings


def total_degeneracy_multiplicity(e: float, omega: complex, *,
                                  ode_tol: float = DEFAULT_INTEGRATOR_TOL,
                                  truncation: int = DEFAULT_TRUNCATION,
                                  zero_tol: float = DEFAULT_ZERO_TOL) -> list[tuple[float, int]]:
    """All omega-degenerate betas in (0, 1) at fixed ``e`` with their nullities.

    A unit-circle omega != 1 is in the monodromy spectrum exactly when
    trace = 2 Re(omega).  For omega = -1 that condition is a tangency (the
    trace touches -2 from above at e = 0), so the two parity shooting
    functions locate the roots instead; elsewhere a sign-change scan on the
    trace suffices.  The summed nullities should total 2 at every e.
    """
    omega = complex(omega)
    if abs(omega - 1.0) < 1e-12:
        raise ValueError("the periodic multiplier has no isolated degeneracy scan")
    if abs(omega + 1.0) < 1e-12:
        roots = sorted(b for b, _parity in find_degenerate_betas(e, ode_tol=ode_tol))
        merged = [roots[0]]
        for r in roots[1:]:
            if abs(r - merged[-1]) > 1e-9:
                merged.append(r)
    else:
        target = 2.0 * omega.real

        def gap(b: float) -> float:
            return monodromy(ParamPoint(b, e), ode_tol).trace - target

        merged = bracketed_roots(gap, 1e-4, 1.0 - 1e-9, 400)
    out = []
    for b in merged:
        pair = index_and_nullity(ParamPoint(b, e), omega, truncation, zero_tol)
        out.append((float(b), pair.nullity))
    return out

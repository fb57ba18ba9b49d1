"""Hot integration kernels for the 2x2 periodic linear system.

The fundamental solution solves ``g' = J B(t) g`` with ``g(0) = I``, where
``B(t) = diag(1, 1 - beta/(1 + ecc cos t))`` and ``J = [[0,-1],[1,0]]``; the
state columns are ordered ``(velocity, position)``.  Written out per entry
(g = [[a, b], [c, d]], q = 1 - beta/(1 + ecc cos t)):

    a' = -q c,   b' = -q d,   c' = a,   d' = b

The steppers below are deliberately scalar and allocation-free so that numba
can compile them to tight machine code.  When numba is unavailable, or when
the environment variable ``FLOQUET_ATLAS_NO_NUMBA`` is set to a truthy value,
the same functions run as plain Python on floats (the pure-NumPy lane used by
the rest of the package); results agree to the last bit because no fastmath
reassociation is enabled.  ``benchmarks/bench_kernels.py`` compares the lanes.

Status codes returned by the steppers: 0 success, 1 step-size underflow,
2 step budget exhausted.  Callers translate nonzero codes into
:class:`~floquet_atlas.errors.IntegrationFailure`.
"""

import math
import os

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_BUDGET = 2

_MIN_STEP = 1e-14
_MAX_STEPS = 10_000_000
_ENV_FLAG = "FLOQUET_ATLAS_NO_NUMBA"


def numba_requested() -> bool:
    return os.environ.get(_ENV_FLAG, "").strip().lower() not in {"1", "true", "yes", "on"}


def _advance_dopri5(beta, ecc, t0, t1, rtol, atol):
    # Dormand-Prince 5(4), FSAL, PI-free step control with safety 0.9.
    a = 1.0
    b = 0.0
    c = 0.0
    d = 1.0
    t = t0
    span = t1 - t0
    if span <= 0.0:
        return a, b, c, d, STATUS_OK
    h = 0.01 * span
    q = 1.0 - beta / (1.0 + ecc * math.cos(t))
    k1a = -q * c
    k1b = -q * d
    k1c = a
    k1d = b
    for _ in range(_MAX_STEPS):
        if t >= t1:
            return a, b, c, d, STATUS_OK
        if t + h > t1:
            h = t1 - t

        q = 1.0 - beta / (1.0 + ecc * math.cos(t + h * (1.0 / 5.0)))
        y1 = a + h * (1.0 / 5.0) * k1a
        y2 = b + h * (1.0 / 5.0) * k1b
        y3 = c + h * (1.0 / 5.0) * k1c
        y4 = d + h * (1.0 / 5.0) * k1d
        k2a = -q * y3
        k2b = -q * y4
        k2c = y1
        k2d = y2

        q = 1.0 - beta / (1.0 + ecc * math.cos(t + h * (3.0 / 10.0)))
        y1 = a + h * ((3.0 / 40.0) * k1a + (9.0 / 40.0) * k2a)
        y2 = b + h * ((3.0 / 40.0) * k1b + (9.0 / 40.0) * k2b)
        y3 = c + h * ((3.0 / 40.0) * k1c + (9.0 / 40.0) * k2c)
        y4 = d + h * ((3.0 / 40.0) * k1d + (9.0 / 40.0) * k2d)
        k3a = -q * y3
        k3b = -q * y4
        k3c = y1
        k3d = y2

        q = 1.0 - beta / (1.0 + ecc * math.cos(t + h * (4.0 / 5.0)))
        y1 = a + h * ((44.0 / 45.0) * k1a - (56.0 / 15.0) * k2a + (32.0 / 9.0) * k3a)
        y2 = b + h * ((44.0 / 45.0) * k1b - (56.0 / 15.0) * k2b + (32.0 / 9.0) * k3b)
        y3 = c + h * ((44.0 / 45.0) * k1c - (56.0 / 15.0) * k2c + (32.0 / 9.0) * k3c)
        y4 = d + h * ((44.0 / 45.0) * k1d - (56.0 / 15.0) * k2d + (32.0 / 9.0) * k3d)
        k4a = -q * y3
        k4b = -q * y4
        k4c = y1
        k4d = y2

        q = 1.0 - beta / (1.0 + ecc * math.cos(t + h * (8.0 / 9.0)))
        y1 = a + h * ((19372.0 / 6561.0) * k1a - (25360.0 / 2187.0) * k2a
                      + (64448.0 / 6561.0) * k3a - (212.0 / 729.0) * k4a)
        y2 = b + h * ((19372.0 / 6561.0) * k1b - (25360.0 / 2187.0) * k2b
                      + (64448.0 / 6561.0) * k3b - (212.0 / 729.0) * k4b)
        y3 = c + h * ((19372.0 / 6561.0) * k1c - (25360.0 / 2187.0) * k2c
                      + (64448.0 / 6561.0) * k3c - (212.0 / 729.0) * k4c)
        y4 = d + h * ((19372.0 / 6561.0) * k1d - (25360.0 / 2187.0) * k2d
                      + (64448.0 / 6561.0) * k3d - (212.0 / 729.0) * k4d)
        k5a = -q * y3
        k5b = -q * y4
        k5c = y1
        k5d = y2

        q = 1.0 - beta / (1.0 + ecc * math.cos(t + h))
        y1 = a + h * ((9017.0 / 3168.0) * k1a - (355.0 / 33.0) * k2a + (46732.0 / 5247.0) * k3a
                      + (49.0 / 176.0) * k4a - (5103.0 / 18656.0) * k5a)
        y2 = b + h * ((9017.0 / 3168.0) * k1b - (355.0 / 33.0) * k2b + (46732.0 / 5247.0) * k3b
                      + (49.0 / 176.0) * k4b - (5103.0 / 18656.0) * k5b)
        y3 = c + h * ((9017.0 / 3168.0) * k1c - (355.0 / 33.0) * k2c + (46732.0 / 5247.0) * k3c
                      + (49.0 / 176.0) * k4c - (5103.0 / 18656.0) * k5c)
        y4 = d + h * ((9017.0 / 3168.0) * k1d - (355.0 / 33.0) * k2d + (46732.0 / 5247.0) * k3d
                      + (49.0 / 176.0) * k4d - (5103.0 / 18656.0) * k5d)
        k6a = -q * y3
        k6b = -q * y4
        k6c = y1
        k6d = y2

        na = a + h * ((35.0 / 384.0) * k1a + (500.0 / 1113.0) * k3a + (125.0 / 192.0) * k4a
                      - (2187.0 / 6784.0) * k5a + (11.0 / 84.0) * k6a)
        nb = b + h * ((35.0 / 384.0) * k1b + (500.0 / 1113.0) * k3b + (125.0 / 192.0) * k4b
                      - (2187.0 / 6784.0) * k5b + (11.0 / 84.0) * k6b)
        nc = c + h * ((35.0 / 384.0) * k1c + (500.0 / 1113.0) * k3c + (125.0 / 192.0) * k4c
                      - (2187.0 / 6784.0) * k5c + (11.0 / 84.0) * k6c)
        nd = d + h * ((35.0 / 384.0) * k1d + (500.0 / 1113.0) * k3d + (125.0 / 192.0) * k4d
                      - (2187.0 / 6784.0) * k5d + (11.0 / 84.0) * k6d)

        # FSAL stage doubles as the error stage and as k1 of the next step.
        q = 1.0 - beta / (1.0 + ecc * math.cos(t + h))
        k7a = -q * nc
        k7b = -q * nd
        k7c = na
        k7d = nb

        e1 = h * ((71.0 / 57600.0) * k1a - (71.0 / 16695.0) * k3a + (71.0 / 1920.0) * k4a
                  - (17253.0 / 339200.0) * k5a + (22.0 / 525.0) * k6a - (1.0 / 40.0) * k7a)
        e2 = h * ((71.0 / 57600.0) * k1b - (71.0 / 16695.0) * k3b + (71.0 / 1920.0) * k4b
                  - (17253.0 / 339200.0) * k5b + (22.0 / 525.0) * k6b - (1.0 / 40.0) * k7b)
        e3 = h * ((71.0 / 57600.0) * k1c - (71.0 / 16695.0) * k3c + (71.0 / 1920.0) * k4c
                  - (17253.0 / 339200.0) * k5c + (22.0 / 525.0) * k6c - (1.0 / 40.0) * k7c)
        e4 = h * ((71.0 / 57600.0) * k1d - (71.0 / 16695.0) * k3d + (71.0 / 1920.0) * k4d
                  - (17253.0 / 339200.0) * k5d + (22.0 / 525.0) * k6d - (1.0 / 40.0) * k7d)

        s1 = atol + rtol * max(abs(a), abs(na))
        s2 = atol + rtol * max(abs(b), abs(nb))
        s3 = atol + rtol * max(abs(c), abs(nc))
        s4 = atol + rtol * max(abs(d), abs(nd))
        err = math.sqrt(((e1 / s1) ** 2 + (e2 / s2) ** 2
                         + (e3 / s3) ** 2 + (e4 / s4) ** 2) / 4.0)

        if err <= 1.0:
            t += h
            a = na
            b = nb
            c = nc
            d = nd
            k1a = k7a
            k1b = k7b
            k1c = k7c
            k1d = k7d

        if err > 0.0:
            fac = 0.9 * err ** -0.2
            if fac < 0.2:
                fac = 0.2
            elif fac > 5.0:
                fac = 5.0
        else:
            fac = 5.0
        h *= fac
        if h < _MIN_STEP:
            return a, b, c, d, STATUS_UNDERFLOW
    return a, b, c, d, STATUS_BUDGET


def _advance_rk4(beta, ecc, t0, t1, nsteps):
    # Classical fixed-step RK4; paired with Richardson extrapolation by the caller.
    a = 1.0
    b = 0.0
    c = 0.0
    d = 1.0
    h = (t1 - t0) / nsteps
    t = t0
    for _ in range(nsteps):
        q = 1.0 - beta / (1.0 + ecc * math.cos(t))
        k1a = -q * c
        k1b = -q * d
        k1c = a
        k1d = b
        q = 1.0 - beta / (1.0 + ecc * math.cos(t + 0.5 * h))
        y3 = c + 0.5 * h * k1c
        y4 = d + 0.5 * h * k1d
        k2a = -q * y3
        k2b = -q * y4
        k2c = a + 0.5 * h * k1a
        k2d = b + 0.5 * h * k1b
        y3 = c + 0.5 * h * k2c
        y4 = d + 0.5 * h * k2d
        k3a = -q * y3
        k3b = -q * y4
        k3c = a + 0.5 * h * k2a
        k3d = b + 0.5 * h * k2b
        q = 1.0 - beta / (1.0 + ecc * math.cos(t + h))
        y3 = c + h * k3c
        y4 = d + h * k3d
        k4a = -q * y3
        k4b = -q * y4
        k4c = a + h * k3a
        k4d = b + h * k3b
        a += h * (k1a + 2.0 * k2a + 2.0 * k3a + k4a) / 6.0
        b += h * (k1b + 2.0 * k2b + 2.0 * k3b + k4b) / 6.0
        c += h * (k1c + 2.0 * k2c + 2.0 * k3c + k4c) / 6.0
        d += h * (k1d + 2.0 * k2d + 2.0 * k3d + k4d) / 6.0
        t += h
    return a, b, c, d


NUMBA_ENABLED = False
if numba_requested():
    try:
        from numba import njit

        advance_dopri5 = njit(cache=True, nogil=True)(_advance_dopri5)
        advance_rk4 = njit(cache=True, nogil=True)(_advance_rk4)
        NUMBA_ENABLED = True
    except ImportError:
        advance_dopri5 = _advance_dopri5
        advance_rk4 = _advance_rk4
else:
    advance_dopri5 = _advance_dopri5
    advance_rk4 = _advance_rk4


def backend_name() -> str:
    return "numba" if NUMBA_ENABLED else "numpy"

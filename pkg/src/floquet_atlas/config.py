"""Shared configuration knobs."""

import os

ENV_EMAX = "FLOQUET_ATLAS_EMAX"
DEFAULT_EMAX = 0.99


def default_e_max() -> float:
    """Eccentricity cap for sweeps; overridable via FLOQUET_ATLAS_EMAX.

    Nothing is singular below e = 1, but step control slows as e -> 1, so
    sweeps stop at a configurable cap.
    """
    raw = os.environ.get(ENV_EMAX)
    if raw is None:
        return DEFAULT_EMAX
    value = float(raw)
    if not 0.0 < value < 1.0:
        raise ValueError(f"{ENV_EMAX} must lie in (0, 1), got {raw!r}")
    return value

"""Peakon trains for the Camassa-Holm equation."""

import json as _json

from ._core import (
    ConditioningError,
    ConstraintError,
    ConvergenceError,
    DomainError,
    NearCollisionError,
    PeakedField,
    PeakonState,
    StateError,
    UsageError,
    WeightProfile,
    advance,
    check_energy_identity,
    energy,
    h1_dist,
    h1_inner,
    integrate,
    moment_f,
    psi,
    rhs,
    run_asymptotics,
    run_stability,
    spectrum,
    weighted_energy,
    weighted_f,
)
from ._core import execute as _execute


def run(*args):
    """Run a peakon_lab subcommand in memory and decode its JSON document."""
    out = _execute([str(a) for a in args])
    out["json"] = _json.loads(out["json"])
    return out


__all__ = [name for name in dir() if not name.startswith("_")]

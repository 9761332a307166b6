"""Wave-front tracking for a 3x3 system of conservation laws."""

import json

from ._wftrack import (
    ConvergenceError,
    DomainError,
    InternalError,
    build_datum,
    eigenvalues,
    extended_precision,
    flux,
    lax_oleinik,
    run_cli,
)
from . import _wftrack


def certify(eta, resolution=16):
    return json.loads(_wftrack.certify_json(eta, resolution))


def derive_params(eps):
    return json.loads(_wftrack.derive_params_json(eps))


def solve_riemann(UL, UR, eta):
    return json.loads(_wftrack.solve_riemann_json(list(UL), list(UR), eta))


def evolve(breakpoints, values, eps, J_max=3, **overrides):
    return json.loads(_wftrack.evolve_json(list(breakpoints), [list(v) for v in values], eps,
                                           json.dumps(overrides), J_max))


__all__ = [
    "ConvergenceError", "DomainError", "InternalError", "build_datum", "certify", "derive_params",
    "eigenvalues", "evolve", "extended_precision", "flux", "lax_oleinik", "run_cli", "solve_riemann",
]

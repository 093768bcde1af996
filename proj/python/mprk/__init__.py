"""Mixed-precision Runge-Kutta integrators for linear 3D heat and advection
problems, with fast-diagonalization preconditioning.

Thin wrapper around the compiled ``_mprk`` extension.
"""

try:
    from ._mprk import (
        MprkError,
        Tableau,
        builtin,
        corrected_midpoint_reference,
        integrate,
        midpoint_corrected,
        region_scan,
        round_binary16,
        round_binary32,
        stability_function,
        tableau_from_json,
        tableau_to_json,
        truncate_eps,
        validate,
    )
except ImportError:
    from _mprk import (
        MprkError,
        Tableau,
        builtin,
        corrected_midpoint_reference,
        integrate,
        midpoint_corrected,
        region_scan,
        round_binary16,
        round_binary32,
        stability_function,
        tableau_from_json,
        tableau_to_json,
        truncate_eps,
        validate,
    )

__all__ = [
    "MprkError",
    "Tableau",
    "builtin",
    "corrected_midpoint_reference",
    "integrate",
    "midpoint_corrected",
    "region_scan",
    "round_binary16",
    "round_binary32",
    "stability_function",
    "tableau_from_json",
    "tableau_to_json",
    "truncate_eps",
    "validate",
]

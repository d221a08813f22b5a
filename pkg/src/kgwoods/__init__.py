"""Klein-Gordon equation with a q-deformed Woods-Saxon potential.

Closed-form transmission/reflection and bound-state spectra built on a
self-contained complex 2F1, plus a direct ODE oracle for cross-checks.
"""

from .bound import scan_spectrum
from .errors import KGWoodsError
from .oracle import integrate_kg, oracle_spectrum, oracle_transmission
from .potential import (NATURAL, TABLE_I, TABLE_I_WELL, PotentialParams, SideParams,
                        UnitSystem, evaluate, make_symmetric, parse_config, table_i)
from .results import BoundState, ScatteringResult, Spectrum
from .scattering import transmission_reflection
from .settings import DEFAULT_SETTINGS, SolverSettings

__version__ = "0.1.0"

__all__ = [
    "BoundState", "DEFAULT_SETTINGS", "KGWoodsError", "NATURAL", "PotentialParams",
    "ScatteringResult", "SideParams", "SolverSettings", "Spectrum", "TABLE_I",
    "TABLE_I_WELL", "UnitSystem", "evaluate", "integrate_kg", "make_symmetric",
    "oracle_spectrum", "oracle_transmission", "parse_config", "scan_spectrum",
    "table_i", "transmission_reflection",
]

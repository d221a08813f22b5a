from dataclasses import dataclass


@dataclass(frozen=True)
class SolverSettings:
    """Tolerances, scan grids and branch conventions.

    Energies are in the same unit as the potential parameters (GeV for the
    natural-unit configurations shipped with the package).
    """

    scan_step: float = 0.005
    root_tol: float = 1e-10
    bisect_width: float = 1e-6
    newton_step: float = 1e-7
    newton_max_iter: int = 50
    band_margin: float = 1e-6          # fraction of Mc^2 excluded at each band edge
    series_tol: float = 1e-16
    series_max_terms: int = 10000
    conservation_tol: float = 1e-8
    oracle_tol: float = 1e-4
    spectrum_tol: float = 1e-5
    # "abs": t0**w -> (-t0)**w (conserves probability).  "principal": literal
    # principal powers of t0 and -1, kept as a negative control.
    branch: str = "abs"
    nu_sign: int = 1

    def __post_init__(self):
        for name in ("scan_step", "root_tol", "bisect_width", "newton_step",
                     "series_tol", "conservation_tol", "oracle_tol", "spectrum_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.branch not in ("abs", "principal"):
            raise ValueError(f"unknown branch convention {self.branch!r}")
        if self.nu_sign not in (1, -1):
            raise ValueError("nu_sign must be +1 or -1")


DEFAULT_SETTINGS = SolverSettings()

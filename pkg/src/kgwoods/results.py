"""Result records shared by the analytic solvers and the ODE oracle."""

from dataclasses import dataclass, field

EVEN = "even"
ODD = "odd"
NO_PARITY = "none"


@dataclass(frozen=True)
class ScatteringResult:
    energy: float
    T: float
    R: float
    d1_over_a1: complex
    b1_over_a1: complex

    @property
    def total(self):
        return self.T + self.R


@dataclass(frozen=True)
class BoundState:
    energy: float
    parity: str
    nodes: int
    condition_residual: float
    index: int = -1


@dataclass(frozen=True)
class Spectrum:
    states: tuple
    params: object = field(repr=False)
    mass: float

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i):
        return self.states[i]

    @property
    def energies(self):
        return [s.energy for s in self.states]

"""Dimensionless parameter types shared by all models.

Conventions: hbar = 1, time is always the dimensionless phase ``omega_t``
(radians of mechanical rotation), quadratures are measured in units of the
zero-point length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidGrid, NegativeParameter, NonFinite


@dataclass(frozen=True)
class ModelParams:
    """Coupling ratio ``lam = g / omega`` and oscillator temperature.

    Attributes:
        lam: dimensionless coupling g/omega.
        nbar: thermal phonon occupation of the quantum oscillator.
        classical_n: classical phonon number 1/(beta omega); only the
            mean-field classical-oscillator model uses it.
    """

    lam: float
    nbar: float = 0.0
    classical_n: Optional[float] = None

    def with_classical_n(self, classical_n: float) -> "ModelParams":
        return ModelParams(self.lam, self.nbar, classical_n)


def validate(params: ModelParams) -> ModelParams:
    """Check the parameter invariants and return ``params`` unchanged."""
    fields = {"lam": params.lam, "nbar": params.nbar}
    if params.classical_n is not None:
        fields["classical_n"] = params.classical_n
    for name, value in fields.items():
        if not math.isfinite(value):
            raise NonFinite(f"{name} must be finite, got {value!r}")
        if value < 0:
            raise NegativeParameter(f"{name} must be >= 0, got {value!r}")
    return params


def from_physical(
    g: float,
    omega: float,
    temperature: float,
    hbar: float = 1.0,
    k_b: float = 1.0,
) -> ModelParams:
    """Build dimensionless parameters from a coupling, frequency and temperature.

    ``nbar`` is the Bose-Einstein occupation and ``classical_n`` the
    equipartition value k_B T / (hbar omega). A zero temperature gives
    ``nbar = classical_n = 0``.
    """
    if omega <= 0:
        raise NegativeParameter(f"omega must be > 0, got {omega!r}")
    if temperature < 0:
        raise NegativeParameter(f"temperature must be >= 0, got {temperature!r}")
    if temperature == 0:
        nbar = 0.0
        n_c = 0.0
    else:
        x = hbar * omega / (k_b * temperature)
        nbar = 1.0 / math.expm1(x)
        n_c = 1.0 / x
    return validate(ModelParams(g / omega, nbar, n_c))


@dataclass(frozen=True)
class TimeGrid:
    """Evenly spaced ``omega_t`` samples: ``steps`` intervals, ``steps + 1`` points."""

    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise NonFinite("time grid bounds must be finite")
        if self.stop <= self.start:
            raise InvalidGrid(f"stop ({self.stop}) must exceed start ({self.start})")
        if self.steps < 1:
            raise InvalidGrid(f"steps must be >= 1, got {self.steps}")

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps + 1)

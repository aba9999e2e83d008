"""Parameter axes for 1-D and 2-D sweeps."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .model import CircuitParams

AXIS_NAMES = (
    "g_e",
    "delta_theta",
    "lambda",
    "sigma_z",
    "sigma_z_anti",
    "omega_c",
    "gamma_a",
)


def apply_axis(p: CircuitParams, name: str, value: float) -> CircuitParams:
    """Return ``p`` with the swept quantity ``name`` set to ``value``.

    ``lambda`` sets both resonator couplings, ``sigma_z`` sets both populations,
    ``sigma_z_anti`` sets ``(value, -value)``. Sweeping ``omega_c`` clears any
    pinned ``g_e`` so the coupling follows the coupler.
    """
    value = float(value)
    if name == "g_e":
        return replace(p, g_e=value)
    if name == "delta_theta":
        return p.with_delta_theta(value)
    if name == "lambda":
        return replace(p, lambda_q=(value, value))
    if name == "sigma_z":
        return replace(p, sigma_z=(value, value))
    if name == "sigma_z_anti":
        return replace(p, sigma_z=(value, -value))
    if name == "omega_c":
        return replace(p, omega_c=value, g_e=None)
    if name == "gamma_a":
        return replace(p, gamma_a=value)
    raise ValueError(f"unknown sweep axis {name!r}; expected one of {AXIS_NAMES}")


@dataclass(frozen=True)
class SweepAxis:
    name: str
    values: tuple

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown sweep axis {self.name!r}; expected one of {AXIS_NAMES}")
        vals = tuple(float(v) for v in np.atleast_1d(self.values))
        if not vals:
            raise ValueError("sweep axis needs at least one value")
        object.__setattr__(self, "values", vals)

    @classmethod
    def linspace(cls, name, start, stop, num):
        return cls(name, tuple(np.linspace(start, stop, int(num))))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values)

    @property
    def bounds(self) -> tuple[float, float]:
        return (min(self.values), max(self.values))

    def __len__(self):
        return len(self.values)

    def with_num(self, num) -> SweepAxis:
        lo, hi = self.bounds
        return SweepAxis.linspace(self.name, lo, hi, num)

    def apply(self, p: CircuitParams, value: float) -> CircuitParams:
        return apply_axis(p, self.name, value)

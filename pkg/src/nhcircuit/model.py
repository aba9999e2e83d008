"""Circuit parameters and the effective two-qubit non-Hermitian Hamiltonian.

All frequency-like quantities are linear frequencies in MHz (``f = w/2pi``).
Every formula used here is homogeneous of degree one or two in these
quantities, so they are combined directly and time comes out in units of
``1 / (2 pi MHz)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateDetuning, DispersiveWarning, NonPositiveResonatorLoss

_PAIR_FIELDS = ("omega_q", "gamma_q", "g_qc", "lambda_q", "theta_q", "sigma_z")


def _pair(value, name):
    try:
        a, b = value
    except (TypeError, ValueError):
        raise ValueError(f"{name} must hold exactly two values, got {value!r}") from None
    return (float(a), float(b))


@dataclass(frozen=True)
class CircuitParams:
    """Physical parameters of the two-qubit / coupler / lossy-resonator circuit.

    Defaults reproduce the working point used for the level-attraction maps:
    resonator at 4.475 GHz, qubits at 4.5 and 4.505 GHz, coupler at 5.2 GHz,
    both qubits in the ground state.

    ``g_e`` optionally pins the effective qubit-qubit coupling directly. When it
    is ``None`` the coupling is derived from the coupler detunings.
    """

    omega_a: float = 4475.0
    omega_q: tuple[float, float] = (4500.0, 4505.0)
    omega_c: float = 5200.0
    gamma_q: tuple[float, float] = (1.00, 1.01)
    gamma_a: float = 65.0
    g_xy: float = 4.0
    g_qc: tuple[float, float] = (30.0, 30.3)
    lambda_q: tuple[float, float] = (11.0, 11.0)
    theta_q: tuple[float, float] = (0.0, 0.0)
    sigma_z: tuple[float, float] = (-1.0, -1.0)
    g_e: float | None = None
    gamma_c: float = 0.0

    def __post_init__(self):
        for name in _PAIR_FIELDS:
            object.__setattr__(self, name, _pair(getattr(self, name), name))
        for name in ("omega_a", "omega_c", "gamma_a", "g_xy", "gamma_c"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if self.g_e is not None:
            object.__setattr__(self, "g_e", float(self.g_e))

        if not self.gamma_a > 0:
            raise NonPositiveResonatorLoss(f"gamma_a must be > 0, got {self.gamma_a}")
        if min(self.gamma_q) < 0 or self.gamma_c < 0:
            raise ValueError("qubit and coupler decay rates must be >= 0")
        if min(self.lambda_q) < 0:
            raise ValueError("lambda_q are magnitudes and must be >= 0; put phases in theta_q")
        if any(not -1.0 <= s <= 1.0 for s in self.sigma_z):
            raise ValueError(f"sigma_z expectations must lie in [-1, 1], got {self.sigma_z}")

    @property
    def delta_theta(self) -> float:
        return self.theta_q[0] - self.theta_q[1]

    def with_delta_theta(self, delta_theta: float) -> CircuitParams:
        """Return a copy whose phase difference is ``delta_theta`` (qubit-2 phase set to 0)."""
        return replace(self, theta_q=(delta_theta, 0.0))

    def swapped(self) -> CircuitParams:
        """Exchange the labels of qubit 1 and qubit 2."""
        return replace(self, **{name: getattr(self, name)[::-1] for name in _PAIR_FIELDS})

    def scaled(self, s: float) -> CircuitParams:
        """Scale every frequency-like field by ``s`` (phases and populations untouched)."""
        kw = {name: getattr(self, name) * s for name in ("omega_a", "omega_c", "gamma_a", "g_xy", "gamma_c")}
        for name in ("omega_q", "gamma_q", "g_qc", "lambda_q"):
            a, b = getattr(self, name)
            kw[name] = (a * s, b * s)
        if self.g_e is not None:
            kw["g_e"] = self.g_e * s
        return replace(self, **kw)

    def as_dict(self) -> dict:
        out = {}
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            out[name] = list(value) if isinstance(value, tuple) else value
        return out


@dataclass(frozen=True)
class DriveParams:
    """Inputs of the drive-induced resonator-qubit coupling for one qubit."""

    lambda0: float
    alpha: float
    omega_drive_amp: float
    delta_ja: float

    def dispersive_ratios(self) -> tuple[float, float]:
        return (abs(self.lambda0 / self.delta_ja), abs(self.lambda0 / (self.delta_ja + self.alpha)))


@dataclass(frozen=True)
class EffectiveModel:
    """Quantities derived from :class:`CircuitParams` and the 2x2 matrix ``h_non``.

    ``h_non`` acts on the single-excitation basis ``(|eg>, |ge>)``.
    """

    delta_prime: tuple[float, float]
    big_gamma: tuple[float, float]
    g_e: float
    omega_n: float
    delta_theta: float
    h_non: np.ndarray = field(repr=False)
    params: CircuitParams = field(repr=False, compare=False)


def coupler_detunings(p: CircuitParams) -> tuple[float, float]:
    d1c = p.omega_q[0] - p.omega_c
    d2c = p.omega_q[1] - p.omega_c
    if d1c == 0 or d2c == 0:
        raise DegenerateDetuning(f"qubit/coupler detuning is zero (omega_c = {p.omega_c})")
    return d1c, d2c


def coupler_mediated_ge(p: CircuitParams) -> float:
    """g_xy + g1 g2 / Delta_e with 2/Delta_e = 1/Delta_1c + 1/Delta_2c."""
    d1c, d2c = coupler_detunings(p)
    inv_delta_e = 0.5 * (1.0 / d1c + 1.0 / d2c)
    return p.g_xy + p.g_qc[0] * p.g_qc[1] * inv_delta_e


def derive_effective_model(p: CircuitParams) -> EffectiveModel:
    """Build the effective non-Hermitian Hamiltonian for one parameter point.

    Raises
    ------
    DegenerateDetuning
        If either qubit is resonant with the coupler.
    NonPositiveResonatorLoss
        If ``gamma_a <= 0``.
    """
    if not p.gamma_a > 0:
        raise NonPositiveResonatorLoss(f"gamma_a must be > 0, got {p.gamma_a}")
    d1c, d2c = coupler_detunings(p)

    dp1 = p.omega_q[0] - p.omega_a + p.g_qc[0] ** 2 / d1c
    dp2 = p.omega_q[1] - p.omega_a + p.g_qc[1] ** 2 / d2c
    g_e = coupler_mediated_ge(p) if p.g_e is None else p.g_e
    l1, l2 = p.lambda_q
    gam1 = p.gamma_q[0] + l1 * l1 * p.sigma_z[0] / p.gamma_a
    gam2 = p.gamma_q[1] + l2 * l2 * p.sigma_z[1] / p.gamma_a
    omega_n = l1 * l2 / p.gamma_a
    dth = p.delta_theta

    h = np.empty((2, 2), dtype=complex)
    h[0, 0] = 0.5 * complex(dp1, -gam1)
    h[1, 1] = 0.5 * complex(dp2, -gam2)
    h[0, 1] = g_e - 1j * omega_n * np.exp(1j * dth)
    h[1, 0] = g_e - 1j * omega_n * np.exp(-1j * dth)
    h.setflags(write=False)

    return EffectiveModel(
        delta_prime=(dp1, dp2),
        big_gamma=(gam1, gam2),
        g_e=g_e,
        omega_n=omega_n,
        delta_theta=dth,
        h_non=h,
        params=p,
    )


def signed_lambda_from_drive(d: DriveParams) -> float:
    """Raw (signed) drive-induced coupling lambda_j."""
    denom = d.delta_ja * (d.delta_ja + d.alpha)
    if denom == 0:
        raise DegenerateDetuning("delta_ja and delta_ja + alpha must both be nonzero")
    return d.lambda0 * d.alpha * abs(d.omega_drive_amp) / (math.sqrt(2.0) * denom)


def lambda_from_drive(d: DriveParams, max_ratio: float = 0.2) -> float:
    """Magnitude of the drive-induced resonator-qubit coupling.

    The phase of the coupling is carried by ``theta_q`` so only ``|lambda|`` is
    returned; see :func:`signed_lambda_from_drive` for the raw value. A
    :class:`DispersiveWarning` is emitted when ``lambda0`` is not small compared
    with ``|delta_ja|`` or ``|delta_ja + alpha|`` (ratio above ``max_ratio``).
    """
    value = signed_lambda_from_drive(d)
    if max(d.dispersive_ratios()) > max_ratio:
        warnings.warn(
            f"lambda0 = {d.lambda0} is not dispersive w.r.t. detunings "
            f"{d.delta_ja} / {d.delta_ja + d.alpha}",
            DispersiveWarning,
            stacklevel=2,
        )
    return abs(value)


def sweep_ge_via_coupler(p: CircuitParams, omega_c_values) -> list[tuple[float, float]]:
    """Map coupler frequencies to the induced effective coupling g_e."""
    base = replace(p, g_e=None)
    return [(float(wc), coupler_mediated_ge(replace(base, omega_c=float(wc)))) for wc in omega_c_values]

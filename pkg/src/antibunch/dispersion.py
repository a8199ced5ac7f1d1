"""Crystal parameters, the bandwidth parameter zeta, and temperature tuning.

Units: length in mm, group slopes k' in ps/mm, angular frequencies in
rad/ps, temperatures in degrees C.  With those units zeta = 4/(L dk') comes
out directly in rad/ps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError

PAPER_BANDWIDTH = 1.58
DEGENERATE_TEMPERATURE = 49.2
PAPER_ANCHORS = ((28.0, -25.4), (49.2, 0.0), (90.0, 42.2))
EXTRAPOLATION_MARGIN = 10.0
# 2*pi*c / 405 nm, c in nm/ps
PUMP_405NM = 2.0 * math.pi * 299792.458 / 405.0
# k_a' - k_b' that gives zeta = 2*1.58/pi for a 10 mm crystal
_DEFAULT_SLOPE_GAP = 4.0 / (10.0 * 2.0 * PAPER_BANDWIDTH / math.pi)


@dataclass(frozen=True)
class CrystalParams:
    length_L: float = 10.0
    group_slope_a: float = 6.14 + _DEFAULT_SLOPE_GAP
    group_slope_b: float = 6.14
    poling_period_Lambda: float = 10.0
    pump_frequency: float = PUMP_405NM

    def __post_init__(self):
        if not self.length_L > 0:
            raise DomainError(f"crystal length must be positive, got {self.length_L}")
        if self.group_slope_a == self.group_slope_b:
            raise DomainError("equal group slopes: zeta diverges")

    @classmethod
    def from_bandwidth(cls, delta_omega: float, length_L: float = 10.0,
                       group_slope_b: float = 6.14, **kw) -> "CrystalParams":
        """Choose ``k_a'`` so that the crystal reproduces ``zeta = 2 delta_omega/pi``."""
        dk = 4.0 / (length_L * zeta_from_bandwidth(delta_omega))
        return cls(length_L=length_L, group_slope_a=group_slope_b + dk,
                   group_slope_b=group_slope_b, **kw)

    @property
    def slope_difference(self) -> float:
        return self.group_slope_a - self.group_slope_b


def zeta_from_crystal(p: CrystalParams) -> float:
    return abs(4.0 / (p.length_L * p.slope_difference))


def zeta_from_bandwidth(delta_omega: float) -> float:
    if not delta_omega > 0:
        raise DomainError(f"bandwidth must be positive, got {delta_omega}")
    return 2.0 * delta_omega / math.pi


@dataclass(frozen=True)
class DetuningCalibration:
    """Center-frequency detuning mu(T) from (temperature, mu) anchor pairs.

    The degenerate point (degenerate_temperature, 0) is added to the anchors
    if it is missing.  Two anchors give a line, three an exact quadratic, more
    a monotone PCHIP interpolant.
    """

    anchors: tuple[tuple[float, float], ...] = PAPER_ANCHORS
    degenerate_temperature: float = DEGENERATE_TEMPERATURE
    _model: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = [(float(t), float(m)) for t, m in self.anchors]
        if any(b[0] <= a[0] for a, b in zip(pts, pts[1:])):
            raise DomainError(
                f"anchor temperatures must be strictly increasing: {[t for t, _ in pts]}")
        t_deg = float(self.degenerate_temperature)
        at_deg = [m for t, m in pts if t == t_deg]
        if at_deg and abs(at_deg[0]) > 1e-9:
            raise DomainError(
                f"anchor at degenerate temperature {t_deg} has mu={at_deg[0]}, expected 0")
        if not at_deg:
            pts.append((t_deg, 0.0))
            pts.sort()
        if len(pts) < 2:
            raise DomainError("calibration needs at least two anchors")
        temps = [t for t, _ in pts]
        object.__setattr__(self, "anchors", tuple(pts))
        t = np.array(temps) - t_deg
        m = np.array([mu for _, mu in pts])
        if len(pts) <= 3:
            # polynomial in (T - T_deg) so mu(T_deg) is exact
            coeffs = np.polyfit(t, m, len(pts) - 1)
            coeffs[-1] = 0.0
            model = np.poly1d(coeffs)
        else:
            model = PchipInterpolator(t, m, extrapolate=True)
        object.__setattr__(self, "_model", model)

    @property
    def t_min(self) -> float:
        return self.anchors[0][0] - EXTRAPOLATION_MARGIN

    @property
    def t_max(self) -> float:
        return self.anchors[-1][0] + EXTRAPOLATION_MARGIN

    def __call__(self, temperature):
        return mu_of_temperature(temperature, self)


def mu_of_temperature(temperature, cal: DetuningCalibration | None = None):
    """Detuning mu = omega_a0 - omega_b0 at crystal temperature ``temperature``.

    Accepts scalars or arrays; raises :class:`DomainError` outside the anchor
    range widened by 10 degrees on either side.
    """
    cal = cal or DetuningCalibration()
    t = np.asarray(temperature, dtype=float)
    if np.any(t < cal.t_min) or np.any(t > cal.t_max):
        raise DomainError(
            f"temperature outside calibration window [{cal.t_min:g}, {cal.t_max:g}] C")
    mu = cal._model(t - cal.degenerate_temperature)
    if np.ndim(mu) == 0:
        return float(mu)
    return np.asarray(mu, dtype=float)


def phase_mismatch_linearized(omega_a, omega_b, temperature, p: CrystalParams,
                              cal: DetuningCalibration | None = None, tol: float = 1e-9):
    """First-order phase mismatch about the phase-matched centers, in rad/mm.

    The centers are ``omega_p/2 ± mu(T)/2``; inputs must sit on the
    energy-conservation ridge ``omega_a + omega_b = omega_p``.
    """
    omega_a = np.asarray(omega_a, dtype=float)
    omega_b = np.asarray(omega_b, dtype=float)
    wp = p.pump_frequency
    if np.any(np.abs(omega_a + omega_b - wp) > tol * max(1.0, wp)):
        raise DomainError("omega_a + omega_b must equal the pump frequency")
    mu = mu_of_temperature(temperature, cal)
    wa0 = 0.5 * (wp + mu)
    wb0 = 0.5 * (wp - mu)
    dk = -(omega_a - wa0) * p.group_slope_a - (omega_b - wb0) * p.group_slope_b
    return float(dk) if np.ndim(dk) == 0 else dk


def cooling_trajectory(T0: float, T_env: float, time_constant: float, times) -> np.ndarray:
    """Newton cooling ``T_env + (T0 - T_env) exp(-t/time_constant)``."""
    if not time_constant > 0:
        raise DomainError(f"time constant must be positive, got {time_constant}")
    if not T0 > T_env:
        raise DomainError(f"start temperature {T0} must exceed ambient {T_env}")
    t = np.asarray(times, dtype=float)
    return T_env + (T0 - T_env) * np.exp(-t / time_constant)


def time_to_reach(T0: float, T_env: float, time_constant: float, T_target: float) -> float:
    """Inverse of :func:`cooling_trajectory` for a single target temperature."""
    if not T0 >= T_target > T_env:
        raise DomainError(f"target {T_target} not reachable cooling {T0} -> {T_env}")
    return time_constant * math.log((T0 - T_env) / (T_target - T_env))

"""Coincidence probability behind a 50/50 beamsplitter.

Three independent routes to the same number:

``pc_analytic`` / ``pc_degenerate`` / ``pc_zero_delay``
    closed forms for the sinc joint spectrum;
``pc_numeric_oracle``
    brute-force time-domain integral of the coincidence amplitude, which is
    a difference of two rectangular windows;
``pc_general``
    frequency-domain quadrature for an arbitrary sampled joint spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .errors import DomainError
from .spectral import SpectralAmplitude, sinc

METHODS = frozenset({"analytic", "degenerate", "zero_delay", "oracle", "general", "separable"})
DEFAULT_ORACLE_RESOLUTION = 40001
MIN_ORACLE_RESOLUTION = 1001


@dataclass(frozen=True)
class CoincidenceResult:
    p_c: float
    method: str
    numeric_error: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        p = float(self.p_c)
        if not -1e-9 <= p <= 1.0 + 1e-9:
            raise DomainError(f"coincidence probability {p} outside [0, 1]")
        object.__setattr__(self, "p_c", min(1.0, max(0.0, p)))
        if self.numeric_error < 0:
            raise ValueError("numeric_error must be non-negative")

    def __float__(self):
        return self.p_c


@dataclass(frozen=True)
class DelayParams:
    tau: float
    t_window: float

    def __post_init__(self):
        if not self.t_window > 0:
            raise DomainError("t_window must be positive")

    def covers(self, zeta: float) -> bool:
        return self.t_window >= 1.0 / zeta + abs(self.tau)


def _check_zeta(zeta):
    if not zeta > 0:
        raise DomainError(f"zeta must be positive, got {zeta}")


def coincidence_probability(tau, mu, zeta: float) -> np.ndarray:
    """Closed-form p_c broadcast over arrays of delays and detunings."""
    _check_zeta(zeta)
    tau_b, mu_b = np.broadcast_arrays(np.asarray(tau, dtype=float), np.asarray(mu, dtype=float))
    out = _kernels.closed_form(tau_b.ravel(), mu_b.ravel(), zeta)
    return out.reshape(tau_b.shape)


def pc_analytic(tau: float, mu: float, zeta: float) -> CoincidenceResult:
    _check_zeta(zeta)
    p = _kernels.closed_form_numpy(np.array([tau], dtype=float), np.array([mu], dtype=float), zeta)
    return CoincidenceResult(float(p[0]), "analytic")


def triangle(x):
    x = np.abs(np.asarray(x, dtype=float))
    return np.where(x < 1.0, 1.0 - x, 0.0)


def pc_degenerate(tau: float, zeta: float) -> CoincidenceResult:
    _check_zeta(zeta)
    return CoincidenceResult(float(0.5 * (1.0 - triangle(tau * zeta / 2.0))), "degenerate")


def pc_zero_delay(mu: float, zeta: float) -> CoincidenceResult:
    _check_zeta(zeta)
    return CoincidenceResult(float(0.5 * (1.0 - sinc(2.0 * mu / zeta))), "zero_delay")


def amplitude_oracle(t, tau: float, mu: float, zeta: float):
    """Coincidence amplitude A(t; tau) for the sinc spectrum, t = (t1 - t2)/2."""
    _check_zeta(zeta)
    t = np.asarray(t, dtype=float)
    w1 = (np.abs(t * zeta / 2.0) <= 0.5).astype(float)
    w2 = (np.abs((t + tau) * zeta / 2.0) <= 0.5).astype(float)
    amp = 0.5 * (np.exp(1j * mu * t) * w1 - np.exp(-1j * mu * (t + tau)) * w2)
    return complex(amp) if amp.ndim == 0 else amp


def pc_numeric_oracle(tau: float, mu: float, zeta: float,
                      resolution: int = DEFAULT_ORACLE_RESOLUTION,
                      t_window: float | None = None) -> CoincidenceResult:
    """``(zeta/2) * integral |A(t; tau)|^2 dt`` by piecewise trapezoid.

    ``resolution`` is the node count across the support of the integrand;
    the reported error is the Richardson estimate against half resolution.
    """
    _check_zeta(zeta)
    if resolution < MIN_ORACLE_RESOLUTION:
        raise DomainError(f"resolution must be >= {MIN_ORACLE_RESOLUTION}")
    if t_window is not None and not DelayParams(tau, t_window).covers(zeta):
        raise DomainError(
            f"integration half-width {t_window} does not cover both windows "
            f"(need >= {1.0 / zeta + abs(tau):g} ps)")
    p, err = _kernels.oracle(np.array([tau]), np.array([mu]), zeta, resolution)
    return CoincidenceResult(float(p[0]), "oracle", float(err[0]))


def oracle_grid(tau, mu, zeta: float, resolution: int = DEFAULT_ORACLE_RESOLUTION):
    """Vectorized oracle; returns ``(p_c, numeric_error)`` arrays shaped like the broadcast inputs."""
    _check_zeta(zeta)
    tau_b, mu_b = np.broadcast_arrays(np.asarray(tau, dtype=float), np.asarray(mu, dtype=float))
    p, err = _kernels.oracle(tau_b.ravel(), mu_b.ravel(), zeta, resolution)
    return p.reshape(tau_b.shape), err.reshape(tau_b.shape)


def _exchange_term(values, nu, step, taus):
    # Re sum f(nu) conj(f(-nu)) exp(-i nu tau) step; real for any f
    return _kernels.delayed_overlap(values[::-1], values, nu, taus, step, -1.0).real


def _check_general(jsa: SpectralAmplitude):
    if not jsa.grid.is_symmetric:
        raise DomainError("pc_general needs a grid symmetric about 0")
    if not jsa.is_unit():
        raise DomainError(f"pc_general needs a unit-norm JSA (norm^2 = {jsa.norm_sq:.12g})")


def pc_general_curve(jsa: SpectralAmplitude, taus) -> np.ndarray:
    """p_c for an arbitrary joint spectrum at each delay in ``taus``."""
    _check_general(jsa)
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    term = _exchange_term(jsa.values, jsa.nu, jsa.grid.step, taus) / jsa.norm_sq
    return 0.5 * (1.0 - term)


def pc_general(jsa: SpectralAmplitude, tau: float) -> CoincidenceResult:
    """p_c for an arbitrary joint spectrum.

    The error estimate adds two refinements: the same sum on every other
    grid point (step) and on the inner half of the grid (truncation).
    """
    p = float(pc_general_curve(jsa, [tau])[0])
    values, nu, step = jsa.values, jsa.nu, jsa.grid.step
    m = jsa.grid.half_index
    err = 0.0
    if m % 2 == 0:
        v = values[::2]
        half = 0.5 * (1.0 - _exchange_term(v, nu[::2], 2 * step, [tau])[0]
                      / (np.sum(np.abs(v) ** 2) * 2 * step))
        err += abs(p - half)
    q = m // 2
    if q >= 1:
        sl = slice(m - q, m + q + 1)
        v = values[sl]
        inner = 0.5 * (1.0 - _exchange_term(v, nu[sl], step, [tau])[0]
                       / (np.sum(np.abs(v) ** 2) * step))
        err += abs(p - inner)
    return CoincidenceResult(p, "general", float(err))


def peak_antibunching(zeta: float) -> tuple[float, float]:
    """Detuning of maximal zero-delay anti-bunching and the p_c reached there.

    The zero-delay curve is ``(1 - sinc(2 mu/zeta))/2``; its highest point is
    the deepest sinc minimum, which is the first one, inside
    ``2 mu/zeta in (pi, 2 pi)``.
    """
    _check_zeta(zeta)
    res = minimize_scalar(lambda mu: -pc_zero_delay(mu, zeta).p_c,
                          bounds=(0.5 * math.pi * zeta, math.pi * zeta),
                          method="bounded", options={"xatol": 1e-12 * zeta})
    mu_star = float(res.x)
    return mu_star, pc_zero_delay(mu_star, zeta).p_c

"""Parameter sweeps and a photon-counting emulator.

Delay scans run at fixed detuning, detuning scans run along a temperature
axis through a :class:`DetuningCalibration`, and ``map2d`` does both at once.
Every scan point is independent.  Stochastic runs seed point ``i`` with
``rng_seed + i``, so output does not depend on evaluation order.

Counts are normalized the way the measurement was: the coincidence count at
a point is divided by a baseline taken far outside the coherence length
(where p_c = 1/2) and then scaled by 1/2.  No background is subtracted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .dispersion import DetuningCalibration, cooling_trajectory, mu_of_temperature, time_to_reach
from .errors import DomainError
from .interference import coincidence_probability

DEFAULT_WINDOW_NS = 4.4


@dataclass(frozen=True)
class Axis:
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.steps < 2:
            raise DomainError(f"axis needs at least 2 steps, got {self.steps}")
        if not self.start < self.stop:
            raise DomainError(f"axis start {self.start} must be below stop {self.stop}")

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """``"start:stop:steps"``, e.g. ``"-3:3:121"``."""
        try:
            a, b, n = text.split(":")
            start, stop, steps = float(a), float(b), int(n)
        except ValueError:
            raise ValueError(f"range must look like start:stop:steps, got {text!r}") from None
        return cls(start, stop, steps)

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class CountingParams:
    pair_rate: float = 1.0e4
    dwell_time: float = 10.0
    coincidence_window: float = DEFAULT_WINDOW_NS
    accidental_rate: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.pair_rate < 0 or self.accidental_rate < 0:
            raise DomainError("rates must be non-negative")
        if not self.dwell_time > 0:
            raise DomainError("dwell time must be positive")
        if self.coincidence_window < 0:
            raise DomainError("coincidence window must be non-negative")

    @classmethod
    def from_singles(cls, singles_1: float, singles_2: float, **kw) -> "CountingParams":
        """Accidentals from two singles rates (1/s) and the window (ns)."""
        window = kw.get("coincidence_window", DEFAULT_WINDOW_NS)
        return cls(accidental_rate=singles_1 * singles_2 * window * 1e-9, **kw)


@dataclass(frozen=True)
class CoolingParams:
    T_env: float = 25.0
    time_constant: float = 600.0


@dataclass(frozen=True)
class ScanConfig:
    zeta: float
    tau_axis: Axis | None = None
    temperature_axis: Axis | None = None
    calibration: DetuningCalibration = field(default_factory=DetuningCalibration)
    counting: CountingParams | None = None
    cooling: CoolingParams | None = None

    def __post_init__(self):
        if not self.zeta > 0:
            raise DomainError(f"zeta must be positive, got {self.zeta}")


@dataclass(frozen=True)
class CountRecord:
    tau: float
    mu: float
    p_c: float
    temperature: float | None = None
    time_s: float | None = None
    raw: int | None = None
    baseline: int | None = None
    p_hat: float | None = None
    std_error: float | None = None


@dataclass(frozen=True)
class Map2D:
    taus: np.ndarray
    temperatures: np.ndarray
    mus: np.ndarray
    p_c: np.ndarray  # shape (len(temperatures), len(taus))


def simulate_counts(expected_p_c: float, params: CountingParams,
                    point_index: int = 0) -> tuple[int, int]:
    """Poisson coincidences at the point and at the p_c = 1/2 baseline."""
    rng = np.random.default_rng(params.rng_seed + point_index)
    pairs = params.pair_rate * params.dwell_time
    acc = params.accidental_rate * params.dwell_time
    raw = int(rng.poisson(pairs * expected_p_c + acc))
    baseline = int(rng.poisson(pairs * 0.5 + acc))
    return raw, baseline


def normalize_counts(raw: int, baseline: int) -> tuple[float, float]:
    if baseline <= 0:
        raise DomainError("baseline count must be positive")
    if raw < 0:
        raise DomainError("raw count must be non-negative")
    p_hat = 0.5 * raw / baseline
    r = max(raw, 1)
    std_error = 0.5 * (r / baseline) * math.sqrt(1.0 / r + 1.0 / baseline)
    return p_hat, std_error


def _with_counts(records: list[CountRecord], params: CountingParams | None) -> list[CountRecord]:
    if params is None:
        return records
    out = []
    for i, rec in enumerate(records):
        raw, baseline = simulate_counts(rec.p_c, params, point_index=i)
        p_hat, se = normalize_counts(raw, baseline) if baseline > 0 else (math.nan, math.nan)
        out.append(replace(rec, raw=raw, baseline=baseline, p_hat=p_hat, std_error=se))
    return out


def delay_scan(cfg: ScanConfig, mu: float) -> list[CountRecord]:
    if cfg.tau_axis is None:
        raise DomainError("delay scan needs a tau axis")
    taus = cfg.tau_axis.values
    p = coincidence_probability(taus, mu, cfg.zeta)
    records = [CountRecord(tau=float(t), mu=float(mu), p_c=float(v)) for t, v in zip(taus, p)]
    return _with_counts(records, cfg.counting)


def scan_temperatures(cfg: ScanConfig) -> tuple[np.ndarray, np.ndarray | None]:
    """Temperatures for a detuning scan and, when cooling is set, their times.

    With cooling the crystal starts at the axis stop and cools towards
    ``T_env``; samples are equally spaced in time until the axis start.
    """
    ax = cfg.temperature_axis
    if ax is None:
        raise DomainError("detuning scan needs a temperature axis")
    if cfg.cooling is None:
        return ax.values, None
    c = cfg.cooling
    t_end = time_to_reach(ax.stop, c.T_env, c.time_constant, ax.start)
    times = np.linspace(0.0, t_end, ax.steps)
    return cooling_trajectory(ax.stop, c.T_env, c.time_constant, times), times


def detuning_scan(cfg: ScanConfig, tau: float) -> list[CountRecord]:
    temps, times = scan_temperatures(cfg)
    mus = mu_of_temperature(temps, cfg.calibration)
    p = coincidence_probability(tau, mus, cfg.zeta)
    records = [
        CountRecord(tau=float(tau), mu=float(m), p_c=float(v), temperature=float(T),
                    time_s=None if times is None else float(times[i]))
        for i, (T, m, v) in enumerate(zip(temps, mus, p))
    ]
    return _with_counts(records, cfg.counting)


def map2d(cfg: ScanConfig) -> Map2D:
    if cfg.tau_axis is None or cfg.temperature_axis is None:
        raise DomainError("map needs both a tau axis and a temperature axis")
    taus = cfg.tau_axis.values
    temps = cfg.temperature_axis.values
    mus = mu_of_temperature(temps, cfg.calibration)
    grid = coincidence_probability(taus[None, :], mus[:, None], cfg.zeta)
    return Map2D(taus=taus, temperatures=temps, mus=mus, p_c=grid)

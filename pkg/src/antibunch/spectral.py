"""Spectral amplitudes sampled on a uniform difference-frequency grid.

All frequencies are angular, in rad/ps; delays are in ps.  The two-photon
amplitude lives on the energy-conservation ridge, so a single variable
``nu = omega_a - omega_b`` is enough.  The exchange of the two photons is the
reflection ``nu -> -nu``.

Quadrature is the uniform-weight sum ``sum(values) * step``.  For the spectra
used here (band-limited sincs, Gaussians decaying to ~0 at the grid edges) it
coincides with the composite trapezoid rule up to the negligible end terms,
and it keeps exchange and normalization exactly consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

# sinc tails decay as 1/nu; this span keeps truncation error near 5e-6 for p_c
DEFAULT_COUNT = 131073
DEFAULT_STEP_PER_ZETA = 0.5
SINC_MIN_HALF_SPAN = 20.0


@dataclass(frozen=True)
class FrequencyGrid:
    start: float
    step: float
    count: int

    def __post_init__(self):
        if not self.step > 0:
            raise DomainError(f"grid step must be positive, got {self.step}")
        if self.count < 3 or self.count % 2 == 0:
            raise DomainError(f"grid count must be odd and >= 3, got {self.count}")

    @classmethod
    def symmetric(cls, step: float, count: int) -> "FrequencyGrid":
        return cls(start=-(count - 1) / 2 * step, step=step, count=count)

    @property
    def half_index(self) -> int:
        return (self.count - 1) // 2

    @property
    def stop(self) -> float:
        return self.start + (self.count - 1) * self.step

    @property
    def is_symmetric(self) -> bool:
        return abs(self.start + self.half_index * self.step) <= 1e-12 * max(1.0, abs(self.start))

    @property
    def nu(self) -> np.ndarray:
        if self.is_symmetric:
            # integer offsets make nu[::-1] == -nu bit for bit
            return self.step * (np.arange(self.count) - self.half_index).astype(float)
        return self.start + self.step * np.arange(self.count)

    def shifted(self, offset: float) -> "FrequencyGrid":
        return FrequencyGrid(self.start + offset, self.step, self.count)


def default_grid(zeta: float, mu: float = 0.0) -> FrequencyGrid:
    """Symmetric grid with step ``zeta/2`` wide enough for a sinc JSA at ``mu``."""
    if not zeta > 0:
        raise DomainError(f"zeta must be positive, got {zeta}")
    step = DEFAULT_STEP_PER_ZETA * zeta
    count = DEFAULT_COUNT
    need = abs(mu) + SINC_MIN_HALF_SPAN * zeta
    while (count - 1) / 2 * step < need:
        count = 2 * count - 1
    return FrequencyGrid.symmetric(step, count)


@dataclass(frozen=True, eq=False)
class SpectralAmplitude:
    """Complex amplitude per grid point.

    ``normalized`` records whether the values were produced with unit norm;
    the halves returned by :func:`symmetry_split` carry ``normalized=False``.
    """

    grid: FrequencyGrid
    values: np.ndarray
    normalized: bool = field(default=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid.count,):
            raise DomainError(
                f"expected {self.grid.count} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise DomainError("spectral amplitude contains NaN or Inf")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def nu(self) -> np.ndarray:
        return self.grid.nu

    @property
    def norm_sq(self) -> float:
        return float(np.sum(self.values.real ** 2 + self.values.imag ** 2) * self.grid.step)

    def is_unit(self, tol: float = 1e-8) -> bool:
        return abs(self.norm_sq - 1.0) <= tol


def sinc(x):
    """``sin(x)/x`` with the removable singularity handled by its series."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-6
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)


def normalize(f: SpectralAmplitude) -> SpectralAmplitude:
    n2 = f.norm_sq
    if n2 == 0.0:
        raise DomainError("cannot normalize an all-zero spectrum")
    return SpectralAmplitude(f.grid, f.values / np.sqrt(n2), normalized=True)


def make_sinc_jsa(mu: float, zeta: float, grid: FrequencyGrid | None = None) -> SpectralAmplitude:
    """Unit-norm ``sinc((nu - mu)/zeta)`` on ``grid`` (default: :func:`default_grid`)."""
    if not zeta > 0:
        raise DomainError(f"zeta must be positive, got {zeta}")
    if grid is None:
        grid = default_grid(zeta, mu)
    lo, hi = mu - SINC_MIN_HALF_SPAN * zeta, mu + SINC_MIN_HALF_SPAN * zeta
    if grid.start > lo or grid.stop < hi:
        raise DomainError(
            f"grid [{grid.start:g}, {grid.stop:g}] does not span [{lo:g}, {hi:g}] "
            f"(mu ± {SINC_MIN_HALF_SPAN:g}·zeta)")
    return normalize(SpectralAmplitude(grid, sinc((grid.nu - mu) / zeta)))


def make_gaussian_spectrum(center: float, sigma: float, grid: FrequencyGrid,
                           phase=None) -> SpectralAmplitude:
    """Unit-norm ``exp(-(nu-center)^2 / (4 sigma^2))``; ``|f|^2`` has std ``sigma``.

    ``phase`` is an optional callable of ``nu`` returning a spectral phase in rad.
    """
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    nu = grid.nu
    values = np.exp(-((nu - center) ** 2) / (4.0 * sigma ** 2)).astype(complex)
    if phase is not None:
        values = values * np.exp(1j * np.asarray(phase(nu), dtype=float))
    return normalize(SpectralAmplitude(grid, values))


def _require_symmetric(f: SpectralAmplitude):
    if not f.grid.is_symmetric:
        raise DomainError("exchange nu -> -nu needs a grid symmetric about 0")


def exchange(f: SpectralAmplitude) -> SpectralAmplitude:
    """Swap the photons: ``g(nu) = f(-nu)``."""
    _require_symmetric(f)
    return SpectralAmplitude(f.grid, f.values[::-1], normalized=f.normalized)


def symmetry_split(f: SpectralAmplitude) -> tuple[SpectralAmplitude, SpectralAmplitude]:
    """Exchange-symmetric and antisymmetric parts; neither is renormalized."""
    _require_symmetric(f)
    flipped = f.values[::-1]
    sym = SpectralAmplitude(f.grid, 0.5 * (f.values + flipped))
    anti = SpectralAmplitude(f.grid, 0.5 * (f.values - flipped))
    return sym, anti


def overlap(f: SpectralAmplitude, g: SpectralAmplitude) -> complex:
    """``<f|g> = sum(conj(f) g) * step``."""
    if f.grid != g.grid:
        raise DomainError("overlap needs identical grids")
    return complex(np.vdot(f.values, g.values) * f.grid.step)

"""Independent (separable) photon pairs and the anti-bunching witness.

For a product state ``f(w1) g(w2)`` the coincidence probability is

    p_c(tau) = 1/2 - 1/2 |C(tau)|^2,

where ``C`` is the cross-correlation of the two temporal envelopes.  By the
convolution theorem ``C(tau) = sum conj(f) g exp(i nu tau) step``, which is
what :func:`pc_separable` evaluates.  :func:`envelope_correlation` computes the
same quantity the long way, through explicit time-domain envelopes, and
exists to check that identity.

Any p_c above 1/2 is therefore out of reach for separable states and their
mixtures; :func:`witness` turns a measured excess into a verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError
from .interference import CoincidenceResult
from .spectral import FrequencyGrid, SpectralAmplitude, make_gaussian_spectrum

DEFAULT_K = 3.0


def _check_pair(f: SpectralAmplitude, g: SpectralAmplitude):
    if f.grid != g.grid:
        raise DomainError("f and g must share a grid")
    if not (f.is_unit() and g.is_unit()):
        raise DomainError("separable spectra must be unit-normalized")


def separable_curve(f: SpectralAmplitude, g: SpectralAmplitude, taus) -> np.ndarray:
    _check_pair(f, g)
    c = _kernels.delayed_overlap(f.values, g.values, f.nu, taus, f.grid.step, 1.0)
    return 0.5 - 0.5 * (c.real ** 2 + c.imag ** 2)


def pc_separable(f: SpectralAmplitude, g: SpectralAmplitude, tau: float) -> CoincidenceResult:
    return CoincidenceResult(float(separable_curve(f, g, [tau])[0]), "separable")


def pc_mixture(components, tau: float) -> CoincidenceResult:
    """Incoherent mixture of product states: ``sum w_i p_sep(f_i, g_i, tau)``.

    ``components`` is an iterable of ``(weight, f, g)``.
    """
    components = list(components)
    if not components:
        raise DomainError("mixture needs at least one component")
    weights = np.array([w for w, _, _ in components], dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-9:
        raise DomainError(f"weights must be non-negative and sum to 1, got {weights.tolist()}")
    p = sum(w * pc_separable(f, g, tau).p_c for w, f, g in components)
    return CoincidenceResult(float(p), "separable")


def temporal_envelope(f: SpectralAmplitude, t) -> np.ndarray:
    """``(2 pi)^-1/2 sum f(nu) exp(-i nu t) step`` by direct summation."""
    t = np.asarray(t, dtype=float)
    return np.exp(-1j * np.outer(t, f.nu)) @ f.values * f.grid.step / math.sqrt(2 * math.pi)


def envelope_correlation(f: SpectralAmplitude, g: SpectralAmplitude, tau: float, t) -> complex:
    """``integral conj(f~(t)) g~(t - tau) dt`` on the uniform time grid ``t``."""
    t = np.asarray(t, dtype=float)
    dt = t[1] - t[0]
    ft = temporal_envelope(f, t)
    gt = temporal_envelope(g, t - tau)
    return complex(np.vdot(ft, gt) * dt)


def random_separable_spectrum(rng: np.random.Generator, grid: FrequencyGrid) -> SpectralAmplitude:
    """Chirped Gaussian: center U[-5, 5], width U[0.3, 3], cubic spectral phase.

    The phase is a cubic in ``x = (nu - center)/width`` with coefficients
    U[-1, 1], U[-0.5, 0.5] and U[-0.1, 0.1].
    """
    center = rng.uniform(-5.0, 5.0)
    width = rng.uniform(0.3, 3.0)
    c1, c2, c3 = rng.uniform(-1, 1), rng.uniform(-0.5, 0.5), rng.uniform(-0.1, 0.1)

    def phase(nu):
        x = (nu - center) / width
        return c1 * x + c2 * x ** 2 + c3 * x ** 3

    return make_gaussian_spectrum(center, width, grid, phase=phase)


@dataclass(frozen=True)
class WitnessVerdict:
    entangled: bool
    excess: float
    significance: float

    def describe(self) -> str:
        word = "ENTANGLED" if self.entangled else "inconclusive"
        return (f"{word}: p_c - 1/2 = {self.excess:+.6g}, "
                f"significance = {self.significance:.6g} sigma")


def witness(p_c_estimate: float, std_error: float, k: float = DEFAULT_K) -> WitnessVerdict:
    """Entanglement is certified when p_c exceeds 1/2 by at least ``k`` standard errors.

    A result below the threshold proves nothing either way.
    """
    if not 0.0 <= p_c_estimate <= 1.0:
        raise DomainError(f"p_c estimate {p_c_estimate} outside [0, 1]")
    if std_error < 0:
        raise DomainError("standard error must be non-negative")
    excess = p_c_estimate - 0.5
    if std_error == 0:
        significance = math.copysign(math.inf, excess) if excess else 0.0
        entangled = excess > 0
    else:
        significance = excess / std_error
        entangled = excess > 0 and significance >= k
    return WitnessVerdict(bool(entangled), float(excess), float(significance))

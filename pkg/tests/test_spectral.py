import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from antibunch.errors import DomainError
from antibunch.spectral import (
    FrequencyGrid,
    SpectralAmplitude,
    default_grid,
    exchange,
    make_gaussian_spectrum,
    make_sinc_jsa,
    normalize,
    overlap,
    sinc,
    symmetry_split,
)

SMALL = FrequencyGrid.symmetric(0.05, 2001)


def random_spectrum(rng, grid=SMALL, real=False):
    v = rng.normal(size=grid.count)
    if not real:
        v = v + 1j * rng.normal(size=grid.count)
    return SpectralAmplitude(grid, v)


class TestGrid:
    def test_rejects_even_count(self):
        with pytest.raises(DomainError):
            FrequencyGrid(0.0, 1.0, 4)

    def test_rejects_nonpositive_step(self):
        with pytest.raises(DomainError):
            FrequencyGrid(0.0, 0.0, 5)

    def test_symmetric_grid_contains_zero(self):
        g = FrequencyGrid.symmetric(0.3, 11)
        assert g.is_symmetric
        assert g.nu[5] == 0.0
        assert np.array_equal(g.nu[::-1], -g.nu)

    def test_default_grid_widens_for_large_detuning(self):
        g = default_grid(1.0, mu=1e5)
        assert g.stop >= 1e5 + 20


class TestSinc:
    def test_removable_singularity(self):
        assert sinc(0.0) == 1.0

    def test_value_at_zero_detuning(self):
        f = make_sinc_jsa(0.0, 1.0, FrequencyGrid.symmetric(math.pi / 8, 1601))
        peak = f.values[800].real
        assert f.nu[800] == 0.0
        assert peak == pytest.approx(np.abs(f.values).max())

    def test_first_zero(self):
        g = FrequencyGrid.symmetric(math.pi / 8, 1601)
        f = make_sinc_jsa(0.0, 1.0, g)
        i = 800 + 8
        assert f.nu[i] == pytest.approx(math.pi)
        assert abs(f.values[i]) < 1e-15

    def test_peak_moves_with_detuning(self):
        g = FrequencyGrid.symmetric(0.01, 8001)
        f = make_sinc_jsa(2.0, 1.0, g)
        assert f.nu[np.argmax(np.abs(f.values))] == pytest.approx(2.0, abs=1e-12)

    def test_unit_norm(self):
        f = make_sinc_jsa(1.3, 0.7, FrequencyGrid.symmetric(0.35, 4001))
        assert np.sum(np.abs(f.values) ** 2) * f.grid.step == pytest.approx(1.0, abs=1e-12)

    def test_narrow_grid_rejected(self):
        with pytest.raises(DomainError, match="span"):
            make_sinc_jsa(0.0, 1.0, FrequencyGrid.symmetric(0.1, 301))

    def test_nonpositive_zeta(self):
        with pytest.raises(DomainError):
            make_sinc_jsa(0.0, 0.0)

    def test_shift_covariance(self):
        g0 = FrequencyGrid.symmetric(0.25, 2001)
        mu = 3.75
        f0 = make_sinc_jsa(0.0, 1.0, g0)
        f_mu = make_sinc_jsa(mu, 1.0, g0.shifted(mu))
        assert np.max(np.abs(f_mu.values - f0.values)) < 1e-12


class TestGaussian:
    def test_symmetric_and_normalized(self):
        f = make_gaussian_spectrum(0.0, 1.0, SMALL)
        assert f.norm_sq == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(f.values, f.values[::-1], atol=1e-15)

    def test_exchange_reflects_center(self):
        f = exchange(make_gaussian_spectrum(3.0, 1.0, SMALL))
        assert f.nu[np.argmax(np.abs(f.values))] == pytest.approx(-3.0)

    def test_self_overlap(self):
        f = make_gaussian_spectrum(0.4, 1.0, SMALL)
        assert overlap(f, f) == pytest.approx(1.0, abs=1e-12)

    def test_bad_sigma(self):
        with pytest.raises(DomainError):
            make_gaussian_spectrum(0.0, -1.0, SMALL)

    def test_detuned_overlap_matches_closed_form(self):
        sigma, delta = 1.0, 4.0
        f = make_gaussian_spectrum(0.0, sigma, SMALL)
        g = make_gaussian_spectrum(delta, sigma, SMALL)
        ov = overlap(f, g)
        assert abs(ov.imag) < 1e-15
        assert 0 < ov.real < 1
        assert ov.real == pytest.approx(math.exp(-delta ** 2 / (8 * sigma ** 2)), abs=1e-12)


class TestNormalize:
    def test_scales_to_unit(self):
        f = make_gaussian_spectrum(0.0, 1.0, SMALL)
        doubled = SpectralAmplitude(SMALL, 2 * f.values)
        assert doubled.norm_sq == pytest.approx(4.0)
        assert normalize(doubled).norm_sq == pytest.approx(1.0, abs=1e-12)

    def test_idempotent(self, rng):
        f = normalize(random_spectrum(rng))
        assert np.max(np.abs(normalize(f).values - f.values)) < 1e-12

    def test_zero_rejected(self):
        with pytest.raises(DomainError):
            normalize(SpectralAmplitude(SMALL, np.zeros(SMALL.count)))

    def test_nan_rejected(self):
        v = np.ones(SMALL.count)
        v[3] = np.nan
        with pytest.raises(DomainError):
            SpectralAmplitude(SMALL, v)


class TestExchange:
    def test_even_sinc_invariant(self):
        f = make_sinc_jsa(0.0, 1.0, FrequencyGrid.symmetric(0.1, 1001))
        assert np.array_equal(exchange(f).values, f.values)

    def test_detuned_sinc_reflects(self):
        g = FrequencyGrid.symmetric(0.01, 8001)
        f = exchange(make_sinc_jsa(2.0, 1.0, g))
        assert f.nu[np.argmax(np.abs(f.values))] == pytest.approx(-2.0, abs=1e-12)

    def test_involution_bit_exact(self, rng):
        for _ in range(20):
            f = random_spectrum(rng)
            assert np.array_equal(exchange(exchange(f)).values, f.values)

    def test_asymmetric_grid_rejected(self):
        g = FrequencyGrid(0.0, 0.1, 11)
        with pytest.raises(DomainError):
            exchange(SpectralAmplitude(g, np.ones(11)))
        with pytest.raises(DomainError):
            symmetry_split(SpectralAmplitude(g, np.ones(11)))


class TestSymmetrySplit:
    def test_even_has_no_antisymmetric_part(self):
        f = make_sinc_jsa(0.0, 1.0, FrequencyGrid.symmetric(0.1, 1001))
        _, anti = symmetry_split(f)
        assert anti.norm_sq == 0.0

    def test_odd_has_no_symmetric_part(self):
        nu = SMALL.nu
        sym, anti = symmetry_split(normalize(SpectralAmplitude(SMALL, nu * np.exp(-nu ** 2))))
        assert sym.norm_sq == 0.0
        assert anti.norm_sq == pytest.approx(1.0)

    def test_halves_flagged_unnormalized(self, rng):
        sym, anti = symmetry_split(normalize(random_spectrum(rng)))
        assert not sym.normalized and not anti.normalized

    def test_parseval_split(self, rng):
        for _ in range(100):
            f = random_spectrum(rng)
            sym, anti = symmetry_split(f)
            assert np.allclose(sym.values + anti.values, f.values, rtol=0, atol=1e-15)
            assert sym.norm_sq + anti.norm_sq == pytest.approx(f.norm_sq, rel=1e-10)

    def test_antisymmetric_weight_at_peak_detuning(self):
        zeta = 1.0
        f = make_sinc_jsa(2.2467 * zeta, zeta)
        _, anti = symmetry_split(f)
        # (1 - sinc(2*2.2467)) / 2, truncation of the 1/nu tails allows ~1e-5
        assert anti.norm_sq == pytest.approx(0.6086168, abs=2e-5)


class TestOverlap:
    def test_conjugate_symmetry(self, rng):
        f, g = random_spectrum(rng), random_spectrum(rng)
        assert overlap(f, g) == pytest.approx(np.conj(overlap(g, f)), abs=1e-12)

    def test_parity_orthogonality(self):
        nu = SMALL.nu
        even = normalize(SpectralAmplitude(SMALL, np.exp(-nu ** 2)))
        odd = normalize(SpectralAmplitude(SMALL, nu * np.exp(-nu ** 2)))
        assert abs(overlap(even, odd)) < 1e-12

    def test_grid_mismatch(self):
        a = make_gaussian_spectrum(0.0, 1.0, SMALL)
        b = make_gaussian_spectrum(0.0, 1.0, FrequencyGrid.symmetric(0.05, 2003))
        with pytest.raises(DomainError):
            overlap(a, b)


@settings(max_examples=50, deadline=None)
@given(scale=st.floats(0.01, 100.0), seed=st.integers(0, 2**32 - 1))
def test_normalize_any_scale(scale, seed):
    f = random_spectrum(np.random.default_rng(seed))
    g = normalize(SpectralAmplitude(SMALL, scale * f.values))
    assert g.norm_sq == pytest.approx(1.0, abs=1e-12)
    assert g.normalized

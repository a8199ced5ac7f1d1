"""Hot numeric kernels, in two interchangeable implementations.

Every kernel exists as a vectorized NumPy function (``*_numpy``) and as an
explicit loop compiled with ``numba.njit`` (``*_numba``).  The public names
(``closed_form``, ``oracle``, ``delayed_overlap``) are bound at import time:

* numba, when it imports and ``ANTIBUNCH_DISABLE_NUMBA`` is unset/false;
* NumPy otherwise.

Both paths are always importable when numba is installed, so the test suite
and ``benchmarks/bench_kernels.py`` can compare them directly.
"""

from __future__ import annotations

import math
import os

import numpy as np

_FLAG = "ANTIBUNCH_DISABLE_NUMBA"
_SERIES_CUTOFF = 1e-8

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False


def numba_disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


# ---------------------------------------------------------------------------
# closed-form coincidence probability, elementwise over (tau, mu)
# ---------------------------------------------------------------------------

def _closed_form_loop(tau, mu, zeta):
    n = tau.shape[0]
    out = np.empty(n)
    for i in range(n):
        c = 2.0 - zeta * abs(tau[i])
        if c <= 0.0:
            out[i] = 0.5
            continue
        x = mu[i] / zeta
        if abs(x) < _SERIES_CUTOFF:
            ratio = 0.5 * c * (1.0 - (x * c) ** 2 / 6.0)
        else:
            ratio = math.sin(x * c) / (2.0 * x)
        out[i] = 0.5 * (1.0 - ratio)
    return out


def closed_form_numpy(tau, mu, zeta):
    tau = np.asarray(tau, dtype=float)
    mu = np.asarray(mu, dtype=float)
    c = 2.0 - zeta * np.abs(tau)
    x = mu / zeta
    small = np.abs(x) < _SERIES_CUTOFF
    safe_x = np.where(small, 1.0, x)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(small, 0.5 * c * (1.0 - (x * c) ** 2 / 6.0),
                         np.sin(x * c) / (2.0 * safe_x))
    return np.where(c <= 0.0, 0.5, 0.5 * (1.0 - ratio))


# ---------------------------------------------------------------------------
# brute-force |A(t; tau)|^2 quadrature (two rectangular time windows)
# ---------------------------------------------------------------------------
# The t-axis is cut at the four window edges; inside each piece both window
# indicators are constant, so composite trapezoid is applied per piece.  Each
# piece uses an even number of subintervals so the same nodes also give the
# half-resolution sum used for the Richardson error estimate.

def _edges(tau, zeta):
    inv = 1.0 / zeta
    return np.sort(np.array([-inv, inv, -inv - tau, inv - tau]))


def _oracle_loop(taus, mus, zeta, resolution):
    n = taus.shape[0]
    p_out = np.empty(n)
    err_out = np.empty(n)
    inv = 1.0 / zeta
    for j in range(n):
        tau = taus[j]
        mu = mus[j]
        edges = np.sort(np.array([-inv, inv, -inv - tau, inv - tau]))
        h_target = (edges[3] - edges[0]) / (resolution - 1)
        fine = 0.0
        coarse = 0.0
        for k in range(3):
            a = edges[k]
            b = edges[k + 1]
            length = b - a
            if length <= 0.0:
                continue
            mid = 0.5 * (a + b)
            w1 = 1.0 if abs(mid) <= inv else 0.0
            w2 = 1.0 if abs(mid + tau) <= inv else 0.0
            if w1 == 0.0 and w2 == 0.0:
                continue
            m = int(math.ceil(length / (2.0 * h_target)))
            if m < 1:
                m = 1
            nsub = 2 * m
            h = length / nsub
            s_fine = 0.0
            s_coarse = 0.0
            for i in range(nsub + 1):
                t = a + i * h
                re = w1 * math.cos(mu * t) - w2 * math.cos(mu * (t + tau))
                im = w1 * math.sin(mu * t) + w2 * math.sin(mu * (t + tau))
                v = 0.25 * (re * re + im * im)
                wt = 0.5 if (i == 0 or i == nsub) else 1.0
                s_fine += wt * v
                if i % 2 == 0:
                    wc = 0.5 if (i == 0 or i == nsub) else 1.0
                    s_coarse += wc * v
            fine += s_fine * h
            coarse += s_coarse * 2.0 * h
        norm = 0.5 * zeta
        p_out[j] = norm * fine
        err_out[j] = norm * abs(fine - coarse) / 3.0
    return p_out, err_out


def oracle_numpy(taus, mus, zeta, resolution):
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    mus = np.atleast_1d(np.asarray(mus, dtype=float))
    inv = 1.0 / zeta
    p_out = np.empty(taus.shape[0])
    err_out = np.empty(taus.shape[0])
    for j, (tau, mu) in enumerate(zip(taus, mus)):
        edges = _edges(tau, zeta)
        h_target = (edges[3] - edges[0]) / (resolution - 1)
        fine = coarse = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            length = b - a
            if length <= 0.0:
                continue
            mid = 0.5 * (a + b)
            w1 = float(abs(mid) <= inv)
            w2 = float(abs(mid + tau) <= inv)
            if not (w1 or w2):
                continue
            nsub = 2 * max(1, math.ceil(length / (2.0 * h_target)))
            h = length / nsub
            t = a + h * np.arange(nsub + 1)
            amp = w1 * np.exp(1j * mu * t) - w2 * np.exp(-1j * mu * (t + tau))
            v = 0.25 * (amp.real ** 2 + amp.imag ** 2)
            fine += h * (v.sum() - 0.5 * (v[0] + v[-1]))
            vc = v[::2]
            coarse += 2.0 * h * (vc.sum() - 0.5 * (vc[0] + vc[-1]))
        p_out[j] = 0.5 * zeta * fine
        err_out[j] = 0.5 * zeta * abs(fine - coarse) / 3.0
    return p_out, err_out


# ---------------------------------------------------------------------------
# sum_k conj(a_k) b_k exp(i sign nu_k tau) step, for many tau
# ---------------------------------------------------------------------------

def _delayed_overlap_loop(a, b, nu, taus, step, sign):
    prod = np.conj(a) * b
    out = np.empty(taus.shape[0], dtype=np.complex128)
    for j in range(taus.shape[0]):
        phase = sign * taus[j]
        re = 0.0
        im = 0.0
        for k in range(nu.shape[0]):
            c = math.cos(phase * nu[k])
            s = math.sin(phase * nu[k])
            pr = prod[k].real
            pi = prod[k].imag
            re += pr * c - pi * s
            im += pr * s + pi * c
        out[j] = complex(re * step, im * step)
    return out


def delayed_overlap_numpy(a, b, nu, taus, step, sign):
    prod = np.conj(a) * b
    taus = np.atleast_1d(np.asarray(taus, dtype=float))
    out = np.empty(taus.shape[0], dtype=complex)
    chunk = max(1, 4_000_000 // max(nu.shape[0], 1))
    for lo in range(0, taus.shape[0], chunk):
        t = taus[lo:lo + chunk]
        out[lo:lo + chunk] = np.exp(1j * sign * np.outer(t, nu)) @ prod * step
    return out


if NUMBA_AVAILABLE:
    _closed_form_jit = njit(cache=True)(_closed_form_loop)
    _oracle_jit = njit(cache=True)(_oracle_loop)
    _overlap_jit = njit(cache=True)(_delayed_overlap_loop)

    def closed_form_numba(tau, mu, zeta):
        return _closed_form_jit(np.ascontiguousarray(tau, dtype=np.float64),
                                np.ascontiguousarray(mu, dtype=np.float64), float(zeta))

    def oracle_numba(taus, mus, zeta, resolution):
        return _oracle_jit(np.atleast_1d(np.ascontiguousarray(taus, dtype=np.float64)),
                           np.atleast_1d(np.ascontiguousarray(mus, dtype=np.float64)),
                           float(zeta), int(resolution))

    def delayed_overlap_numba(a, b, nu, taus, step, sign):
        return _overlap_jit(np.ascontiguousarray(a, dtype=np.complex128),
                            np.ascontiguousarray(b, dtype=np.complex128),
                            np.ascontiguousarray(nu, dtype=np.float64),
                            np.atleast_1d(np.ascontiguousarray(taus, dtype=np.float64)),
                            float(step), float(sign))


if NUMBA_AVAILABLE and not numba_disabled():
    BACKEND = "numba"
    closed_form = closed_form_numba
    oracle = oracle_numba
    delayed_overlap = delayed_overlap_numba
else:
    BACKEND = "numpy"
    closed_form = closed_form_numpy
    oracle = oracle_numpy
    delayed_overlap = delayed_overlap_numpy

"""Wave functions on the circle from strictly positive densities.

Given W(q) > 0 sampled on a uniform grid over [0, 2pi), construct
psi = exp(alpha + i beta) with alpha = log(W)/2 and beta the harmonic
conjugate of alpha, so that |psi|^2 = W while psi contains no strictly
negative Fourier modes (psi extends analytically into the unit disk in
z = e^{iq}). Two independent routes compute beta: a Fourier-coefficient
mode rule and a principal-value quadrature of the conjugation kernel.
An optional zero of order k at the origin multiplies psi by e^{ikq},
shifting the lowest occupied mode up without changing |psi|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PARSEVAL_RTOL = 1e-10
NEGATIVE_MODE_RTOL = 1e-9


@dataclass(frozen=True)
class CircleGrid:
    """Uniform grid q_k = 2 pi k / m for k = 0..m-1; m even for a clean Nyquist."""

    m: int

    def __post_init__(self):
        if self.m < 4 or self.m % 2:
            raise ValueError("grid size must be an even integer >= 4")

    def points(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.m) / self.m

    def modes(self) -> np.ndarray:
        """Integer mode numbers in FFT bin order, n in [-m/2, m/2)."""
        return np.fft.fftfreq(self.m, d=1.0 / self.m).astype(np.int64)


@dataclass(frozen=True, eq=False)
class CircleDensity:
    """Strictly positive samples of a density on the circle grid."""

    grid: CircleGrid
    w: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        w = np.array(self.w, dtype=float, copy=True)
        if w.shape != (self.grid.m,):
            raise ValueError("w must have one sample per grid point")
        bad = np.flatnonzero(w <= 0)
        if bad.size:
            k = int(bad[0])
            raise ValueError(f"density must be strictly positive; sample {k} is {w[k]}")
        if self.normalized:
            total = 2.0 * math.pi * w.sum() / self.grid.m
            if abs(total - 1.0) > 1e-12:
                raise ValueError(f"density integrates to {total!r}, not 1")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)


@dataclass(frozen=True, eq=False)
class CircleWaveFunction:
    """Sampled psi with its Fourier view; the two are kept consistent.

    coeffs[j] is the coefficient of e^{i n q} for n = grid.modes()[j],
    i.e. coeffs = fft(psi)/m. Construction enforces Parseval agreement
    and an exact reconstruction round trip to within 1e-10 relative.
    """

    grid: CircleGrid
    psi: np.ndarray
    coeffs: np.ndarray
    beta0: float = 0.0

    def __post_init__(self):
        psi = np.array(self.psi, dtype=complex, copy=True)
        coeffs = np.array(self.coeffs, dtype=complex, copy=True)
        if psi.shape != (self.grid.m,) or coeffs.shape != (self.grid.m,):
            raise ValueError("psi and coeffs must match the grid size")
        scale = float(np.max(np.abs(psi)))
        if scale == 0.0:
            raise ValueError("psi must not vanish identically")
        power_q = float(np.sum(np.abs(psi) ** 2)) / self.grid.m
        power_n = float(np.sum(np.abs(coeffs) ** 2))
        if abs(power_q - power_n) > PARSEVAL_RTOL * max(power_q, power_n):
            raise ValueError("psi and coeffs disagree in total power")
        recon = np.fft.ifft(coeffs * self.grid.m)
        if float(np.max(np.abs(recon - psi))) > PARSEVAL_RTOL * scale:
            raise ValueError("coeffs do not reconstruct psi")
        psi.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_samples(cls, grid: CircleGrid, psi, beta0: float = 0.0):
        psi = np.asarray(psi, dtype=complex)
        return cls(grid=grid, psi=psi, coeffs=np.fft.fft(psi) / grid.m, beta0=beta0)

    def density(self) -> np.ndarray:
        return np.abs(self.psi) ** 2


def log_amplitude(density: CircleDensity) -> np.ndarray:
    """alpha = log(W)/2, sample by sample."""
    return 0.5 * np.log(density.w)


def conjugate_phase_fourier(alpha: np.ndarray) -> np.ndarray:
    """Harmonic conjugate of alpha via the Fourier mode rule.

    Requiring alpha + i beta to carry no strictly negative modes and no
    constant beta component fixes, mode by mode: beta_n = -i alpha_n for
    n > 0, beta_n = +i alpha_n for n < 0, beta_0 = 0. The unpaired
    Nyquist mode is dropped (band-limited inputs have none).
    """
    alpha = np.asarray(alpha, dtype=float)
    m = alpha.size
    a = np.fft.fft(alpha)
    n = np.fft.fftfreq(m, d=1.0 / m)
    b = np.where(n > 0, -1j, 1j) * a
    b[n == 0] = 0.0
    if m % 2 == 0:
        b[n == -m // 2] = 0.0
    return np.fft.ifft(b).real


def conjugate_phase_pv(alpha: np.ndarray) -> np.ndarray:
    """Harmonic conjugate of alpha by principal-value quadrature.

    beta(q) = (1/2pi) PV integral of alpha(q - u) cot(u/2) du over one
    period. The quadrature samples alpha on a grid offset by half a step
    (a band-limited resample), so the nodes u = (k + 1/2) dq straddle the
    kernel singularities at u = 0 and u = 2pi symmetrically; uniform
    weights on a periodic grid make this the trapezoid rule. Calibrated
    to match conjugate_phase_fourier (cos q maps to sin q).
    """
    alpha = np.asarray(alpha, dtype=float)
    m = alpha.size
    dq = 2.0 * math.pi / m
    a = np.fft.fft(alpha)
    n = np.fft.fftfreq(m, d=1.0 / m)
    shift = np.exp(0.5j * dq * n)
    if m % 2 == 0:
        shift[n == -m // 2] = 0.0
    alpha_mid = np.fft.ifft(a * shift).real      # alpha((j + 1/2) dq)
    u = (np.arange(m) + 0.5) * dq
    kernel = 1.0 / np.tan(0.5 * u)
    # beta_j = (dq/2pi) sum_k kernel_k alpha(q_j - u_k); the sample index
    # of q_j - u_k on the midpoint grid is j - k - 1 (mod m)
    j = np.arange(m)
    idx = (j[:, None] - j[None, :] - 1) % m
    return (dq / (2.0 * math.pi)) * (alpha_mid[idx] @ kernel)


def synthesize(density: CircleDensity, k_zeros: int = 0,
               beta0: float = 0.0) -> CircleWaveFunction:
    """Wave function with |psi|^2 = W and only modes n >= k_zeros occupied.

    psi = e^{i beta0} e^{i k q} exp(alpha + i beta) with beta from the
    Fourier route. The zero order k must stay well below the grid's
    resolution. W must be effectively band-limited below Nyquist; the
    Nyquist coefficient is zeroed so psi and its coefficient view agree
    exactly.
    """
    grid = density.grid
    if k_zeros < 0:
        raise ValueError("k_zeros must be non-negative")
    if k_zeros >= grid.m // 4:
        raise ValueError(f"k_zeros = {k_zeros} too large for a grid of {grid.m} points")
    alpha = log_amplitude(density)
    beta = conjugate_phase_fourier(alpha)
    q = grid.points()
    psi = np.exp(alpha + 1j * (beta + k_zeros * q + beta0))
    coeffs = np.fft.fft(psi) / grid.m
    if grid.m % 2 == 0:
        coeffs[grid.modes() == -grid.m // 2] = 0.0
    psi = np.fft.ifft(coeffs * grid.m)
    return CircleWaveFunction(grid=grid, psi=psi, coeffs=coeffs, beta0=beta0)


def spectrum_report(wf: CircleWaveFunction) -> dict:
    """Diagnostics of the mode content of a wave function.

    max_negative_mode_magnitude: largest |c_n| over n < 0.
    reconstruction_sup_error: sup |sum_n c_n e^{inq} - psi| on the grid.
    occupied_min_n: smallest n with |c_n| above 1e-9 of the peak.
    """
    modes = wf.grid.modes()
    mags = np.abs(wf.coeffs)
    peak = float(mags.max())
    neg = mags[modes < 0]
    recon = np.fft.ifft(wf.coeffs * wf.grid.m)
    occupied = modes[mags > NEGATIVE_MODE_RTOL * peak]
    return {
        "max_negative_mode_magnitude": float(neg.max()) if neg.size else 0.0,
        "reconstruction_sup_error": float(np.max(np.abs(recon - wf.psi))),
        "occupied_min_n": int(occupied.min()) if occupied.size else 0,
    }


def density_from_samples(w, normalized: bool = False) -> CircleDensity:
    """CircleDensity over the default grid implied by the sample count."""
    w = np.asarray(w, dtype=float)
    return CircleDensity(grid=CircleGrid(w.size), w=w, normalized=normalized)

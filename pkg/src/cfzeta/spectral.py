"""Power spectra of zero-location series and log-log slope fits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

LOW_FREQ_EXCLUDE = 0.05


@dataclass(frozen=True)
class SpectrumFit:
    freqs: np.ndarray
    power: np.ndarray
    slope: float
    intercept: float  # log10 power at f = 1
    fit_band: tuple[float, float]
    n_bins: int

    def summary(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "f_lo": self.fit_band[0],
            "f_hi": self.fit_band[1],
            "n_bins": self.n_bins,
            "detrend": "mean",
            "window": "rectangular",
            "low_freq_excluded": LOW_FREQ_EXCLUDE,
        }


def power_spectrum(series, window: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """One-sided periodogram of the mean-subtracted series.

    ``power[k]`` is ``|X_k|^2 / n``, doubled for bins that stand in for a
    negative frequency too, so that ``sum(power) == sum((x - mean)**2)``.
    Frequencies are in cycles per sample.
    """
    x = np.asarray(series, dtype=np.float64)
    n = x.size
    if n < 8:
        raise DomainError(f"series needs at least 8 samples, got {n}")
    x = x - x.mean()
    if window == "hann":
        x = x * np.hanning(n)
    elif window is not None:
        raise DomainError(f"unknown window {window!r}")
    X = np.fft.rfft(x)
    power = np.abs(X) ** 2 / n
    if n % 2 == 0:
        power[1:-1] *= 2
    else:
        power[1:] *= 2
    return np.fft.rfftfreq(n), power


def default_band(freqs: np.ndarray) -> tuple[float, float]:
    """Positive frequencies minus the lowest 5% of bins."""
    pos = freqs[freqs > 0]
    if pos.size == 0:
        raise DomainError("no positive frequencies")
    skip = int(np.ceil(LOW_FREQ_EXCLUDE * pos.size))
    return float(pos[min(skip, pos.size - 1)]), float(pos[-1])


def fit_slope(freqs, power, band: tuple[float, float] | None = None) -> SpectrumFit:
    """Least-squares line through (log10 f, log10 P) inside ``band``."""
    freqs = np.asarray(freqs, dtype=np.float64)
    power = np.asarray(power, dtype=np.float64)
    if band is None:
        band = default_band(freqs)
    lo, hi = band
    m = (freqs >= lo) & (freqs <= hi) & (freqs > 0) & (power > 0)
    if m.sum() < 8:
        raise DomainError(f"fit band {band} holds {int(m.sum())} usable bins; need 8")
    slope, intercept = np.polyfit(np.log10(freqs[m]), np.log10(power[m]), 1)
    return SpectrumFit(freqs, power, float(slope), float(intercept), (float(lo), float(hi)), int(m.sum()))


def spectrum_fit(series, band=None, window: str | None = None) -> SpectrumFit:
    f, p = power_spectrum(series, window)
    return fit_slope(f, p, band)


def peak_periods(freqs, power, top: int = 5) -> list[tuple[float, float]]:
    """(period in samples, power) of the strongest positive-frequency bins."""
    freqs, power = np.asarray(freqs), np.asarray(power)
    idx = np.flatnonzero(freqs > 0)
    best = idx[np.argsort(power[idx])[::-1][:top]]
    return [(float(1 / freqs[i]), float(power[i])) for i in best]


def white_noise(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(n)


def pink_noise(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random-phase series with amplitude proportional to f^(-1/2), so power ~ 1/f."""
    f = np.fft.rfftfreq(n)
    amp = np.zeros_like(f)
    amp[1:] = f[1:] ** -0.5
    phases = rng.uniform(0, 2 * np.pi, f.size)
    return np.fft.irfft(amp * np.exp(1j * phases), n)

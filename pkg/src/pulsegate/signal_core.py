"""Core signal types and transforms: PSD, Hilbert envelope, resampling, standardization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal import hilbert as _analytic_signal

from .errors import (
    InsufficientDataError,
    InvalidArgumentError,
    InvalidInputError,
)

DEFAULT_NFFT = 5400
DEFAULT_BAND_BPM = (40.0, 240.0)

# slop for deciding whether a bin frequency sits inside the band
_BAND_EPS = 1e-9


@dataclass(frozen=True)
class Waveform:
    """Uniformly sampled real-valued signal.

    `degenerate` marks outputs that are structurally empty (e.g. the
    standardization of a constant signal), so downstream code can skip them
    without sniffing for all-zero arrays.
    """

    samples: np.ndarray
    fps: float
    degenerate: bool = False

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 2:
            raise InvalidInputError("waveform needs a 1-D array of at least 2 samples")
        if not np.all(np.isfinite(samples)):
            raise InvalidInputError("waveform samples must be finite")
        if not (self.fps > 0):
            raise InvalidInputError("waveform fps must be positive")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "fps", float(self.fps))

    def __len__(self):
        return self.samples.size

    @property
    def duration_s(self) -> float:
        return (self.samples.size - 1) / self.fps

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.fps


@dataclass(frozen=True)
class VideoCube:
    """T x H x W x C intensity volume with frame rate. Channel order is R,G,B for C=3."""

    data: np.ndarray
    fps: float

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 4:
            raise InvalidInputError("video cube must be a T x H x W x C array")
        t, h, w, c = data.shape
        if t < 2 or h < 1 or w < 1 or c not in (1, 3):
            raise InvalidInputError(f"bad cube shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise InvalidInputError("video cube values must be finite")
        if not (self.fps > 0):
            raise InvalidInputError("video cube fps must be positive")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "fps", float(self.fps))

    @property
    def shape(self):
        return self.data.shape


@dataclass(frozen=True)
class NormalizedPSD:
    """Band-limited power spectrum normalized to unit sum.

    `power` covers every one-sided bin of the transform; everything outside
    [band_bpm[0], band_bpm[1]] is exactly zero.  When the in-band energy is
    zero the distribution is all-zero and `degenerate` is set.
    """

    power: np.ndarray
    fps: float
    nfft: int
    band_bpm: tuple[float, float]
    degenerate: bool = False
    in_band: np.ndarray = field(repr=False, default=None)

    @property
    def bin_resolution_bpm(self) -> float:
        return self.fps * 60.0 / self.nfft

    @property
    def freqs_bpm(self) -> np.ndarray:
        return np.arange(self.power.size) * self.bin_resolution_bpm

    @property
    def in_band_count(self) -> int:
        return int(self.in_band.sum())

    @property
    def in_band_power(self) -> np.ndarray:
        return self.power[self.in_band]

    @property
    def peak_bpm(self) -> float:
        """Frequency of the strongest in-band bin."""
        idx = np.flatnonzero(self.in_band)
        return float(self.freqs_bpm[idx[np.argmax(self.power[idx])]])


def band_bin_mask(n_bins: int, fps: float, nfft: int, band_bpm) -> np.ndarray:
    """Boolean mask of one-sided bins whose frequency lies in [low, high] bpm inclusive."""
    freqs = np.arange(n_bins) * (fps * 60.0 / nfft)
    low, high = band_bpm
    return (freqs >= low - _BAND_EPS) & (freqs <= high + _BAND_EPS)


def power_spectrum(samples: np.ndarray, nfft: int) -> np.ndarray:
    """One-sided power spectrum of the mean-removed, zero-padded signal.

    Interior bins are doubled so the total satisfies Parseval's identity:
    sum(power) == nfft * sum((x - mean(x))**2).
    """
    x = np.asarray(samples, dtype=float)
    if nfft < x.size:
        raise InvalidArgumentError(f"nfft={nfft} shorter than signal length {x.size}")
    spectrum = np.fft.rfft(x - x.mean(), nfft)
    power = np.abs(spectrum) ** 2
    power[1:] *= 2.0
    if nfft % 2 == 0:
        power[-1] /= 2.0
    return power


def psd_normalized(w: Waveform, nfft: int = DEFAULT_NFFT,
                   band_bpm=DEFAULT_BAND_BPM) -> NormalizedPSD:
    """Band-limited, unit-sum power spectral density of a waveform.

    Frequencies outside [low, high] bpm are zeroed before normalization.  A
    signal with no in-band energy (e.g. a constant) yields the all-zero
    distribution with the degenerate flag set.
    """
    low, high = band_bpm
    if not low < high:
        raise InvalidArgumentError("band low must be below band high")
    power = power_spectrum(w.samples, nfft)
    mask = band_bin_mask(power.size, w.fps, nfft, band_bpm)
    masked = np.where(mask, power, 0.0)
    total = masked.sum()
    if total > 0.0:
        masked /= total
        degenerate = False
    else:
        degenerate = True
    return NormalizedPSD(power=masked, fps=w.fps, nfft=nfft,
                         band_bpm=(float(low), float(high)),
                         degenerate=degenerate, in_band=mask)


def hilbert_envelope(w: Waveform) -> Waveform:
    """Magnitude of the analytic signal (frequency-domain Hilbert transform)."""
    if len(w) < 4:
        raise InsufficientDataError("hilbert envelope needs at least 4 samples")
    return Waveform(np.abs(_analytic_signal(w.samples)), w.fps)


def resample_cubic(w: Waveform, target_fps: float) -> Waveform:
    """Cubic-spline interpolation onto a uniform grid at target_fps.

    The new grid starts at t=0 and spans the original time range; the sample
    count is chosen so the last grid point does not extrapolate.
    """
    if not target_fps > 0:
        raise InvalidArgumentError("target_fps must be positive")
    if len(w) < 4:
        raise InsufficientDataError("cubic resampling needs at least 4 samples")
    if target_fps == w.fps:
        return Waveform(w.samples.copy(), w.fps, w.degenerate)
    times = w.times
    spline = CubicSpline(times, w.samples)
    n_out = int(np.floor(times[-1] * target_fps + _BAND_EPS)) + 1
    new_times = np.arange(n_out) / target_fps
    return Waveform(spline(new_times), target_fps, w.degenerate)


def standardize_samples(x: np.ndarray) -> tuple[np.ndarray, bool]:
    """Zero-mean unit-variance copy of `x`; constants map to zeros (degenerate)."""
    x = np.asarray(x, dtype=float)
    centered = x - x.mean()
    sd = np.sqrt(np.mean(centered ** 2))
    if sd == 0.0:
        return np.zeros_like(x), True
    return centered / sd, False


def standardize(w: Waveform) -> Waveform:
    """Waveform standardized to mean 0, population std 1."""
    samples, degenerate = standardize_samples(w.samples)
    return Waveform(samples, w.fps, degenerate)


def spatial_mean_trace(v: VideoCube) -> np.ndarray:
    """Per-frame channel means over the spatial dimensions, shape (T, C)."""
    return v.data.mean(axis=(1, 2))


def bandpass_brickwall(w: Waveform, band_bpm=DEFAULT_BAND_BPM) -> Waveform:
    """Zero-phase FFT bandpass keeping only bins inside [low, high] bpm."""
    n = len(w)
    spectrum = np.fft.rfft(w.samples - w.samples.mean())
    mask = band_bin_mask(spectrum.size, w.fps, n, band_bpm)
    filtered = np.fft.irfft(np.where(mask, spectrum, 0.0), n)
    return Waveform(filtered, w.fps, w.degenerate)

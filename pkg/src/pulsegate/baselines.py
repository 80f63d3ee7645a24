"""Classical color-transformation pulse estimators: GREEN, CHROM and POS.

All three operate on spatially averaged RGB traces.  CHROM and POS process
overlapping short windows whose outputs are stitched by Hann-weighted
overlap-add, following the original chrominance / plane-orthogonal-to-skin
formulations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError, InvalidInputError
from .signal_core import VideoCube, Waveform, spatial_mean_trace, standardize_samples

CHROM_POS_WINDOW_S = 1.6


@dataclass(frozen=True)
class RgbTrace:
    """Per-frame RGB channel means, shape (T, 3)."""

    values: np.ndarray
    fps: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[1] != 3 or values.shape[0] < 2:
            raise InvalidInputError("rgb trace must be a (T, 3) array with T >= 2")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("rgb trace values must be finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "fps", float(self.fps))

    def __len__(self):
        return self.values.shape[0]


def trace_from_cube(v: VideoCube) -> RgbTrace:
    if v.data.shape[3] != 3:
        raise InvalidInputError("color baselines need a 3-channel cube")
    return RgbTrace(spatial_mean_trace(v), v.fps)


def positive_hann(length: int) -> np.ndarray:
    """Hann taper with strictly positive endpoints, safe for weight division."""
    return 0.5 - 0.5 * np.cos(2.0 * np.pi * (np.arange(length) + 1.0) / (length + 1.0))


def window_starts(total: int, length: int, hop: int) -> list[int]:
    """Window start indices covering [0, total); a final window is aligned to the end."""
    starts = list(range(0, total - length + 1, max(hop, 1)))
    if starts[-1] != total - length:
        starts.append(total - length)
    return starts


def estimate_green(trace: RgbTrace) -> Waveform:
    """Green-channel estimator; darker green (more absorption) maps to positive pulse."""
    samples, degenerate = standardize_samples(-trace.values[:, 1])
    return Waveform(samples, trace.fps, degenerate)


def _windowed_projection(trace: RgbTrace, window_s: float, project) -> Waveform:
    """Shared CHROM/POS machinery: per-window projection + Hann overlap-add.

    `project` maps window-mean-normalized channels (Rn, Gn, Bn) to a 1-D chunk
    or None when the window is degenerate (zero projection variance or
    non-positive channel means); degenerate windows contribute zeros.
    """
    total = len(trace)
    length = int(round(window_s * trace.fps))
    length = max(length, 2)
    if total < length:
        raise InsufficientDataError(
            f"trace of {total} samples is shorter than one {window_s} s window")
    taper = positive_hann(length)
    acc = np.zeros(total)
    weight = np.zeros(total)
    n_degenerate = 0
    for start in window_starts(total, length, length // 2):
        seg = trace.values[start:start + length]
        mean = seg.mean(axis=0)
        chunk = None
        if np.all(mean > 0):
            normed = seg / mean
            chunk = project(normed[:, 0], normed[:, 1], normed[:, 2])
        if chunk is None:
            n_degenerate += 1
            chunk = np.zeros(length)
        else:
            chunk = chunk - chunk.mean()
        acc[start:start + length] += chunk * taper
        weight[start:start + length] += taper
    stitched = acc / weight
    samples, flat = standardize_samples(stitched)
    return Waveform(samples, trace.fps, degenerate=flat)


def estimate_chrom(trace: RgbTrace, window_s: float = CHROM_POS_WINDOW_S) -> Waveform:
    """Chrominance estimator: s = Xc - (std(Xc)/std(Yc)) * Yc per window."""

    def project(rn, gn, bn):
        xc = 3.0 * rn - 2.0 * gn
        yc = 1.5 * rn + gn - 1.5 * bn
        sd_y = yc.std()
        if sd_y == 0.0:
            return None
        return xc - (xc.std() / sd_y) * yc

    return _windowed_projection(trace, window_s, project)


def estimate_pos(trace: RgbTrace, window_s: float = CHROM_POS_WINDOW_S) -> Waveform:
    """Plane-orthogonal-to-skin estimator: h = S1 + (std(S1)/std(S2)) * S2 per window."""

    def project(rn, gn, bn):
        s1 = gn - bn
        s2 = gn + bn - 2.0 * rn
        sd2 = s2.std()
        if sd2 == 0.0:
            return None
        return s1 + (s1.std() / sd2) * s2

    return _windowed_projection(trace, window_s, project)

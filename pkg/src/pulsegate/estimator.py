"""A small trainable temporal pulse estimator with manual backpropagation.

The model maps the spatial-mean RGB trace of a clip through two temporal
convolutions (tanh between them) with edge-replication padding, so a
temporally constant input produces a constant output with no boundary
transients.  Whole videos are processed clip-by-clip and stitched with
Hann-weighted overlap-add.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import numpy as np

from .baselines import positive_hann, window_starts
from .errors import (
    InsufficientDataError,
    InvalidArgumentError,
    InvalidInputError,
    InvalidTrainingSetError,
    NumericalDivergenceError,
)
from .losses import LossSpec, combined_loss
from .signal_core import VideoCube, Waveform, spatial_mean_trace, standardize_samples


@dataclass
class ToyEstimator:
    """Two temporal convolutions: C_in -> filters (tanh) -> 1 (linear)."""

    w1: np.ndarray  # (filters, in_channels, kernel_len)
    b1: np.ndarray  # (filters,)
    w2: np.ndarray  # (1, filters, kernel_len)
    b2: np.ndarray  # (1,)
    activation: str = "tanh"

    def __post_init__(self):
        if self.w1.shape[2] % 2 == 0 or self.w2.shape[2] % 2 == 0:
            raise InvalidArgumentError("kernel lengths must be odd")
        if self.activation not in ("tanh", "linear"):
            raise InvalidArgumentError(f"unknown activation {self.activation!r}")

    @classmethod
    def init(cls, filters: int = 8, kernel_len: int = 11, in_channels: int = 3,
             scale: float = 0.1, seed: int = 0, activation: str = "tanh"):
        rng = np.random.default_rng(seed)
        return cls(w1=rng.normal(0.0, scale, (filters, in_channels, kernel_len)),
                   b1=np.zeros(filters),
                   w2=rng.normal(0.0, scale, (1, filters, kernel_len)),
                   b2=np.zeros(1),
                   activation=activation)

    @property
    def in_channels(self) -> int:
        return self.w1.shape[1]

    @property
    def receptive_field(self) -> int:
        return self.w1.shape[2] + self.w2.shape[2] - 1

    def params(self):
        return {"w1": self.w1, "b1": self.b1, "w2": self.w2, "b2": self.b2}

    def flat_params(self) -> np.ndarray:
        return np.concatenate([p.ravel() for p in self.params().values()])

    def set_flat_params(self, flat: np.ndarray) -> None:
        offset = 0
        for p in self.params().values():
            p[...] = flat[offset:offset + p.size].reshape(p.shape)
            offset += p.size

    def copy(self) -> "ToyEstimator":
        return copy.deepcopy(self)

    def to_dict(self):
        return {"filters": self.w1.shape[0], "in_channels": self.in_channels,
                "kernel_len1": self.w1.shape[2], "kernel_len2": self.w2.shape[2],
                "activation": self.activation,
                "w1": list(map(float, self.w1.ravel())),
                "b1": list(map(float, self.b1)),
                "w2": list(map(float, self.w2.ravel())),
                "b2": list(map(float, self.b2))}

    @classmethod
    def from_dict(cls, payload):
        f, c = payload["filters"], payload["in_channels"]
        k1, k2 = payload["kernel_len1"], payload["kernel_len2"]
        return cls(w1=np.asarray(payload["w1"], dtype=float).reshape(f, c, k1),
                   b1=np.asarray(payload["b1"], dtype=float),
                   w2=np.asarray(payload["w2"], dtype=float).reshape(1, f, k2),
                   b2=np.asarray(payload["b2"], dtype=float),
                   activation=payload.get("activation", "tanh"))


def _edge_pad(x: np.ndarray, pad: int) -> np.ndarray:
    return np.pad(x, ((0, 0), (pad, pad)), mode="edge")


def _conv_same(x: np.ndarray, weights: np.ndarray, bias: np.ndarray) -> np.ndarray:
    """Temporal convolution with edge padding: (C, T) -> (F, T)."""
    kernel = weights.shape[2]
    padded = _edge_pad(x, kernel // 2)
    windows = np.lib.stride_tricks.sliding_window_view(padded, kernel, axis=1)
    return np.einsum("fck,ctk->ft", weights, windows) + bias[:, None]


def _conv_same_backward(x: np.ndarray, weights: np.ndarray, upstream: np.ndarray):
    """Gradients of _conv_same: returns (d_weights, d_bias, d_x)."""
    kernel = weights.shape[2]
    pad = kernel // 2
    padded = _edge_pad(x, pad)
    windows = np.lib.stride_tricks.sliding_window_view(padded, kernel, axis=1)
    d_weights = np.einsum("ft,ctk->fck", upstream, windows)
    d_bias = upstream.sum(axis=1)
    d_padded = np.zeros_like(padded)
    for out_ch in range(weights.shape[0]):
        for in_ch in range(weights.shape[1]):
            d_padded[in_ch] += np.convolve(upstream[out_ch], weights[out_ch, in_ch], "full")
    # adjoint of edge padding: fold the replicated borders onto the end samples
    d_x = d_padded[:, pad:-pad].copy()
    d_x[:, 0] += d_padded[:, :pad].sum(axis=1)
    d_x[:, -1] += d_padded[:, -pad:].sum(axis=1)
    return d_weights, d_bias, d_x


def standardize_trace(trace: np.ndarray) -> np.ndarray:
    """Per-channel standardization of a (T, C) trace; constant channels zero out."""
    out = np.empty_like(trace, dtype=float)
    for ch in range(trace.shape[1]):
        out[:, ch], _ = standardize_samples(trace[:, ch])
    return out


def _forward_cache(model: ToyEstimator, x: np.ndarray):
    """Forward pass on a standardized (C, T) input, keeping intermediates."""
    pre = _conv_same(x, model.w1, model.b1)
    hidden = np.tanh(pre) if model.activation == "tanh" else pre
    out = _conv_same(hidden, model.w2, model.b2)[0]
    return out, {"x": x, "pre": pre, "hidden": hidden}


def _backward_cache(model: ToyEstimator, cache, upstream: np.ndarray):
    d_w2, d_b2, d_hidden = _conv_same_backward(cache["hidden"], model.w2,
                                               upstream[None, :])
    if model.activation == "tanh":
        d_pre = d_hidden * (1.0 - cache["hidden"] ** 2)
    else:
        d_pre = d_hidden
    d_w1, d_b1, _ = _conv_same_backward(cache["x"], model.w1, d_pre)
    return {"w1": d_w1, "b1": d_b1, "w2": d_w2, "b2": d_b2}


def _clip_input(model: ToyEstimator, clip: VideoCube) -> np.ndarray:
    trace = spatial_mean_trace(clip)
    if trace.shape[1] != model.in_channels:
        raise InvalidInputError(
            f"clip has {trace.shape[1]} channels, model expects {model.in_channels}")
    if trace.shape[0] < model.receptive_field:
        raise InsufficientDataError("clip shorter than the model's receptive field")
    return standardize_trace(trace).T


def forward(model: ToyEstimator, clip: VideoCube) -> Waveform:
    """Predict a waveform for one clip (length equals the clip length)."""
    out, _ = _forward_cache(model, _clip_input(model, clip))
    return Waveform(out, clip.fps)


def backward(model: ToyEstimator, clip: VideoCube, upstream: np.ndarray):
    """Exact parameter gradients of the forward map for a given upstream dL/dy."""
    x = _clip_input(model, clip)
    _, cache = _forward_cache(model, x)
    return _backward_cache(model, cache, np.asarray(upstream, dtype=float))


def flatten_grads(grads) -> np.ndarray:
    return np.concatenate([grads[key].ravel() for key in ("w1", "b1", "w2", "b2")])


@dataclass
class TrainConfig:
    clip_len: int = 270
    batch_size: int = 8
    steps: int = 2000
    learning_rate: float = 1e-2
    momentum: float = 0.9
    seed: int = 0
    loss: LossSpec = field(default_factory=LossSpec)
    negative_mix: float = 0.5
    negative_transforms: tuple = ("normal", "uniform", "shuffle")
    val_every: int = 100

    def __post_init__(self):
        if not 0.0 <= self.negative_mix <= 1.0:
            raise InvalidArgumentError("negative_mix must be in [0, 1]")

    def to_dict(self):
        return {"clip_len": self.clip_len, "batch_size": self.batch_size,
                "steps": self.steps, "learning_rate": self.learning_rate,
                "momentum": self.momentum, "seed": self.seed,
                "loss": self.loss.to_dict(), "negative_mix": self.negative_mix,
                "negative_transforms": list(self.negative_transforms),
                "val_every": self.val_every}

    @classmethod
    def from_dict(cls, payload):
        payload = dict(payload)
        loss = LossSpec.from_dict(payload.pop("loss", {}))
        payload["negative_transforms"] = tuple(payload.get("negative_transforms",
                                                           ("normal", "uniform", "shuffle")))
        return cls(loss=loss, **{k: v for k, v in payload.items()
                                 if k in ("clip_len", "batch_size", "steps",
                                          "learning_rate", "momentum", "seed",
                                          "negative_mix", "negative_transforms",
                                          "val_every")})


class _Pool:
    """Precomputed traces and targets for one class of training samples."""

    def __init__(self, samples, fps):
        self.traces = [spatial_mean_trace(clip) for clip, _, _ in samples]
        self.targets = [gt.samples if gt is not None else None for _, gt, _ in samples]
        self.fps = fps

    def __len__(self):
        return len(self.traces)


def _as_pools(corpus):
    positives, negatives = [], []
    fps = None
    for clip, target, is_positive in corpus:
        fps = clip.fps if fps is None else fps
        if clip.fps != fps:
            raise InvalidTrainingSetError("all corpus clips must share one frame rate")
        (positives if is_positive else negatives).append((clip, target, is_positive))
    return (_Pool(positives, fps) if positives else None,
            _Pool(negatives, fps) if negatives else None, fps)


def _sample_loss(model, trace, target, is_positive, start, clip_len, fps, spec):
    """Loss value, upstream gradient and cache for one cropped training sample."""
    x = standardize_trace(trace[start:start + clip_len]).T
    out, cache = _forward_cache(model, x)
    pred = Waveform(out, fps)
    target_wave = None
    if is_positive:
        target_wave = Waveform(target[start:start + clip_len], fps)
    value, upstream = combined_loss(pred, target_wave, is_positive, spec)
    return value, upstream, cache


def _validation_metric(model, val_pos, val_neg, cfg):
    """Positive loss on validation positives plus, when negatives are in play,
    the negative loss on validation negatives.  Deterministic (first window)."""
    total = 0.0
    for trace, target in val_pos:
        value, _, _ = _sample_loss(model, trace, target, True, 0,
                                   cfg.clip_len, val_pos.fps, cfg.loss)
        total += value
    total /= max(len(val_pos), 1)
    if val_neg is not None and cfg.negative_mix > 0 and cfg.loss.negative_loss != "none":
        neg_total = 0.0
        for trace, _ in val_neg:
            value, _, _ = _sample_loss(model, trace, None, False, 0,
                                       cfg.clip_len, val_neg.fps, cfg.loss)
            neg_total += value
        total += neg_total / len(val_neg)
    return total


class _ZipPool:
    def __init__(self, pool):
        self.pool = pool
        self.fps = pool.fps

    def __iter__(self):
        return iter(zip(self.pool.traces, self.pool.targets))

    def __len__(self):
        return len(self.pool)


def train(cfg: TrainConfig, corpus, val_corpus=None, model: ToyEstimator = None):
    """SGD with momentum on the combined loss over a labeled clip corpus.

    `corpus` and `val_corpus` are sequences of (VideoCube, Waveform | None,
    is_positive).  Clips longer than clip_len are randomly cropped each draw.
    Returns (model, loss_history); when a validation corpus is supplied the
    best-on-validation snapshot is returned instead of the final parameters.
    """
    positives, negatives, fps = _as_pools(corpus)
    if positives is None:
        raise InvalidTrainingSetError("training corpus has no positive samples")
    if cfg.negative_mix > 0 and negatives is None:
        raise InvalidTrainingSetError("negative_mix > 0 but corpus has no negatives")
    if model is None:
        model = ToyEstimator.init(seed=cfg.seed)
    else:
        model = model.copy()

    val_pos = val_neg = None
    if val_corpus:
        vp, vn, val_fps = _as_pools(val_corpus)
        if vp is None:
            raise InvalidTrainingSetError("validation corpus has no positive samples")
        val_pos = _ZipPool(vp)
        val_neg = _ZipPool(vn) if vn is not None else None

    rng = np.random.default_rng(cfg.seed)
    velocity = np.zeros(model.flat_params().size)
    history = []
    best_metric = np.inf
    best_params = None

    for step in range(cfg.steps):
        grad_acc = np.zeros_like(velocity)
        loss_acc = 0.0
        for _ in range(cfg.batch_size):
            take_negative = rng.random() < cfg.negative_mix
            pool = negatives if take_negative else positives
            idx = int(rng.integers(len(pool)))
            trace = pool.traces[idx]
            n_frames = trace.shape[0]
            if n_frames < cfg.clip_len:
                raise InvalidTrainingSetError(
                    f"corpus clip of {n_frames} frames shorter than clip_len={cfg.clip_len}")
            start = int(rng.integers(n_frames - cfg.clip_len + 1)) \
                if n_frames > cfg.clip_len else 0
            value, upstream, cache = _sample_loss(
                model, trace, pool.targets[idx], not take_negative,
                start, cfg.clip_len, fps, cfg.loss)
            grad_acc += flatten_grads(_backward_cache(model, cache, upstream))
            loss_acc += value
        batch_loss = loss_acc / cfg.batch_size
        if not np.isfinite(batch_loss):
            raise NumericalDivergenceError(
                f"non-finite training loss {batch_loss} at step {step}")
        history.append(batch_loss)
        velocity = cfg.momentum * velocity + grad_acc / cfg.batch_size
        model.set_flat_params(model.flat_params() - cfg.learning_rate * velocity)

        if val_pos is not None and (step + 1) % cfg.val_every == 0:
            metric = _validation_metric(model, val_pos, val_neg, cfg)
            if metric < best_metric:
                best_metric = metric
                best_params = model.flat_params().copy()

    if val_pos is not None:
        metric = _validation_metric(model, val_pos, val_neg, cfg)
        if metric < best_metric:
            best_params = model.flat_params().copy()
        if best_params is not None:
            model.set_flat_params(best_params)
    return model, history


def stitch_overlap_add(segments, starts, total_len: int) -> np.ndarray:
    """Hann-weighted overlap-add of equal-length segments; weights renormalized."""
    length = len(segments[0])
    taper = positive_hann(length)
    acc = np.zeros(total_len)
    weight = np.zeros(total_len)
    for seg, start in zip(segments, starts):
        acc[start:start + length] += seg * taper
        weight[start:start + length] += taper
    return acc / weight


def infer_video(model: ToyEstimator, video: VideoCube, clip_len: int,
                overlap: float = 0.5, standardize_clips: bool = True) -> Waveform:
    """Whole-video inference by overlap-added clip predictions.

    Each clip prediction is standardized before stitching (spectral training
    losses are amplitude-invariant, so per-clip amplitudes carry no meaning);
    pass standardize_clips=False to keep raw amplitudes.
    """
    n_frames = video.data.shape[0]
    if n_frames < clip_len:
        raise InsufficientDataError("video shorter than one clip")
    if not 0.0 <= overlap < 1.0:
        raise InvalidArgumentError("overlap must be in [0, 1)")
    hop = max(int(round(clip_len * (1.0 - overlap))), 1)
    starts = window_starts(n_frames, clip_len, hop)
    trace = spatial_mean_trace(video)
    segments = []
    for start in starts:
        x = standardize_trace(trace[start:start + clip_len]).T
        out, _ = _forward_cache(model, x)
        if standardize_clips:
            out, _ = standardize_samples(out)
        segments.append(out)
    return Waveform(stitch_overlap_add(segments, starts, n_frames), video.fps)


def clip_prediction_stds(model: ToyEstimator, video: VideoCube, clip_len: int,
                         overlap: float = 0.5) -> np.ndarray:
    """Raw (pre-standardization) prediction std per clip; amplitude diagnostic."""
    n_frames = video.data.shape[0]
    if n_frames < clip_len:
        raise InsufficientDataError("video shorter than one clip")
    hop = max(int(round(clip_len * (1.0 - overlap))), 1)
    trace = spatial_mean_trace(video)
    stds = []
    for start in window_starts(n_frames, clip_len, hop):
        x = standardize_trace(trace[start:start + clip_len]).T
        out, _ = _forward_cache(model, x)
        stds.append(float(out.std()))
    return np.asarray(stds)

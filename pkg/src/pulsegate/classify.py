"""RBF-kernel SVMs for liveness classification, trained by an SMO dual solver.

Labels follow a fixed convention: LIVE = +1, ANOMALOUS = -1.  Decision values
at exactly zero resolve to ANOMALOUS (fail-safe).  Feature standardization is
fitted on the training data and stored inside the model; it can be disabled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, InvalidInputError, InvalidTrainingSetError

LIVE = 1
ANOMALOUS = -1

KKT_TOL = 1e-3
_SV_EPS = 1e-10


def rbf_kernel(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """Gram matrix exp(-gamma * ||a_i - b_j||^2)."""
    sq = np.sum(a * a, axis=1)[:, None] + np.sum(b * b, axis=1)[None, :] - 2.0 * (a @ b.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


@dataclass
class FeatureScaler:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, x: np.ndarray) -> "FeatureScaler":
        std = x.std(axis=0)
        std = np.where(std > 0, std, 1.0)  # constant dims pass through
        return cls(mean=x.mean(axis=0), std=std)

    @classmethod
    def identity(cls, dim: int) -> "FeatureScaler":
        return cls(mean=np.zeros(dim), std=np.ones(dim))

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (x - self.mean) / self.std


@dataclass
class SvmModel:
    kind: str  # "two_class" or "one_class"
    gamma: float
    support_vectors: np.ndarray  # already standardized rows
    dual_coef: np.ndarray        # alpha_i * y_i (two-class) or alpha_i (one-class)
    bias: float                  # decision(x) = dual_coef . k(sv, x) + bias
    scaler: FeatureScaler
    C: float = 1.0
    nu: float = 0.5

    def to_dict(self):
        return {"kind": self.kind, "gamma": self.gamma, "C": self.C, "nu": self.nu,
                "bias": self.bias,
                "support_vectors": [list(map(float, r)) for r in self.support_vectors],
                "dual_coef": list(map(float, self.dual_coef)),
                "scaler_mean": list(map(float, self.scaler.mean)),
                "scaler_std": list(map(float, self.scaler.std))}

    @classmethod
    def from_dict(cls, payload):
        return cls(kind=payload["kind"], gamma=float(payload["gamma"]),
                   C=float(payload.get("C", 1.0)), nu=float(payload.get("nu", 0.5)),
                   bias=float(payload["bias"]),
                   support_vectors=np.asarray(payload["support_vectors"], dtype=float),
                   dual_coef=np.asarray(payload["dual_coef"], dtype=float),
                   scaler=FeatureScaler(np.asarray(payload["scaler_mean"], dtype=float),
                                        np.asarray(payload["scaler_std"], dtype=float)))


def _scale_gamma(x: np.ndarray) -> float:
    """gamma = 1 / (n_features * var(X)), the common 'scale' heuristic."""
    var = float(x.var())
    if var <= 0:
        var = 1.0
    return 1.0 / (x.shape[1] * var)


def smo_solve_two_class(kernel: np.ndarray, y: np.ndarray, C: float,
                        tol: float = KKT_TOL, max_iter: int = 200_000,
                        record_objective: bool = False):
    """SMO on the C-SVM dual with maximal-violating-pair selection.

    Minimizes 0.5 a'Qa - e'a with Q = yy'K subject to 0 <= a <= C and y'a = 0.
    Returns (alpha, bias, n_iter, kkt_gap, objective_history).
    """
    n = y.size
    alpha = np.zeros(n)
    q_sign = y[:, None] * y[None, :]
    grad = -np.ones(n)
    history = []
    gap = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        yg = -y * grad
        up = ((y > 0) & (alpha < C - _SV_EPS)) | ((y < 0) & (alpha > _SV_EPS))
        lo = ((y < 0) & (alpha < C - _SV_EPS)) | ((y > 0) & (alpha > _SV_EPS))
        if not up.any() or not lo.any():
            gap = 0.0
            break
        i = int(np.argmax(np.where(up, yg, -np.inf)))
        j = int(np.argmin(np.where(lo, yg, np.inf)))
        gap = yg[i] - yg[j]
        if gap <= tol:
            break
        quad = max(kernel[i, i] + kernel[j, j] - 2.0 * q_sign[i, j] * kernel[i, j], 1e-12)
        step = gap / quad
        # move alpha_i by +y_i*step and alpha_j by -y_j*step, clipped to the box
        step = min(step, C - alpha[i] if y[i] > 0 else alpha[i])
        step = min(step, alpha[j] if y[j] > 0 else C - alpha[j])
        alpha[i] += y[i] * step
        alpha[j] -= y[j] * step
        grad += (q_sign[:, i] * kernel[:, i]) * (y[i] * step) \
            - (q_sign[:, j] * kernel[:, j]) * (y[j] * step)
        if record_objective:
            history.append(0.5 * float(alpha @ grad) - 0.5 * float(alpha.sum()))
    coef = alpha * y
    decision = kernel @ coef
    free = (alpha > _SV_EPS) & (alpha < C - _SV_EPS)
    if free.any():
        bias = float(np.mean(y[free] - decision[free]))
    else:
        yg = -y * grad
        up = ((y > 0) & (alpha < C - _SV_EPS)) | ((y < 0) & (alpha > _SV_EPS))
        lo = ((y < 0) & (alpha < C - _SV_EPS)) | ((y > 0) & (alpha > _SV_EPS))
        hi_v = np.where(up, yg, -np.inf).max()
        lo_v = np.where(lo, yg, np.inf).min()
        bias = float((hi_v + lo_v) / 2.0)
    return alpha, bias, it, float(gap), history


def smo_solve_one_class(kernel: np.ndarray, nu: float, tol: float = KKT_TOL,
                        max_iter: int = 200_000, record_objective: bool = False):
    """SMO on the one-class dual: min 0.5 a'Ka, 0 <= a <= 1, sum(a) = nu*n.

    Returns (alpha, rho, n_iter, kkt_gap, objective_history); the decision
    function is k(sv, x) . alpha - rho.
    """
    n = kernel.shape[0]
    budget = nu * n
    n_full = int(budget)
    alpha = np.zeros(n)
    alpha[:n_full] = 1.0
    if n_full < n:
        alpha[n_full] = budget - n_full
    grad = kernel @ alpha
    history = []
    gap = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        neg_grad = -grad
        up = alpha < 1.0 - _SV_EPS
        lo = alpha > _SV_EPS
        i = int(np.argmax(np.where(up, neg_grad, -np.inf)))
        j = int(np.argmin(np.where(lo, neg_grad, np.inf)))
        gap = neg_grad[i] - neg_grad[j]
        if gap <= tol:
            break
        quad = max(kernel[i, i] + kernel[j, j] - 2.0 * kernel[i, j], 1e-12)
        step = min(gap / quad, 1.0 - alpha[i], alpha[j])
        alpha[i] += step
        alpha[j] -= step
        grad += step * (kernel[:, i] - kernel[:, j])
        if record_objective:
            history.append(0.5 * float(alpha @ grad))
    free = (alpha > _SV_EPS) & (alpha < 1.0 - _SV_EPS)
    if free.any():
        rho = float(np.mean(grad[free]))
    else:
        hi_v = np.where(alpha > _SV_EPS, grad, -np.inf).max()
        lo_v = np.where(alpha < 1.0 - _SV_EPS, grad, np.inf).min()
        rho = float((hi_v + lo_v) / 2.0)
    return alpha, rho, it, float(gap), history


def _check_features(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < 1:
        raise InvalidInputError("feature matrix must be 2-D and non-empty")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("features must be finite")
    return x


def fit_two_class(x: np.ndarray, y: np.ndarray, C: float = 1.0, gamma=None,
                  tol: float = KKT_TOL, standardize: bool = True) -> SvmModel:
    """Train a two-class RBF SVM on labels {LIVE, ANOMALOUS}."""
    x = _check_features(x)
    y = np.asarray(y, dtype=float)
    if y.shape != (x.shape[0],):
        raise InvalidArgumentError("labels must be one per feature row")
    if not (np.any(y > 0) and np.any(y < 0)):
        raise InvalidTrainingSetError("two-class fit needs both classes present")
    scaler = FeatureScaler.fit(x) if standardize else FeatureScaler.identity(x.shape[1])
    xs = scaler.transform(x)
    gamma = float(gamma) if gamma is not None else _scale_gamma(xs)
    kernel = rbf_kernel(xs, xs, gamma)
    alpha, bias, _, _, _ = smo_solve_two_class(kernel, y, C, tol)
    keep = alpha > _SV_EPS
    return SvmModel(kind="two_class", gamma=gamma, C=C,
                    support_vectors=xs[keep], dual_coef=(alpha * y)[keep],
                    bias=bias, scaler=scaler)


def fit_one_class(x: np.ndarray, nu: float = 0.5, gamma=None,
                  tol: float = KKT_TOL, standardize: bool = True) -> SvmModel:
    """Train a one-class RBF SVM on live-only feature rows."""
    if not 0.0 < nu <= 1.0:
        raise InvalidArgumentError("nu must be in (0, 1]")
    x = _check_features(x)
    if x.shape[0] < 2.0 / nu:
        raise InvalidTrainingSetError(
            f"one-class fit with nu={nu} needs at least {int(np.ceil(2 / nu))} rows")
    scaler = FeatureScaler.fit(x) if standardize else FeatureScaler.identity(x.shape[1])
    xs = scaler.transform(x)
    gamma = float(gamma) if gamma is not None else _scale_gamma(xs)
    kernel = rbf_kernel(xs, xs, gamma)
    alpha, rho, _, _, _ = smo_solve_one_class(kernel, nu, tol)
    keep = alpha > _SV_EPS
    return SvmModel(kind="one_class", gamma=gamma, nu=nu,
                    support_vectors=xs[keep], dual_coef=alpha[keep],
                    bias=-rho, scaler=scaler)


def decision_values(model: SvmModel, x: np.ndarray) -> np.ndarray:
    """Signed decision values for feature rows (positive means LIVE).

    Evaluated row by row so batch and single-row calls are bit-identical.
    """
    x = _check_features(np.atleast_2d(x))
    xs = model.scaler.transform(x)
    sv = model.support_vectors
    out = np.empty(xs.shape[0])
    for i, row in enumerate(xs):
        sq = np.sum((sv - row) ** 2, axis=1)
        out[i] = float(model.dual_coef @ np.exp(-model.gamma * sq)) + model.bias
    return out


def predict(model: SvmModel, x: np.ndarray):
    """Labels and decision values; zero decisions resolve to ANOMALOUS."""
    values = decision_values(model, x)
    labels = np.where(values > 0.0, LIVE, ANOMALOUS)
    return labels, values


def frame_accuracy(window_labels, window_centers_s, frame_labels, fps: float,
                   window_s: float = 10.0, return_counts: bool = False):
    """Fraction of frames whose nearest-window prediction matches the label.

    Every frame must fall within half a window of some window center (full
    coverage); otherwise a CoverageError is raised.
    """
    from .errors import CoverageError

    window_labels = np.asarray(window_labels)
    centers = np.asarray(window_centers_s, dtype=float)
    frame_labels = np.asarray(frame_labels)
    if window_labels.size == 0:
        raise CoverageError("no windows to map frames onto")
    frame_times = np.arange(frame_labels.size) / fps
    low = centers.min() - window_s / 2.0
    high = centers.max() + window_s / 2.0
    uncovered = (frame_times < low - 1e-9) | (frame_times > high + 1e-9)
    if uncovered.any():
        raise CoverageError(f"{int(uncovered.sum())} frames outside window coverage")
    nearest = np.argmin(np.abs(frame_times[:, None] - centers[None, :]), axis=1)
    correct = int(np.sum(window_labels[nearest] == frame_labels))
    if return_counts:
        return correct, frame_labels.size
    return correct / frame_labels.size

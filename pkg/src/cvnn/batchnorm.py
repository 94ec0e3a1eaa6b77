"""Batch normalization of complex features by 2D whitening.

A complex value is the real pair x = (Re z, Im z).  A batch is centered
and multiplied by the inverse square root of its 2x2 covariance,

    x_hat = V^(-1/2) (x - mu),

which decorrelates the two components and gives them joint unit
covariance, then a learnable symmetric 2x2 scale gamma and 2-vector
shift beta are applied.  Moving statistics take over at inference.

State defaults follow the usual convention for complex features: moving
covariance and gamma start at I/sqrt(2) (so each component starts with
variance 1/2), mean and beta at zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InsufficientBatchError, ShapeError, SingularStatisticsError


def _default_cov():
    return np.eye(2) / math.sqrt(2.0)


def _as_sym2(m, name):
    arr = np.asarray(m, dtype=float)
    if arr.shape != (2, 2):
        raise ShapeError(f"{name} must be 2x2, got {arr.shape}")
    if not np.allclose(arr, arr.T, rtol=0.0, atol=1e-12):
        raise ShapeError(f"{name} must be symmetric")
    # force exact symmetry so it survives serialization round trips
    return 0.5 * (arr + arr.T)


@dataclass
class BatchNormState:
    moving_mean: np.ndarray = field(default_factory=lambda: np.zeros(2))
    moving_cov: np.ndarray = field(default_factory=_default_cov)
    gamma: np.ndarray = field(default_factory=_default_cov)
    beta: np.ndarray = field(default_factory=lambda: np.zeros(2))
    alpha: float = 0.9
    epsilon: float = 1e-5

    def __post_init__(self):
        self.moving_mean = np.asarray(self.moving_mean, dtype=float).reshape(2)
        self.beta = np.asarray(self.beta, dtype=float).reshape(2)
        self.moving_cov = _as_sym2(self.moving_cov, "moving_cov")
        self.gamma = _as_sym2(self.gamma, "gamma")
        if not 0.0 <= self.alpha < 1.0:
            raise ShapeError(f"momentum must be in [0, 1), got {self.alpha}")
        if self.epsilon < 0.0:
            raise ShapeError(f"epsilon must be >= 0, got {self.epsilon}")


def inv_sqrt_2x2_spd(V, epsilon: float = 0.0) -> np.ndarray:
    """M with M M (V + eps I) = I, via the closed form for symmetric 2x2.

    sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A)) for SPD A,
    then a 2x2 inverse; no iteration needed at this size.
    """
    A = _as_sym2(V, "V") + float(epsilon) * np.eye(2)
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    tr = A[0, 0] + A[1, 1]
    if det <= 0.0 or tr <= 0.0:
        raise SingularStatisticsError(
            f"covariance not positive definite (trace {tr:.3g}, det {det:.3g})"
        )
    s = math.sqrt(det)
    u = math.sqrt(tr + 2.0 * s)
    root = (A + s * np.eye(2)) / u
    rdet = root[0, 0] * root[1, 1] - root[0, 1] * root[1, 0]
    return np.array([[root[1, 1], -root[0, 1]], [-root[1, 0], root[0, 0]]]) / rdet


def _components(batch) -> np.ndarray:
    z = np.asarray(batch, dtype=np.complex128).ravel()
    return np.stack([z.real, z.imag])  # shape (2, n)


def batch_statistics(batch):
    """Population mean (2,) and covariance (2, 2) of the component pairs."""
    xy = _components(batch)
    mean = xy.mean(axis=1)
    centered = xy - mean[:, None]
    cov = centered @ centered.T / xy.shape[1]
    return mean, cov


def _affine(state: BatchNormState, batch, mean, cov):
    M = inv_sqrt_2x2_spd(cov, state.epsilon)
    xy = _components(batch)
    out = state.gamma @ (M @ (xy - mean[:, None])) + state.beta[:, None]
    return out[0] + 1j * out[1]


def bn_forward_train(state: BatchNormState, batch):
    """Whiten with this batch's own statistics.

    Returns (normalized, batch_mean, batch_cov); the statistics feed
    bn_update_moving.
    """
    z = np.asarray(batch, dtype=np.complex128).ravel()
    if z.size < 2:
        raise InsufficientBatchError(f"batch statistics need >= 2 samples, got {z.size}")
    mean, cov = batch_statistics(z)
    return _affine(state, z, mean, cov), mean, cov


def bn_update_moving(state: BatchNormState, batch_mean, batch_cov) -> BatchNormState:
    """Fold batch statistics into the moving averages with momentum alpha."""
    mean = np.asarray(batch_mean, dtype=float).reshape(2)
    cov = _as_sym2(batch_cov, "batch_cov")
    a = state.alpha
    return replace(
        state,
        moving_mean=a * state.moving_mean + (1.0 - a) * mean,
        moving_cov=a * state.moving_cov + (1.0 - a) * cov,
    )


def bn_forward_infer(state: BatchNormState, batch):
    """Whiten with the moving statistics; no state is touched."""
    z = np.asarray(batch, dtype=np.complex128)
    shape = z.shape
    out = _affine(state, z.ravel(), state.moving_mean, state.moving_cov)
    return out.reshape(shape) if shape else complex(out[0])


def bn_wirtinger_pair(state: BatchNormState):
    """(df/dz, df/dzbar) of the frozen inference map.

    The whitening plus affine is the real-linear map A = gamma V'^(-1/2)
    on (Re, Im); as a complex function that is a z + b zbar with the
    returned coefficients.
    """
    A = state.gamma @ inv_sqrt_2x2_spd(state.moving_cov, state.epsilon)
    a = complex(A[0, 0] + A[1, 1], A[1, 0] - A[0, 1]) / 2.0
    b = complex(A[0, 0] - A[1, 1], A[1, 0] + A[0, 1]) / 2.0
    return a, b


def bn_state_to_dict(state: BatchNormState) -> dict:
    return {
        "moving_mean": state.moving_mean.tolist(),
        "moving_cov": state.moving_cov.tolist(),
        "gamma": state.gamma.tolist(),
        "beta": state.beta.tolist(),
        "alpha": state.alpha,
        "epsilon": state.epsilon,
    }


def bn_state_from_dict(data: dict) -> BatchNormState:
    try:
        return BatchNormState(
            moving_mean=data["moving_mean"],
            moving_cov=data["moving_cov"],
            gamma=data["gamma"],
            beta=data["beta"],
            alpha=float(data["alpha"]),
            epsilon=float(data["epsilon"]),
        )
    except KeyError as exc:
        raise ShapeError(f"batchnorm state missing field {exc}") from None

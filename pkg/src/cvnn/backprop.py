"""Backpropagation through complex layers via paired derivatives.

The loss is real, so each neuron's sensitivity is fully captured by the
single complex number delta = dE/dX (its conjugate partner is the
conjugate).  Walking a layer backwards:

    dE/dV   = delta * dX/dV + conj(delta) * conj(dX/dVbar)
    grad w  = 2 conj(dE/dV_n) conj(x_m)        (steepest descent, 2 dE/dwbar)
    delta'  = W^T dE/dV                        (no conjugation)

For holomorphic activations dX/dVbar vanishes and the first line loses
its second term; `holomorphic_only=True` takes that shortcut explicitly.

Networks whose output map is set train on real targets: the quadratic
loss is applied to the mapped real outputs and pulled back through the
map.  The "ace" loss carries its own per-part softmax head.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .activations import MVNDiscrete, output_map as apply_output_map, output_map_pullback
from .batchnorm import bn_wirtinger_pair
from .errors import NonDifferentiableActivationError, ShapeError
from .losses import KINDS as LOSS_KINDS, pipeline_loss, pipeline_loss_partials
from .network import ForwardCache, Network, augment, forward
from .rng import Rng
from .validation import as_complex_vector
from .wirtinger import relative_error


@dataclass
class TrainConfig:
    eta: float = 0.1
    epochs: int = 100
    batch_size: int = 0  # 0 means full batch
    seed: int = 0
    loss: str = "quadratic"

    def __post_init__(self):
        if self.eta <= 0.0:
            raise ShapeError(f"learning rate must be positive, got {self.eta}")
        if self.epochs < 0 or self.batch_size < 0:
            raise ShapeError("epochs and batch size must be non-negative")
        if self.loss not in LOSS_KINDS:
            raise ShapeError(f"unknown loss {self.loss!r}; choose from {LOSS_KINDS}")


def check_differentiable(net: Network) -> None:
    for layer in net.layers:
        if isinstance(layer.activation, MVNDiscrete):
            raise NonDifferentiableActivationError(
                f"{layer.activation.name} cannot be trained by gradients; use the "
                "error-correction trainer"
            )


def _uses_real_head(net: Network, loss: str) -> bool:
    if net.output_map is None or net.output_map == "cast_labels":
        return False
    if loss == "ace":
        return False  # ace brings its own softmax head
    if loss != "quadratic":
        raise ShapeError(f"loss {loss!r} cannot train through output map {net.output_map!r}")
    return True


def objective(net: Network, o, d, loss: str) -> float:
    """Training loss of raw network output o against targets d."""
    if _uses_real_head(net, loss):
        m = apply_output_map(net.output_map, o)
        t = np.asarray(d, dtype=np.complex128).real.ravel()
        if m.shape != t.shape:
            raise ShapeError(f"output/target length mismatch: {m.shape} vs {t.shape}")
        return 0.5 * float(np.sum((m - t) ** 2))
    return pipeline_loss(loss, o, d)


def _objective_seed(net: Network, o, d, loss: str) -> np.ndarray:
    """dE/dX at the output layer (conjugate half is its conjugate)."""
    if _uses_real_head(net, loss):
        m = apply_output_map(net.output_map, o)
        t = np.asarray(d, dtype=np.complex128).real.ravel()
        return output_map_pullback(net.output_map, o, m - t)
    dz, _ = pipeline_loss_partials(loss, o, d)
    return dz


def backward(
    net: Network,
    cache: ForwardCache,
    d,
    loss: str = "quadratic",
    holomorphic_only: bool = False,
) -> list[np.ndarray]:
    """Per-layer steepest-descent gradients 2 dL/dwbar, shaped like the weights."""
    check_differentiable(net)
    d = np.asarray(d, dtype=np.complex128).ravel()
    delta = np.asarray(_objective_seed(net, cache.output, d, loss), dtype=np.complex128)
    grads: list[np.ndarray] = [np.empty(0)] * len(net.layers)
    for l in range(len(net.layers) - 1, -1, -1):
        layer = net.layers[l]
        sz, szbar = layer.activation.partials(cache.v[l])
        if holomorphic_only:
            dv = delta * sz
        else:
            dv = delta * sz + np.conj(delta) * np.conj(szbar)
        if layer.batchnorm is not None:
            pairs = [bn_wirtinger_pair(s) for s in layer.batchnorm]
            a = np.array([p[0] for p in pairs])
            b = np.array([p[1] for p in pairs])
            dv = dv * a + np.conj(dv) * np.conj(b)
        x_prev = augment(cache.x[l - 1] if l > 0 else cache.x0, layer.has_bias)
        grads[l] = 2.0 * np.conj(dv)[:, None] * np.conj(x_prev)[None, :]
        if l > 0:
            delta = layer.weights[:, : layer.in_width].T @ dv
    return grads


def sgd_step(net: Network, grads, eta: float) -> Network:
    """w <- w - eta * grad, in place; returns the network for chaining."""
    if len(grads) != len(net.layers):
        raise ShapeError(f"{len(grads)} gradients for {len(net.layers)} layers")
    for layer, g in zip(net.layers, grads):
        g = np.asarray(g, dtype=np.complex128)
        if g.shape != layer.weights.shape:
            raise ShapeError(f"gradient shape {g.shape} vs weights {layer.weights.shape}")
        layer.weights -= eta * g
    return net


def batch_gradients(net: Network, xs, ds, loss: str):
    """(gradients averaged over the batch, mean loss before the step)."""
    acc = None
    total = 0.0
    for x, d in zip(xs, ds):
        cache = forward(net, x)
        total += objective(net, cache.output, d, loss)
        grads = backward(net, cache, d, loss)
        if acc is None:
            acc = grads
        else:
            for a, g in zip(acc, grads):
                a += g
    n = len(xs)
    for a in acc:
        a /= n
    return acc, total / n


def train_sgd(net: Network, inputs, targets, config: TrainConfig, on_epoch=None):
    """Mini-batch gradient descent; returns the per-epoch mean training loss.

    Deterministic for a fixed config: sample order is shuffled by the
    config seed and batches are reduced in a fixed order.
    """
    check_differentiable(net)
    inputs = [as_complex_vector(x, "input") for x in inputs]
    targets = [np.asarray(t, dtype=np.complex128).ravel() for t in targets]
    if len(inputs) != len(targets):
        raise ShapeError(f"{len(inputs)} inputs vs {len(targets)} targets")
    n = len(inputs)
    batch = config.batch_size or n
    rng = Rng(config.seed)
    history = []
    for epoch in range(config.epochs):
        perm = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, batch):
            idx = perm[start : start + batch]
            grads, mean_loss = batch_gradients(
                net, [inputs[i] for i in idx], [targets[i] for i in idx], config.loss
            )
            sgd_step(net, grads, config.eta)
            epoch_loss += mean_loss * len(idx)
        history.append(epoch_loss / n)
        if on_epoch is not None:
            on_epoch(epoch, history[-1])
    return history


# ---------------------------------------------------------------------------
# finite-difference verification

@dataclass
class GradCheckReport:
    status: str  # "pass", "fail", or "inconclusive"
    max_rel_err: float
    tol: float
    resamples: int = 0
    loose: bool = False  # tolerance relaxed because of frozen batchnorm statistics

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _min_kink_distance(net: Network, cache: ForwardCache) -> float:
    dist = math.inf
    for layer, v in zip(net.layers, cache.v):
        d = layer.activation.kink_distance(v)
        if np.size(d):
            dist = min(dist, float(np.min(d)))
    return dist


def _numeric_grad(net: Network, x, d, loss: str, h: float) -> list[np.ndarray]:
    """Per-weight central differences of the objective; dL/dRe + i dL/dIm."""

    def value() -> float:
        cache = forward(net, x)
        return objective(net, cache.output, d, loss)

    out = []
    for layer in net.layers:
        w = layer.weights
        g = np.zeros_like(w)
        for idx in np.ndindex(w.shape):
            orig = w[idx]
            w[idx] = orig + h
            up = value()
            w[idx] = orig - h
            down = value()
            w[idx] = orig + 1j * h
            up_i = value()
            w[idx] = orig - 1j * h
            down_i = value()
            w[idx] = orig
            g[idx] = (up - down) / (2.0 * h) + 1j * (up_i - down_i) / (2.0 * h)
        out.append(g)
    return out


def grad_check(
    net: Network,
    x,
    d,
    loss: str = "quadratic",
    h: float = 1e-6,
    tol: float = 1e-5,
    rng: Rng | None = None,
    max_resamples: int = 10,
) -> GradCheckReport:
    """Compare backward() against per-weight central differences.

    Inputs that put any cached pre-activation within 2h of an activation
    kink are resampled (fresh random x) up to max_resamples times; if the
    kink cannot be avoided, the result is "inconclusive" rather than a
    failure.
    """
    check_differentiable(net)
    loose = any(layer.batchnorm is not None for layer in net.layers)
    if loose:
        tol = max(tol, 1e-2)
    rng = rng or Rng(0)
    x = as_complex_vector(x, "x")
    resamples = 0
    cache = forward(net, x)
    while _min_kink_distance(net, cache) <= 2.0 * h:
        if resamples >= max_resamples:
            return GradCheckReport("inconclusive", math.nan, tol, resamples, loose)
        resamples += 1
        x = rng.complex_array(net.input_width)
        cache = forward(net, x)
    analytic = backward(net, cache, d, loss)
    numeric = _numeric_grad(net, x, d, loss, h)
    worst = 0.0
    for a, g in zip(analytic, numeric):
        for idx in np.ndindex(a.shape):
            worst = max(worst, relative_error(a[idx], g[idx]))
    status = "pass" if worst <= tol else "fail"
    return GradCheckReport(status, worst, tol, resamples, loose)

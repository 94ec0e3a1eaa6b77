"""Dense feed-forward complex networks: forward pass and model files.

A layer is a complex weight matrix of shape (out_width, in_width + 1)
when it carries a bias (the last column multiplies a constant input 1)
and an elementwise activation.  The forward pass caches pre-activations
V and activations X per layer, which is everything backpropagation
needs.

Models serialize to JSON with separate re/im arrays; floats go through
Python's shortest round-trip repr, so deserialize(serialize(net))
reproduces every weight bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .activations import (
    Activation,
    OUTPUT_MAPS,
    output_map as apply_output_map,
    parse_activation,
)
from .batchnorm import BatchNormState, bn_forward_infer, bn_state_from_dict, bn_state_to_dict
from .errors import ParseError, ShapeError
from .initializers import InitSpec, init_weights
from .validation import as_complex_vector

MODES = ("split", "fully_complex")


@dataclass
class Layer:
    weights: np.ndarray
    activation: Activation
    has_bias: bool = True
    batchnorm: list[BatchNormState] | None = None

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.complex128)
        if self.weights.ndim != 2 or self.weights.shape[0] < 1:
            raise ShapeError(f"layer weights must be 2-D with >= 1 row, got {self.weights.shape}")
        if self.in_width < 1:
            raise ShapeError("layer must have at least one (non-bias) input")
        if not np.all(np.isfinite(self.weights.real)) or not np.all(np.isfinite(self.weights.imag)):
            raise ShapeError("layer weights contain non-finite entries")
        if isinstance(self.activation, str):
            self.activation = parse_activation(self.activation)
        if self.batchnorm is not None and len(self.batchnorm) != self.out_width:
            raise ShapeError(
                f"need one batchnorm state per neuron: {len(self.batchnorm)} for width {self.out_width}"
            )

    @property
    def out_width(self) -> int:
        return self.weights.shape[0]

    @property
    def in_width(self) -> int:
        return self.weights.shape[1] - (1 if self.has_bias else 0)

    def __eq__(self, other):
        if not isinstance(other, Layer):
            return NotImplemented
        return (
            self.has_bias == other.has_bias
            and self.activation == other.activation
            and np.array_equal(self.weights, other.weights)
            and _bn_equal(self.batchnorm, other.batchnorm)
        )


def _bn_equal(a, b):
    if (a is None) != (b is None):
        return False
    if a is None:
        return True
    return len(a) == len(b) and all(
        np.array_equal(s.moving_mean, t.moving_mean)
        and np.array_equal(s.moving_cov, t.moving_cov)
        and np.array_equal(s.gamma, t.gamma)
        and np.array_equal(s.beta, t.beta)
        and s.alpha == t.alpha
        and s.epsilon == t.epsilon
        for s, t in zip(a, b)
    )


@dataclass
class Network:
    layers: list[Layer]
    mode: str = "split"
    output_map: str | None = None

    def __post_init__(self):
        if not self.layers:
            raise ShapeError("network needs at least one layer")
        if self.mode not in MODES:
            raise ShapeError(f"unknown mode {self.mode!r}; choose from {MODES}")
        if self.output_map is not None and self.output_map not in OUTPUT_MAPS:
            raise ShapeError(f"unknown output map {self.output_map!r}")
        for prev, nxt in zip(self.layers, self.layers[1:]):
            if nxt.in_width != prev.out_width:
                raise ShapeError(
                    f"layer widths incompatible: {prev.out_width} feeds {nxt.in_width}"
                )
        if self.mode == "fully_complex":
            for layer in self.layers[:-1]:
                if not layer.activation.holomorphic:
                    raise ShapeError(
                        "fully_complex mode allows only holomorphic hidden activations, "
                        f"got {layer.activation.name!r}"
                    )

    @property
    def input_width(self) -> int:
        return self.layers[0].in_width

    @property
    def output_width(self) -> int:
        return self.layers[-1].out_width

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.mode == other.mode
            and self.output_map == other.output_map
            and len(self.layers) == len(other.layers)
            and all(a == b for a, b in zip(self.layers, other.layers))
        )


@dataclass
class ForwardCache:
    """Per-layer pre-activations v and activations x, plus the input x0.

    x[l] == activation(v[l]) elementwise; with batchnorm, v is the
    normalized pre-activation (the actual activation input).
    """

    x0: np.ndarray
    v: list = field(default_factory=list)
    x: list = field(default_factory=list)

    @property
    def output(self) -> np.ndarray:
        return self.x[-1]


def augment(x: np.ndarray, has_bias: bool) -> np.ndarray:
    if not has_bias:
        return x
    return np.concatenate([x, np.ones(1, dtype=np.complex128)])


def layer_forward(layer: Layer, x_prev):
    """(V, X) of one layer; V = W [x; 1], X = activation(V)."""
    x_prev = as_complex_vector(x_prev, "layer input")
    if x_prev.size != layer.in_width:
        raise ShapeError(f"layer expects width {layer.in_width}, got {x_prev.size}")
    v = layer.weights @ augment(x_prev, layer.has_bias)
    if layer.batchnorm is not None:
        v = np.array(
            [bn_forward_infer(state, v[i]) for i, state in enumerate(layer.batchnorm)],
            dtype=np.complex128,
        )
    return v, layer.activation(v)


def forward(net: Network, x) -> ForwardCache:
    """Run the network, caching every layer's V and X."""
    x = as_complex_vector(x, "input")
    if x.size != net.input_width:
        raise ShapeError(f"network expects input width {net.input_width}, got {x.size}")
    cache = ForwardCache(x0=x)
    cur = x
    for layer in net.layers:
        v, cur = layer_forward(layer, cur)
        cache.v.append(v)
        cache.x.append(cur)
    return cache


def predict(net: Network, x):
    """Network output, passed through the configured output map if any."""
    out = forward(net, x).output
    if net.output_map is None:
        return out
    return apply_output_map(net.output_map, out)


# ---------------------------------------------------------------------------
# model files

def network_to_dict(net: Network) -> dict:
    layers = []
    for layer in net.layers:
        entry = {
            "activation": layer.activation.name,
            "rows": layer.weights.shape[0],
            "cols": layer.weights.shape[1],
            "has_bias": layer.has_bias,
            "weights_re": layer.weights.real.tolist(),
            "weights_im": layer.weights.imag.tolist(),
        }
        if layer.batchnorm is not None:
            entry["batchnorm"] = [bn_state_to_dict(s) for s in layer.batchnorm]
        layers.append(entry)
    return {"mode": net.mode, "output_map": net.output_map, "layers": layers}


def serialize(net: Network) -> bytes:
    return json.dumps(network_to_dict(net), indent=1).encode()


def _layer_from_dict(data: dict, index: int) -> Layer:
    try:
        rows, cols = int(data["rows"]), int(data["cols"])
        re = np.asarray(data["weights_re"], dtype=float)
        im = np.asarray(data["weights_im"], dtype=float)
        if re.shape != (rows, cols) or im.shape != (rows, cols):
            raise ParseError(
                f"layer {index}: weight arrays do not match declared shape ({rows}, {cols})"
            )
        bn = data.get("batchnorm")
        return Layer(
            weights=re + 1j * im,
            activation=parse_activation(data["activation"]),
            has_bias=bool(data["has_bias"]),
            batchnorm=None if bn is None else [bn_state_from_dict(s) for s in bn],
        )
    except KeyError as exc:
        raise ParseError(f"layer {index}: missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ParseError(f"layer {index}: {exc}") from None


def deserialize(data) -> Network:
    if isinstance(data, bytes):
        data = data.decode()
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"model is not valid JSON at position {exc.pos}: {exc.msg}") from None
    if not isinstance(doc, dict) or "layers" not in doc:
        raise ParseError("model document must be an object with a 'layers' array")
    layers = [_layer_from_dict(entry, i) for i, entry in enumerate(doc["layers"])]
    try:
        return Network(layers=layers, mode=doc.get("mode", "split"), output_map=doc.get("output_map"))
    except ShapeError as exc:
        raise ParseError(str(exc)) from None


def save_model(net: Network, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize(net))


def load_model(path) -> Network:
    with open(path, "rb") as fh:
        return deserialize(fh.read())


# ---------------------------------------------------------------------------

def build_network(
    input_width: int,
    widths,
    activations,
    seed: int = 0,
    scheme: str = "rect",
    has_bias: bool = True,
    mode: str = "split",
    output_map: str | None = None,
) -> Network:
    """Construct a network with freshly initialized weights.

    activations may be one name/instance for all layers or a sequence,
    one per layer.  Bias columns start at zero; each layer draws from a
    seed derived as seed XOR layer index.
    """
    widths = [int(w) for w in widths]
    if not widths or any(w < 1 for w in widths):
        raise ShapeError(f"layer widths must be positive, got {widths}")
    if isinstance(activations, (str, Activation)):
        activations = [activations] * len(widths)
    if len(activations) != len(widths):
        raise ShapeError(f"{len(activations)} activations for {len(widths)} layers")
    layers = []
    n_in = int(input_width)
    for i, (n_out, act) in enumerate(zip(widths, activations)):
        spec = InitSpec(scheme=scheme, n_in=n_in, n_out=n_out, seed=seed ^ (i + 1))
        w = init_weights(spec, n_out, n_in)
        if has_bias:
            w = np.concatenate([w, np.zeros((n_out, 1), dtype=np.complex128)], axis=1)
        layers.append(Layer(weights=w, activation=parse_activation(act), has_bias=has_bias))
        n_in = n_out
    return Network(layers=layers, mode=mode, output_map=output_map)

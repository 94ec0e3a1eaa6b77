"""Complex activation functions and their analytic Wirtinger partials.

Each activation knows three things: its value, the pair
(dX/dV, dX/dVbar) consumed by backpropagation, and the distance from a
point to its nearest non-differentiable point (used by the gradient
checker to stay away from kinks).  All of them accept scalars or numpy
arrays and are elementwise.

Naming follows the usual catalog: componentwise "split" maps in
rectangular (type_a) or polar (type_b) coordinates, the crelu / zrelu /
modrelu / cardioid rectifier family, unit-circle (phasor) activations,
and the entire complex tanh.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .errors import NonDifferentiableActivationError, ParseError

_TAU = 2.0 * math.pi


# ---------------------------------------------------------------------------
# real component nonlinearities (value, derivative)

def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _dsigmoid(x):
    s = _sigmoid(x)
    return s * (1.0 - s)


def _dtanh(x):
    t = np.tanh(x)
    return 1.0 - t * t


def _relu(x):
    return np.maximum(x, 0.0)


def _drelu(x):
    # derivative 0 on the flat side of the kink
    return np.where(x > 0.0, 1.0, 0.0)


def _ident(x):
    return np.asarray(x, dtype=float)


def _dident(x):
    return np.ones_like(np.asarray(x, dtype=float))


REAL_FNS = {
    "sigmoid": (_sigmoid, _dsigmoid),
    "tanh": (np.tanh, _dtanh),
    "relu": (_relu, _drelu),
    "identity": (_ident, _dident),
}


def _real_fn(name):
    try:
        return REAL_FNS[name]
    except KeyError:
        raise ParseError(f"unknown real component function {name!r}; "
                         f"choose from {sorted(REAL_FNS)}") from None


# ---------------------------------------------------------------------------

def _unwrap(value, scalar_in):
    return complex(value) if scalar_in else value


class Activation:
    """Base class; subclasses implement _apply and _partials on arrays."""

    name = ""
    holomorphic = False

    def __call__(self, z):
        za = np.asarray(z, dtype=np.complex128)
        out = self._apply(za)
        return _unwrap(out, np.ndim(z) == 0)

    def partials(self, z):
        """(dX/dV, dX/dVbar) at z; one-sided convention at kinks."""
        za = np.asarray(z, dtype=np.complex128)
        dz, dzbar = self._partials(za)
        scalar = np.ndim(z) == 0
        return _unwrap(dz, scalar), _unwrap(dzbar, scalar)

    def kink_distance(self, z):
        """Lower bound on the distance to the nearest non-smooth point."""
        za = np.asarray(z, dtype=np.complex128)
        return np.full(za.shape, np.inf)

    def _apply(self, z):
        raise NotImplementedError

    def _partials(self, z):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Activation) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r})"


class Identity(Activation):
    name = "identity"
    holomorphic = True

    def _apply(self, z):
        return z

    def _partials(self, z):
        one = np.ones_like(z)
        return one, np.zeros_like(z)


class ComplexTanh(Activation):
    """tanh of the complex argument; holomorphic, poles at i(pi/2 + k pi)."""

    name = "complex_tanh"
    holomorphic = True

    def _apply(self, z):
        return np.tanh(z)

    def _partials(self, z):
        t = np.tanh(z)
        return 1.0 - t * t, np.zeros_like(z)

    def kink_distance(self, z):
        # distance to the nearest pole on the imaginary axis
        y = z.imag
        k = np.round((y - math.pi / 2.0) / math.pi)
        return np.hypot(z.real, y - (math.pi / 2.0 + k * math.pi))


class TypeA(Activation):
    """Rectangular split: f(z) = f_re(Re z) + i f_im(Im z)."""

    def __init__(self, re_fn: str = "tanh", im_fn: str | None = None):
        self.re_name = re_fn
        self.im_name = re_fn if im_fn is None else im_fn
        self._fre, self._dfre = _real_fn(self.re_name)
        self._fim, self._dfim = _real_fn(self.im_name)

    @property
    def name(self):
        return f"type_a({self.re_name},{self.im_name})"

    def _apply(self, z):
        return self._fre(z.real) + 1j * self._fim(z.imag)

    def _partials(self, z):
        gr = self._dfre(z.real)
        gi = self._dfim(z.imag)
        return (0.5 * (gr + gi)).astype(complex), (0.5 * (gr - gi)).astype(complex)

    def kink_distance(self, z):
        d = np.full(z.shape, np.inf)
        if self.re_name == "relu":
            d = np.minimum(d, np.abs(z.real))
        if self.im_name == "relu":
            d = np.minimum(d, np.abs(z.imag))
        return d


class CRelu(TypeA):
    """relu applied to the real and imaginary parts independently."""

    name = "crelu"

    def __init__(self):
        super().__init__("relu", "relu")


class TypeB(Activation):
    """Polar split: magnitude f_r(|z|) carried at phase f_phi(arg z).

    Reconstructed multiplicatively, f_r(|z|) * exp(i f_phi(arg z)), so the
    squashed magnitude really is the output modulus.  arg(0) is taken as 0,
    which makes the map total.
    """

    def __init__(self, mag_fn: str = "tanh", phase_fn: str = "identity"):
        self.mag_name = mag_fn
        self.phase_name = phase_fn
        self._fr, self._dfr = _real_fn(mag_fn)
        self._fp, self._dfp = _real_fn(phase_fn)

    @property
    def name(self):
        return f"type_b({self.mag_name},{self.phase_name})"

    def _apply(self, z):
        r = np.abs(z)
        theta = np.angle(z)  # angle(0) == 0
        return self._fr(r) * np.exp(1j * self._fp(theta))

    def _partials(self, z):
        r = np.abs(z)
        safe_r = np.where(r > 0.0, r, 1.0)
        theta = np.angle(z)
        m = self._fr(r)
        mp = self._dfr(r)
        pp = self._dfp(theta)
        phase = self._fp(theta)
        dz = 0.5 * np.exp(1j * (phase - theta)) * (mp + pp * m / safe_r)
        dzbar = 0.5 * np.exp(1j * (phase + theta)) * (mp - pp * m / safe_r)
        zero = r == 0.0
        return np.where(zero, 0.0, dz), np.where(zero, 0.0, dzbar)

    def kink_distance(self, z):
        # the phase is singular at the origin
        return np.abs(z)


class ZRelu(Activation):
    """Pass z through on the (closed) first quadrant, zero elsewhere."""

    name = "zrelu"

    def _apply(self, z):
        keep = (z.real >= 0.0) & (z.imag >= 0.0)
        return np.where(keep, z, 0.0)

    def _partials(self, z):
        inside = (z.real > 0.0) & (z.imag > 0.0)
        dz = np.where(inside, 1.0 + 0.0j, 0.0 + 0.0j)
        return dz, np.zeros_like(z)

    def kink_distance(self, z):
        return np.minimum(np.abs(z.real), np.abs(z.imag))


class ModRelu(Activation):
    """Phase-preserving magnitude threshold: relu(|z| + b) * z / |z|.

    b < 0 carves a dead disc of radius |b| around the origin.
    """

    def __init__(self, b: float):
        self.b = float(b)
        if not math.isfinite(self.b):
            raise ParseError(f"modrelu radius must be finite, got {b!r}")

    @property
    def name(self):
        return f"modrelu(b={self.b!r})"

    def _apply(self, z):
        r = np.abs(z)
        safe_r = np.where(r > 0.0, r, 1.0)
        out = _relu(r + self.b) * z / safe_r
        return np.where(r > 0.0, out, 0.0)

    def _partials(self, z):
        r = np.abs(z)
        safe_r = np.where(r > 0.0, r, 1.0)
        active = (r + self.b > 0.0) & (r > 0.0)
        # on the active set f = z + b z/|z|
        dz = np.where(active, 1.0 + self.b / (2.0 * safe_r), 0.0)
        dzbar = np.where(active, -self.b * z * z / (2.0 * safe_r**3), 0.0)
        return dz.astype(complex), dzbar

    def kink_distance(self, z):
        r = np.abs(z)
        if self.b < 0.0:
            return np.abs(r + self.b)
        return r


class Cardioid(Activation):
    """Phase-gated scaling: (1 + cos(arg z)) z / 2.

    Passes the positive real axis untouched and annihilates the negative
    one, preserving the phase everywhere.
    """

    name = "cardioid"

    def _apply(self, z):
        return 0.5 * (1.0 + np.cos(np.angle(z))) * z

    def _partials(self, z):
        theta = np.angle(z)
        dz = 0.5 * (1.0 + np.cos(theta)) + 0.25j * np.sin(theta)
        dzbar = -0.25j * np.sin(theta) * np.exp(2j * theta)
        return dz, dzbar

    def kink_distance(self, z):
        return np.abs(z)


class MVNContinuous(Activation):
    """Project the weighted sum onto the unit circle: z / |z| (0 stays 0)."""

    name = "mvn"

    def _apply(self, z):
        r = np.abs(z)
        safe_r = np.where(r > 0.0, r, 1.0)
        return np.where(r > 0.0, z / safe_r, 0.0)

    def _partials(self, z):
        r = np.abs(z)
        safe_r = np.where(r > 0.0, r, 1.0)
        dz = np.where(r > 0.0, 1.0 / (2.0 * safe_r), 0.0).astype(complex)
        dzbar = np.where(r > 0.0, -z * z / (2.0 * safe_r**3), 0.0)
        return dz, dzbar

    def kink_distance(self, z):
        return np.abs(z)


class MVNDiscrete(Activation):
    """Quantize the phase to one of k roots of unity.

    Sector j covers arguments in [2 pi j / k, 2 pi (j+1) / k); the output
    is exp(2 pi i j / k).  Piecewise constant, so it has no Wirtinger
    partials and is trained by the error-correction rule instead.
    """

    def __init__(self, k: int):
        self.k = int(k)
        if self.k < 2:
            raise ParseError(f"mvn sector count must be >= 2, got {k!r}")

    @property
    def name(self):
        return f"mvn(k={self.k})"

    def sector(self, z):
        """Sector index in [0, k) of each argument (arg(0) counts as 0)."""
        za = np.asarray(z, dtype=np.complex128)
        theta = np.mod(np.angle(za), _TAU)
        j = np.floor(theta * self.k / _TAU).astype(int)
        j = np.clip(j, 0, self.k - 1)
        return int(j) if np.ndim(z) == 0 else j

    def _apply(self, z):
        j = np.asarray(self.sector(z))
        return np.exp(2j * math.pi * j / self.k)

    def _partials(self, z):
        raise NonDifferentiableActivationError(
            f"{self.name} is piecewise constant and has no Wirtinger partials"
        )

    def kink_distance(self, z):
        return np.zeros(z.shape)


# ---------------------------------------------------------------------------
# canonical names

_BARE = {
    "identity": Identity,
    "complex_tanh": ComplexTanh,
    "crelu": CRelu,
    "zrelu": ZRelu,
    "cardioid": Cardioid,
    "mvn": MVNContinuous,
}

_CALL_RE = re.compile(r"^([a-z_]+)\((.*)\)$")


def parse_activation(name) -> Activation:
    """Turn a canonical text name into an Activation.

    Examples: "crelu", "modrelu(b=-1.0)", "mvn(k=4)", "type_b(tanh,identity)".
    """
    if isinstance(name, Activation):
        return name
    text = str(name).strip().lower()
    if text in _BARE:
        return _BARE[text]()
    m = _CALL_RE.match(text)
    if not m:
        raise ParseError(f"unknown activation {name!r}")
    head, args = m.group(1), [a.strip() for a in m.group(2).split(",")]
    try:
        if head == "type_a" and len(args) == 2:
            return TypeA(args[0], args[1])
        if head == "type_b" and len(args) == 2:
            return TypeB(args[0], args[1])
        if head == "modrelu" and len(args) == 1:
            return ModRelu(float(args[0].removeprefix("b="))
                           )
        if head == "mvn" and len(args) == 1:
            return MVNDiscrete(int(args[0].removeprefix("k=")))
    except ValueError as exc:
        raise ParseError(f"bad activation argument in {name!r}: {exc}") from None
    raise ParseError(f"unknown activation {name!r}")


# ---------------------------------------------------------------------------
# output-layer maps to the real domain

OUTPUT_MAPS = ("abs", "sqdiff", "softmax_abs", "softmax_avg", "cast_labels")


def softmax(a):
    a = np.asarray(a, dtype=float)
    shifted = np.exp(a - np.max(a))
    return shifted / np.sum(shifted)


def output_map(kind: str, v):
    """Map a complex output vector into the real domain.

    "cast_labels" is the inverse-direction helper: it lifts real labels c
    to the complex targets c + ic.
    """
    if kind == "cast_labels":
        r = np.asarray(v, dtype=float)
        return r + 1j * r
    v = np.asarray(v, dtype=np.complex128)
    if v.size < 1:
        raise ParseError("output map needs a nonempty vector")
    if kind == "abs":
        return np.abs(v)
    if kind == "sqdiff":
        return (v.real - v.imag) ** 2
    if kind == "softmax_abs":
        return softmax(np.abs(v))
    if kind == "softmax_avg":
        return softmax((v.real + v.imag) / 2.0)
    raise ParseError(f"unknown output map {kind!r}")


def output_map_pullback(kind: str, v, grad_m):
    """dE/dz of each output given dE/dm on the mapped real vector.

    Returns the holomorphic half of the pair; the conjugate half is its
    conjugate because E is real.
    """
    v = np.asarray(v, dtype=np.complex128)
    grad_m = np.asarray(grad_m, dtype=float)
    if kind == "abs":
        r = np.abs(v)
        safe_r = np.where(r > 0.0, r, 1.0)
        return np.where(r > 0.0, grad_m * np.conj(v) / (2.0 * safe_r), 0.0)
    if kind == "sqdiff":
        return grad_m * (v.real - v.imag) * (1.0 + 1j)
    if kind == "softmax_abs":
        p = softmax(np.abs(v))
        g = p * (grad_m - np.dot(grad_m, p))
        r = np.abs(v)
        safe_r = np.where(r > 0.0, r, 1.0)
        return np.where(r > 0.0, g * np.conj(v) / (2.0 * safe_r), 0.0)
    if kind == "softmax_avg":
        p = softmax((v.real + v.imag) / 2.0)
        g = p * (grad_m - np.dot(grad_m, p))
        return g * (1.0 - 1j) / 4.0
    raise ParseError(f"output map {kind!r} has no real-target gradient")

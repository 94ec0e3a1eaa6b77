"""Losses on complex outputs and their Wirtinger derivatives.

Three kinds:

* "quadratic"  E = 1/2 sum |d_k - o_k|^2, magnitude error only.
* "log"        E = sum 1/2 [ (ln(r_d/r_o))^2 + wrap(phi_d - phi_o)^2 ],
               penalizing magnitude ratio and phase difference separately;
               the phase difference is wrapped to (-pi, pi].
* "ace"        averaged cross-entropy of the real and imaginary parts
               against real labels; expects components already mapped
               into (0, 1) by a per-part softmax.

Every partial pair returned here satisfies d_dzbar == conj(d_dz) exactly,
because the losses are real-valued and the conjugate entry is constructed
as the conjugate.
"""

from __future__ import annotations

import math

import numpy as np

from .activations import softmax
from .errors import DomainError, ShapeError

KINDS = ("quadratic", "log", "ace")

#: cross-entropy clamp keeping log() away from 0
CE_EPS = 1e-12


def _check(kind, o, d):
    if kind not in KINDS:
        raise ShapeError(f"unknown loss kind {kind!r}; choose from {KINDS}")
    o = np.asarray(o, dtype=np.complex128).ravel()
    d = np.asarray(d, dtype=np.complex128).ravel()
    if o.shape != d.shape:
        raise ShapeError(f"output/target length mismatch: {o.shape} vs {d.shape}")
    return o, d


def wrap_phase(delta):
    """Wrap a phase difference into the principal range (-pi, pi]."""
    return math.pi - np.mod(math.pi - np.asarray(delta, dtype=float), 2.0 * math.pi)


def _cross_entropy(p, t):
    return -float(np.sum(t * np.log(np.maximum(p, CE_EPS))))


def _log_terms(o, d):
    r_o = np.abs(o)
    r_d = np.abs(d)
    if np.any(r_o == 0.0) or np.any(r_d == 0.0):
        raise DomainError("log loss undefined at zero magnitude")
    a = np.log(r_d / r_o)
    b = wrap_phase(np.angle(d) - np.angle(o))
    return a, b


def loss(kind: str, o, d) -> float:
    """Scalar loss of predictions o against targets d."""
    o, d = _check(kind, o, d)
    if kind == "quadratic":
        e = d - o
        return 0.5 * float(np.sum(e.real**2 + e.imag**2))
    if kind == "log":
        a, b = _log_terms(o, d)
        return 0.5 * float(np.sum(a * a + b * b))
    # ace: labels ride in the real part of d
    t = d.real
    return 0.5 * (_cross_entropy(o.real, t) + _cross_entropy(o.imag, t))


def loss_partials(kind: str, o, d):
    """Per-output (dE/do, dE/dobar); the second is exactly conj of the first."""
    o, d = _check(kind, o, d)
    if kind == "quadratic":
        dz = -0.5 * np.conj(d - o)
    elif kind == "log":
        a, b = _log_terms(o, d)
        dz = (-a + 1j * b) / (2.0 * o)
    else:  # ace on already-softmaxed components
        t = d.real
        dedx = -0.5 * t / np.maximum(o.real, CE_EPS)
        dedy = -0.5 * t / np.maximum(o.imag, CE_EPS)
        dz = 0.5 * (dedx - 1j * dedy)
    return dz, np.conj(dz)


# ---------------------------------------------------------------------------
# the training pipeline for "ace": softmax each part of the raw network
# output, then cross-entropy each part against the labels.

def _softmax_parts(o):
    return softmax(o.real) + 1j * softmax(o.imag)


def pipeline_loss(kind: str, o, d) -> float:
    """Loss as seen by the trainer; "ace" includes its softmax head."""
    o, d = _check(kind, o, d)
    if kind == "ace":
        return loss("ace", _softmax_parts(o), d)
    return loss(kind, o, d)


def pipeline_loss_partials(kind: str, o, d):
    """Seed pair for backpropagation, heads included."""
    o, d = _check(kind, o, d)
    if kind != "ace":
        return loss_partials(kind, o, d)
    # softmax + cross-entropy collapses to (p - t) per part
    t = d.real
    total = float(np.sum(t))
    p = softmax(o.real)
    q = softmax(o.imag)
    dedx = 0.5 * (p * total - t)
    dedy = 0.5 * (q * total - t)
    dz = 0.5 * (dedx - 1j * dedy)
    return dz, np.conj(dz)

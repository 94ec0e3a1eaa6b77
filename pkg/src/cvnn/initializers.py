"""Complex weight initialization with the variance compromise 2/(n_in + n_out).

Two schemes:

* "polar": |w| drawn from a Rayleigh distribution with parameter
  sigma_r = 1/sqrt(n_in + n_out) (via the inverse CDF, so draws are
  reproducible), phase uniform on [0, pi).  Then E|w|^2 = 2 sigma_r^2.
* "rect": Re and Im i.i.d. uniform on +-sqrt(3)/sqrt(n_in + n_out), so
  each component has variance 1/(n_in + n_out) and their sum matches the
  same target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ShapeError
from .rng import Rng

SCHEMES = ("polar", "rect")


@dataclass(frozen=True)
class InitSpec:
    scheme: str
    n_in: int
    n_out: int
    seed: int = 0

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ParseError(f"unknown init scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.n_in < 1 or self.n_out < 1:
            raise ShapeError(f"fan-in/fan-out must be >= 1, got ({self.n_in}, {self.n_out})")

    @property
    def sigma_r(self) -> float:
        return 1.0 / math.sqrt(self.n_in + self.n_out)


def rng_stream(seed: int) -> Rng:
    """The deterministic generator all sampling goes through."""
    return Rng(seed)


def init_weights(spec: InitSpec, rows: int, cols: int) -> np.ndarray:
    """Draw a rows x cols complex matrix; identical spec, identical matrix."""
    if rows < 1 or cols < 1:
        raise ShapeError(f"weight shape must be positive, got ({rows}, {cols})")
    rng = rng_stream(spec.seed)
    n = rows * cols
    if spec.scheme == "polar":
        u = rng.random_array(n)
        mag = spec.sigma_r * np.sqrt(-2.0 * np.log1p(-u))
        phase = math.pi * rng.random_array(n)
        w = mag * np.exp(1j * phase)
    else:
        bound = math.sqrt(3.0) * spec.sigma_r
        re = rng.uniform_array(-bound, bound, n)
        im = rng.uniform_array(-bound, bound, n)
        w = re + 1j * im
    return w.reshape(rows, cols)

"""Wirtinger partial derivatives by central finite differences.

For f seen as a function of (x, y) with z = x + iy, the pair

    df/dz    = (df/dx - i df/dy) / 2
    df/dzbar = (df/dx + i df/dy) / 2

exists whenever f is differentiable as a map on R^2; holomorphic
functions are the special case df/dzbar = 0.  The finite-difference
versions here are the independent oracle against which every analytic
derivative in the library is checked, so this module must stay free of
any dependency on the modules it verifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import OracleEvaluationError

#: Central-difference step balancing truncation (O(h^2)) against round-off
#: at double precision.
DEFAULT_STEP = 1e-6


@dataclass(frozen=True)
class WirtingerPair:
    """The pair (df/dz, df/dzbar) at a point."""

    d_dz: complex
    d_dzbar: complex

    def conjugate_swap(self) -> "WirtingerPair":
        """Pair of conj(f): partials swap roles and conjugate."""
        return WirtingerPair(self.d_dzbar.conjugate(), self.d_dz.conjugate())


def _eval(f: Callable[[complex], complex], z: complex) -> complex:
    w = complex(f(z))
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise OracleEvaluationError(f"non-finite value {w!r} at stencil point {z!r}")
    return w


def wirtinger_partials_fd(
    f: Callable[[complex], complex], z: complex, h: float = DEFAULT_STEP
) -> WirtingerPair:
    """Estimate (df/dz, df/dzbar) at z with a 4-point central stencil."""
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    z = complex(z)
    dfdx = (_eval(f, z + h) - _eval(f, z - h)) / (2.0 * h)
    dfdy = (_eval(f, z + 1j * h) - _eval(f, z - 1j * h)) / (2.0 * h)
    return WirtingerPair(0.5 * (dfdx - 1j * dfdy), 0.5 * (dfdx + 1j * dfdy))


def gradient_from_pair(p: WirtingerPair) -> complex:
    """Steepest-ascent direction 2 df/dzbar of a real-valued f.

    For real f this equals df/dx + i df/dy, the natural complex gradient.
    """
    return 2.0 * p.d_dzbar


def cauchy_riemann_residual(
    f: Callable[[complex], complex], z: complex, h: float = DEFAULT_STEP
) -> float:
    """|u_x - v_y| + |u_y + v_x| at z; near 0 iff f is numerically holomorphic."""
    if h <= 0:
        raise ValueError(f"step must be positive, got {h}")
    z = complex(z)
    dfdx = (_eval(f, z + h) - _eval(f, z - h)) / (2.0 * h)
    dfdy = (_eval(f, z + 1j * h) - _eval(f, z - 1j * h)) / (2.0 * h)
    return abs(dfdx.real - dfdy.imag) + abs(dfdx.imag + dfdy.real)


def relative_error(a, b, floor: float = 1.0) -> float:
    """|a - b| scaled by max(floor, |a|, |b|).

    With the default floor this behaves like an absolute tolerance below
    unit scale and a relative one above it, which is the right yardstick
    for comparing analytic derivatives against finite differences whose
    absolute noise floor is ~1e-10.
    """
    a = complex(a)
    b = complex(b)
    return abs(a - b) / max(floor, abs(a), abs(b))

"""Input validation helpers shared by estimators, trainers, and the CLI."""

from __future__ import annotations

import numpy as np

from .errors import ShapeError


def as_complex_vector(v, name: str = "v") -> np.ndarray:
    """Coerce to a finite 1-D complex128 array."""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ShapeError(f"{name} must be nonempty")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ShapeError(f"{name} contains non-finite entries")
    return arr


def as_complex_matrix(x, name: str = "X") -> np.ndarray:
    """Coerce to a finite 2-D complex128 array; 1-D input becomes a column."""
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeError(f"{name} must be a nonempty 2-D array, got shape {np.shape(x)}")
    if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
        raise ShapeError(f"{name} contains non-finite entries")
    return arr


def check_same_length(a, b, names: str = "inputs/targets") -> None:
    if len(a) != len(b):
        raise ShapeError(f"{names} length mismatch: {len(a)} vs {len(b)}")


def as_real_labels(y, name: str = "y") -> np.ndarray:
    """Coerce to a finite 1-D float array of class labels."""
    arr = np.asarray(y, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ShapeError(f"{name} must be a nonempty 1-D array, got shape {np.shape(y)}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError(f"{name} contains non-finite entries")
    return arr

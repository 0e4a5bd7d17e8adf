"""Small input validation helpers used across the package."""

from __future__ import annotations

import numbers

import numpy as np

from .errors import ParameterError

SYMMETRY_TOL = 1e-12


def as_points(points, name: str = "points") -> np.ndarray:
    """Coerce to a 2-D float64 array of finite coordinates."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2:
        raise ParameterError(f"{name} must be a 2-D array, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ParameterError(f"{name} must be non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} contains non-finite coordinates")
    return arr


def as_square_matrix(M, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(M, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ParameterError(f"{name} must be square, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParameterError(f"{name} contains non-finite entries")
    return arr


def check_symmetric(M: np.ndarray, name: str = "matrix", tol: float = SYMMETRY_TOL) -> None:
    gap = float(np.max(np.abs(M - M.T))) if M.size else 0.0
    if gap > tol:
        raise ParameterError(f"{name} is not symmetric (max asymmetry {gap:.3e})")


def check_unit_diagonal(M: np.ndarray, name: str = "matrix", tol: float = SYMMETRY_TOL) -> None:
    if M.size and float(np.max(np.abs(np.diagonal(M) - 1.0))) > tol:
        raise ParameterError(f"{name} must have unit diagonal")


def check_scalar(value, name: str, *, low: float | None = None, high: float | None = None,
                 low_open: bool = False, high_open: bool = False) -> float:
    """Validate a real scalar against an interval; returns it as float."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ParameterError(f"{name} must be a real number, got {value!r}")
    x = float(value)
    if not np.isfinite(x):
        raise ParameterError(f"{name} must be finite, got {x!r}")
    if low is not None and (x <= low if low_open else x < low):
        raise ParameterError(f"{name} must be {'>' if low_open else '>='} {low}, got {x}")
    if high is not None and (x >= high if high_open else x > high):
        raise ParameterError(f"{name} must be {'<' if high_open else '<='} {high}, got {x}")
    return x


def check_int(value, name: str, *, low: int | None = None, high: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ParameterError(f"{name} must be an integer, got {value!r}")
    x = int(value)
    if low is not None and x < low:
        raise ParameterError(f"{name} must be >= {low}, got {x}")
    if high is not None and x > high:
        raise ParameterError(f"{name} must be <= {high}, got {x}")
    return x

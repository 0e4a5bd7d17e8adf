"""Markov-chain diagnostics for a kernel matrix.

The row-normalized kernel is a reversible transition matrix whose
stationary law is proportional to the kernel row sums.  Because P is
conjugate (via the square root of the row sums) to the symmetric
normalized operator, the two share eigenvalues, which makes the chain a
useful independent check on the spectral pipeline.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericalError, ParameterError
from .kernels import KernelMatrix
from .validation import as_square_matrix, check_int, check_unit_diagonal

STATIONARY_TOL = 1e-12
STATIONARY_MAX_STEPS = 10**5


def transition_matrix(kernel: KernelMatrix) -> np.ndarray:
    """Row-stochastic matrix P_ij = K_ij / sum_j K_ij.

    Uses raw row sums without any flooring; the unit diagonal of a
    Gaussian kernel keeps every row sum at least 1.
    """
    K = as_square_matrix(kernel.entries, "kernel")
    check_unit_diagonal(K, "kernel", tol=0.0)
    return K / K.sum(axis=1, keepdims=True)


def stationary_distribution(P: np.ndarray, *, tol: float = STATIONARY_TOL,
                            max_steps: int = STATIONARY_MAX_STEPS) -> np.ndarray:
    """Stationary law of P by power iteration from the uniform vector.

    Iterates pi <- pi P until the l1 update gap drops to `tol`.

    Raises
    ------
    NumericalError
        If the gap has not met `tol` after `max_steps` iterations (does
        not happen for strictly positive kernels of moderate size).
    """
    P = as_square_matrix(P, "P")
    rows = P.sum(axis=1)
    if np.any(np.abs(rows - 1.0) > 1e-9) or np.any(P < 0.0):
        raise ParameterError("P must be row-stochastic")
    n = P.shape[0]
    pi = np.full(n, 1.0 / n)
    for _ in range(max_steps):
        nxt = pi @ P
        nxt /= nxt.sum()
        gap = float(np.abs(nxt - pi).sum())
        pi = nxt
        if gap <= tol:
            return pi
    raise NumericalError(
        f"stationary distribution: no convergence within {max_steps} power steps "
        f"(last l1 gap {gap:.3e})"
    )


def diffusion_profile(P: np.ndarray, index: int, m: int) -> np.ndarray:
    """Row `index` of P^m, computed with m vector-matrix products.

    Only one row is needed, so no decomposition or matrix power is formed.
    """
    P = as_square_matrix(P, "P")
    n = P.shape[0]
    index = check_int(index, "index", low=0, high=n - 1)
    m = check_int(m, "m", low=1)
    v = np.zeros(n)
    v[index] = 1.0
    for _ in range(m):
        v = v @ P
    return v


def diffusion_operator(P: np.ndarray, m: int) -> np.ndarray:
    """All m-step profiles at once: P^m by binary exponentiation.

    Matches stacking :func:`diffusion_profile` over every start index but
    costs O(n^3 log m) instead of O(m n^2) per row.
    """
    P = as_square_matrix(P, "P")
    m = check_int(m, "m", low=1)
    result = np.eye(P.shape[0])
    base = P.copy()
    e = m
    while e:
        if e & 1:
            result = result @ base
        e >>= 1
        if e:
            base = base @ base
    return result


def tv_matrix(profiles: np.ndarray) -> np.ndarray:
    """Total-variation distance between every pair of profile rows."""
    rows = np.asarray(profiles, dtype=np.float64)
    if rows.ndim != 2:
        raise ParameterError("profiles must be a 2-D array of distributions")
    n = rows.shape[0]
    out = np.empty((n, n))
    block = max(1, (1 << 23) // max(1, rows.size))
    for start in range(0, n, block):
        stop = min(n, start + block)
        out[start:stop] = 0.5 * np.abs(rows[start:stop, None, :] - rows[None, :, :]).sum(axis=2)
    return out

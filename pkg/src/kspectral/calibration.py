"""Bandwidth calibration and power-step selection.

The Gaussian bandwidth beta is chosen so that the empirical mean of the
squared kernel over distinct ordered pairs hits a small target h.  The
mean is 1 at beta = 0, strictly decreasing, and tends to the fraction of
duplicate pairs as beta grows, so a bracketed bisection always applies
whenever the target is reachable at all.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import CalibrationError, DegenerateSpectrumError, ParameterError
from .validation import as_square_matrix, check_int, check_scalar

DEFAULT_TARGET = 0.005
REL_TOLERANCE = 1e-9
MAX_BISECTIONS = 200
EIGENVALUE_FLOOR = 1e-12
MAX_POWER_STEPS = 10**6


@dataclass
class CalibrationResult:
    """Outcome of a bandwidth search."""

    beta: float
    achieved: float
    iterations: int
    trace: list[tuple[float, float, float]] = field(default_factory=list)


def mean_squared_kernel(d2: np.ndarray, beta: float) -> float:
    """Mean of exp(-2*beta*d2[i][j]) over the n(n-1) ordered pairs i != j.

    Equals 1 exactly at beta = 0 and decreases monotonically toward the
    fraction of coincident pairs.
    """
    d2 = as_square_matrix(d2, "d2")
    n = d2.shape[0]
    if n < 2:
        raise ParameterError("d2 must describe at least two points")
    beta = check_scalar(beta, "beta", low=0.0)
    # diagonal terms are exp(0) = 1 each; drop them from the total
    total = float(np.sum(np.exp(-2.0 * beta * d2))) - n
    return total / (n * (n - 1))


def calibrate_bandwidth(d2: np.ndarray, target: float = DEFAULT_TARGET, *,
                        rel_tol: float = REL_TOLERANCE,
                        max_steps: int = MAX_BISECTIONS,
                        collect_trace: bool = False) -> CalibrationResult:
    """Solve mean_squared_kernel(d2, beta) = target for beta.

    Parameters
    ----------
    d2 : ndarray
        Squared distance matrix (symmetric, zero diagonal).
    target : float
        Requested pair mean, strictly between 0 and 1.
    rel_tol : float
        Convergence tolerance relative to the target.
    max_steps : int
        Bisection step budget after bracketing.
    collect_trace : bool
        Record (beta_lo, beta_hi, mean) after every bisection step.

    Returns
    -------
    CalibrationResult
        With ``abs(achieved - target) <= rel_tol * target``.

    Raises
    ------
    CalibrationError
        When the limiting mean (the coincident-pair fraction) already
        meets or exceeds the target, or the step budget is exhausted.
    """
    d2 = as_square_matrix(d2, "d2")
    n = d2.shape[0]
    if n < 2:
        raise ParameterError("calibration needs at least two points")
    target = check_scalar(target, "h", low=0.0, high=1.0, low_open=True, high_open=True)

    # the infimum over beta is the mass of exactly coincident pairs
    zero_pairs = int(np.count_nonzero(d2 == 0.0)) - n
    limit = zero_pairs / (n * (n - 1))
    if limit >= target:
        raise CalibrationError(
            "bandwidth calibration: target h unreachable "
            f"(limiting pair mean {format(limit, '.17g')} >= h = {format(target, '.17g')})"
        )

    tol = rel_tol * target
    lo, hi = 0.0, 1.0
    while mean_squared_kernel(d2, hi) >= target:
        lo = hi
        hi *= 2.0
        if hi > 1e308:
            raise CalibrationError(
                "bandwidth calibration: bracket expansion overflowed before "
                "the pair mean fell below the target"
            )

    trace: list[tuple[float, float, float]] = []
    for step in range(1, max_steps + 1):
        beta = 0.5 * (lo + hi)
        value = mean_squared_kernel(d2, beta)
        if collect_trace:
            trace.append((lo, hi, value))
        if abs(value - target) <= tol:
            return CalibrationResult(beta=beta, achieved=value, iterations=step, trace=trace)
        if value > target:
            lo = beta
        else:
            hi = beta
    raise CalibrationError(
        f"bandwidth calibration: no convergence within {max_steps} bisection steps"
    )


def select_power(eigenvalues: np.ndarray, p: int, zeta: float = 0.01, *,
                 floor: float = EIGENVALUE_FLOOR, cap: int = MAX_POWER_STEPS) -> int:
    """Number of power steps needed to shrink the p-th eigenvalue below zeta.

    Returns ``max(1, ceil(ln(zeta) / ln(lam_p / lam_1)))`` where lam_1 and
    lam_p come from the descending `eigenvalues`.  A lam_p below `floor`
    (including any negative value) is replaced by `floor`.  Results above
    `cap` are clamped to it with a warning.

    Raises
    ------
    DegenerateSpectrumError
        If the log-ratio is zero (lam_p == lam_1) so no finite power can
        separate them, or the top eigenvalue is not positive.
    """
    eigs = np.asarray(eigenvalues, dtype=np.float64)
    if eigs.ndim != 1 or eigs.size == 0:
        raise ParameterError("eigenvalues must be a non-empty 1-D array")
    if np.any(np.diff(eigs) > 0):
        raise ParameterError("eigenvalues must be sorted in descending order")
    p = check_int(p, "p", low=1, high=eigs.size)
    zeta = check_scalar(zeta, "zeta", low=0.0, high=1.0, low_open=True, high_open=True)
    check_scalar(floor, "floor", low=0.0, low_open=True)

    lam1 = float(eigs[0])
    if lam1 <= 0.0:
        raise DegenerateSpectrumError(
            "power selection: top eigenvalue must be positive, got "
            f"{format(lam1, '.17g')}"
        )
    lamp = float(eigs[p - 1])
    if lamp < floor:
        lamp = floor
    if lamp >= lam1:
        raise DegenerateSpectrumError(
            "power selection: degenerate spectrum, the p-th eigenvalue equals the "
            "top one; increase the bandwidth target or decrease p"
        )
    m = max(1, math.ceil(math.log(zeta) / math.log(lamp / lam1)))
    if m > cap:
        warnings.warn(
            f"power step count {m} exceeds the cap {cap}; using the cap",
            RuntimeWarning,
            stacklevel=2,
        )
        m = cap
    return m

"""Degree normalization, eigendecomposition, powering, and renormalized affinities.

The normalized operator M has entries K_ij / (n * sqrt(D_i * D_j)) where
D_i is the mean kernel row (floored at sigma).  With no floored degree
the vector sqrt(D) satisfies M sqrt(D) = sqrt(D), so the top eigenvalue
is exactly 1 and matrix powers of M stay bounded: raising M to a power m
suppresses every eigendirection by (lam / lam_1)^m while the leading
block structure survives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ParameterError, VanishingSelfAffinityError
from .kernels import KernelMatrix
from .validation import (
    as_square_matrix,
    check_int,
    check_scalar,
    check_symmetric,
    check_unit_diagonal,
)

DEFAULT_SIGMA = 0.001
DIAG_FLOOR = 1e-300


@dataclass
class DegreeVector:
    """Mean kernel rows after flooring, with a mask of floored entries."""

    values: np.ndarray
    clamped: np.ndarray
    sigma: float


@dataclass
class SpectralDecomposition:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


@dataclass
class AffinityProfile:
    """Renormalized powered affinities C and the power m that produced them."""

    entries: np.ndarray
    m: int


def degrees(kernel: KernelMatrix, sigma: float = DEFAULT_SIGMA) -> DegreeVector:
    """Mean kernel value per row, floored from below at sigma."""
    K = as_square_matrix(kernel.entries, "kernel")
    sigma = check_scalar(sigma, "sigma", low=0.0, low_open=True)
    means = K.mean(axis=1)
    clamped = means < sigma
    return DegreeVector(values=np.maximum(means, sigma), clamped=clamped, sigma=sigma)


def normalized_operator(kernel: KernelMatrix, deg: DegreeVector) -> np.ndarray:
    """Symmetric operator M with entries K_ij / (n * sqrt(D_i * D_j)).

    The single 1/n factor makes the unclamped top eigenvalue exactly 1.
    Symmetry is exact because the scaling matrix outer(s, s) is.
    """
    K = as_square_matrix(kernel.entries, "kernel")
    check_symmetric(K, "kernel", tol=0.0)
    D = np.asarray(deg.values, dtype=np.float64)
    if D.shape != (K.shape[0],):
        raise ParameterError("degree vector length must match the kernel size")
    if np.any(D <= 0.0):
        raise ParameterError("degrees must be strictly positive")
    s = 1.0 / np.sqrt(D)
    return (K * np.outer(s, s)) / K.shape[0]


def eig_sym(M: np.ndarray) -> SpectralDecomposition:
    """Full eigendecomposition of a symmetric matrix, eigenvalues descending.

    Raises
    ------
    ParameterError
        If the input is asymmetric beyond 1e-12.
    NumericalError
        If the underlying solver fails to converge.
    """
    M = as_square_matrix(M, "M")
    check_symmetric(M, "M")
    try:
        lam, vec = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    order = slice(None, None, -1)
    return SpectralDecomposition(
        eigenvalues=np.ascontiguousarray(lam[order]),
        eigenvectors=np.ascontiguousarray(vec[:, order]),
    )


def matrix_power(dec: SpectralDecomposition, m: int) -> np.ndarray:
    """M^m assembled from the eigendecomposition as V diag(lam^m) V^T.

    Negative eigenvalues (roundoff artifacts of a PSD input) are clipped
    to zero before exponentiation, so arbitrarily large powers stay
    finite.  The result is exactly symmetric: the upper triangle is
    computed once and mirrored.
    """
    m = check_int(m, "m", low=1)
    lam = np.clip(dec.eigenvalues, 0.0, None) ** m
    raw = (dec.eigenvectors * lam) @ dec.eigenvectors.T
    upper = np.triu(raw)
    return upper + np.triu(raw, 1).T


def affinity_profile(Mm: np.ndarray, m: int) -> AffinityProfile:
    """Diagonal-renormalized powered affinities C_ij = Mm_ij / sqrt(Mm_ii * Mm_jj).

    The diagonal is set to exactly 1.  Off-diagonal entries compare the
    m-step neighborhoods of two points and concentrate near 1 within a
    cluster and near 0 across clusters once m is large enough.

    Raises
    ------
    VanishingSelfAffinityError
        If some diagonal entry of Mm lies below 1e-300, naming the first
        offending index; renormalization would be meaningless there.
    """
    Mm = as_square_matrix(Mm, "Mm")
    m = check_int(m, "m", low=1)
    diag = np.diagonal(Mm).copy()
    bad = np.flatnonzero(diag < DIAG_FLOOR)
    if bad.size:
        raise VanishingSelfAffinityError(
            f"affinity renormalization: vanishing self-affinity at index {int(bad[0])} "
            f"(diagonal entry {format(float(diag[bad[0]]), '.17g')} below {DIAG_FLOOR:g}); "
            "the power m may be too large for this spectrum"
        )
    s = 1.0 / np.sqrt(diag)
    C = Mm * np.outer(s, s)
    np.fill_diagonal(C, 1.0)
    return AffinityProfile(entries=C, m=m)


def embedding(dec: SpectralDecomposition, m: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-normalized coordinates from the top-k columns of V diag(lam^(m/2)).

    The Gram matrix of the full-width (k = n) output reproduces the
    affinity profile, so points of one cluster land near one unit vector
    and different clusters land near mutually orthogonal ones.

    Returns
    -------
    coords : ndarray of shape (n, k)
        Unit rows, except rows whose pre-normalization norm underflowed.
    flagged : ndarray of bool, shape (n,)
        True where the squared row norm fell below the 1e-300 floor; such
        rows are returned unnormalized.
    """
    m = check_int(m, "m", low=1)
    k = check_int(k, "k", low=1, high=dec.n)
    lam = np.clip(dec.eigenvalues[:k], 0.0, None) ** (m / 2.0)
    coords = dec.eigenvectors[:, :k] * lam
    sq_norms = np.einsum("ij,ij->i", coords, coords)
    flagged = sq_norms < DIAG_FLOOR
    safe = np.where(flagged, 1.0, np.sqrt(sq_norms))
    coords = coords / safe[:, None]
    return coords, flagged


def spectrum_report(dec: SpectralDecomposition, m: int, p: int) -> np.ndarray:
    """Table of the leading spectra before and after powering.

    Row i (i < min(p, n)) holds the i-th eigenvalue of M, its m-th power
    (after clipping negatives to zero), and the i-th eigenvalue of C / n,
    the covariance spectrum of the final unit-row representation.
    """
    m = check_int(m, "m", low=1)
    p = check_int(p, "p", low=1)
    rows = min(p, dec.n)
    lam = dec.eigenvalues
    powered = np.clip(lam, 0.0, None) ** m
    profile = affinity_profile(matrix_power(dec, m), m)
    cov = eig_sym(profile.entries / dec.n).eigenvalues
    return np.column_stack((lam[:rows], powered[:rows], cov[:rows]))


def check_kernel_sanity(kernel: KernelMatrix) -> None:
    """Validate the basic kernel invariants (symmetry, unit diagonal, range)."""
    K = as_square_matrix(kernel.entries, "kernel")
    check_symmetric(K, "kernel", tol=0.0)
    check_unit_diagonal(K, "kernel", tol=0.0)
    if K.size and (float(K.min()) < 0.0 or float(K.max()) > 1.0):
        raise ParameterError("kernel entries must lie in [0, 1]")

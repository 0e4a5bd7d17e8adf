"""Greedy threshold clustering and the end-to-end pipeline.

The cluster count is not an input: seeds absorb every point whose
renormalized powered affinity clears the threshold s, and the number of
rounds needed to exhaust the point set is the estimate c.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .calibration import (
    CalibrationResult,
    MAX_POWER_STEPS,
    calibrate_bandwidth,
    select_power,
)
from .data import squared_distances
from .errors import ParameterError
from .kernels import KernelMatrix, compose_kernel, gaussian_kernel
from .spectral import (
    AffinityProfile,
    DEFAULT_SIGMA,
    DegreeVector,
    SpectralDecomposition,
    affinity_profile,
    degrees,
    eig_sym,
    matrix_power,
    normalized_operator,
)
from .validation import as_points, as_square_matrix, check_int, check_scalar, check_symmetric

STRATEGIES = ("lowest-index", "random")
DEFAULT_THRESHOLD = 0.1
MAX_COMPOSE_LEVELS = 2


@dataclass
class Clustering:
    """Labels in seed-discovery order plus the seeds and parameters used."""

    labels: np.ndarray
    c: int
    seeds: np.ndarray
    params: dict


def greedy_cluster(C: np.ndarray, s: float = DEFAULT_THRESHOLD, *,
                   strategy: str = "lowest-index", seed=None) -> Clustering:
    """Partition indices by repeatedly absorbing high-affinity points.

    Each round picks an unassigned seed (the smallest index, or a
    uniformly random unassigned one under the "random" strategy) and
    assigns to it every still-unassigned j with ``C[seed, j] >= s``; the
    inclusive comparison means boundary values join.  The seed itself
    always joins because the diagonal of C is 1.  Labels follow discovery
    order, so the output is deterministic given the strategy and seed.
    """
    C = as_square_matrix(C, "C")
    check_symmetric(C, "C")
    s = check_scalar(s, "s", low=0.0, high=1.0, low_open=True, high_open=True)
    if strategy not in STRATEGIES:
        raise ParameterError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    rng = np.random.default_rng(seed) if strategy == "random" else None

    n = C.shape[0]
    labels = np.full(n, -1, dtype=np.int64)
    seeds = []
    c = 0
    while True:
        unassigned = np.flatnonzero(labels < 0)
        if unassigned.size == 0:
            break
        pick = int(unassigned[0]) if rng is None else int(rng.choice(unassigned))
        members = unassigned[C[pick, unassigned] >= s]
        labels[members] = c
        seeds.append(pick)
        c += 1
    return Clustering(
        labels=labels,
        c=c,
        seeds=np.array(seeds, dtype=np.int64),
        params={"s": s, "strategy": strategy, "seed": seed},
    )


@dataclass
class PipelineConfig:
    """Run parameters; the defaults reproduce the reference setup."""

    h: float | Sequence[float] = 0.005
    sigma: float = DEFAULT_SIGMA
    zeta: float = 0.01
    p: int = 7
    s: float = DEFAULT_THRESHOLD
    strategy: str = "lowest-index"
    seed: int | None = None
    compose_levels: int = 0

    def targets(self) -> tuple[float, ...]:
        """Per-level calibration targets, one per kernel level."""
        levels = self.compose_levels + 1
        if np.ndim(self.h) == 0:
            return tuple([float(self.h)] * levels)
        targets = tuple(float(v) for v in self.h)
        if len(targets) != levels:
            raise ParameterError(
                f"h must be a scalar or give one target per kernel level "
                f"({levels} for compose_levels={self.compose_levels}), got {len(targets)}"
            )
        return targets


@dataclass
class PipelineResult:
    """Every intermediate artifact of a clustering run, for reporting."""

    clustering: Clustering
    profile: AffinityProfile
    decomposition: SpectralDecomposition
    calibrations: list[CalibrationResult]
    kernel: KernelMatrix
    degree: DegreeVector
    m: int
    warnings: list[str] = field(default_factory=list)


def cluster_pipeline(points, config: PipelineConfig | None = None) -> PipelineResult:
    """Full run: distances, kernel levels, spectrum, power, greedy labels.

    Parameters
    ----------
    points : array-like of shape (n, d)
        At least two points.
    config : PipelineConfig, optional
        Defaults apply when omitted.

    Notes
    -----
    Errors from the stages (unreachable calibration target, degenerate
    spectrum, vanishing self-affinity) propagate unchanged; their
    messages already name the failing stage.  Non-fatal conditions (a
    floored degree, a capped power count, more clusters than p) are
    collected as warning strings on the result.
    """
    cfg = config or PipelineConfig()
    X = as_points(points)
    if X.shape[0] < 2:
        raise ParameterError("clustering needs at least two points")
    check_int(cfg.p, "p", low=2)
    check_int(cfg.compose_levels, "compose_levels", low=0, high=MAX_COMPOSE_LEVELS)
    targets = cfg.targets()

    notes: list[str] = []
    d2 = squared_distances(X)
    calibration = calibrate_bandwidth(d2, targets[0])
    kernel = gaussian_kernel(d2, calibration.beta)
    calibrations = [calibration]
    for level_target in targets[1:]:
        kernel, calibration = compose_kernel(kernel, level_target)
        calibrations.append(calibration)

    deg = degrees(kernel, cfg.sigma)
    if np.any(deg.clamped):
        floored = np.flatnonzero(deg.clamped)
        notes.append(
            f"degrees: {floored.size} row mean(s) floored at sigma={cfg.sigma:g} "
            f"(first index {int(floored[0])})"
        )

    dec = eig_sym(normalized_operator(kernel, deg))
    p_eff = min(int(cfg.p), dec.n)
    m = select_power(dec.eigenvalues, p_eff, cfg.zeta)
    if m >= MAX_POWER_STEPS:
        notes.append(f"power selection: step count capped at {MAX_POWER_STEPS}")

    profile = affinity_profile(matrix_power(dec, m), m)
    clustering = greedy_cluster(profile.entries, cfg.s, strategy=cfg.strategy, seed=cfg.seed)
    clustering.params.update(
        beta=kernel.beta,
        m=m,
        p=int(cfg.p),
        h=targets[0] if len(targets) == 1 else list(targets),
        sigma=float(cfg.sigma),
        zeta=float(cfg.zeta),
        compose_levels=int(cfg.compose_levels),
    )
    if clustering.c > cfg.p:
        notes.append(
            f"clustering: estimated c={clustering.c} exceeds the expected bound p={cfg.p}"
        )
    return PipelineResult(
        clustering=clustering,
        profile=profile,
        decomposition=dec,
        calibrations=calibrations,
        kernel=kernel,
        degree=deg,
        m=m,
        warnings=notes,
    )

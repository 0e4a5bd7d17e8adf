"""Scikit-learn style estimator wrapping the clustering pipeline."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_array

from .cluster import PipelineConfig, cluster_pipeline
from .spectral import embedding


class KernelSpectralClustering(ClusterMixin, BaseEstimator):
    """Cluster points without fixing the number of clusters in advance.

    A Gaussian kernel bandwidth is calibrated so the mean squared kernel
    value over distinct pairs hits `h`; the degree-normalized operator is
    raised to an automatically chosen power until only the leading block
    structure survives; a greedy threshold pass over the renormalized
    affinities then yields both the labels and the cluster count.

    Parameters
    ----------
    h : float or sequence of float, default=0.005
        Calibration target per kernel level (scalar targets are shared).
    sigma : float, default=0.001
        Lower floor for the mean kernel degrees.
    zeta : float, default=0.01
        Decay target for the p-th eigenvalue under powering.
    p : int, default=7
        Upper estimate of the cluster count used to pick the power.
    s : float, default=0.1
        Affinity threshold of the greedy assignment, inclusive.
    strategy : {"lowest-index", "random"}, default="lowest-index"
        Seed-selection rule of the greedy pass.
    seed : int or None, default=None
        Seed for the "random" strategy.
    compose_levels : int, default=0
        Number of kernel compositions stacked on the base kernel (0-2).

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
        Cluster labels in seed-discovery order.
    n_clusters_ : int
        Estimated number of clusters.
    cluster_seeds_ : ndarray
        Index of the seed point of each cluster.
    beta_ : float
        Bandwidth of the final kernel level.
    m_ : int
        Power applied to the normalized operator.
    eigenvalues_ : ndarray of shape (n_samples,)
        Spectrum of the normalized operator, descending.
    affinity_matrix_ : ndarray of shape (n_samples, n_samples)
        Renormalized powered affinities used for the assignment.
    embedding_ : ndarray of shape (n_samples, n_clusters_)
        Row-normalized spectral coordinates.

    Examples
    --------
    >>> import numpy as np
    >>> rng = np.random.default_rng(0)
    >>> X = np.concatenate([rng.normal(c, 0.1, (40, 2)) for c in (0.0, 8.0)])
    >>> model = KernelSpectralClustering(h=0.1).fit(X)
    >>> model.n_clusters_
    2
    """

    def __init__(self, h=0.005, sigma=0.001, zeta=0.01, p=7, s=0.1,
                 strategy="lowest-index", seed=None, compose_levels=0):
        self.h = h
        self.sigma = sigma
        self.zeta = zeta
        self.p = p
        self.s = s
        self.strategy = strategy
        self.seed = seed
        self.compose_levels = compose_levels

    def fit(self, X, y=None):
        """Run the pipeline on X and store every derived artifact."""
        X = check_array(X, dtype=np.float64, ensure_min_samples=2)
        config = PipelineConfig(
            h=self.h,
            sigma=self.sigma,
            zeta=self.zeta,
            p=self.p,
            s=self.s,
            strategy=self.strategy,
            seed=self.seed,
            compose_levels=self.compose_levels,
        )
        run = cluster_pipeline(X, config)
        self.n_features_in_ = X.shape[1]
        self.labels_ = run.clustering.labels
        self.n_clusters_ = run.clustering.c
        self.cluster_seeds_ = run.clustering.seeds
        self.beta_ = run.kernel.beta
        self.m_ = run.m
        self.eigenvalues_ = run.decomposition.eigenvalues
        self.affinity_matrix_ = run.profile.entries
        coords, _ = embedding(run.decomposition, run.m, min(run.clustering.c, run.decomposition.n))
        self.embedding_ = coords
        self.calibration_ = run.calibrations[-1]
        self.warnings_ = list(run.warnings)
        return self

"""End-to-end subspace clustering pipelines.

Three paths are provided: the exact noise-free construction (full
selection, matrix power, connected components), the noisy multi-trial
median pipeline over random CUR approximations, and the rank-sweep
variant that picks the rank minimizing the Ncut value of the resulting
spectral partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import cluster as _cluster
from . import simgen
from .cluster import LabelVector
from .cur import cur_sample
from .linalg import as_matrix, pinv

BACKENDS = ("pcc", "spectral", "kmeans")


@dataclass(frozen=True)
class ProtoConfig:
    """Parameters of the noisy multi-trial median pipeline."""

    m_subspaces: int
    target_rank: int
    n_trials: int = 25
    rows_per_trial: int | None = None  # defaults to target_rank
    cols_per_trial: int | str = "all"
    backend: str = "pcc"
    seed: int = 0
    max_retries: int = 100

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if self.m_subspaces < 1:
            raise ValueError("m_subspaces must be >= 1")
        if self.target_rank < self.m_subspaces:
            raise ValueError(
                "target_rank must be >= m_subspaces (each subspace is nontrivial)"
            )
        rows = self.rows()
        if rows < self.target_rank:
            raise ValueError("rows_per_trial must be >= target_rank")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")

    def rows(self) -> int:
        return self.target_rank if self.rows_per_trial is None else self.rows_per_trial

    def cols(self, n: int) -> int:
        return n if self.cols_per_trial == "all" else int(self.cols_per_trial)


@dataclass(frozen=True)
class RcurConfig:
    """Parameters of the rank-sweep pipeline."""

    r_min: int
    r_max: int
    alpha: float
    n_trials: int = 50
    seed: int = 0
    max_retries: int = 100

    def __post_init__(self):
        if not 1 <= self.r_min <= self.r_max:
            raise ValueError(f"need 1 <= r_min <= r_max, got [{self.r_min}, {self.r_max}]")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")


@dataclass(frozen=True)
class RcurResult:
    labels: LabelVector
    r_best: int
    ncut_per_rank: list = field(default_factory=list)


def _run_backend(backend: str, sim: simgen.SimilarityMatrix, m: int, seed: int) -> LabelVector:
    if backend == "pcc":
        return _cluster.pcc_cluster(sim, m, seed)
    if backend == "spectral":
        return _cluster.spectral_cluster(sim, m, seed)
    if backend == "kmeans":
        return _cluster.kmeans(sim.entries, m, seed)
    raise ValueError(f"unknown backend {backend!r}")


def cluster_noise_free(w, d_max: int, kind: str = "absolute") -> LabelVector:
    """Exact clustering of noise-free union data.

    Uses the full selection (C = R = U = W), so Y = pinv(W) W; the
    similarity matrix is the d_max matrix power of its Gram matrix and
    the labels are its connected components.
    """
    w = as_matrix(w)
    y = pinv(w) @ w
    sim = simgen.similarity_noise_free(y, d_max, kind)
    return _cluster.connected_components(sim)


def proto_similarity(w, config: ProtoConfig) -> simgen.SimilarityMatrix:
    """Median of n_trials thresholded CUR similarity matrices of `w`."""
    w = as_matrix(w)
    m, n = w.shape
    if config.target_rank > min(m, n):
        raise ValueError("target_rank exceeds min(m, n)")
    trial_sims = []
    for i in range(config.n_trials):
        factors = cur_sample(
            w,
            s=config.rows(),
            k=config.cols(n),
            seed=config.seed + i,
            max_retries=config.max_retries,
            target_rank=config.target_rank,
        )
        y = simgen.coefficient_matrix(factors)
        y = simgen.threshold_volumetric(y, config.m_subspaces)
        xi = simgen.enforce_diagonal(y.T @ y)
        trial_sims.append(xi)
    return simgen.median_aggregate(trial_sims, provenance=f"proto(k={config.n_trials})")


def proto_cluster(w, config: ProtoConfig) -> LabelVector:
    """Noisy-path clustering: median similarity over random CUR trials.

    Each trial draws a random rank-sufficient selection, thresholds the
    coefficient matrix volumetrically, forms Y.T Y and pins its diagonal
    to 1; trials are aggregated by entrywise median and handed to the
    configured clustering back-end.  Deterministic given config.seed.
    """
    sim = proto_similarity(w, config)
    return _run_backend(config.backend, sim, config.m_subspaces, config.seed)


def rcur_cluster(w, m_subspaces: int, config: RcurConfig) -> RcurResult:
    """Rank-sweep clustering; keeps the rank minimizing the Ncut value.

    For each rank r in [r_min, r_max], runs n_trials CUR approximations
    with all columns and r rows (Y = pinv(R) R), normalizes the columns
    of Y, medians the Gram matrices, raises the result elementwise to
    alpha and clusters spectrally.  Ncut is evaluated on the powered
    similarity matrix actually fed to the spectral step; ties at the
    minimum go to the smaller rank.
    """
    w = as_matrix(w)
    m, n = w.shape
    if config.r_max > min(m, n):
        raise ValueError(f"r_max={config.r_max} exceeds min(m, n)={min(m, n)}")
    best = None
    ncut_per_rank = []
    for rank_index, r in enumerate(range(config.r_min, config.r_max + 1)):
        trial_sims = []
        for i in range(config.n_trials):
            factors = cur_sample(
                w,
                s=r,
                k=n,
                seed=config.seed + i + 1000 * rank_index,
                max_retries=config.max_retries,
                target_rank=r,
            )
            y = simgen.coefficient_matrix(factors)
            y = simgen.normalize_columns(y)
            trial_sims.append(y.T @ y)
        sim = simgen.median_aggregate(trial_sims, provenance=f"rcur(r={r})")
        powered = simgen.elementwise_power(sim, config.alpha)
        labels = _cluster.spectral_cluster(powered, m_subspaces, config.seed + 1000 * rank_index)
        ncut = _cluster.ncut_value(powered, labels)
        ncut_per_rank.append((r, ncut))
        if best is None or ncut < best[1]:
            best = (r, ncut, labels)
    return RcurResult(labels=best[2], r_best=best[0], ncut_per_rank=ncut_per_rank)

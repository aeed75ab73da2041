"""Clustering back-ends and evaluation metrics.

Provides Lloyd's k-means with k-means++ seeding and restarts, spectral
clustering on the symmetric normalized Laplacian, principal-coordinate
clustering (k-means on the order-M principal coordinates of the
similarity matrix), exact connected-components labeling, the Ncut value
of a partition, and the permutation-invariant clustering-error metric.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .linalg import BINARIZE_TOL, as_matrix, skinny_svd
from .simgen import SimilarityMatrix

_KMEANS_MAX_ITER = 300
_KMEANS_REL_TOL = 1e-8
_DEGREE_FLOOR = 1e-12


@dataclass(frozen=True)
class LabelVector:
    """Length-n integer cluster assignment in {0, ..., m_clusters-1}."""

    labels: np.ndarray
    m_clusters: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        if labels.ndim != 1 or labels.size == 0:
            raise ValueError("labels must be a nonempty 1-d integer array")
        if self.m_clusters < 1:
            raise ValueError("m_clusters must be >= 1")
        if labels.min() < 0 or labels.max() >= self.m_clusters:
            raise ValueError(
                f"labels must lie in [0, {self.m_clusters}), got range "
                f"[{labels.min()}, {labels.max()}]"
            )
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.labels.size


def _plus_plus_seed(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ initial centers: each next center drawn proportional to D^2."""
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = d2.sum()
        if total <= 0:
            centers[j] = points[rng.integers(n)]
        else:
            centers[j] = points[rng.choice(n, p=d2 / total)]
        d2 = np.minimum(d2, np.sum((points - centers[j]) ** 2, axis=1))
    return centers


def _lloyd(points: np.ndarray, centers: np.ndarray, k: int, history=None):
    """Lloyd iterations from the given centers; returns (labels, wcss).

    When `history` is a list, the per-iteration WCSS values are appended
    to it (the sequence is nonincreasing).
    """
    prev = np.inf
    for _ in range(_KMEANS_MAX_ITER):
        d2 = np.sum((points[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        labels = np.argmin(d2, axis=1)
        # repair empty clusters with the point farthest from its center
        for j in range(k):
            if not np.any(labels == j):
                assigned = d2[np.arange(points.shape[0]), labels]
                far = int(np.argmax(assigned))
                labels[far] = j
                d2[far, :] = np.inf
                d2[far, j] = 0.0
        for j in range(k):
            centers[j] = points[labels == j].mean(axis=0)
        wcss = float(np.sum((points - centers[labels]) ** 2))
        if history is not None:
            history.append(wcss)
        if wcss == 0.0 or (
            np.isfinite(prev) and prev - wcss <= _KMEANS_REL_TOL * max(prev, 1e-300)
        ):
            return labels, wcss
        prev = wcss
    return labels, wcss


def kmeans(points, m_clusters: int, seed: int, restarts: int = 20) -> LabelVector:
    """k-means on the rows of `points`, best of `restarts` runs by WCSS."""
    points = as_matrix(points)
    n = points.shape[0]
    if not 1 <= m_clusters <= n:
        raise ValueError(f"need 1 <= m_clusters <= n, got M={m_clusters}, n={n}")
    best_labels, best_wcss = None, np.inf
    for trial in range(restarts):
        rng = np.random.default_rng(seed + trial)
        centers = _plus_plus_seed(points, m_clusters, rng)
        labels, wcss = _lloyd(points, centers.copy(), m_clusters)
        if wcss < best_wcss:
            best_labels, best_wcss = labels, wcss
        if best_wcss == 0.0:
            break
    return LabelVector(labels=best_labels, m_clusters=m_clusters)


def spectral_cluster(sim: SimilarityMatrix, m_clusters: int, seed: int) -> LabelVector:
    """Spectral clustering with the symmetric normalized graph Laplacian.

    Operates directly on D^{-1/2} S D^{-1/2} and takes the eigenvectors of
    largest eigenvalue (equivalent to the smallest eigenvalues of L_sym);
    rows of the spectral embedding are unit-normalized before k-means.
    Self-loops are discarded first: they say nothing about the partition,
    and a pinned diagonal would otherwise dominate the degrees and wash
    out the embedding.
    """
    s = sim.entries.copy()
    np.fill_diagonal(s, 0.0)
    degrees = np.maximum(s.sum(axis=1), _DEGREE_FLOOR)
    d_isqrt = 1.0 / np.sqrt(degrees)
    normalized = d_isqrt[:, None] * s * d_isqrt[None, :]
    eigvals, eigvecs = np.linalg.eigh(0.5 * (normalized + normalized.T))
    embedding = eigvecs[:, -m_clusters:]
    row_norms = np.linalg.norm(embedding, axis=1)
    embedding = embedding / np.where(row_norms < 1e-14, 1.0, row_norms)[:, None]
    return kmeans(embedding, m_clusters, seed)


def pcc_cluster(sim: SimilarityMatrix, m_clusters: int, seed: int) -> LabelVector:
    """Principal-coordinate clustering: k-means on the order-M coordinates.

    Takes the skinny SVD of the similarity matrix of order M and clusters
    the n points given by the columns of Sigma_M V_M.T (one M-dimensional
    coordinate vector per data point).
    """
    triple = skinny_svd(sim.entries, m_clusters)
    coords = triple.right * triple.singulars  # n x M
    return kmeans(coords, m_clusters, seed)


def connected_components(sim: SimilarityMatrix) -> LabelVector:
    """Components of the graph with an edge wherever the entry is nonzero.

    Entries below BINARIZE_TOL * max|entry| count as zero; component ids
    are assigned in first-seen column order.
    """
    s = sim.entries
    n = s.shape[0]
    cutoff = BINARIZE_TOL * s.max() if s.size else 0.0
    adjacency = s > cutoff
    labels = np.full(n, -1, dtype=int)
    current = 0
    for start in range(n):
        if labels[start] != -1:
            continue
        stack = [start]
        labels[start] = current
        while stack:
            i = stack.pop()
            for j in np.nonzero(adjacency[i])[0]:
                if labels[j] == -1:
                    labels[j] = current
                    stack.append(j)
        current += 1
    return LabelVector(labels=labels, m_clusters=current)


def ncut_value(sim: SimilarityMatrix, labels: LabelVector) -> float:
    """Normalized-cut objective 0.5 * sum_i cut(A_i) / vol(A_i).

    Clusters with volume below 1e-12 contribute the worst-case penalty 1
    so that degenerate partitions never win an Ncut argmin.
    """
    s = sim.entries
    if labels.n != s.shape[0]:
        raise ValueError(
            f"labels length {labels.n} does not match similarity order {s.shape[0]}"
        )
    degrees = s.sum(axis=1)
    total = 0.0
    for c in range(labels.m_clusters):
        members = labels.labels == c
        vol = float(degrees[members].sum())
        if vol < 1e-12:
            total += 1.0
            continue
        cut = float(s[np.ix_(members, ~members)].sum())
        total += 0.5 * cut / vol
    return total


def clustering_error(predicted: LabelVector, truth: LabelVector) -> float:
    """Minimum-over-relabelings percentage of misassigned points.

    The optimal matching is found by exhaustive search over label
    permutations, so both label counts must be at most 8.
    """
    if predicted.n != truth.n:
        raise ValueError(
            f"label lengths differ: {predicted.n} vs {truth.n}"
        )
    n_ids = max(predicted.m_clusters, truth.m_clusters)
    if n_ids > 8:
        raise ValueError(f"permutation search supports at most 8 clusters, got {n_ids}")
    best = predicted.n + 1
    for perm in permutations(range(n_ids)):
        mapped = np.asarray(perm)[predicted.labels]
        best = min(best, int(np.sum(mapped != truth.labels)))
        if best == 0:
            break
    return 100.0 * best / predicted.n

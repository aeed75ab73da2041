"""Similarity-matrix construction from CUR coefficient matrices.

The coefficient matrix Y = pinv(U) R of a CUR factorization is block
diagonal (up to column permutation) for noise-free union-of-subspaces
data, so the Gram matrix Y.T Y raised to the largest subspace dimension
is an exact similarity matrix.  The noisy pipelines instead combine a
volumetric threshold, column normalization, entrywise medians over many
random factorizations, and elementwise powers; those transforms all live
here as well.

Coefficient matrices are plain k x n numpy arrays; similarity matrices
carry a `kind` tag and provenance string in `SimilarityMatrix`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cur import CurFactors
from .linalg import BINARIZE_TOL, as_matrix, matrix_power, pinv, skinny_svd

#: allowed values of SimilarityMatrix.kind
KINDS = ("binary", "absolute")


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric nonnegative n x n matrix with provenance metadata."""

    entries: np.ndarray
    kind: str
    provenance: str = ""

    def __post_init__(self):
        entries = as_matrix(self.entries)
        if entries.shape[0] != entries.shape[1]:
            raise ValueError(f"similarity matrix must be square, got {entries.shape}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not np.allclose(entries, entries.T, atol=1e-12):
            raise ValueError("similarity matrix must be symmetric")
        if np.any(entries < 0):
            raise ValueError("similarity matrix entries must be nonnegative")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _entries(mat) -> np.ndarray:
    if isinstance(mat, SimilarityMatrix):
        return mat.entries
    return as_matrix(mat)


def coefficient_matrix(factors: CurFactors) -> np.ndarray:
    """Y = pinv(U) R; k x n, satisfies C Y = A when the rank hypothesis held."""
    return pinv(factors.u) @ factors.r


def binarize(q: np.ndarray) -> np.ndarray:
    """0/1 version of q, with entries below BINARIZE_TOL * max|q| taken as 0."""
    q = np.abs(as_matrix(q))
    cutoff = BINARIZE_TOL * q.max() if q.size else 0.0
    return (q > cutoff).astype(float)


def gram_similarity(y, kind: str, provenance: str = "gram") -> SimilarityMatrix:
    """Binary or absolute-value version of the Gram matrix Y.T Y."""
    y = as_matrix(y)
    q = y.T @ y
    q = 0.5 * (q + q.T)  # re-symmetrize round-off
    if kind == "binary":
        q = binarize(q)
    elif kind == "absolute":
        q = np.abs(q)
    else:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    return SimilarityMatrix(entries=q, kind=kind, provenance=provenance)


def similarity_noise_free(y, d_max: int, kind: str) -> SimilarityMatrix:
    """Exact similarity matrix (Y.T Y)^d_max for noise-free union data.

    Powering reconnects clusters whose graph has diameter up to d_max; for
    conforming data the zero/nonzero pattern is exactly the co-subspace
    relation.
    """
    if d_max < 1:
        raise ValueError(f"d_max must be >= 1, got {d_max}")
    q = gram_similarity(y, kind)
    powered = matrix_power(q.entries, d_max)
    powered = 0.5 * (powered + powered.T)
    return SimilarityMatrix(
        entries=powered, kind=kind, provenance=f"noise_free(d_max={d_max})"
    )


def threshold_volumetric(y, m_subspaces: int) -> np.ndarray:
    """Keep the ceil((1 - 1/M) * k * n) largest-magnitude entries, zero the rest.

    Ties at the cut are broken by earliest row-major position.  M = 1 is
    degenerate (the formula would keep nothing) and returns the input
    unchanged.
    """
    y = as_matrix(y)
    if m_subspaces < 1:
        raise ValueError(f"m_subspaces must be >= 1, got {m_subspaces}")
    if m_subspaces == 1:
        return y.copy()
    total = y.size
    keep = math.ceil((1.0 - 1.0 / m_subspaces) * total)
    flat = np.abs(y).ravel()
    # stable sort on -|y| ranks descending with earliest-position tie break
    order = np.argsort(-flat, kind="stable")
    mask = np.zeros(total, dtype=bool)
    mask[order[:keep]] = True
    out = y.copy().ravel()
    out[~mask] = 0.0
    return out.reshape(y.shape)


def median_aggregate(sims, provenance: str = "median") -> SimilarityMatrix:
    """Entrywise median of a list of square matrices, then absolute value.

    Accepts plain arrays or SimilarityMatrix values; an even count takes
    the mean of the two middle order statistics.
    """
    mats = [_entries(s) for s in sims]
    if not mats:
        raise ValueError("median_aggregate needs at least one matrix")
    shape = mats[0].shape
    for m in mats[1:]:
        if m.shape != shape:
            raise ValueError(f"dimension mismatch: {m.shape} vs {shape}")
    med = np.abs(np.median(np.stack(mats), axis=0))
    med = 0.5 * (med + med.T)
    return SimilarityMatrix(entries=med, kind="absolute", provenance=provenance)


def enforce_diagonal(mat):
    """Set the diagonal to 1, leaving everything else unchanged.

    Returns the same flavor it was given (array in, array out)."""
    entries = _entries(mat).copy()
    if entries.shape[0] != entries.shape[1]:
        raise ValueError(f"expected a square matrix, got {entries.shape}")
    np.fill_diagonal(entries, 1.0)
    if isinstance(mat, SimilarityMatrix):
        return SimilarityMatrix(entries=entries, kind=mat.kind, provenance=mat.provenance)
    return entries


def normalize_columns(y) -> np.ndarray:
    """Scale each column to unit Euclidean norm; zero columns stay zero."""
    y = as_matrix(y)
    norms = np.linalg.norm(y, axis=0)
    safe = np.where(norms < 1e-14, 1.0, norms)
    return y / safe


def elementwise_power(sim: SimilarityMatrix, alpha: float) -> SimilarityMatrix:
    """Raise every entry of a nonnegative similarity matrix to `alpha` > 0."""
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return SimilarityMatrix(
        entries=sim.entries**alpha,
        kind=sim.kind,
        provenance=f"{sim.provenance}^[{alpha}]",
    )


def sim_baseline(w, r: int) -> SimilarityMatrix:
    """Shape-interaction baseline |V_r V_r.T| from the skinny SVD of the data."""
    w = as_matrix(w)
    if not 1 <= r <= min(w.shape):
        raise ValueError(f"r={r} out of range for shape {w.shape}")
    triple = skinny_svd(w, r)
    vvt = triple.right @ triple.right.T
    vvt = 0.5 * (vvt + vvt.T)
    return SimilarityMatrix(
        entries=np.abs(vvt), kind="absolute", provenance=f"sim_baseline(r={r})"
    )

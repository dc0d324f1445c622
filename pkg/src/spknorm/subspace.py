"""Relationships between principal-direction bases, and the collapse operation.

Collapse removes a frame's components along chosen orthonormal directions:
z' = z - sum_i (z . v_i) v_i.  It operates on raw (uncentered) frames; the
basis mean plays no role here.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

from .corpus import FrameTable
from .exceptions import DataError, DegenerateError
from .pca import PcaBasis


@dataclass(frozen=True)
class SimilarityMatrix:
    """|dot| similarities between two sets of principal directions."""

    values: np.ndarray  # (kA, kB), all in [0, 1]
    basis_labels: tuple[str, str]


@dataclass(frozen=True)
class OrthogonalityStats:
    """How closely each direction of A aligns with its best match in B."""

    per_direction_max: np.ndarray  # (kA,)
    mean: float
    variance: float  # population variance
    max: float


def _directions(b: PcaBasis | np.ndarray) -> np.ndarray:
    """Rows-are-directions matrix of a basis or a plain orthonormal array."""
    return b.components if isinstance(b, PcaBasis) else np.asarray(b, dtype=np.float64)


def _top_components(b: PcaBasis | np.ndarray, k: int | None) -> np.ndarray:
    rows = _directions(b)
    k = rows.shape[0] if k is None else k
    if not 1 <= k <= rows.shape[0]:
        raise ValueError(f"k must be in [1, {rows.shape[0]}], got {k}")
    return rows[:k]


def direction_similarity(
    a: PcaBasis, b: PcaBasis, k_a: int | None = None, k_b: int | None = None
) -> SimilarityMatrix:
    """Absolute dot products between the top k_a directions of a and top k_b of b."""
    if a.dim != b.dim:
        raise DataError(f"bases have different dimensions: {a.dim} vs {b.dim}")
    va = _top_components(a, k_a)
    vb = _top_components(b, k_b)
    values = np.minimum(np.abs(va @ vb.T), 1.0)
    return SimilarityMatrix(values=values, basis_labels=(a.name, b.name))


def orthogonality_stats(s: SimilarityMatrix) -> OrthogonalityStats:
    if s.values.size == 0:
        raise DegenerateError("similarity matrix is empty")
    per_direction_max = s.values.max(axis=1)
    return OrthogonalityStats(
        per_direction_max=per_direction_max,
        mean=float(per_direction_max.mean()),
        variance=float(per_direction_max.var()),
        max=float(per_direction_max.max()),
    )


def collapse(frames: np.ndarray, b: PcaBasis, k: int) -> np.ndarray:
    """Remove the projection onto the top k directions from every frame.

    k = 0 is the identity.  Removal is batched; orthonormality of the
    directions makes this equal to removing them one by one.
    """
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2 or frames.shape[1] != b.dim:
        raise DataError(f"frames must be N x {b.dim}, got shape {frames.shape}")
    if not 0 <= k <= b.k_max:
        raise ValueError(f"k must be in [0, {b.k_max}], got {k}")
    v = b.components[:k]
    return frames - (frames @ v.T) @ v


def collapse_frame_table(t: FrameTable, b: PcaBasis, k: int) -> FrameTable:
    """Collapse applied to every frame of a table; labels unchanged."""
    return t.with_frames(collapse(t.frames, b, k))


def principal_angles(
    a: PcaBasis | np.ndarray,
    b: PcaBasis | np.ndarray,
    k_a: int | None = None,
    k_b: int | None = None,
) -> np.ndarray:
    """Canonical angles (radians, non-decreasing) between two subspaces.

    Either argument may be a plain array whose rows are orthonormal
    directions (e.g. a known ground-truth subspace).
    """
    va = _top_components(a, k_a)
    vb = _top_components(b, k_b)
    if va.shape[1] != vb.shape[1]:
        raise DataError(f"bases have different dimensions: {va.shape[1]} vs {vb.shape[1]}")
    sigma = np.linalg.svd(va @ vb.T, compute_uv=False)
    return np.arccos(np.clip(sigma, 0.0, 1.0))


def write_similarity_csv(path: str | os.PathLike, s: SimilarityMatrix) -> None:
    """Long-form CSV (dim_a, dim_b, similarity) for external heat-map plotting."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dim_a", "dim_b", "similarity"])
        for i in range(s.values.shape[0]):
            for j in range(s.values.shape[1]):
                writer.writerow([i, j, repr(float(s.values[i, j]))])

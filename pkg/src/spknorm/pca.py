"""Principal component bases of aggregate matrices.

A fitted basis keeps the row mean, the orthonormal principal directions
(sorted by descending variance, sign-normalized so each direction's
largest-magnitude entry is positive), the per-direction variances
sigma_i^2 / (R - 1), and their shares of the total variance.

Serialized form (binary, little-endian): magic ``SSPB``, version u32 = 1,
D u32, k_max u32, then mean (D float64), components (k_max x D float64),
variances (k_max float64).  A JSON sidecar ``<path>.json`` carries the
variance ratios for human inspection.
"""

from __future__ import annotations

import json
import os
import struct
from dataclasses import dataclass

import numpy as np

from .aggregate import AggregateMatrix
from .exceptions import CorruptionError, DegenerateError, FormatError

BASIS_MAGIC = b"SSPB"
BASIS_VERSION = 1


@dataclass(frozen=True)
class PcaBasis:
    mean: np.ndarray        # (D,)
    components: np.ndarray  # (k_max, D), orthonormal rows
    variances: np.ndarray   # (k_max,), non-increasing
    variance_ratios: np.ndarray  # (k_max,), sums to <= 1
    name: str = ""

    @property
    def k_max(self) -> int:
        return self.components.shape[0]

    @property
    def dim(self) -> int:
        return self.components.shape[1]


def _normalize_signs(components: np.ndarray) -> np.ndarray:
    """Flip each row so its largest-magnitude entry is positive.

    np.argmax returns the lowest index on ties, which fixes the tie rule.
    """
    out = components.copy()
    for row in out:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0
    return out


def fit_pca(m: AggregateMatrix | np.ndarray, name: str = "") -> PcaBasis:
    """Fit principal directions of the row-centered matrix via SVD.

    Keeps k_max = min(R - 1, D) components.  Raises DegenerateError when
    all rows are equal (nothing to decompose).
    """
    rows = m.rows if isinstance(m, AggregateMatrix) else np.asarray(m, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise DegenerateError("PCA needs a matrix with at least 2 rows")
    r, d = rows.shape
    mean = rows.mean(axis=0)
    centered = rows - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    variances = s**2 / (r - 1)
    total = variances.sum()
    if total <= 0.0:
        raise DegenerateError("all rows are equal; centered matrix has rank 0")
    k_max = min(r - 1, d)
    return PcaBasis(
        mean=mean,
        components=_normalize_signs(vt[:k_max]),
        variances=variances[:k_max],
        variance_ratios=variances[:k_max] / total,
        name=name,
    )


def num_components_for_variance(b: PcaBasis, tau: float) -> int:
    """Smallest k whose leading ratios cover a ``tau`` share of the total."""
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    cum = np.cumsum(b.variance_ratios)
    target = tau * cum[-1]
    hit = np.nonzero(cum >= target)[0]
    return int(hit[0]) + 1 if len(hit) else b.k_max


def project_coordinates(b: PcaBasis, rows: np.ndarray, dims: list[int]) -> np.ndarray:
    """Coordinates of ``rows`` along selected components, after centering."""
    rows = np.asarray(rows, dtype=np.float64)
    dims = list(dims)
    for j in dims:
        if not 0 <= j < b.k_max:
            raise IndexError(f"component index {j} out of range (k_max={b.k_max})")
    return (rows - b.mean) @ b.components[dims].T


def write_pca_basis(path: str | os.PathLike, b: PcaBasis) -> None:
    header = BASIS_MAGIC + struct.pack("<III", BASIS_VERSION, b.dim, b.k_max)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(b.mean, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(b.components, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(b.variances, dtype="<f8").tobytes())
    sidecar = {
        "name": b.name,
        "dim": b.dim,
        "k_max": b.k_max,
        "variance_ratios": [float(v) for v in b.variance_ratios],
    }
    with open(os.fspath(path) + ".json", "w", encoding="utf-8") as fh:
        json.dump(sidecar, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_pca_basis(path: str | os.PathLike) -> PcaBasis:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 16 or data[:4] != BASIS_MAGIC:
        raise FormatError(f"{path}: missing {BASIS_MAGIC!r} magic")
    version, d, k_max = struct.unpack("<III", data[4:16])
    if version != BASIS_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    expected = 16 + 8 * (d + k_max * d + k_max)
    if len(data) != expected:
        raise CorruptionError(f"{path}: payload size disagrees with header")
    buf = np.frombuffer(data, dtype="<f8", offset=16)
    mean = buf[:d].astype(np.float64)
    components = buf[d : d + k_max * d].reshape(k_max, d).astype(np.float64)
    variances = buf[d + k_max * d :].astype(np.float64)
    name = ""
    ratios = None
    sidecar_path = os.fspath(path) + ".json"
    if os.path.exists(sidecar_path):
        with open(sidecar_path, "r", encoding="utf-8") as fh:
            sidecar = json.load(fh)
        name = sidecar.get("name", "")
        stored = sidecar.get("variance_ratios")
        if stored is not None and len(stored) == k_max:
            ratios = np.array(stored, dtype=np.float64)
    if ratios is None:
        total = variances.sum()
        ratios = variances / total if total > 0 else np.zeros_like(variances)
    return PcaBasis(
        mean=mean, components=components, variances=variances,
        variance_ratios=ratios, name=name,
    )

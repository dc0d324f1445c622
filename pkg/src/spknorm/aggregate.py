"""Aggregation of frame tables into per-speaker / per-phone / per-cell means."""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .corpus import FrameTable
from .exceptions import DegenerateError

RowKey = str | tuple[str, str]


@dataclass(frozen=True)
class AggregateMatrix:
    """Rows of averaged frames, one per key.

    Keys are speakers, phones, or (speaker, phone) pairs.  Each row is the
    arithmetic mean of its group's frames, summed in canonical
    (utterance, frame index) order so the result is independent of the
    frame table's row arrangement.
    """

    rows: np.ndarray  # (R, D) float64
    row_keys: tuple[RowKey, ...]
    row_counts: np.ndarray  # (R,) int64

    def __post_init__(self):
        if self.rows.shape[0] < 2:
            raise DegenerateError("aggregate matrix needs at least 2 rows")
        if len(self.row_keys) != self.rows.shape[0]:
            raise DegenerateError("row_keys length must match rows")
        if len(set(self.row_keys)) != len(self.row_keys):
            raise DegenerateError("row_keys must be unique")

    @property
    def dim(self) -> int:
        return self.rows.shape[1]


def _mean_rows(t: FrameTable, groups: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Mean of each index group, summing members in canonical order."""
    order = t.canonical_order()
    rank = np.empty(t.n_frames, dtype=np.int64)
    rank[order] = np.arange(t.n_frames)
    rows = np.empty((len(groups), t.dim))
    counts = np.empty(len(groups), dtype=np.int64)
    for r, idx in enumerate(groups):
        members = idx[np.argsort(rank[idx], kind="stable")]
        rows[r] = np.sum(t.frames[members], axis=0) / len(members)
        counts[r] = len(members)
    return rows, counts


def aggregate_by_speaker(t: FrameTable) -> AggregateMatrix:
    """One row per speaker: the mean of all frames of that speaker."""
    groups = [np.nonzero(t.speaker_of == s)[0] for s in t.speaker_set]
    groups = [g for g in groups if len(g)]
    keys = [s for s in t.speaker_set if np.any(t.speaker_of == s)]
    rows, counts = _mean_rows(t, groups)
    return AggregateMatrix(rows=rows, row_keys=tuple(keys), row_counts=counts)


def aggregate_by_phone(t: FrameTable) -> AggregateMatrix:
    """One row per phone: the mean of all frames labeled with that phone."""
    groups = [np.nonzero(t.phone_of == p)[0] for p in t.phone_set]
    groups = [g for g in groups if len(g)]
    keys = [p for p in t.phone_set if np.any(t.phone_of == p)]
    rows, counts = _mean_rows(t, groups)
    return AggregateMatrix(rows=rows, row_keys=tuple(keys), row_counts=counts)


def aggregate_joint(t: FrameTable, min_count: int = 1) -> AggregateMatrix:
    """One row per (speaker, phone) cell holding at least ``min_count`` frames.

    Rows are ordered speaker-major, phone-minor; cells with fewer than
    ``min_count`` frames are omitted rather than zero-filled.
    """
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    keys: list[tuple[str, str]] = []
    groups: list[np.ndarray] = []
    for s in t.speaker_set:
        s_mask = t.speaker_of == s
        for p in t.phone_set:
            idx = np.nonzero(s_mask & (t.phone_of == p))[0]
            if len(idx) >= min_count:
                keys.append((s, p))
                groups.append(idx)
    if len(keys) < 2:
        raise DegenerateError(
            f"only {len(keys)} (speaker, phone) cells meet min_count={min_count}"
        )
    rows, counts = _mean_rows(t, groups)
    return AggregateMatrix(rows=rows, row_keys=tuple(keys), row_counts=counts)


def write_aggregate_tsv(path: str | os.PathLike, m: AggregateMatrix) -> None:
    """Export an aggregate matrix as TSV: key columns then one column per dim."""
    joint = isinstance(m.row_keys[0], tuple)
    key_cols = ["speaker", "phone"] if joint else ["key"]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(key_cols + [f"d{i}" for i in range(m.dim)]) + "\n")
        for key, row in zip(m.row_keys, m.rows):
            cells = list(key) if joint else [key]
            fh.write("\t".join([*cells, *(repr(float(v)) for v in row)]) + "\n")

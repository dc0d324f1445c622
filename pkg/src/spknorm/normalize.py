"""Comparison normalizers: per-group centering and standardization.

Groups are utterances or speakers.  Standardization rescales each of the
D dimensions by its own population standard deviation; single-frame
groups are centered only (their rescale is undefined).
"""

from __future__ import annotations

import numpy as np

from .corpus import FrameTable

GROUP_FIELDS = {"utterance": "utterance_of", "speaker": "speaker_of"}


def _group_masks(t: FrameTable, group_by: str):
    try:
        labels = getattr(t, GROUP_FIELDS[group_by])
    except KeyError:
        raise ValueError(f"group_by must be one of {sorted(GROUP_FIELDS)}, got {group_by!r}")
    for g in np.unique(labels):
        yield labels == g


def center(t: FrameTable, group_by: str) -> FrameTable:
    """Subtract the per-group mean from every frame; labels unchanged."""
    out = t.frames.copy()
    for mask in _group_masks(t, group_by):
        out[mask] -= out[mask].mean(axis=0)
    return t.with_frames(out)


def standardize(t: FrameTable, group_by: str, epsilon: float = 1e-8) -> FrameTable:
    """Center and rescale per group: (x - mean) / (std + epsilon), per dimension."""
    out = t.frames.copy()
    for mask in _group_masks(t, group_by):
        group = out[mask]
        centered = group - group.mean(axis=0)
        if group.shape[0] >= 2:
            centered = centered / (group.std(axis=0) + epsilon)
        out[mask] = centered
    return t.with_frames(out)

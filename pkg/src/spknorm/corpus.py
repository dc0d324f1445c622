"""On-disk corpus formats and construction of the labeled frame table.

Three file formats are defined here:

* feature file (binary, little-endian): magic ``SSFV``, version u32 = 1,
  dim u32, num_frames u32, then num_frames x dim float32 values row-major;
* manifest: UTF-8 TSV with header
  ``utterance_id  speaker_id  feature_path  num_frames``;
* alignment file: UTF-8 TSV ``utterance_id  start_s  end_s  phone``,
  sorted by utterance then start time.

Feature values are stored as float32 and promoted to float64 on load.
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .exceptions import (
    CorruptionError,
    DataError,
    DegenerateError,
    FormatError,
    LabelingError,
)

FEATURE_MAGIC = b"SSFV"
FEATURE_VERSION = 1
DEFAULT_FRAME_PERIOD = 0.010
DEFAULT_EXCLUDED_PHONES = frozenset({"SIL", "SPN"})

MANIFEST_COLUMNS = ("utterance_id", "speaker_id", "feature_path", "num_frames")
ALIGNMENT_COLUMNS = ("utterance_id", "start_s", "end_s", "phone")


@dataclass(frozen=True)
class FeatureFile:
    """Frame-level representation vectors of one utterance."""

    utterance_id: str
    frames: np.ndarray  # (T, D) float64

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.ndim != 2 or frames.shape[0] < 1 or frames.shape[1] < 1:
            raise DataError(
                f"{self.utterance_id}: frames must be a T x D matrix with "
                f"T >= 1 and D >= 1, got shape {frames.shape}"
            )
        if not np.all(np.isfinite(frames)):
            raise DataError(f"{self.utterance_id}: non-finite feature values")
        object.__setattr__(self, "frames", frames)

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def dim(self) -> int:
        return self.frames.shape[1]


def write_feature_file(path: str | os.PathLike, f: FeatureFile) -> None:
    """Write a feature file; byte output is deterministic for a given input."""
    payload = np.ascontiguousarray(f.frames, dtype="<f4")
    header = FEATURE_MAGIC + struct.pack("<III", FEATURE_VERSION, f.dim, f.num_frames)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload.tobytes())


def read_feature_file(path: str | os.PathLike, utterance_id: str | None = None) -> FeatureFile:
    """Read a feature file written by :func:`write_feature_file`.

    ``utterance_id`` defaults to the file's base name without extension.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 16 or data[:4] != FEATURE_MAGIC:
        raise FormatError(f"{path}: missing {FEATURE_MAGIC!r} magic")
    version, dim, num_frames = struct.unpack("<III", data[4:16])
    if version != FEATURE_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    if num_frames < 1 or dim < 1:
        raise FormatError(f"{path}: header declares {num_frames} x {dim} frames")
    expected = 16 + 4 * dim * num_frames
    if len(data) != expected:
        raise CorruptionError(
            f"{path}: payload is {len(data) - 16} bytes, header implies {expected - 16}"
        )
    frames = np.frombuffer(data, dtype="<f4", offset=16).reshape(num_frames, dim)
    if utterance_id is None:
        utterance_id = os.path.splitext(os.path.basename(os.fspath(path)))[0]
    if not np.all(np.isfinite(frames)):
        raise DataError(f"{path}: non-finite feature values")
    return FeatureFile(utterance_id=utterance_id, frames=frames.astype(np.float64))


class ManifestEntry(NamedTuple):
    utterance_id: str
    speaker_id: str
    feature_path: str
    num_frames: int


@dataclass(frozen=True)
class Manifest:
    """List of utterances with speakers and feature file locations.

    ``feature_path`` entries are resolved relative to ``root`` (normally the
    directory containing the manifest file) unless they are absolute.
    The frame period is a corpus-level constant, not stored in the TSV.
    """

    entries: tuple[ManifestEntry, ...]
    root: str = "."
    frame_period: float = DEFAULT_FRAME_PERIOD

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if e.utterance_id in seen:
                raise DataError(f"duplicate utterance_id {e.utterance_id!r} in manifest")
            seen.add(e.utterance_id)

    def resolve(self, entry: ManifestEntry) -> str:
        if os.path.isabs(entry.feature_path):
            return entry.feature_path
        return os.path.join(self.root, entry.feature_path)


def read_manifest(path: str | os.PathLike, frame_period: float = DEFAULT_FRAME_PERIOD) -> Manifest:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or tuple(lines[0].split("\t")) != MANIFEST_COLUMNS:
        raise FormatError(f"{path}: expected header {' '.join(MANIFEST_COLUMNS)}")
    entries = []
    for ln in lines[1:]:
        parts = ln.split("\t")
        if len(parts) != 4:
            raise FormatError(f"{path}: bad manifest row {ln!r}")
        entries.append(ManifestEntry(parts[0], parts[1], parts[2], int(parts[3])))
    root = os.path.dirname(os.path.abspath(os.fspath(path)))
    return Manifest(entries=tuple(entries), root=root, frame_period=frame_period)


def write_manifest(path: str | os.PathLike, manifest: Manifest) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(MANIFEST_COLUMNS) + "\n")
        for e in manifest.entries:
            fh.write(f"{e.utterance_id}\t{e.speaker_id}\t{e.feature_path}\t{e.num_frames}\n")


def validate_manifest(manifest: Manifest) -> None:
    """Check that every referenced feature file exists and matches its header."""
    for e in manifest.entries:
        path = manifest.resolve(e)
        if not os.path.exists(path):
            raise DataError(f"manifest references missing file {path}")
        with open(path, "rb") as fh:
            head = fh.read(16)
        if len(head) < 16 or head[:4] != FEATURE_MAGIC:
            raise FormatError(f"{path}: missing {FEATURE_MAGIC!r} magic")
        _, _, num_frames = struct.unpack("<III", head[4:16])
        if num_frames != e.num_frames:
            raise DataError(
                f"{e.utterance_id}: manifest says {e.num_frames} frames, "
                f"file header says {num_frames}"
            )


class Segment(NamedTuple):
    start: float
    end: float
    phone: str


@dataclass(frozen=True)
class AlignmentTable:
    """Time-aligned phone segments per utterance."""

    by_utterance: dict[str, tuple[Segment, ...]]

    def __post_init__(self):
        for utt, segs in self.by_utterance.items():
            prev_end = -np.inf
            for seg in segs:
                if seg.end <= seg.start:
                    raise DataError(f"{utt}: segment {seg} has end <= start")
                if seg.start < prev_end:
                    raise DataError(f"{utt}: segments overlap or are out of order at {seg}")
                prev_end = seg.end

    def segments(self, utterance_id: str) -> tuple[Segment, ...]:
        try:
            return self.by_utterance[utterance_id]
        except KeyError:
            raise LabelingError(f"no alignment for utterance {utterance_id!r}") from None


def read_alignments(path: str | os.PathLike) -> AlignmentTable:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or tuple(lines[0].split("\t")) != ALIGNMENT_COLUMNS:
        raise FormatError(f"{path}: expected header {' '.join(ALIGNMENT_COLUMNS)}")
    table: dict[str, list[Segment]] = {}
    for ln in lines[1:]:
        parts = ln.split("\t")
        if len(parts) != 4:
            raise FormatError(f"{path}: bad alignment row {ln!r}")
        table.setdefault(parts[0], []).append(Segment(float(parts[1]), float(parts[2]), parts[3]))
    return AlignmentTable({utt: tuple(segs) for utt, segs in table.items()})


def write_alignments(path: str | os.PathLike, table: AlignmentTable) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(ALIGNMENT_COLUMNS) + "\n")
        for utt in sorted(table.by_utterance):
            for seg in sorted(table.by_utterance[utt], key=lambda s: s.start):
                fh.write(f"{utt}\t{float(seg.start)!r}\t{float(seg.end)!r}\t{seg.phone}\n")


def label_frames(
    f: FeatureFile,
    align: AlignmentTable,
    excluded_phones: Iterable[str] = DEFAULT_EXCLUDED_PHONES,
    frame_period: float = DEFAULT_FRAME_PERIOD,
) -> list[str | None]:
    """Assign a phone label (or None for dropped) to every frame of ``f``.

    Frame i is labeled by the segment whose half-open interval
    [start, end) contains its midpoint (i + 0.5) * frame_period.  Frames
    whose midpoint falls in no segment, or in a segment carrying an
    excluded phone, are dropped (None).
    """
    excluded = frozenset(excluded_phones)
    segs = align.segments(f.utterance_id)
    starts = np.array([s.start for s in segs])
    labels: list[str | None] = []
    for i in range(f.num_frames):
        t = (i + 0.5) * frame_period
        j = int(np.searchsorted(starts, t, side="right")) - 1
        if j < 0 or t >= segs[j].end or segs[j].phone in excluded:
            labels.append(None)
        else:
            labels.append(segs[j].phone)
    return labels


@dataclass(frozen=True)
class FrameTable:
    """All retained frames of a corpus with speaker/utterance/phone labels.

    ``frame_index_of`` keeps each frame's original index within its
    utterance so that downstream token extraction can reconstruct segment
    spans; ``excluded_phones`` records the exclusion set the table was
    built with.
    """

    frames: np.ndarray        # (N, D) float64
    speaker_of: np.ndarray    # (N,) str
    phone_of: np.ndarray      # (N,) str
    utterance_of: np.ndarray  # (N,) str
    frame_index_of: np.ndarray  # (N,) int64
    phone_set: tuple[str, ...]
    speaker_set: tuple[str, ...]
    frame_period: float = DEFAULT_FRAME_PERIOD
    excluded_phones: frozenset[str] = DEFAULT_EXCLUDED_PHONES

    def __post_init__(self):
        n = self.frames.shape[0]
        if n < 1:
            raise DegenerateError("frame table must contain at least one frame")
        for name in ("speaker_of", "phone_of", "utterance_of", "frame_index_of"):
            if getattr(self, name).shape != (n,):
                raise DataError(f"{name} must have shape ({n},)")
        if not set(np.unique(self.phone_of)) <= set(self.phone_set):
            raise DataError("phone_of contains labels outside phone_set")
        if not set(np.unique(self.speaker_of)) <= set(self.speaker_set):
            raise DataError("speaker_of contains labels outside speaker_set")

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def dim(self) -> int:
        return self.frames.shape[1]

    def with_frames(self, frames: np.ndarray) -> "FrameTable":
        """Same labels, new frame values (e.g. after normalization)."""
        if frames.shape != self.frames.shape:
            raise DataError(
                f"replacement frames have shape {frames.shape}, expected {self.frames.shape}"
            )
        return FrameTable(
            frames=frames,
            speaker_of=self.speaker_of,
            phone_of=self.phone_of,
            utterance_of=self.utterance_of,
            frame_index_of=self.frame_index_of,
            phone_set=self.phone_set,
            speaker_set=self.speaker_set,
            frame_period=self.frame_period,
            excluded_phones=self.excluded_phones,
        )

    def speaker_indices(self) -> np.ndarray:
        """Per-frame index into speaker_set."""
        return np.searchsorted(np.array(self.speaker_set), self.speaker_of)

    def phone_indices(self) -> np.ndarray:
        """Per-frame index into phone_set."""
        return np.searchsorted(np.array(self.phone_set), self.phone_of)

    def canonical_order(self) -> np.ndarray:
        """Row permutation sorting frames by (utterance, frame index).

        Aggregations sum group members in this order so that results do
        not depend on how the table rows happen to be arranged.
        """
        return np.lexsort((self.frame_index_of, self.utterance_of))


def build_frame_table(
    manifest: Manifest,
    alignments: AlignmentTable,
    excluded_phones: Iterable[str] = DEFAULT_EXCLUDED_PHONES,
) -> FrameTable:
    """Read, label, and concatenate all retained frames in manifest order."""
    excluded = frozenset(excluded_phones)
    kept_frames: list[np.ndarray] = []
    kept_speaker: list[str] = []
    kept_phone: list[str] = []
    kept_utt: list[str] = []
    kept_index: list[int] = []
    dim: int | None = None
    for e in manifest.entries:
        f = read_feature_file(manifest.resolve(e), utterance_id=e.utterance_id)
        if f.num_frames != e.num_frames:
            raise DataError(
                f"{e.utterance_id}: manifest says {e.num_frames} frames, "
                f"file has {f.num_frames}"
            )
        if dim is None:
            dim = f.dim
        elif f.dim != dim:
            raise DataError(f"{e.utterance_id}: dimension {f.dim} != {dim} of earlier files")
        labels = label_frames(f, alignments, excluded, manifest.frame_period)
        for i, lab in enumerate(labels):
            if lab is None:
                continue
            kept_frames.append(f.frames[i])
            kept_speaker.append(e.speaker_id)
            kept_phone.append(lab)
            kept_utt.append(e.utterance_id)
            kept_index.append(i)
    if not kept_frames:
        raise DegenerateError("no frames remain after labeling and exclusion")
    return FrameTable(
        frames=np.array(kept_frames),
        speaker_of=np.array(kept_speaker),
        phone_of=np.array(kept_phone),
        utterance_of=np.array(kept_utt),
        frame_index_of=np.array(kept_index, dtype=np.int64),
        phone_set=tuple(sorted(set(kept_phone))),
        speaker_set=tuple(sorted(set(kept_speaker))),
        frame_period=manifest.frame_period,
        excluded_phones=excluded,
    )

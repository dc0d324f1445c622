"""Synthetic corpora with known orthogonal speaker and phone subspaces.

Every frame is z = mu + m_s + m_p + eps with m_s in span(U_s), m_p in
span(U_p), U_s exactly orthogonal to U_p, and isotropic Gaussian noise
eps.  Phone sequences are scripted so that every (speaker, phone) cell is
populated and triphone tokens share contexts within and across speakers:
utterance u alternates an anchor phone a = u mod n_phones with a small
rotating set of other phones, giving repeated (a, x, a) tokens per
utterance.

Generated values are quantized to float32 so a corpus written to disk and
rebuilt through the standard readers is bit-identical to the in-memory one.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .corpus import (
    DEFAULT_EXCLUDED_PHONES,
    DEFAULT_FRAME_PERIOD,
    AlignmentTable,
    FeatureFile,
    FrameTable,
    Manifest,
    ManifestEntry,
    Segment,
    write_alignments,
    write_feature_file,
    write_manifest,
)
from .exceptions import DataError
from .pca import PcaBasis, write_pca_basis

N_VARYING = 3  # distinct non-anchor phones interleaved per utterance


@dataclass(frozen=True)
class SynthConfig:
    dim: int = 64
    d_speaker: int = 5
    d_phone: int = 8
    n_speakers: int = 20
    n_phones: int = 10
    frames_per_cell: int = 4  # frames per segment occurrence (>= this many per cell)
    noise_sigma: float = 0.1
    speaker_scale: float = 1.0
    phone_scale: float = 3.0
    seed: int = 1
    utterances_per_speaker: int = 10
    segments_per_utterance: int = 13

    def __post_init__(self):
        if self.d_speaker + self.d_phone > self.dim:
            raise DataError(
                f"subspace dims {self.d_speaker}+{self.d_phone} exceed ambient dim {self.dim}"
            )
        if self.d_speaker < 1 or self.d_phone < 1:
            raise DataError("subspace dimensions must be >= 1")
        if self.n_speakers < 2 or self.n_phones < 2:
            raise DataError("need at least 2 speakers and 2 phones")
        if self.frames_per_cell < 1 or self.utterances_per_speaker < 1:
            raise DataError("counts must be >= 1")
        if self.segments_per_utterance < 1:
            raise DataError("segments_per_utterance must be >= 1")
        if self.noise_sigma < 0 or self.speaker_scale < 0 or self.phone_scale < 0:
            raise DataError("scales and noise_sigma must be >= 0")


@dataclass(frozen=True)
class GroundTruth:
    speaker_basis: np.ndarray  # (d_speaker, D), orthonormal rows
    phone_basis: np.ndarray    # (d_phone, D), orthonormal rows, orthogonal to speaker_basis
    speaker_offsets: np.ndarray  # (n_speakers, D), rows in span(speaker_basis)
    phone_offsets: np.ndarray    # (n_phones, D), rows in span(phone_basis)
    mean: np.ndarray             # (D,)


def speaker_id(si: int) -> str:
    return f"spk{si:03d}"


def phone_id(pi: int) -> str:
    return f"ph{pi:03d}"


def utterance_id(si: int, ui: int) -> str:
    return f"{speaker_id(si)}-utt{ui:03d}"


def utterance_script(config: SynthConfig, ui: int) -> list[int]:
    """Phone index sequence of utterance ``ui`` (same for every speaker)."""
    anchor = ui % config.n_phones
    n_var = min(N_VARYING, config.n_phones - 1)
    seq = []
    for j in range(config.segments_per_utterance):
        if j % 2 == 0:
            seq.append(anchor)
        else:
            seq.append((anchor + 1 + (j // 2) % n_var) % config.n_phones)
    return seq


def _ground_truth(config: SynthConfig) -> GroundTruth:
    rng = np.random.default_rng([config.seed, 0])
    mu = rng.standard_normal(config.dim)
    raw = rng.standard_normal((config.dim, config.d_speaker + config.d_phone))
    q, _ = np.linalg.qr(raw)
    u_s = q[:, : config.d_speaker].T
    u_p = q[:, config.d_speaker :].T
    speaker_coords = rng.standard_normal((config.n_speakers, config.d_speaker))
    phone_coords = rng.standard_normal((config.n_phones, config.d_phone))
    return GroundTruth(
        speaker_basis=u_s,
        phone_basis=u_p,
        speaker_offsets=(config.speaker_scale * speaker_coords) @ u_s,
        phone_offsets=(config.phone_scale * phone_coords) @ u_p,
        mean=mu,
    )


def generate(config: SynthConfig) -> tuple[FrameTable, AlignmentTable, GroundTruth]:
    """Generate a corpus in memory; fully deterministic per seed."""
    truth = _ground_truth(config)
    L = config.frames_per_cell
    frames, speakers, phones, utts, indices = [], [], [], [], []
    alignments: dict[str, tuple[Segment, ...]] = {}
    for si in range(config.n_speakers):
        for ui in range(config.utterances_per_speaker):
            utt = utterance_id(si, ui)
            script = utterance_script(config, ui)
            rng = np.random.default_rng([config.seed, 1, si, ui])
            noise = rng.standard_normal((len(script) * L, config.dim)) * config.noise_sigma
            segs = []
            for j, pi in enumerate(script):
                z = truth.mean + truth.speaker_offsets[si] + truth.phone_offsets[pi]
                block = (z + noise[j * L : (j + 1) * L]).astype(np.float32).astype(np.float64)
                frames.append(block)
                speakers.extend([speaker_id(si)] * L)
                phones.extend([phone_id(pi)] * L)
                utts.extend([utt] * L)
                indices.extend(range(j * L, (j + 1) * L))
                segs.append(Segment(j * L * DEFAULT_FRAME_PERIOD, (j + 1) * L * DEFAULT_FRAME_PERIOD, phone_id(pi)))
            alignments[utt] = tuple(segs)
    table = FrameTable(
        frames=np.concatenate(frames, axis=0),
        speaker_of=np.array(speakers),
        phone_of=np.array(phones),
        utterance_of=np.array(utts),
        frame_index_of=np.array(indices, dtype=np.int64),
        phone_set=tuple(phone_id(pi) for pi in range(config.n_phones)),
        speaker_set=tuple(speaker_id(si) for si in range(config.n_speakers)),
        frame_period=DEFAULT_FRAME_PERIOD,
        excluded_phones=DEFAULT_EXCLUDED_PHONES,
    )
    return table, AlignmentTable(alignments), truth


def _truth_basis(offsets: np.ndarray, basis: np.ndarray, mean: np.ndarray, name: str) -> PcaBasis:
    """Package a ground-truth subspace in the standard basis container.

    Directions are ordered by descending variance of the offset
    coordinates so the container's conventions hold.
    """
    coords = offsets @ basis.T
    variances = coords.var(axis=0)
    order = np.argsort(-variances, kind="stable")
    variances = variances[order]
    total = variances.sum()
    ratios = variances / total if total > 0 else np.zeros_like(variances)
    return PcaBasis(
        mean=mean,
        components=basis[order],
        variances=variances,
        variance_ratios=ratios,
        name=name,
    )


def write_corpus(config: SynthConfig, out_dir: str | os.PathLike) -> dict[str, str]:
    """Write feature files, manifest, alignments, and ground-truth bases.

    Returns the paths of the written top-level files.
    """
    out_dir = os.fspath(out_dir)
    feat_dir = os.path.join(out_dir, "features")
    os.makedirs(feat_dir, exist_ok=True)
    table, alignments, truth = generate(config)
    entries = []
    for utt in dict.fromkeys(table.utterance_of):  # manifest order = generation order
        mask = table.utterance_of == utt
        feats = table.frames[mask]
        rel = os.path.join("features", f"{utt}.ssfv")
        write_feature_file(os.path.join(out_dir, rel), FeatureFile(utt, feats))
        entries.append(ManifestEntry(utt, str(table.speaker_of[mask][0]), rel, feats.shape[0]))
    manifest = Manifest(entries=tuple(entries), root=out_dir)
    paths = {
        "manifest": os.path.join(out_dir, "manifest.tsv"),
        "alignments": os.path.join(out_dir, "alignments.tsv"),
        "speaker_truth": os.path.join(out_dir, "truth_speaker.sspb"),
        "phone_truth": os.path.join(out_dir, "truth_phone.sspb"),
    }
    write_manifest(paths["manifest"], manifest)
    write_alignments(paths["alignments"], alignments)
    write_pca_basis(
        paths["speaker_truth"],
        _truth_basis(truth.speaker_offsets, truth.speaker_basis, truth.mean, "speaker_truth"),
    )
    write_pca_basis(
        paths["phone_truth"],
        _truth_basis(truth.phone_offsets, truth.phone_basis, truth.mean, "phone_truth"),
    )
    return paths

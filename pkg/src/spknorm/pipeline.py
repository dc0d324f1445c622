"""End-to-end runs: ingest, aggregate, PCA, optional dimension sweep,
normalization, probing and ABX evaluation, with a machine-readable report.

A report is reproducible byte for byte: it echoes the configuration
(minus the thread count, which must not influence any number), digests
the input files, and records the named sub-seeds that every random
choice was drawn from.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .abx import AbxReport, abx_error, extract_triphones
from .aggregate import AggregateMatrix, aggregate_by_phone, aggregate_by_speaker, aggregate_joint
from .corpus import AlignmentTable, FrameTable, build_frame_table, read_alignments, read_manifest
from .normalize import center, standardize
from .pca import PcaBasis, fit_pca, num_components_for_variance, project_coordinates
from .probe import ProbeConfig, evaluate_probe, split_half_by_speaker, train_probe
from .subspace import (
    SimilarityMatrix,
    collapse_frame_table,
    direction_similarity,
    orthogonality_stats,
    write_similarity_csv,
)

TOOL_VERSION = "0.1.0"

NORMALIZE_MODES = (
    "none",
    "utt-center",
    "utt-standardize",
    "spk-center",
    "spk-standardize",
    "collapse",
)

# Cumulative-variance breakpoints mapped to candidate k values when no
# explicit sweep grid is given.
DEFAULT_SWEEP_BREAKPOINTS = (0.80, 0.90, 0.95, 0.98, 0.99, 1.0)


@dataclass(frozen=True)
class PipelineConfig:
    """Declarative description of one run.

    The basis is always fitted on the train corpus.  The sweep, when
    enabled, picks k on the dev corpus (defaulting to eval, defaulting to
    train); probes and ABX are scored on the eval corpus.
    """

    train_manifest: str
    train_alignments: str
    eval_manifest: str | None = None
    eval_alignments: str | None = None
    dev_manifest: str | None = None
    dev_alignments: str | None = None
    normalize: str = "collapse"
    k: int | None = None              # explicit number of directions to collapse
    sweep: bool = False
    sweep_grid: tuple[int, ...] | None = None  # explicit k grid overriding the breakpoints
    tau: float = 0.95                 # variance threshold when neither k nor sweep is given
    min_count: int = 1                # joint-aggregate cell occupancy floor
    span: str = "triphone"
    max_triplets_per_cell: int | None = None
    probe_learning_rate: float = 0.5
    probe_iterations: int = 300
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.normalize not in NORMALIZE_MODES:
            raise ValueError(f"normalize must be one of {NORMALIZE_MODES}, got {self.normalize!r}")

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        del d["threads"]  # execution detail, never part of the result identity
        if d["sweep_grid"] is not None:
            d["sweep_grid"] = list(d["sweep_grid"])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        d = dict(d)
        if d.get("sweep_grid") is not None:
            d["sweep_grid"] = tuple(int(k) for k in d["sweep_grid"])
        return cls(**d)


@dataclass(frozen=True)
class PipelineArtifacts:
    """In-memory stage outputs kept alongside the serializable report."""

    train_table: FrameTable
    eval_table: FrameTable
    transformed_table: FrameTable
    speaker_basis: PcaBasis
    phone_basis: PcaBasis
    similarity: SimilarityMatrix
    joint: AggregateMatrix
    sweep_rows: tuple[tuple[int, float, float, float], ...] | None


@dataclass(frozen=True)
class RunReport:
    version: str
    config: dict
    digests: dict[str, str]
    seeds: dict[str, int]
    results: dict
    artifacts: PipelineArtifacts | None = None

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "digests": self.digests,
            "seeds": self.seeds,
            "results": self.results,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def write_report(path: str | os.PathLike, report: RunReport) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def _digest_corpus(tag: str, manifest_path: str, alignments_path: str) -> dict[str, str]:
    manifest = read_manifest(manifest_path)
    feats = hashlib.sha256()
    for e in manifest.entries:
        feats.update(Path(manifest.resolve(e)).read_bytes())
    return {
        f"{tag}_manifest": _sha256(Path(manifest_path)),
        f"{tag}_alignments": _sha256(Path(alignments_path)),
        f"{tag}_features": feats.hexdigest(),
    }


def _named_seeds(seed: int, names: tuple[str, ...]) -> dict[str, int]:
    """One recorded integer sub-seed per named consumer of randomness."""
    return {
        name: int(np.random.SeedSequence([seed, i]).generate_state(1)[0])
        for i, name in enumerate(names)
    }


def _apply_normalize(
    t: FrameTable, mode: str, basis: PcaBasis | None, k: int | None
) -> FrameTable:
    if mode == "none":
        return t
    if mode == "collapse":
        return collapse_frame_table(t, basis, k)
    group = {"utt": "utterance", "spk": "speaker"}[mode.split("-")[0]]
    op = center if mode.endswith("center") else standardize
    return op(t, group)


def _probe_errors(t: FrameTable, seed: int, lr: float, iterations: int) -> dict:
    split = split_half_by_speaker(t, seed=seed)
    config = ProbeConfig(learning_rate=lr, iterations=iterations)
    in_train = np.isin(t.utterance_of, sorted(split.train_utterances))
    out: dict = {
        "split_seed": seed,
        "learning_rate": lr,
        "iterations": iterations,
        "n_train_frames": int(in_train.sum()),
        "n_test_frames": int((~in_train).sum()),
    }
    for target in ("speaker", "phone"):
        model = train_probe(t, split, target, config)
        out[f"{target}_error"] = evaluate_probe(model, t, split)
    return out


def _abx_errors(
    t: FrameTable,
    alignments: AlignmentTable,
    span: str,
    threads: int,
    max_triplets: int | None,
    seed: int,
) -> dict:
    tokens = extract_triphones(t, alignments, span=span)
    out: dict = {"n_tokens": len(tokens)}
    zero_norm = False
    for mode in ("within", "across"):
        report: AbxReport = abx_error(
            tokens, mode, threads=threads, max_triplets_per_cell=max_triplets, seed=seed
        )
        err = report.within_error if mode == "within" else report.across_error
        out[f"{mode}_error"] = err
        out[f"{mode}_cells"] = len(report.cells)
        zero_norm = zero_norm or report.zero_norm_frames
    out["zero_norm_frames"] = zero_norm
    return out


def _sweep_grid(basis: PcaBasis, config: PipelineConfig) -> list[int]:
    if config.sweep_grid is not None:
        ks = sorted(set(int(k) for k in config.sweep_grid))
    else:
        ks = sorted({num_components_for_variance(basis, bp) for bp in DEFAULT_SWEEP_BREAKPOINTS})
    bad = [k for k in ks if not 0 <= k <= basis.k_max]
    if bad:
        raise ValueError(f"sweep k values {bad} outside [0, {basis.k_max}]")
    return ks


def _cumulative_variance(basis: PcaBasis, k: int) -> float:
    if k == 0:
        return 0.0
    return float(np.cumsum(basis.variance_ratios)[k - 1])


def run_pipeline(config: PipelineConfig) -> RunReport:
    """Execute the configured stages; see the module docstring.

    Stage failures carry a ``stage=...`` marker in their message so a
    caller can tell where a multi-corpus run died.
    """
    seeds = _named_seeds(config.seed, ("probe_split", "abx_subsample", "sweep_split"))
    eval_manifest = config.eval_manifest or config.train_manifest
    eval_alignments = config.eval_alignments or config.train_alignments
    dev_manifest = config.dev_manifest or eval_manifest
    dev_alignments = config.dev_alignments or eval_alignments

    def stage(name, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except Exception as exc:
            raise type(exc)(f"stage={name}: {exc}") from exc

    digests = {}
    digests.update(stage("digest", _digest_corpus, "train", config.train_manifest, config.train_alignments))
    digests.update(stage("digest", _digest_corpus, "eval", eval_manifest, eval_alignments))

    def ingest(manifest_path, alignments_path):
        return build_frame_table(read_manifest(manifest_path), read_alignments(alignments_path))

    train_table = stage("ingest-train", ingest, config.train_manifest, config.train_alignments)
    if (eval_manifest, eval_alignments) == (config.train_manifest, config.train_alignments):
        eval_table = train_table
    else:
        eval_table = stage("ingest-eval", ingest, eval_manifest, eval_alignments)

    m_spk = stage("aggregate", aggregate_by_speaker, train_table)
    m_phn = stage("aggregate", aggregate_by_phone, train_table)
    m_joint = stage("aggregate", aggregate_joint, train_table, config.min_count)
    speaker_basis = stage("pca", fit_pca, m_spk, "speaker")
    phone_basis = stage("pca", fit_pca, m_phn, "phone")

    k_spk = num_components_for_variance(speaker_basis, config.tau)
    k_phn = num_components_for_variance(phone_basis, config.tau)
    similarity = stage("similarity", direction_similarity, speaker_basis, phone_basis, k_spk, k_phn)
    ortho = orthogonality_stats(similarity)

    sweep_rows = None
    if config.k is not None:
        chosen_k, selection = config.k, "explicit"
    elif config.sweep:
        if (dev_manifest, dev_alignments) == (config.train_manifest, config.train_alignments):
            dev_table = train_table
        elif (dev_manifest, dev_alignments) == (eval_manifest, eval_alignments):
            dev_table = eval_table
        else:
            digests.update(stage("digest", _digest_corpus, "dev", dev_manifest, dev_alignments))
            dev_table = stage("ingest-dev", ingest, dev_manifest, dev_alignments)
        dev_align_table = read_alignments(dev_alignments)
        rows = []
        for k in _sweep_grid(speaker_basis, config):
            collapsed = collapse_frame_table(dev_table, speaker_basis, k)
            split = split_half_by_speaker(collapsed, seed=seeds["sweep_split"])
            probe_cfg = ProbeConfig(
                learning_rate=config.probe_learning_rate, iterations=config.probe_iterations
            )
            model = stage("sweep-probe", train_probe, collapsed, split, "speaker", probe_cfg)
            spk_err = evaluate_probe(model, collapsed, split)
            tokens = extract_triphones(collapsed, dev_align_table, span=config.span)
            abx = stage(
                "sweep-abx",
                abx_error,
                tokens,
                "across",
                config.threads,
                config.max_triplets_per_cell,
                seeds["abx_subsample"],
            )
            rows.append((k, _cumulative_variance(speaker_basis, k), spk_err, abx.across_error))
        best = min(rows, key=lambda r: (r[3], r[0]))
        chosen_k, selection = best[0], "sweep"
        sweep_rows = tuple(rows)
    else:
        chosen_k, selection = k_spk, "variance-threshold"

    transformed = stage(
        "normalize", _apply_normalize, eval_table, config.normalize, speaker_basis, chosen_k
    )
    probe_out = stage(
        "probe",
        _probe_errors,
        transformed,
        seeds["probe_split"],
        config.probe_learning_rate,
        config.probe_iterations,
    )
    abx_out = stage(
        "abx",
        _abx_errors,
        transformed,
        read_alignments(eval_alignments),
        config.span,
        config.threads,
        config.max_triplets_per_cell,
        seeds["abx_subsample"],
    )

    results = {
        "aggregate": {
            "n_frames_train": train_table.n_frames,
            "n_frames_eval": eval_table.n_frames,
            "speaker_rows": m_spk.rows.shape[0],
            "phone_rows": m_phn.rows.shape[0],
            "joint_rows": m_joint.rows.shape[0],
        },
        "pca": {
            "speaker_variance_ratios": [float(r) for r in speaker_basis.variance_ratios],
            "phone_variance_ratios": [float(r) for r in phone_basis.variance_ratios],
        },
        "orthogonality": {
            "k_speaker": k_spk,
            "k_phone": k_phn,
            "mean": ortho.mean,
            "variance": ortho.variance,
            "max": ortho.max,
        },
        "selection": {
            "method": selection,
            "chosen_k": chosen_k,
            "cumulative_variance": _cumulative_variance(speaker_basis, chosen_k)
            if config.normalize == "collapse"
            else None,
            "sweep": [list(r) for r in sweep_rows] if sweep_rows is not None else None,
        },
        "probe": probe_out,
        "abx": abx_out,
    }
    return RunReport(
        version=TOOL_VERSION,
        config=config.to_dict(),
        digests=digests,
        seeds=seeds,
        results=results,
        artifacts=PipelineArtifacts(
            train_table=train_table,
            eval_table=eval_table,
            transformed_table=transformed,
            speaker_basis=speaker_basis,
            phone_basis=phone_basis,
            similarity=similarity,
            joint=m_joint,
            sweep_rows=sweep_rows,
        ),
    )


def emit_plot_data(
    report: RunReport,
    out_dir: str | os.PathLike,
    figures: tuple[str, ...] | None = None,
    speaker_dims: tuple[int, ...] = (0,),
    phone_dims: tuple[int, ...] = (0,),
) -> dict[str, str]:
    """Write one CSV per figure kind; returns name -> path.

    similarity.csv mirrors the direction-similarity grid, projection.csv
    holds joint-aggregate coordinates on selected basis dimensions (one
    row per aggregate row per dimension), sweep.csv has one row per swept
    k.  ``figures`` defaults to whatever stages ran; naming a figure whose
    stage did not run raises ValueError.
    """
    art = report.artifacts
    if art is None:
        raise ValueError("report carries no in-memory artifacts; re-run the pipeline")
    if figures is None:
        figures = ("similarity", "projection") + (("sweep",) if art.sweep_rows is not None else ())
    unknown = set(figures) - {"similarity", "projection", "sweep"}
    if unknown:
        raise ValueError(f"unknown figures: {sorted(unknown)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, str] = {}

    if "similarity" in figures:
        sim_path = out / "similarity.csv"
        write_similarity_csv(sim_path, art.similarity)
        paths["similarity"] = str(sim_path)

    if "projection" in figures:
        proj_path = out / "projection.csv"
        with open(proj_path, "w", encoding="utf-8", newline="") as fh:
            fh.write("basis,dim,speaker,phone,coordinate\n")
            for basis, dims in (("speaker", speaker_dims), ("phone", phone_dims)):
                b = art.speaker_basis if basis == "speaker" else art.phone_basis
                coords = project_coordinates(b, art.joint.rows, list(dims))
                for (spk, phn), row in zip(art.joint.row_keys, coords):
                    for d, c in zip(dims, row):
                        fh.write(f"{basis},{d},{spk},{phn},{float(c)!r}\n")
        paths["projection"] = str(proj_path)

    if "sweep" in figures:
        if art.sweep_rows is None:
            raise ValueError("sweep data requested but the pipeline did not sweep")
        sweep_path = out / "sweep.csv"
        with open(sweep_path, "w", encoding="utf-8", newline="") as fh:
            fh.write("k,cumulative_variance,speaker_error,abx_across_error\n")
            for k, cv, spk, abx in art.sweep_rows:
                fh.write(f"{k},{float(cv)!r},{float(spk)!r},{float(abx)!r}\n")
        paths["sweep"] = str(sweep_path)
    return paths

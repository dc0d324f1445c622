"""Command line front end.

Every subcommand emits a JSON report to stdout, or to a file with
``--out``.  Commands that produce a corpus (synth, collapse) write the
corpus to a directory and report the paths.
"""

from __future__ import annotations

import argparse
import json
import shutil
import sys
from pathlib import Path

from . import abx as abx_mod
from . import synth as synth_mod
from .aggregate import aggregate_by_phone, aggregate_by_speaker, aggregate_joint, write_aggregate_tsv
from .corpus import (
    FeatureFile,
    Manifest,
    build_frame_table,
    read_alignments,
    read_feature_file,
    read_manifest,
    validate_manifest,
    write_feature_file,
    write_manifest,
)
from .exceptions import SpknormError
from .pca import fit_pca, num_components_for_variance, read_pca_basis, write_pca_basis
from .pipeline import (
    NORMALIZE_MODES,
    TOOL_VERSION,
    PipelineConfig,
    _apply_normalize,
    emit_plot_data,
    run_pipeline,
)
from .probe import ProbeConfig, evaluate_probe, split_half_by_speaker, train_probe
from .subspace import collapse, direction_similarity, orthogonality_stats, write_similarity_csv


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_table(manifest_path: str, alignments_path: str):
    manifest = read_manifest(manifest_path)
    alignments = read_alignments(alignments_path)
    return build_frame_table(manifest, alignments), manifest, alignments


def cmd_ingest(args) -> dict:
    manifest = read_manifest(args.manifest)
    validate_manifest(manifest)
    table = build_frame_table(manifest, read_alignments(args.alignments))
    return {
        "n_utterances": len(manifest.entries),
        "n_frames_retained": table.n_frames,
        "dim": table.dim,
        "n_speakers": len(table.speaker_set),
        "n_phones": len(table.phone_set),
    }


def cmd_synth(args) -> dict:
    config = synth_mod.SynthConfig(
        dim=args.dim,
        d_speaker=args.d_speaker,
        d_phone=args.d_phone,
        n_speakers=args.speakers,
        n_phones=args.phones,
        frames_per_cell=args.frames_per_segment,
        noise_sigma=args.noise_sigma,
        speaker_scale=args.speaker_scale,
        phone_scale=args.phone_scale,
        seed=args.seed,
        utterances_per_speaker=args.utterances_per_speaker,
        segments_per_utterance=args.segments_per_utterance,
    )
    return synth_mod.write_corpus(config, args.out_dir)


def cmd_aggregate(args) -> dict:
    table, _, _ = _load_table(args.manifest, args.alignments)
    if args.by == "speaker":
        m = aggregate_by_speaker(table)
    elif args.by == "phone":
        m = aggregate_by_phone(table)
    else:
        m = aggregate_joint(table, min_count=args.min_count)
    write_aggregate_tsv(args.tsv, m)
    return {"by": args.by, "rows": m.rows.shape[0], "dim": m.rows.shape[1], "tsv": args.tsv}


def cmd_pca(args) -> dict:
    table, _, _ = _load_table(args.manifest, args.alignments)
    m = aggregate_by_speaker(table) if args.by == "speaker" else aggregate_by_phone(table)
    basis = fit_pca(m, name=args.by)
    write_pca_basis(args.basis_out, basis)
    report = {"by": args.by, "k_max": basis.k_max, "basis": args.basis_out}
    if args.tau is not None:
        report["k_for_tau"] = num_components_for_variance(basis, args.tau)
    return report


def cmd_similarity(args) -> dict:
    ba = read_pca_basis(args.basis_a)
    bb = read_pca_basis(args.basis_b)
    sim = direction_similarity(ba, bb, k_a=args.k_a, k_b=args.k_b)
    stats = orthogonality_stats(sim)
    if args.csv:
        write_similarity_csv(args.csv, sim)
    return {
        "k_a": sim.values.shape[0],
        "k_b": sim.values.shape[1],
        "mean": stats.mean,
        "variance": stats.variance,
        "max": stats.max,
        "csv": args.csv,
    }


def cmd_collapse(args) -> dict:
    """Rewrite every feature file with the top-k directions removed.

    Labels are not needed: collapse acts frame-wise, so the output corpus
    keeps the input's manifest geometry and alignments verbatim.
    """
    manifest = read_manifest(args.manifest)
    basis = read_pca_basis(args.basis)
    out_dir = Path(args.out_dir)
    (out_dir / "features").mkdir(parents=True, exist_ok=True)
    entries = []
    for e in manifest.entries:
        f = read_feature_file(manifest.resolve(e), utterance_id=e.utterance_id)
        z = collapse(f.frames, basis, args.k)
        rel = f"features/{e.utterance_id}.ssfv"
        write_feature_file(out_dir / rel, FeatureFile(e.utterance_id, z))
        entries.append(e._replace(feature_path=rel))
    new_manifest = Manifest(
        entries=tuple(entries), root=str(out_dir), frame_period=manifest.frame_period
    )
    write_manifest(out_dir / "manifest.tsv", new_manifest)
    if args.alignments:
        shutil.copyfile(args.alignments, out_dir / "alignments.tsv")
    return {
        "k": args.k,
        "n_utterances": len(entries),
        "manifest": str(out_dir / "manifest.tsv"),
        "alignments": str(out_dir / "alignments.tsv") if args.alignments else None,
    }


def _normalized_table(args):
    table, _, alignments = _load_table(args.manifest, args.alignments)
    basis = read_pca_basis(args.basis) if args.basis else None
    if args.normalize == "collapse" and basis is None:
        raise SpknormError("--normalize collapse requires --basis")
    k = args.k if args.k is not None else (basis.k_max if basis else None)
    return _apply_normalize(table, args.normalize, basis, k), alignments, k


def cmd_probe(args) -> dict:
    table, _, k = _normalized_table(args)
    split = split_half_by_speaker(table, seed=args.seed)
    config = ProbeConfig(learning_rate=args.learning_rate, iterations=args.iterations)
    model = train_probe(table, split, args.target, config)
    error = evaluate_probe(model, table, split)
    return {
        "target": args.target,
        "error": error,
        "normalize": args.normalize,
        "k": k if args.normalize == "collapse" else None,
        "n_classes": len(model.class_labels),
    }


def cmd_abx(args) -> dict:
    table, alignments, k = _normalized_table(args)
    tokens = abx_mod.extract_triphones(table, alignments, span=args.span)
    modes = ("within", "across") if args.mode == "both" else (args.mode,)
    report: dict = {
        "normalize": args.normalize,
        "k": k if args.normalize == "collapse" else None,
        "n_tokens": len(tokens),
    }
    for mode in modes:
        r = abx_mod.abx_error(
            tokens,
            mode,
            threads=args.threads,
            max_triplets_per_cell=args.max_triplets_per_cell,
            seed=args.seed,
        )
        report[f"{mode}_error"] = r.within_error if mode == "within" else r.across_error
        report[f"{mode}_cells"] = len(r.cells)
        report["zero_norm_frames"] = report.get("zero_norm_frames", False) or r.zero_norm_frames
        if args.cells_csv:
            path = Path(args.cells_csv)
            path = path.with_name(f"{path.stem}_{mode}{path.suffix}") if args.mode == "both" else path
            abx_mod.write_cells_csv(path, r)
    return report


def _pipeline_config(args) -> PipelineConfig:
    base = {}
    if args.config:
        base = json.loads(Path(args.config).read_text(encoding="utf-8"))
    overrides = {
        "train_manifest": args.train_manifest,
        "train_alignments": args.train_alignments,
        "eval_manifest": args.eval_manifest,
        "eval_alignments": args.eval_alignments,
        "dev_manifest": args.dev_manifest,
        "dev_alignments": args.dev_alignments,
        "normalize": args.normalize,
        "k": args.k,
        "sweep": args.sweep,
        "tau": args.tau,
        "span": args.span,
        "max_triplets_per_cell": args.max_triplets_per_cell,
        "seed": args.seed,
        "threads": args.threads,
    }
    if args.sweep_grid is not None:
        overrides["sweep_grid"] = tuple(int(s) for s in args.sweep_grid.split(","))
    base.update({k: v for k, v in overrides.items() if v is not None})
    return PipelineConfig.from_dict(base)


def cmd_pipeline(args) -> dict:
    report = run_pipeline(_pipeline_config(args))
    return report.to_dict()


def cmd_plot_data(args) -> dict:
    report = run_pipeline(_pipeline_config(args))
    figures = tuple(args.figures.split(",")) if args.figures else None
    return emit_plot_data(report, args.plot_dir, figures=figures)


def _add_corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", required=True)
    p.add_argument("--alignments", required=True)


def _add_normalize_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--normalize", choices=NORMALIZE_MODES, default="none")
    p.add_argument("--basis", help="basis file for --normalize collapse")
    p.add_argument("--k", type=int, help="directions to collapse (default: all)")


def _add_pipeline_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON pipeline config; flags override its fields")
    p.add_argument("--train-manifest")
    p.add_argument("--train-alignments")
    p.add_argument("--eval-manifest")
    p.add_argument("--eval-alignments")
    p.add_argument("--dev-manifest")
    p.add_argument("--dev-alignments")
    p.add_argument("--normalize", choices=NORMALIZE_MODES)
    p.add_argument("--k", type=int)
    p.add_argument("--sweep", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--sweep-grid", help="comma-separated k values")
    p.add_argument("--tau", type=float)
    p.add_argument("--span", choices=abx_mod.TOKEN_SPANS)
    p.add_argument("--max-triplets-per-cell", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spknorm", description="Speaker and phone subspace analysis of frame-level features."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and summarize a corpus")
    _add_corpus_args(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic corpus with known subspaces")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--dim", type=int, default=64)
    p.add_argument("--d-speaker", type=int, default=5)
    p.add_argument("--d-phone", type=int, default=8)
    p.add_argument("--speakers", type=int, default=20)
    p.add_argument("--phones", type=int, default=10)
    p.add_argument("--frames-per-segment", type=int, default=4)
    p.add_argument("--noise-sigma", type=float, default=0.1)
    p.add_argument("--speaker-scale", type=float, default=1.0)
    p.add_argument("--phone-scale", type=float, default=3.0)
    p.add_argument("--utterances-per-speaker", type=int, default=10)
    p.add_argument("--segments-per-utterance", type=int, default=13)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("aggregate", help="write a per-group mean matrix as TSV")
    _add_corpus_args(p)
    p.add_argument("--by", choices=("speaker", "phone", "joint"), required=True)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--tsv", required=True, help="output TSV path")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_aggregate)

    p = sub.add_parser("pca", help="fit principal directions of an aggregate matrix")
    _add_corpus_args(p)
    p.add_argument("--by", choices=("speaker", "phone"), required=True)
    p.add_argument("--tau", type=float, help="also report k for this variance fraction")
    p.add_argument("--basis-out", required=True, help="output basis file")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_pca)

    p = sub.add_parser("similarity", help="cross-basis direction similarities")
    p.add_argument("--basis-a", required=True)
    p.add_argument("--basis-b", required=True)
    p.add_argument("--k-a", type=int)
    p.add_argument("--k-b", type=int)
    p.add_argument("--csv", help="write the full similarity grid here")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_similarity)

    p = sub.add_parser("collapse", help="remove top-k basis directions from every frame")
    p.add_argument("--manifest", required=True)
    p.add_argument("--alignments", help="copied into the output corpus when given")
    p.add_argument("--basis", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_collapse)

    p = sub.add_parser("probe", help="linear probe error for a label target")
    _add_corpus_args(p)
    _add_normalize_args(p)
    p.add_argument("--target", choices=("speaker", "phone"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--iterations", type=int, default=300)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_probe)

    p = sub.add_parser("abx", help="triphone ABX discrimination error")
    _add_corpus_args(p)
    _add_normalize_args(p)
    p.add_argument("--mode", choices=("within", "across", "both"), default="both")
    p.add_argument("--span", choices=abx_mod.TOKEN_SPANS, default="triphone")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-triplets-per-cell", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cells-csv", help="write per-cell errors here")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_abx)

    p = sub.add_parser("pipeline", help="run the full analysis pipeline")
    _add_pipeline_args(p)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_pipeline)

    p = sub.add_parser("plot-data", help="run the pipeline and write figure CSVs")
    _add_pipeline_args(p)
    p.add_argument("--plot-dir", required=True)
    p.add_argument("--figures", help="comma-separated subset of similarity,projection,sweep")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_plot_data)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.fn(args)
    except SpknormError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())

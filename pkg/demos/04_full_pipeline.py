"""The end-to-end pipeline on an on-disk corpus, with a dimension sweep.

Everything the previous demos did by hand is one call here: ingest,
aggregate, PCA, pick how many directions to collapse, then score probes
and ABX on the result. The report is deterministic, echoes its
configuration and input digests, and serializes to JSON.
"""

import json
import tempfile
from pathlib import Path

import spknorm as sk

workdir = Path(tempfile.mkdtemp(prefix="spknorm_demo_"))

# Write a corpus to disk in the formats the tool ingests: one .ssfv
# feature file per utterance, a manifest TSV, an alignment TSV.
corpus = sk.write_corpus(
    sk.SynthConfig(
        dim=24,
        d_speaker=4,
        d_phone=6,
        n_speakers=8,
        n_phones=7,
        utterances_per_speaker=6,
        segments_per_utterance=9,
        speaker_scale=4.0,
        noise_sigma=1.5,
    ),
    workdir / "corpus",
)
print(f"corpus written under {workdir / 'corpus'}")

# sweep=True tries several k values (derived from cumulative-variance
# breakpoints), scores each on the dev corpus, and keeps the one with the
# lowest across-speaker ABX error.
config = sk.PipelineConfig(
    train_manifest=corpus["manifest"],
    train_alignments=corpus["alignments"],
    normalize="collapse",
    sweep=True,
    threads=4,
)
report = sk.run_pipeline(config)

sel = report.results["selection"]
print(f"\nsweep over k (rows: k, cumulative variance, speaker probe, across ABX):")
for row in sel["sweep"]:
    marker = " <- chosen" if row[0] == sel["chosen_k"] else ""
    print(f"  k={row[0]}: var {row[1]:.3f}, probe {row[2]:.2%}, abx {row[3]:.2%}{marker}")

print(f"\nprobe errors after collapse: "
      f"speaker {report.results['probe']['speaker_error']:.2%}, "
      f"phone {report.results['probe']['phone_error']:.2%}")
print(f"abx errors after collapse: "
      f"within {report.results['abx']['within_error']:.2%}, "
      f"across {report.results['abx']['across_error']:.2%}")

# The report is a plain dict; write it plus the figure CSVs.
sk.write_report(workdir / "report.json", report)
plots = sk.emit_plot_data(report, workdir / "plots")
print(f"\nreport: {workdir / 'report.json'}")
for name, path in plots.items():
    print(f"{name} csv: {path}")

# Reports are reproducible byte for byte, thread count notwithstanding.
again = sk.run_pipeline(config)
print(f"\nre-run byte-identical: {again.to_json() == report.to_json()}")
print(f"input digests: {json.dumps(report.digests, indent=2)[:120]}...")

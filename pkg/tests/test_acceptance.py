"""Acceptance gate: the nine headline guarantees, one pass/fail line each.

Each test prints ``PASS <criterion>`` once all of its assertions hold (or
``FAIL <criterion>`` on the way out of a failing one), so a plain pytest
run doubles as a checklist.  Criteria with a stated runtime budget time
the relevant work with a monotonic clock.
"""

import json
import time
from contextlib import contextmanager

import numpy as np
import pytest

import spknorm as sk
from spknorm.cli import main as cli_main

from oracles import abx_brute_force, dtw_brute_force
from test_abx import _hand_tokens


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"FAIL  {name}")
        raise
    print(f"PASS  {name}")


def test_01_pca_recovery():
    with criterion("PCA recovery (rotated Gaussian, |dot| >= 0.99, < 1 s)"):
        start = time.perf_counter()
        rng = np.random.default_rng(12)
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        scales = np.array([4.0, 1.0, 0.25])
        samples = (rng.standard_normal((200, 3)) * np.sqrt(scales)) @ q.T
        basis = sk.fit_pca(samples)
        dots = np.abs(np.sum(basis.components * q.T, axis=1))
        assert np.all(dots >= 0.99)
        assert np.abs(basis.variance_ratios - scales / scales.sum()).max() <= 0.05
        assert time.perf_counter() - start < 1.0


def test_02_collapse_exactness(default_synth):
    with criterion("collapse exactness on 10k synthetic frames (< 5 s)"):
        cfg, table, _, _ = default_synth
        assert table.n_frames >= 10_000
        start = time.perf_counter()
        basis = sk.fit_pca(sk.aggregate_by_speaker(table), name="speaker")
        k = cfg.d_speaker
        collapsed = sk.collapse(table.frames, basis, k)

        norms = np.linalg.norm(table.frames, axis=1)
        residual = np.abs(collapsed @ basis.components[:k].T)
        assert np.all(residual.max(axis=1) <= 1e-9 * norms)

        again = sk.collapse(collapsed, basis, k)
        assert np.abs(again - collapsed).max() <= 1e-12
        assert np.all(np.linalg.norm(collapsed, axis=1) <= norms + 1e-12)
        assert time.perf_counter() - start < 5.0


def test_03_orthogonality_discovery(default_synth):
    with criterion("orthogonality discovery (max |dot| <= 0.15, angles <= 5 deg)"):
        cfg, table, _, truth = default_synth
        speaker_basis = sk.fit_pca(sk.aggregate_by_speaker(table), name="speaker")
        phone_basis = sk.fit_pca(sk.aggregate_by_phone(table), name="phone")
        sim = sk.direction_similarity(
            speaker_basis, phone_basis, k_a=cfg.d_speaker, k_b=cfg.d_phone
        )
        stats = sk.orthogonality_stats(sim)
        assert stats.max <= 0.15

        angles = sk.principal_angles(speaker_basis, truth.speaker_basis, k_a=cfg.d_speaker)
        assert np.degrees(angles.max()) <= 5.0


def _probe_error(table, target, split):
    model = sk.train_probe(table, split, target)
    return sk.evaluate_probe(model, table, split)


def _abx_pair(table, alignments):
    tokens = sk.extract_triphones(table, alignments)
    return (
        sk.abx_error(tokens, "within").within_error,
        sk.abx_error(tokens, "across").across_error,
    )


def test_04_normalization_efficacy(default_synth):
    with criterion("normalization efficacy (probe flip + ABX pattern, < 2 min)"):
        start = time.perf_counter()
        cfg, table, alignments, _ = default_synth
        basis = sk.fit_pca(sk.aggregate_by_speaker(table), name="speaker")
        collapsed = sk.collapse_frame_table(table, basis, cfg.d_speaker)
        split = sk.split_half_by_speaker(table, seed=0)

        assert _probe_error(table, "speaker", split) <= 0.05
        assert _probe_error(collapsed, "speaker", split) >= 0.90  # chance is 0.95

        phone_raw = _probe_error(table, "phone", split)
        phone_collapsed = _probe_error(collapsed, "phone", split)
        assert abs(phone_collapsed - phone_raw) <= 0.02

        raw_within, raw_across = _abx_pair(table, alignments)
        col_within, col_across = _abx_pair(collapsed, alignments)
        assert col_within <= raw_within + 0.005
        assert col_across <= raw_across + 0.005

        # the decrease clause binds when speaker offsets are at least half
        # the phone scale; the default config is below that threshold, so
        # demonstrate it on one that is not
        strong = sk.SynthConfig(
            dim=16, d_speaker=6, d_phone=6, n_speakers=10, n_phones=8,
            speaker_scale=2.0, phone_scale=2.0, noise_sigma=1.2,
        )
        assert strong.speaker_scale >= strong.phone_scale / 2
        s_table, s_alignments, _ = sk.generate(strong)
        s_basis = sk.fit_pca(sk.aggregate_by_speaker(s_table), name="speaker")
        s_collapsed = sk.collapse_frame_table(s_table, s_basis, strong.d_speaker)
        s_raw = _abx_pair(s_table, s_alignments)
        s_col = _abx_pair(s_collapsed, s_alignments)
        assert s_col[0] < s_raw[0]
        assert s_col[1] < s_raw[1]
        assert time.perf_counter() - start < 120.0


def test_05_abx_oracle_equivalence():
    with criterion("ABX bit-identical to brute-force enumerator (both modes)"):
        tokens = _hand_tokens()
        assert len(tokens) <= 10
        as_tuples = [(t.speaker, t.context, t.center, t.frames) for t in tokens]
        within = sk.abx_error(tokens, "within").within_error
        across = sk.abx_error(tokens, "across").across_error
        assert within == abx_brute_force(as_tuples, "within")
        assert across == abx_brute_force(as_tuples, "across")


def test_06_dtw_oracle_equivalence():
    with criterion("DTW equals exhaustive path search (50 pairs, <= 1e-12)"):
        rng = np.random.default_rng(6)
        for _ in range(50):
            t1, t2 = rng.integers(1, 9, size=2)
            x = rng.standard_normal((t1, 3))
            y = rng.standard_normal((t2, 3))
            assert abs(sk.dtw_distance(x, y) - dtw_brute_force(x, y)) <= 1e-12


def test_07_baseline_behavior(small_synth, disk_corpus):
    with criterion("baselines: centering/standardizing moments, k=0 identity"):
        _, table, _, _ = small_synth
        for group in ("utterance", "speaker"):
            centered = sk.center(table, group)
            labels = getattr(centered, f"{group}_of")
            for g in np.unique(labels):
                assert np.abs(centered.frames[labels == g].mean(axis=0)).max() <= 1e-9
            standardized = sk.standardize(table, group)
            for g in np.unique(labels):
                std = standardized.frames[labels == g].std(axis=0)
                assert np.abs(std - 1.0).max() <= 1e-6

        _, paths = disk_corpus
        base = dict(train_manifest=paths["manifest"], train_alignments=paths["alignments"])
        k0 = sk.run_pipeline(sk.PipelineConfig(**base, normalize="collapse", k=0))
        none = sk.run_pipeline(sk.PipelineConfig(**base, normalize="none"))
        assert k0.results["probe"] == none.results["probe"]
        assert k0.results["abx"] == none.results["abx"]
        assert np.array_equal(
            k0.artifacts.transformed_table.frames, none.artifacts.transformed_table.frames
        )


def test_08_thread_determinism(disk_corpus, tmp_path):
    with criterion("byte-identical reports for --threads 1 vs --threads 8"):
        _, paths = disk_corpus
        outs = []
        for threads in (1, 8):
            out = tmp_path / f"report_t{threads}.json"
            code = cli_main([
                "pipeline",
                "--train-manifest", paths["manifest"],
                "--train-alignments", paths["alignments"],
                "--threads", str(threads),
                "--out", str(out),
            ])
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        json.loads(outs[0])  # and it is valid JSON


def test_09_dimension_selection():
    with criterion("variance-threshold k on 5 hand-checked ratio vectors"):
        cases = [
            ((0.9, 0.1), 0.95, 2),
            ((0.5, 0.3, 0.2), 0.5, 1),
            ((0.5, 0.3, 0.2), 0.8, 2),
            ((0.25, 0.25, 0.25, 0.25), 1.0, 4),
            ((0.7, 0.3, 0.0, 0.0), 1.0, 2),  # trailing zero directions
        ]
        for ratios, tau, expect in cases:
            k = len(ratios)
            basis = sk.PcaBasis(
                mean=np.zeros(k),
                components=np.eye(k),
                variances=np.array(ratios),
                variance_ratios=np.array(ratios),
            )
            assert sk.num_components_for_variance(basis, tau) == expect
        with pytest.raises(ValueError):
            sk.num_components_for_variance(basis, 1.5)

import struct

import numpy as np
import pytest

import spknorm as sk
from spknorm.exceptions import (
    CorruptionError,
    DataError,
    DegenerateError,
    FormatError,
    LabelingError,
)


def test_feature_file_round_trip_is_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    frames = rng.standard_normal((17, 5)).astype(np.float32).astype(np.float64)
    f = sk.FeatureFile("utt1", frames)
    path = tmp_path / "utt1.ssfv"
    sk.write_feature_file(path, f)
    g = sk.read_feature_file(path)
    assert g.utterance_id == "utt1"
    assert np.array_equal(g.frames, frames)


def test_feature_file_bytes_match_independent_writer(tmp_path):
    # Bytes assembled by hand from the format description, not via the
    # package writer: magic, version=1, dim=3, num_frames=2, f32 row-major.
    path = tmp_path / "hand.ssfv"
    payload = struct.pack("<4sIII", b"SSFV", 1, 3, 2)
    payload += struct.pack("<6f", 1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
    path.write_bytes(payload)
    f = sk.read_feature_file(path, utterance_id="hand")
    assert np.array_equal(f.frames, [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])


def test_feature_write_is_deterministic(tmp_path):
    frames = np.array([[0.25, -1.5], [3.0, 2.0]])
    f = sk.FeatureFile("u", frames)
    sk.write_feature_file(tmp_path / "a.ssfv", f)
    sk.write_feature_file(tmp_path / "b.ssfv", f)
    assert (tmp_path / "a.ssfv").read_bytes() == (tmp_path / "b.ssfv").read_bytes()


def test_feature_single_value_payload(tmp_path):
    f = sk.FeatureFile("u", np.zeros((1, 1)))
    sk.write_feature_file(tmp_path / "u.ssfv", f)
    raw = (tmp_path / "u.ssfv").read_bytes()
    assert len(raw) == 16 + 4  # header + one f32


def test_feature_file_rejects_bad_inputs(tmp_path):
    with pytest.raises(DataError):
        sk.FeatureFile("u", np.array([[np.nan, 1.0]]))
    with pytest.raises(DataError):
        sk.FeatureFile("u", np.zeros((0, 3)))

    path = tmp_path / "bad.ssfv"
    path.write_bytes(struct.pack("<4sIII", b"XXXX", 1, 2, 1) + struct.pack("<2f", 1, 2))
    with pytest.raises(FormatError):
        sk.read_feature_file(path)

    path.write_bytes(struct.pack("<4sIII", b"SSFV", 9, 2, 1) + struct.pack("<2f", 1, 2))
    with pytest.raises(FormatError):
        sk.read_feature_file(path)

    # zero frames declared
    path.write_bytes(struct.pack("<4sIII", b"SSFV", 1, 2, 0))
    with pytest.raises(FormatError):
        sk.read_feature_file(path)

    # truncated payload
    path.write_bytes(struct.pack("<4sIII", b"SSFV", 1, 2, 2) + struct.pack("<2f", 1, 2))
    with pytest.raises(CorruptionError):
        sk.read_feature_file(path)

    # non-finite payload
    path.write_bytes(
        struct.pack("<4sIII", b"SSFV", 1, 2, 1) + struct.pack("<2f", np.inf, 0.0)
    )
    with pytest.raises(DataError):
        sk.read_feature_file(path)


def test_manifest_round_trip_and_validation(tmp_path):
    frames = np.ones((4, 2), dtype=np.float64)
    sk.write_feature_file(tmp_path / "a.ssfv", sk.FeatureFile("a", frames))
    manifest = sk.Manifest(
        entries=(sk.ManifestEntry("a", "spk1", "a.ssfv", 4),), root=str(tmp_path)
    )
    sk.write_manifest(tmp_path / "manifest.tsv", manifest)
    loaded = sk.read_manifest(tmp_path / "manifest.tsv")
    assert loaded.entries == manifest.entries
    sk.validate_manifest(loaded)

    missing = sk.Manifest(entries=(sk.ManifestEntry("b", "spk1", "b.ssfv", 4),), root=str(tmp_path))
    with pytest.raises(DataError):
        sk.validate_manifest(missing)

    wrong_count = sk.Manifest(
        entries=(sk.ManifestEntry("a", "spk1", "a.ssfv", 5),), root=str(tmp_path)
    )
    with pytest.raises(DataError):
        sk.validate_manifest(wrong_count)


def test_manifest_rejects_duplicate_utterances():
    e = sk.ManifestEntry("a", "s", "a.ssfv", 1)
    with pytest.raises(DataError):
        sk.Manifest(entries=(e, e))


def test_alignment_round_trip_and_ordering(tmp_path):
    table = sk.AlignmentTable(
        {
            "u1": (sk.Segment(0.0, 0.05, "AA"), sk.Segment(0.05, 0.1, "B")),
            "u2": (sk.Segment(0.0, 0.02, "SIL"),),
        }
    )
    path = tmp_path / "ali.tsv"
    sk.write_alignments(path, table)
    loaded = sk.read_alignments(path)
    assert tuple(loaded.segments("u1")) == tuple(table.segments("u1"))
    with pytest.raises(LabelingError):
        loaded.segments("nope")


def test_alignment_rejects_bad_intervals():
    with pytest.raises(DataError):
        sk.AlignmentTable({"u": (sk.Segment(0.0, 0.0, "A"),)})  # end == start
    with pytest.raises(DataError):
        sk.AlignmentTable(
            {"u": (sk.Segment(0.0, 0.05, "A"), sk.Segment(0.04, 0.08, "B"))}  # overlap
        )


def test_label_frames_midpoint_rule():
    align = sk.AlignmentTable({"u": (sk.Segment(0.0, 0.05, "AA"),)})
    f = sk.FeatureFile("u", np.zeros((5, 2)))
    assert sk.label_frames(f, align) == ["AA"] * 5


def test_label_frames_drops_excluded_and_gaps():
    align = sk.AlignmentTable(
        {
            "u": (
                sk.Segment(0.0, 0.02, "SIL"),
                sk.Segment(0.02, 0.04, "B"),
                # gap [0.04, 0.06) then one more phone
                sk.Segment(0.06, 0.08, "K"),
            )
        }
    )
    f = sk.FeatureFile("u", np.zeros((8, 2)))
    labels = sk.label_frames(f, align)
    assert labels == [None, None, "B", "B", None, None, "K", "K"]


def test_label_frames_boundary_belongs_to_later_segment():
    # Frame 2 midpoint is exactly 0.025 s; [start, end) puts it in the
    # segment that starts there, not the one that ends there.
    align = sk.AlignmentTable(
        {"u": (sk.Segment(0.0, 0.025, "A"), sk.Segment(0.025, 0.05, "B"))}
    )
    f = sk.FeatureFile("u", np.zeros((5, 1)))
    assert sk.label_frames(f, align) == ["A", "A", "B", "B", "B"]


def test_label_frames_missing_alignment():
    align = sk.AlignmentTable({"u": (sk.Segment(0.0, 0.05, "A"),)})
    f = sk.FeatureFile("other", np.zeros((1, 1)))
    with pytest.raises(LabelingError):
        sk.label_frames(f, align)


def _write_corpus(tmp_path, utts, alignments):
    """utts: list of (utt_id, speaker, frames)."""
    entries = []
    for utt_id, speaker, frames in utts:
        sk.write_feature_file(tmp_path / f"{utt_id}.ssfv", sk.FeatureFile(utt_id, frames))
        entries.append(sk.ManifestEntry(utt_id, speaker, f"{utt_id}.ssfv", len(frames)))
    return sk.Manifest(entries=tuple(entries), root=str(tmp_path)), sk.AlignmentTable(alignments)


def test_build_frame_table_concatenates_in_manifest_order(tmp_path):
    rng = np.random.default_rng(1)
    f1 = rng.standard_normal((3, 2))
    f2 = rng.standard_normal((3, 2))
    manifest, align = _write_corpus(
        tmp_path,
        [("u1", "s1", f1), ("u2", "s2", f2)],
        {
            "u1": (sk.Segment(0.0, 0.03, "A"),),
            "u2": (sk.Segment(0.0, 0.03, "B"),),
        },
    )
    t = sk.build_frame_table(manifest, align)
    assert t.n_frames == 6
    assert list(t.utterance_of) == ["u1"] * 3 + ["u2"] * 3
    assert t.phone_set == ("A", "B")
    assert t.speaker_set == ("s1", "s2")
    # float32 storage: values survive because inputs were not quantized...
    assert np.allclose(t.frames[:3], f1, atol=1e-7)


def test_build_frame_table_errors(tmp_path):
    manifest, align = _write_corpus(
        tmp_path,
        [("u1", "s1", np.ones((2, 2))), ("u2", "s1", np.ones((2, 3)))],
        {
            "u1": (sk.Segment(0.0, 0.02, "A"),),
            "u2": (sk.Segment(0.0, 0.02, "A"),),
        },
    )
    with pytest.raises(DataError):
        sk.build_frame_table(manifest, align)

    # all frames excluded -> degenerate
    manifest2, align2 = _write_corpus(
        tmp_path,
        [("u3", "s1", np.ones((2, 2)))],
        {"u3": (sk.Segment(0.0, 0.02, "SIL"),)},
    )
    with pytest.raises(DegenerateError):
        sk.build_frame_table(manifest2, align2)

    # manifest num_frames disagrees with the file
    bad = sk.Manifest(
        entries=(sk.ManifestEntry("u3", "s1", "u3.ssfv", 7),), root=str(tmp_path)
    )
    with pytest.raises(DataError):
        sk.build_frame_table(bad, align2)


def test_frame_count_conservation(tmp_path):
    # every drop is attributable to the midpoint rule
    frames = np.arange(12, dtype=np.float64).reshape(6, 2)
    manifest, align = _write_corpus(
        tmp_path,
        [("u", "s", frames)],
        {"u": (sk.Segment(0.0, 0.02, "SIL"), sk.Segment(0.02, 0.05, "A"))},
    )
    t = sk.build_frame_table(manifest, align)
    labels = sk.label_frames(sk.FeatureFile("u", frames), align)
    assert t.n_frames == sum(lab is not None for lab in labels)
    assert list(t.frame_index_of) == [i for i, lab in enumerate(labels) if lab is not None]


def test_synth_corpus_rebuilds_identically(tmp_path, disk_corpus):
    config, paths = disk_corpus
    table, _, _ = sk.generate(config)
    rebuilt = sk.build_frame_table(
        sk.read_manifest(paths["manifest"]), sk.read_alignments(paths["alignments"])
    )
    assert np.array_equal(rebuilt.frames, table.frames)
    assert list(rebuilt.speaker_of) == list(table.speaker_of)
    assert list(rebuilt.phone_of) == list(table.phone_of)
    assert list(rebuilt.frame_index_of) == list(table.frame_index_of)

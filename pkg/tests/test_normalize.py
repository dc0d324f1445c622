import numpy as np
import pytest

import spknorm as sk
from spknorm.corpus import FrameTable


def _table(frames, utterances, speakers=None):
    frames = np.asarray(frames, dtype=np.float64)
    n = frames.shape[0]
    utterances = np.asarray(utterances)
    speakers = np.asarray(speakers if speakers is not None else ["s0"] * n)
    return FrameTable(
        frames=frames,
        speaker_of=speakers,
        phone_of=np.asarray(["AA"] * n),
        utterance_of=utterances,
        frame_index_of=np.arange(n, dtype=np.int64),
        phone_set=("AA",),
        speaker_set=tuple(sorted(set(speakers.tolist()))),
    )


def test_center_hand_example():
    t = _table([[1.0, 3.0], [3.0, 5.0]], ["u0", "u0"])
    out = sk.center(t, "utterance")
    assert np.array_equal(out.frames, [[-1.0, -1.0], [1.0, 1.0]])


def test_center_single_frame_group_goes_to_zero():
    t = _table([[2.0, -7.0]], ["u0"])
    assert np.array_equal(sk.center(t, "utterance").frames, [[0.0, 0.0]])


def test_center_is_per_group():
    t = _table(
        [[1.0], [3.0], [10.0], [20.0]],
        ["u0", "u0", "u1", "u1"],
        ["a", "a", "b", "b"],
    )
    by_utt = sk.center(t, "utterance")
    assert np.array_equal(by_utt.frames, [[-1.0], [1.0], [-5.0], [5.0]])
    by_spk = sk.center(t, "speaker")
    assert np.array_equal(by_spk.frames, by_utt.frames)  # groups coincide here


def test_center_idempotent(small_synth):
    _, table, _, _ = small_synth
    once = sk.center(table, "utterance")
    twice = sk.center(once, "utterance")
    assert np.abs(twice.frames - once.frames).max() <= 1e-12


def test_centered_group_means_vanish(small_synth):
    _, table, _, _ = small_synth
    out = sk.center(table, "speaker")
    for s in out.speaker_set:
        mask = out.speaker_of == s
        assert np.abs(out.frames[mask].mean(axis=0)).max() <= 1e-9


def test_standardize_hand_example():
    t = _table([[0.0], [2.0]], ["u0", "u0"])
    out = sk.standardize(t, "utterance", epsilon=0.0)
    assert np.allclose(out.frames, [[-1.0], [1.0]])


def test_standardize_constant_dimension_goes_to_zero():
    # std + epsilon keeps the division finite; a constant column maps to 0
    t = _table([[5.0, 1.0], [5.0, 3.0]], ["u0", "u0"])
    out = sk.standardize(t, "utterance")
    assert np.array_equal(out.frames[:, 0], [0.0, 0.0])
    assert np.allclose(out.frames[:, 1], [-1.0, 1.0], atol=1e-7)


def test_standardize_single_frame_group_centers_only():
    t = _table([[4.0, -2.0]], ["u0"])
    out = sk.standardize(t, "utterance")
    assert np.array_equal(out.frames, [[0.0, 0.0]])


def test_standardized_moments(small_synth):
    _, table, _, _ = small_synth
    out = sk.standardize(table, "utterance")
    for u in np.unique(out.utterance_of):
        group = out.frames[out.utterance_of == u]
        assert np.abs(group.mean(axis=0)).max() <= 1e-9
        assert np.abs(group.std(axis=0) - 1.0).max() <= 1e-6


def test_standardize_nearly_idempotent(small_synth):
    _, table, _, _ = small_synth
    once = sk.standardize(table, "speaker")
    twice = sk.standardize(once, "speaker")
    assert np.abs(twice.frames - once.frames).max() <= 1e-6


def test_labels_and_order_preserved(small_synth):
    _, table, _, _ = small_synth
    for out in (sk.center(table, "utterance"), sk.standardize(table, "speaker")):
        assert np.array_equal(out.speaker_of, table.speaker_of)
        assert np.array_equal(out.phone_of, table.phone_of)
        assert np.array_equal(out.utterance_of, table.utterance_of)
        assert np.array_equal(out.frame_index_of, table.frame_index_of)
        assert out.frames.shape == table.frames.shape


def test_unknown_group_rejected(small_synth):
    _, table, _, _ = small_synth
    with pytest.raises(ValueError):
        sk.center(table, "phone")
    with pytest.raises(ValueError):
        sk.standardize(table, "channel")

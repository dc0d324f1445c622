import pytest

import spknorm as sk


@pytest.fixture(scope="session")
def default_synth():
    """The stock synthetic corpus: D=64, d_s=5, d_p=8, 20 speakers, 10 phones."""
    config = sk.SynthConfig()
    table, alignments, truth = sk.generate(config)
    return config, table, alignments, truth


@pytest.fixture(scope="session")
def small_synth():
    """A fast corpus for module-level tests (540 frames)."""
    config = sk.SynthConfig(
        dim=24,
        d_speaker=4,
        d_phone=5,
        n_speakers=5,
        n_phones=6,
        utterances_per_speaker=4,
        segments_per_utterance=9,
        frames_per_cell=3,
        seed=3,
    )
    table, alignments, truth = sk.generate(config)
    return config, table, alignments, truth


@pytest.fixture(scope="session")
def disk_corpus(tmp_path_factory):
    """A small corpus written to disk; returns (config, paths dict)."""
    config = sk.SynthConfig(
        dim=24,
        d_speaker=4,
        d_phone=5,
        n_speakers=5,
        n_phones=6,
        utterances_per_speaker=4,
        segments_per_utterance=9,
        frames_per_cell=3,
        seed=11,
    )
    out = tmp_path_factory.mktemp("corpus")
    paths = sk.write_corpus(config, out)
    return config, paths

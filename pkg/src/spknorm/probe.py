"""Linear probing classifiers for speaker and phone identity of single frames.

Probes are multinomial logistic regressions fit by full-batch gradient
descent on the mean softmax cross-entropy, starting from zero weights and
running a fixed number of iterations.  Training frames are processed in
canonical (utterance, frame index) order, so the fitted model does not
depend on how the frame table rows are arranged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import FrameTable
from .exceptions import DataError, DegenerateError

TARGET_FIELDS = {"speaker": "speaker_of", "phone": "phone_of"}


@dataclass(frozen=True)
class SplitSpec:
    """Utterance-level train/test split, half of each speaker's utterances."""

    train_utterances: frozenset[str]
    test_utterances: frozenset[str]
    seed: int


@dataclass(frozen=True)
class ProbeConfig:
    learning_rate: float = 0.5
    iterations: int = 300
    seed: int = 0
    max_frames_per_class: int | None = None  # optional subsampling cap


@dataclass(frozen=True)
class ProbeModel:
    weights: np.ndarray  # (C, D)
    bias: np.ndarray     # (C,)
    class_labels: tuple[str, ...]
    target: str
    loss_history: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if len(self.class_labels) < 2:
            raise DegenerateError("a probe needs at least 2 classes")
        if len(set(self.class_labels)) != len(self.class_labels):
            raise DataError("class labels must be unique")

    def predict(self, frames: np.ndarray) -> np.ndarray:
        """Argmax class index per frame; ties go to the lowest index."""
        return np.argmax(frames @ self.weights.T + self.bias, axis=1)


def split_half_by_speaker(t: FrameTable, seed: int) -> SplitSpec:
    """Per speaker, shuffle utterances with the seeded generator and split.

    ceil(half) of each speaker's utterances go to train, the rest to test.
    """
    rng = np.random.default_rng(seed)
    train: set[str] = set()
    test: set[str] = set()
    for s in t.speaker_set:
        utts = sorted(set(t.utterance_of[t.speaker_of == s]))
        if len(utts) < 2:
            raise DegenerateError(f"speaker {s!r} has {len(utts)} utterance(s); need >= 2")
        perm = rng.permutation(len(utts))
        n_train = math.ceil(len(utts) / 2)
        train.update(utts[i] for i in perm[:n_train])
        test.update(utts[i] for i in perm[n_train:])
    return SplitSpec(frozenset(train), frozenset(test), seed)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def _select(t: FrameTable, utterances: frozenset[str]) -> np.ndarray:
    """Indices of frames in the given utterances, in canonical order."""
    order = t.canonical_order()
    mask = np.isin(t.utterance_of[order], sorted(utterances))
    return order[mask]


def train_probe(
    t: FrameTable,
    split: SplitSpec,
    target: str,
    config: ProbeConfig = ProbeConfig(),
) -> ProbeModel:
    """Fit a linear softmax classifier on the training half of the table."""
    try:
        labels = getattr(t, TARGET_FIELDS[target])
    except KeyError:
        raise ValueError(f"target must be one of {sorted(TARGET_FIELDS)}, got {target!r}")
    idx = _select(t, split.train_utterances)
    if len(idx) == 0:
        raise DegenerateError("no training frames in split")
    if config.max_frames_per_class is not None:
        rng = np.random.default_rng(config.seed)
        capped = []
        for lab in np.unique(labels[idx]):
            members = idx[labels[idx] == lab]
            if len(members) > config.max_frames_per_class:
                members = members[rng.choice(len(members), config.max_frames_per_class, replace=False)]
            capped.append(members)
        idx = np.sort(np.concatenate(capped))
    x = t.frames[idx]
    classes = tuple(sorted(set(labels[idx])))
    if len(classes) < 2:
        raise DegenerateError(f"training data covers {len(classes)} class(es); need >= 2")
    y = np.searchsorted(np.array(classes), labels[idx])
    n, d = x.shape
    c = len(classes)
    onehot = np.zeros((n, c))
    onehot[np.arange(n), y] = 1.0
    w = np.zeros((c, d))
    b = np.zeros(c)
    losses = np.empty(config.iterations)
    for it in range(config.iterations):
        probs = _softmax(x @ w.T + b)
        losses[it] = -np.mean(np.log(probs[np.arange(n), y] + 1e-300))
        grad = probs - onehot
        w -= config.learning_rate * (grad.T @ x) / n
        b -= config.learning_rate * grad.mean(axis=0)
    return ProbeModel(weights=w, bias=b, class_labels=classes, target=target, loss_history=losses)


def evaluate_probe(m: ProbeModel, t: FrameTable, split: SplitSpec) -> float:
    """Error rate on the test half; frames with labels the model never saw count as errors."""
    labels = getattr(t, TARGET_FIELDS[m.target])
    idx = _select(t, split.test_utterances)
    if len(idx) == 0:
        raise DegenerateError("no test frames in split")
    class_arr = np.array(m.class_labels)
    pos = np.searchsorted(class_arr, labels[idx])
    pos = np.clip(pos, 0, len(class_arr) - 1)
    true = np.where(class_arr[pos] == labels[idx], pos, -1)  # -1 = unseen label
    pred = m.predict(t.frames[idx])
    return float(np.mean(pred != true))

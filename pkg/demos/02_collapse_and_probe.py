"""Collapsing the speaker subspace and measuring what a linear probe sees.

Collapse removes each frame's components along the top speaker
directions: z' = z - sum_i (z . v_i) v_i. If the speaker subspace really
carries the speaker identity, a linear classifier that could name the
speaker before the collapse should be reduced to guessing afterwards,
while phone classification is untouched.
"""

import numpy as np

import spknorm as sk

config = sk.SynthConfig()
table, _, _ = sk.generate(config)

speaker_basis = sk.fit_pca(sk.aggregate_by_speaker(table), name="speaker")
collapsed = sk.collapse_frame_table(table, speaker_basis, k=config.d_speaker)

# Sanity: collapsed frames are orthogonal to every removed direction,
# and collapsing twice changes nothing.
resid = np.abs(collapsed.frames @ speaker_basis.components[: config.d_speaker].T)
print(f"max |z' . v| after collapse: {resid.max():.2e}")
twice = sk.collapse(collapsed.frames, speaker_basis, config.d_speaker)
print(f"idempotence gap: {np.abs(twice - collapsed.frames).max():.2e}")

# Probes are trained on half of each speaker's utterances and scored on
# the other half, so memorizing utterances does not help.
split = sk.split_half_by_speaker(table, seed=0)

print(f"\n{'probe':<10} {'raw':>10} {'collapsed':>10}")
for target in ("speaker", "phone"):
    errors = []
    for t in (table, collapsed):
        model = sk.train_probe(t, split, target)
        errors.append(sk.evaluate_probe(model, t, split))
    print(f"{target:<10} {errors[0]:>10.2%} {errors[1]:>10.2%}")

chance = 1 - 1 / config.n_speakers
print(f"\nchance level for the speaker probe: {chance:.0%}")
print("speaker identity is gone; phone identity survives")

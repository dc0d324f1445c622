"""Discovering speaker and phone subspaces in frame-level features.

This walkthrough generates a synthetic corpus whose speaker and phone
structure is planted in two known orthogonal subspaces, then recovers
both from per-group mean vectors and checks how close we got.
"""

import numpy as np

import spknorm as sk

# The generator hides a 5-dim speaker subspace and an 8-dim phone
# subspace inside 64-dim frames. Every frame is
#   z = mu + m_speaker + m_phone + noise
config = sk.SynthConfig()
table, alignments, truth = sk.generate(config)
print(f"corpus: {table.n_frames} frames, dim {table.dim}, "
      f"{len(table.speaker_set)} speakers, {len(table.phone_set)} phones")

# Step 1: average frames per speaker and per phone. Averaging washes out
# the noise and the other factor, leaving one clean mean vector per group.
m_spk = sk.aggregate_by_speaker(table)
m_phn = sk.aggregate_by_phone(table)
print(f"speaker matrix {m_spk.rows.shape}, phone matrix {m_phn.rows.shape}")

# Step 2: PCA on each aggregate matrix. The top directions of the speaker
# matrix span the speaker subspace; same for phones.
speaker_basis = sk.fit_pca(m_spk, name="speaker")
phone_basis = sk.fit_pca(m_phn, name="phone")

print("\nspeaker variance explained by the top directions:")
for i, r in enumerate(speaker_basis.variance_ratios[:6]):
    bar = "#" * int(round(40 * r))
    print(f"  dim {i}: {r:6.1%} {bar}")

# With 5 planted dimensions, roughly all variance should be inside the
# first 5 directions. num_components_for_variance turns a threshold into
# a dimension count.
k95 = sk.num_components_for_variance(speaker_basis, 0.95)
print(f"\ndirections needed for 95% of speaker variance: {k95} "
      f"(planted: {config.d_speaker})")

# Step 3: are the two recovered subspaces orthogonal? |dot| between every
# pair of directions should be near zero if speakers and phones live in
# independent parts of the space.
sim = sk.direction_similarity(speaker_basis, phone_basis,
                              k_a=config.d_speaker, k_b=config.d_phone)
stats = sk.orthogonality_stats(sim)
print(f"\ncross-subspace |dot|: mean {stats.mean:.4f}, max {stats.max:.4f}")

# Step 4: compare against the planted truth. Principal angles measure the
# rotation between recovered and true subspaces; small angles mean we
# found the right one, not just *an* orthogonal pair.
angles = sk.principal_angles(speaker_basis, truth.speaker_basis,
                             k_a=config.d_speaker)
print(f"principal angles vs ground truth (degrees): "
      f"{np.round(np.degrees(angles), 3)}")

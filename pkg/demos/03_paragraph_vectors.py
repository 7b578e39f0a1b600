"""Paragraph vectors on two disjoint vocabularies.

Documents drawn from the same word pool should end up closer to each other
than to documents from the other pool, and re-inferring a training document
should land near its own trained vector.
"""

import numpy as np

from moff.paravec import PvConfig, cosine, infer_vector, train_pv

rng = np.random.default_rng(0)
docs = []
for group in "ab":
    words = [f"{group}{i}" for i in range(24)]
    for _ in range(50):
        subset = rng.choice(words, 5, replace=False)
        docs.append([str(w) for w in rng.choice(subset, 15)])

model = train_pv(docs, PvConfig(epochs=20, seed=13))
print("loss by epoch:", [round(x, 3) for x in model.epoch_losses[::4]])

v = model.doc_vectors / np.linalg.norm(model.doc_vectors, axis=1, keepdims=True)
sim = v @ v.T
within = (sim[:50, :50].sum() - 50 + sim[50:, 50:].sum() - 50) / (2 * 50 * 49)
print(f"within-group cosine {within:.3f}, cross-group {sim[:50, 50:].mean():.3f}")

probe = infer_vector(docs[17], model)
scores = [cosine(probe, d) for d in model.doc_vectors]
print("nearest trained document to re-inferred doc 17:", int(np.argmax(scores)))

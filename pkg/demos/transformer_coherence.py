"""A toy attention-only transformer trained on the coherence defect.

Run with ``python demos/transformer_coherence.py``.
"""
import numpy as np

from hopfcoherence import model_init, psd_check, train
from hopfcoherence.transformer import (bigram_fit, cycle_corpus, qk_attention,
                                       sample_bigram_corpus, unit_path_distribution)

# One head learning the deterministic cycle a -> b -> c -> a.
corpus = cycle_corpus("abc", 61)
model, trace = train(model_init(3, 8, 1, seed=0), corpus, 200, 0.1)
for epoch in (0, 10, 50, 100, 200):
    print(f"epoch {epoch:3d}: defect {trace.defect[epoch]:.5f}  cross entropy {trace.cross_entropy[epoch]:.4f}")

A = qk_attention(model, corpus.tokens[:5])[0]
print("attention rows sum to one:", np.allclose(A.sum(-1), 1))
ov = psd_check(model.W_OV[0])
print(f"OV symmetry defect {ov.symmetry_defect:.3f}, copying: {ov.copying}")

# With the heads frozen at zero only the unit path learns, and it
# recovers the bigram statistics of the corpus.
P = np.array([[0.1, 0.6, 0.3], [0.5, 0.2, 0.3], [0.3, 0.3, 0.4]])
corpus = sample_bigram_corpus(P, 20_000, seed=0, alphabet="abc")
m = model_init(3, 8, 1, seed=0)
m = m.with_params(W_QK=np.zeros_like(m.W_QK), W_OV=np.zeros_like(m.W_OV))
m, _ = train(m, corpus, 100, 5.0, freeze_heads=True)
np.set_printoptions(precision=3, suppress=True)
print("learned rows:\n", unit_path_distribution(m))
print("empirical bigrams:\n", bigram_fit(corpus).to_array())

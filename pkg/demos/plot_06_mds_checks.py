"""
Checking the scaling routines on planted points
===============================================

Distances taken from known points should give those points back, up to
rotation, reflection and translation. Procrustes alignment measures how
close the recovered configuration is.
"""

# %%
import numpy as np

from sciprofile import Dissimilarity, Embedding, classical_mds, procrustes, smacof

rng = np.random.default_rng(0)
x = rng.uniform(-10, 10, (15, 2))
labels = [f"p{i}" for i in range(15)]
d = Dissimilarity(labels, np.sqrt(((x[:, None] - x[None]) ** 2).sum(-1)))

_, rmse = procrustes(Embedding(labels, x), classical_mds(d))
print(f"classical scaling RMSE {rmse:.2e}")

# %%
# Jitter the distances by up to 10% so no exact fit exists, then run SMACOF
# from a random start. Raw stress never goes up.
jitter = np.triu(rng.uniform(0.9, 1.1, d.d.shape), 1)
noisy = Dissimilarity(labels, d.d * (jitter + jitter.T))
fit = smacof(noisy, init="random", seed=3)
history = np.array(fit.history)
print("iterations", fit.iterations, "monotone", bool(np.all(np.diff(history) <= 0)))

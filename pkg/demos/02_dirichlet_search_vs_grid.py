"""Randomized Dirichlet weight search versus an exhaustive grid.

Two synthetic members are each right on complementary halves of the data
(50% solo accuracy), but averaging them classifies every sample
correctly for a band of mixing weights. The random search finds that
band without enumerating it. Run: python3 demos/02_dirichlet_search_vs_grid.py
"""

import numpy as np

from dirblend import (
    Member,
    MemberSet,
    SearchConfig,
    WeightVector,
    accuracy,
    combine,
    gen_complementary_pair,
    gen_labels,
    search_weights,
)

labels = gen_labels(1000, 14, seed=0)
a, b = gen_complementary_pair(labels, confidence_correct=0.9, confidence_wrong=0.6, seed=0)
print(f"member A alone: {accuracy(a, labels):.3f}")
print(f"member B alone: {accuracy(b, labels):.3f}")

# Exhaustive 0.01-step grid over (w, 1-w): the best achievable mix.
grid = [
    (w, accuracy(combine([a, b], WeightVector(np.array([w, 1 - w]))), labels))
    for w in np.round(np.arange(0, 1.001, 0.01), 2)
]
best_w, best_acc = max(grid, key=lambda t: t[1])
winners = [w for w, acc in grid if acc == best_acc]
print(f"\ngrid oracle: accuracy {best_acc:.3f} first reached at w={best_w:.2f}")
print(f"grid weights achieving it: {winners[0]:.2f} .. {winners[-1]:.2f}")

# Randomized search: 1000 Dirichlet(1) draws plus the two vertices.
members = MemberSet((Member("A", a, a), Member("B", b, b)))
result = search_weights(members, labels, SearchConfig(trials=1000, alpha=1.0, seed=0))
w = result.weights.weights
print(
    f"\nrandom search: accuracy {result.validation_accuracy:.3f} "
    f"at weights ({w[0]:.3f}, {w[1]:.3f}), candidate #{result.trial_index}"
)
print("(candidates 0 and 1 are the one-hot vertices, draws follow)")

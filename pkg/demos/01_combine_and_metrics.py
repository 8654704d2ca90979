"""Blend two classifiers' probability matrices and score the result.

The ensemble output is a convex combination: every output row is the
weighted average of the members' rows, so it is again a probability
distribution. Run: python3 demos/01_combine_and_metrics.py
"""

import numpy as np

from dirblend import (
    LabelVector,
    PredictionMatrix,
    WeightVector,
    combine,
    confusion,
    summarize,
)

# Five samples, three classes. Member A is confident but wrong on the
# last sample; member B is flatter but right there.
member_a = PredictionMatrix(np.array([
    [0.80, 0.15, 0.05],
    [0.10, 0.85, 0.05],
    [0.05, 0.10, 0.85],
    [0.70, 0.20, 0.10],
    [0.75, 0.15, 0.10],   # true class is 2
]))
member_b = PredictionMatrix(np.array([
    [0.50, 0.30, 0.20],
    [0.25, 0.50, 0.25],
    [0.20, 0.30, 0.50],
    [0.40, 0.35, 0.25],
    [0.15, 0.25, 0.60],
]))
labels = LabelVector(np.array([0, 1, 2, 0, 2]), num_classes=3)

for name, matrix in (("A", member_a), ("B", member_b)):
    s = summarize(matrix, labels)
    print(f"member {name}: accuracy {s.accuracy_percent}, loss {s.loss:.4f}")

# A carries 60% of the vote; B's flat-but-correct row 4 still flips the blend.
weights = WeightVector(np.array([0.6, 0.4]))
blend = combine([member_a, member_b], weights)
print("\nblended rows (each still sums to 1):")
print(np.round(blend.values, 3))

s = summarize(blend, labels)
print(f"\nensemble: accuracy {s.accuracy_percent}, loss {s.loss:.4f}")
print("confusion (rows true, cols predicted):")
print(confusion(blend, labels).counts)

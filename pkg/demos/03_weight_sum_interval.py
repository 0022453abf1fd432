"""Interval diagnostic for the sum of trained combination weights.

For decent inputs, the weight sum W is expected to land between two
fractions built from hardened-error norms: roughly, both fractions approach
1 as the combined and weight-normalized predictors approach the labels.
The checker reports the interval and whether W fell inside; it never
asserts containment, since pathological inputs can break the assumptions.
"""

from predfuse import (TrainConfig, generate, train, weight_sum,
                      weight_sum_bounds)
from predfuse.synth import SyntheticSpec

for k, targets in ((1, (0.9,)), (2, (0.85, 0.9)), (4, (0.88, 0.9, 0.93, 0.88))):
    labels, matrix = generate(SyntheticSpec(k=k, target_acc=targets, rho=0.2,
                                            n=5_000, seed=k))
    result = train(matrix, labels, TrainConfig(epochs=80, seed=k))
    rep = weight_sum_bounds(result.weights, matrix, labels)
    upper = "inf" if rep.degenerate else f"{rep.upper:.4f}"
    print(f"K={k}: W = {weight_sum(result.weights):.4f}, "
          f"interval [{rep.lower:.4f}, {upper}], contained = {rep.contained}")
    print(f"      norms: |u| = {rep.norm_u:.2f}, combined err = {rep.err_y:.2f}, "
          f"normalized err = {rep.err_yhat:.2f}")

# a perfect predictor pair collapses the interval to exactly [1, 1]
import numpy as np

from predfuse import CombinerWeights, LabelVector, PredictionMatrix

u = np.array([1, 0, 1, 0, 1, 1])
ids = tuple(map(str, range(6)))
perfect = PredictionMatrix(ids, ("A", "B"), np.column_stack([u, u]).astype(float))
rep = weight_sum_bounds(CombinerWeights(("A", "B"), np.array([0.5, 0.5]), 0.5),
                        perfect, LabelVector(ids, u))
print(f"\nzero-error case: interval [{rep.lower}, {rep.upper}] "
      f"(collapses to [1, 1])")

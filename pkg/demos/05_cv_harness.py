"""The fold/repeat evaluation protocol, library-side.

A pool of training predictions is split into folds; the combiner is fitted
on each held-out fold and scored on the full test pool, repeatedly with
derived seeds.  Fixed rules have nothing to fit, so they get one record per
fold and zero spread.
"""

from predfuse import (HybridMethod, NNMethod, RuleMethod, RunPlan,
                      TrainConfig, cross_validate, generate, report_render)
from predfuse.synth import SyntheticSpec

suite = dict(k=3, target_acc=(0.85, 0.88, 0.91), rho=0.3)
train_labels, train_matrix = generate(SyntheticSpec(n=10_000, seed=0, **suite))
test_labels, test_matrix = generate(SyntheticSpec(n=20_000, seed=77, **suite))

plan = RunPlan(n_folds=5, repeats_per_fold=5, seed=3)

for method in (NNMethod(TrainConfig(epochs=30)),
               RuleMethod("max"),
               HybridMethod(base="M3", aux=("M1", "M2"), rule="sum")):
    report = cross_validate(plan, train_matrix, train_labels,
                            test_matrix, test_labels, method)
    print(f"{report.method}: {len(report.records)} runs, "
          f"mean {report.mean * 100:.2f}% (stdev {report.stdev:.4f})")

print("\nfull TSV for the rule method (summary row + per-fold rows):")
report = cross_validate(plan, train_matrix, train_labels, test_matrix,
                        test_labels, RuleMethod("sum"))
print(report_render(report), end="")

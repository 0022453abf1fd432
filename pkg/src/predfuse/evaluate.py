"""Cross-validation harness: fold splits, repeated runs, mean/stdev reports.

The protocol is deliberately asymmetric: the training pool is split into
folds, a combiner is fitted on each held-out fold's prediction rows, and
every fitted combiner is evaluated on the one full test matrix.  Trained
combiners are refitted ``repeats_per_fold`` times per fold with seeds
derived from (plan seed, fold, repeat), so runs are independent of
scheduling order.  Fixed rules have nothing to fit and get one record per
fold; the hybrid's theta sweep is deterministic, so it does too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .bounds import BoundReport, weight_sum_bounds
from .combiner import TrainConfig, predict, train
from .core import LabelVector, PredictionMatrix, accuracy
from .errors import ValidationError
from .hybrid import HybridConfig, default_theta_grid, hybrid_predict, theta_sweep
from .rules import apply_rule, check_rule_kind

__all__ = ["FoldSplit", "RunPlan", "RunRecord", "EvalReport",
           "NNMethod", "RuleMethod", "HybridMethod",
           "kfold_split", "derive_seed", "mean_stdev", "cross_validate",
           "report_render", "parse_report"]

_MASK64 = (1 << 64) - 1


def derive_seed(plan_seed: int, fold: int, repeat: int) -> int:
    """Per-run seed: splitmix64 finalizer folded over (plan_seed, fold, repeat).

    A pure function, so any scheduling of the (fold, repeat) grid reproduces
    the same runs.
    """
    h = 0
    for part in (plan_seed, fold, repeat):
        h = (h + (int(part) & _MASK64) + 0x9E3779B97F4A7C15) & _MASK64
        z = h
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        h = z ^ (z >> 31)
    return h


@dataclass(frozen=True)
class FoldSplit:
    """Disjoint id sets covering the input; sizes differ by at most one."""

    folds: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        sizes = [len(f) for f in self.folds]
        if len(self.folds) < 2 or min(sizes) < 1:
            raise ValidationError("need at least two non-empty folds")
        if max(sizes) - min(sizes) > 1:
            raise ValidationError(f"fold sizes {sizes} differ by more than one")
        all_ids = [i for f in self.folds for i in f]
        if len(set(all_ids)) != len(all_ids):
            raise ValidationError("folds overlap")


def kfold_split(ids, n_folds: int, seed: int) -> FoldSplit:
    """Seeded shuffle of the canonically sorted ids, then contiguous cuts."""
    ids = sorted(str(i) for i in ids)
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate sample ids")
    if n_folds < 2:
        raise ValidationError("need at least two folds")
    if len(ids) < n_folds:
        raise ValidationError(f"cannot split {len(ids)} ids into {n_folds} folds")
    rng = np.random.Generator(np.random.PCG64(seed))
    order = rng.permutation(len(ids))
    shuffled = [ids[i] for i in order]
    return FoldSplit(tuple(tuple(part) for part in
                           np.array_split(np.asarray(shuffled, dtype=object), n_folds)))


@dataclass(frozen=True)
class RunPlan:
    n_folds: int = 5
    repeats_per_fold: int = 30
    seed: int = 0

    def __post_init__(self):
        if self.n_folds < 2:
            raise ValidationError("need at least two folds")
        if self.repeats_per_fold < 1:
            raise ValidationError("need at least one repeat per fold")


@dataclass(frozen=True)
class NNMethod:
    """Fit the trained combiner on each fold."""

    config: TrainConfig = TrainConfig()
    threshold: float = 0.5


@dataclass(frozen=True)
class RuleMethod:
    """Apply one fixed decision rule; nothing is fitted."""

    rule: str

    def __post_init__(self):
        check_rule_kind(self.rule)


@dataclass(frozen=True)
class HybridMethod:
    """Sweep theta on each fold's rows, then evaluate the tuned hybrid."""

    base: str
    aux: tuple[str, ...]
    rule: str = "sum"
    grid: tuple[float, ...] = ()

    def theta_grid(self) -> list[float]:
        return list(self.grid) if self.grid else default_theta_grid()


@dataclass(frozen=True)
class RunRecord:
    fold: int
    repeat: int
    accuracy: float
    detail: str = ""
    bound: BoundReport | None = None


@dataclass(frozen=True)
class EvalReport:
    """All per-run records plus their mean and sample standard deviation."""

    method: str
    records: tuple[RunRecord, ...]
    mean: float
    stdev: float

    @classmethod
    def from_records(cls, method: str, records) -> "EvalReport":
        records = tuple(records)
        m, s = mean_stdev([r.accuracy for r in records])
        return cls(method=method, records=records, mean=m, stdev=s)


def mean_stdev(values) -> tuple[float, float]:
    """Arithmetic mean and sample (n-1) standard deviation; 0 for a singleton."""
    v = [float(x) for x in values]
    if not v:
        raise ValidationError("cannot summarize an empty value list")
    m = sum(v) / len(v)
    if len(v) == 1:
        return m, 0.0
    var = sum((x - m) ** 2 for x in v) / (len(v) - 1)
    return m, math.sqrt(var)


def _check_shared_models(train_preds: PredictionMatrix, test_preds: PredictionMatrix):
    if set(train_preds.model_names) != set(test_preds.model_names):
        raise ValidationError(
            "train and test matrices name different models: "
            f"{sorted(train_preds.model_names)} vs {sorted(test_preds.model_names)}"
        )


def cross_validate(plan: RunPlan, train_preds: PredictionMatrix,
                   train_labels: LabelVector, test_preds: PredictionMatrix,
                   test_labels: LabelVector, method) -> EvalReport:
    """Run the fold/repeat protocol for one combination method.

    Every fitted run is scored on the full test matrix.  For the trained
    combiner a weight-sum bound report, computed on the fold it was trained
    on, is attached to each record.
    """
    _check_shared_models(train_preds, test_preds)
    split = kfold_split(train_preds.ids, plan.n_folds, plan.seed)
    records = []
    if isinstance(method, NNMethod):
        label = "nn"
        for f, fold_ids in enumerate(split.folds):
            fold_m = train_preds.restrict(fold_ids)
            fold_u = train_labels.restrict(fold_ids)
            for r in range(plan.repeats_per_fold):
                records.append(_nn_run(plan, f, r, fold_m, fold_u,
                                       test_preds, test_labels, method))
    elif isinstance(method, RuleMethod):
        label = method.rule
        scores, _ = apply_rule(method.rule, test_preds)
        acc = accuracy(scores, test_labels)
        for f in range(plan.n_folds):
            records.append(RunRecord(fold=f, repeat=0, accuracy=acc,
                                     detail=f"rule={method.rule}"))
    elif isinstance(method, HybridMethod):
        label = f"hybrid-{method.rule}"
        for f, fold_ids in enumerate(split.folds):
            fold_m = train_preds.restrict(fold_ids)
            fold_u = train_labels.restrict(fold_ids)
            sweep = theta_sweep(method.base, method.aux, method.rule,
                                fold_m, fold_u, method.theta_grid())
            cfg = HybridConfig(method.base, method.aux, method.rule,
                               sweep.best_theta)
            pred = hybrid_predict(cfg, test_preds)
            acc = accuracy(pred.probs, test_labels.align_to(pred.ids))
            records.append(RunRecord(
                fold=f, repeat=0, accuracy=acc,
                detail=f"base={method.base};rule={method.rule};"
                       f"theta={sweep.best_theta}"))
    else:
        raise ValidationError(f"unknown method {method!r}")
    return EvalReport.from_records(label, records)


def _nn_run(plan: RunPlan, fold: int, repeat: int,
            fold_m: PredictionMatrix, fold_u: LabelVector,
            test_preds: PredictionMatrix, test_labels: LabelVector,
            method: NNMethod) -> RunRecord:
    cfg = replace(method.config, seed=derive_seed(plan.seed, fold, repeat))
    result = train(fold_m, fold_u, cfg, t=method.threshold)
    acc = accuracy(predict(result.weights, test_preds), test_labels)
    bound = weight_sum_bounds(result.weights, fold_m, fold_u)
    clipped = "yes" if result.clipped_any else "no"
    w_text = "|".join(repr(float(w)) for w in result.weights.w)
    detail = (f"seed={cfg.seed};clipped={clipped};w={w_text};"
              f"b={result.weights.b!r}")
    return RunRecord(fold=fold, repeat=repeat, accuracy=acc, detail=detail,
                     bound=bound)


# --- TSV rendering -------------------------------------------------------

_COLUMNS = ("kind", "fold", "repeat", "accuracy", "mean", "stdev", "percent",
            "W", "lower", "upper", "contained", "detail")


def report_render(report: EvalReport, include_runs: bool = True) -> str:
    """Render a report as TSV: header, one summary row, optional run rows."""
    lines = ["\t".join(_COLUMNS)]
    summary = {
        "kind": "summary",
        "mean": repr(report.mean),
        "stdev": repr(report.stdev),
        "percent": f"{report.mean * 100.0:.2f}",
        "detail": f"method={report.method}",
    }
    lines.append(_row(summary))
    if include_runs:
        for r in report.records:
            row = {
                "kind": "run",
                "fold": str(r.fold),
                "repeat": str(r.repeat),
                "accuracy": repr(r.accuracy),
                "detail": r.detail,
            }
            if r.bound is not None:
                row.update({
                    "W": repr(r.bound.W),
                    "lower": repr(r.bound.lower),
                    "upper": repr(r.bound.upper),
                    "contained": "yes" if r.bound.contained else "no",
                })
            lines.append(_row(row))
    return "\n".join(lines) + "\n"


def _row(values: dict[str, str]) -> str:
    return "\t".join(values.get(c, "") for c in _COLUMNS)


def parse_report(text: str) -> EvalReport:
    """Parse :func:`report_render` output back into an EvalReport.

    Bound rows come back with the four serialized fields only; the norms the
    TSV does not carry are NaN.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].split("\t") != list(_COLUMNS):
        raise ValidationError("not a recognizable evaluation report")
    method, mean, stdev = None, None, None
    records = []
    for ln in lines[1:]:
        cells = dict(zip(_COLUMNS, ln.split("\t")))
        if cells["kind"] == "summary":
            mean, stdev = float(cells["mean"]), float(cells["stdev"])
            method = cells["detail"].removeprefix("method=")
        elif cells["kind"] == "run":
            bound = None
            if cells["W"]:
                w, lo, hi = (float(cells[c]) for c in ("W", "lower", "upper"))
                bound = BoundReport(
                    W=w, lower=lo, upper=hi, norm_u=math.nan, err_y=math.nan,
                    err_yhat=math.nan, contained=cells["contained"] == "yes",
                    degenerate=math.isinf(hi))
            records.append(RunRecord(
                fold=int(cells["fold"]), repeat=int(cells["repeat"]),
                accuracy=float(cells["accuracy"]), detail=cells["detail"],
                bound=bound))
        else:
            raise ValidationError(f"unknown report row kind {cells['kind']!r}")
    if mean is None:
        raise ValidationError("report has no summary row")
    return EvalReport(method=method, records=tuple(records),
                      mean=mean, stdev=stdev)

"""Foundational types and probability/threshold arithmetic.

Everything downstream works on three value types: a labelled sample set
(:class:`LabelVector`), a single per-sample probability column
(:class:`ProbSeries`), and K named columns sharing one id set
(:class:`PredictionMatrix`).  Alignment is always by sample id, never by row
order, so files may list samples in any order without silently misjoining.

The norm operations harden a real-valued series with the ``>= t`` rule first
and then take the Euclidean norm of the resulting 0/1 vector.  They accept
any finite series, not just probabilities; the hardening rule is defined on
raw values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError, ValidationError

__all__ = [
    "LabelVector",
    "ProbSeries",
    "PredictionMatrix",
    "sigmoid",
    "shifted_sigmoid",
    "assign_class",
    "harden",
    "binary_norm",
    "thresholded_norm",
    "thresholded_distance",
    "accuracy",
    "check_threshold",
]


def check_threshold(t: float) -> float:
    """Validate a decision threshold, which must lie strictly inside (0, 1)."""
    t = float(t)
    if not np.isfinite(t) or not 0.0 < t < 1.0:
        raise ValidationError(f"decision threshold must satisfy 0 < t < 1, got {t}")
    return t


def _as_ids(ids) -> tuple[str, ...]:
    out = tuple(str(i) for i in ids)
    if not out:
        raise ValidationError("sample id set is empty")
    if any(i == "" for i in out):
        raise ValidationError("sample ids must be non-empty")
    if len(set(out)) != len(out):
        dupes = sorted({i for i in out if out.count(i) > 1})
        raise ValidationError(f"duplicate sample ids: {dupes[:5]}")
    return out


def _index_of(ids: tuple[str, ...]) -> dict[str, int]:
    return {sid: k for k, sid in enumerate(ids)}


@dataclass(frozen=True)
class LabelVector:
    """Binary ground-truth labels keyed by sample id."""

    ids: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ids", _as_ids(self.ids))
        v = np.asarray(self.values)
        if v.ndim != 1 or v.shape[0] != len(self.ids):
            raise ValidationError("label values must be 1-d and match the id count")
        if not np.isin(v, (0, 1)).all():
            raise ValidationError("labels must be exactly 0 or 1")
        v = v.astype(np.int64)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.ids)

    def align_to(self, ids: tuple[str, ...]) -> np.ndarray:
        """Return label values reordered to ``ids``; error if the sets differ."""
        return _align_values(self.ids, self.values, ids, what="labels")

    def restrict(self, ids) -> "LabelVector":
        """Sub-vector with the given sample ids, in the given order."""
        ids = tuple(str(i) for i in ids)
        index = _index_of(self.ids)
        try:
            rows = np.asarray([index[sid] for sid in ids])
        except KeyError as exc:
            raise AlignmentError(f"labels have no sample id {exc.args[0]!r}") from None
        return LabelVector(ids, self.values[rows])


@dataclass(frozen=True)
class ProbSeries:
    """One model's class-1 probabilities keyed by sample id."""

    ids: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ids", _as_ids(self.ids))
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.shape[0] != len(self.ids):
            raise ValidationError("probability values must be 1-d and match the id count")
        if not np.isfinite(v).all():
            raise ValidationError("probabilities must be finite")
        if (v < 0.0).any() or (v > 1.0).any():
            bad = v[(v < 0.0) | (v > 1.0)][0]
            raise ValidationError(f"probability {bad} outside [0, 1]")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return len(self.ids)

    def align_to(self, ids: tuple[str, ...]) -> np.ndarray:
        return _align_values(self.ids, self.values, ids, what="probabilities")


def _align_values(src_ids, src_values, target_ids, what: str) -> np.ndarray:
    if src_ids == tuple(target_ids):
        return src_values
    index = _index_of(src_ids)
    try:
        order = [index[sid] for sid in target_ids]
    except KeyError as exc:
        raise AlignmentError(f"{what} are missing sample id {exc.args[0]!r}") from None
    if len(target_ids) != len(src_ids):
        raise AlignmentError(
            f"{what} cover {len(src_ids)} samples, expected {len(target_ids)}"
        )
    return src_values[np.asarray(order)]


@dataclass(frozen=True)
class PredictionMatrix:
    """K named probability columns aligned to one sample id set.

    ``values`` has shape (N, K) with column order matching ``model_names``.
    All columns were joined on identical id sets at construction, so row j of
    every column refers to the same sample.
    """

    ids: tuple[str, ...]
    model_names: tuple[str, ...]
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ids", _as_ids(self.ids))
        names = tuple(str(n) for n in self.model_names)
        if not names:
            raise ValidationError("a prediction matrix needs at least one model")
        if len(set(names)) != len(names):
            raise ValidationError("model names must be unique")
        object.__setattr__(self, "model_names", names)
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape != (len(self.ids), len(names)):
            raise ValidationError(
                f"values must have shape ({len(self.ids)}, {len(names)}), got {v.shape}"
            )
        if not np.isfinite(v).all():
            raise ValidationError("probabilities must be finite")
        if (v < 0.0).any() or (v > 1.0).any():
            raise ValidationError("probabilities must lie in [0, 1]")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_columns(cls, columns: list[tuple[str, ProbSeries]]) -> "PredictionMatrix":
        """Join named series on their common id set (order of the first column)."""
        if not columns:
            raise ValidationError("no prediction columns given")
        ids = columns[0][1].ids
        names = [name for name, _ in columns]
        cols = [series.align_to(ids) for _, series in columns]
        return cls(ids, tuple(names), np.column_stack(cols))

    @property
    def n_samples(self) -> int:
        return len(self.ids)

    @property
    def n_models(self) -> int:
        return len(self.model_names)

    def column(self, name: str) -> ProbSeries:
        return ProbSeries(self.ids, self.values[:, self._col(name)])

    def column_values(self, name: str) -> np.ndarray:
        return self.values[:, self._col(name)]

    def select(self, names) -> "PredictionMatrix":
        """Sub-matrix with the given model columns, in the given order."""
        names = [str(n) for n in names]
        if not names:
            raise ValidationError("model subset is empty")
        cols = [self._col(n) for n in names]
        return PredictionMatrix(self.ids, tuple(names), self.values[:, cols])

    def restrict(self, ids) -> "PredictionMatrix":
        """Sub-matrix with the given sample ids, in the given order."""
        ids = _as_ids(ids)
        index = _index_of(self.ids)
        try:
            rows = np.asarray([index[sid] for sid in ids])
        except KeyError as exc:
            raise AlignmentError(f"matrix has no sample id {exc.args[0]!r}") from None
        return PredictionMatrix(ids, self.model_names, self.values[rows])

    def _col(self, name: str) -> int:
        try:
            return self.model_names.index(str(name))
        except ValueError:
            raise ValidationError(
                f"unknown model {name!r}; have {list(self.model_names)}"
            ) from None


# --- scalar / vector arithmetic ------------------------------------------


def sigmoid(x):
    """Logistic function 1 / (1 + e^-x), elementwise, stable for large |x|."""
    x = np.asarray(x, dtype=np.float64)
    if not np.isfinite(x).all():
        raise ValidationError("sigmoid input must be finite")
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return float(out) if out.ndim == 0 else out

def shifted_sigmoid(score, b: float):
    """Sigmoid with its argument re-centred: sigmoid(score - b).

    Combined scores of non-negative weights live in [0, sum(w)], to the right
    of the sigmoid's centre; subtracting the shift b re-centres them before
    thresholding.
    """
    b = float(b)
    if not np.isfinite(b):
        raise ValidationError("shift b must be finite")
    return sigmoid(np.asarray(score, dtype=np.float64) - b)


def assign_class(p: float, t: float = 0.5) -> int:
    """Class label for a probability: 1 iff p >= t, else 0.

    The boundary goes to class 1. Input must be a probability; use
    :func:`harden` for raw-valued series.
    """
    t = check_threshold(t)
    p = float(p)
    if not np.isfinite(p) or not 0.0 <= p <= 1.0:
        raise ValidationError(f"probability {p} outside [0, 1]")
    return 1 if p >= t else 0


def harden(values, t: float = 0.5) -> np.ndarray:
    """Apply the >= t class-assignment rule elementwise to a raw series.

    Unlike :func:`assign_class` this accepts any finite values, so it can
    harden unbounded scores as well as probabilities.
    """
    t = check_threshold(t)
    v = np.asarray(values, dtype=np.float64)
    if not np.isfinite(v).all():
        raise ValidationError("series must be finite")
    return (v >= t).astype(np.int64)


def _binary_values(f) -> np.ndarray:
    if isinstance(f, LabelVector):
        return f.values
    v = np.asarray(f)
    if not np.isin(v, (0, 1)).all():
        raise ValidationError("binary norm needs a 0/1 vector")
    return v.astype(np.int64)


def binary_norm(f) -> float:
    """Euclidean norm of a binary vector: sqrt(count of ones)."""
    v = _binary_values(f)
    return float(np.sqrt(int(v.sum())))


def thresholded_norm(values, t: float = 0.5) -> float:
    """Euclidean norm of the hardened series: sqrt(sum of I_t(y)^2)."""
    return float(np.sqrt(int(harden(values, t).sum())))


def thresholded_distance(y, z, t: float = 0.5) -> float:
    """Euclidean distance between two hardened series.

    Its square is the Hamming distance of the class assignments.
    """
    ids_y = y.ids if isinstance(y, (ProbSeries, LabelVector)) else None
    ids_z = z.ids if isinstance(z, (ProbSeries, LabelVector)) else None
    vy = y.values if ids_y is not None else np.asarray(y, dtype=np.float64)
    vz = z.values if ids_z is not None else np.asarray(z, dtype=np.float64)
    if ids_y is not None and ids_z is not None:
        vz = _align_values(ids_z, vz, ids_y, what="second series")
    elif len(vy) != len(vz):
        raise AlignmentError(
            f"series lengths differ: {len(vy)} vs {len(vz)}"
        )
    diff = harden(vy, t) - harden(vz, t)
    return float(np.sqrt(int((diff * diff).sum())))


def accuracy(pred, labels: LabelVector, t: float = 0.5) -> float:
    """Fraction of samples whose hardened prediction matches the label."""
    t = check_threshold(t)
    if isinstance(pred, ProbSeries):
        u = labels.align_to(pred.ids)
        v = pred.values
    else:
        v = np.asarray(pred, dtype=np.float64)
        u = labels.values if isinstance(labels, LabelVector) else np.asarray(labels)
        if len(v) != len(u):
            raise AlignmentError(f"series lengths differ: {len(v)} vs {len(u)}")
    if len(v) == 0:
        raise ValidationError("accuracy of an empty sample set is undefined")
    return float((harden(v, t) == u).mean())

import numpy as np
import pytest

from predfuse import LabelVector, PredictionMatrix


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240817))


def make_matrix(values, ids=None, names=None) -> PredictionMatrix:
    values = np.asarray(values, dtype=float)
    n, k = values.shape
    ids = tuple(f"s{i}" for i in range(n)) if ids is None else tuple(ids)
    names = tuple(f"M{j + 1}" for j in range(k)) if names is None else tuple(names)
    return PredictionMatrix(ids, names, values)


def make_labels(values, ids=None) -> LabelVector:
    values = np.asarray(values)
    ids = tuple(f"s{i}" for i in range(len(values))) if ids is None else tuple(ids)
    return LabelVector(ids, values)

"""Toy bag-of-words logistic classifier for end-to-end text runs.

A deliberately small stand-in so the pipeline can start from raw text at
desk scale: lowercase tokens, multi-hot presence encoding over a top-V
vocabulary, and a logistic layer trained with the same ADAM core as the
prediction combiner (unconstrained weights, no L2 by default).

Corpus format: one document per line; labels in a CSV aligned by 0-based
line number.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .core import sigmoid
from .errors import ValidationError
from .optim import Adam

__all__ = ["Vocabulary", "LogisticModel", "tokenize", "build_vocab", "encode",
           "train_logistic", "predict_proba", "logistic_loss",
           "logistic_gradient", "load_corpus"]

_TOKEN_SPLIT = re.compile(r"[^a-z0-9]+")
_LOG_EPS = 1e-12


def tokenize(doc: str) -> list[str]:
    """Lowercase and split on anything that is not a letter or digit."""
    return [t for t in _TOKEN_SPLIT.split(doc.lower()) if t]


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValidationError("vocabulary is empty")
        if len(set(self.tokens)) != len(self.tokens):
            raise ValidationError("vocabulary tokens must be unique")

    @property
    def size(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class LogisticModel:
    weights: np.ndarray = field(repr=False)
    bias: float
    vocab: Vocabulary


def build_vocab(corpus, v_size: int) -> Vocabulary:
    """Top-``v_size`` tokens by frequency, frequency ties broken lexically."""
    if v_size < 1:
        raise ValidationError("vocabulary size must be positive")
    counts = Counter()
    for doc in corpus:
        counts.update(tokenize(doc))
    if not counts:
        raise ValidationError("corpus has no tokens")
    ranked = sorted(counts, key=lambda tok: (-counts[tok], tok))
    return Vocabulary(tuple(ranked[:v_size]))


def encode(doc: str, vocab: Vocabulary) -> np.ndarray:
    """Multi-hot presence vector; repeats count once, unknown tokens drop."""
    present = set(tokenize(doc))
    return np.array([1.0 if tok in present else 0.0 for tok in vocab.tokens])


def predict_proba(model: LogisticModel, doc: str) -> float:
    return float(sigmoid(encode(doc, model.vocab) @ model.weights + model.bias))


def logistic_loss(w: np.ndarray, bias: float, x: np.ndarray,
                  u: np.ndarray) -> float:
    """Mean binary cross-entropy of sigmoid(x @ w + bias) against u."""
    yhat = np.clip(sigmoid(x @ w + bias), _LOG_EPS, 1.0 - _LOG_EPS)
    return float(-(u * np.log(yhat) + (1.0 - u) * np.log(1.0 - yhat)).mean())


def logistic_gradient(w: np.ndarray, bias: float, x: np.ndarray,
                      u: np.ndarray) -> np.ndarray:
    """Analytic gradient of :func:`logistic_loss`, weights first then bias."""
    resid = sigmoid(x @ w + bias) - u
    return np.append(x.T @ resid / len(u), resid.mean())


def train_logistic(docs, labels, v_size: int, epochs: int = 200,
                   lr: float = 0.05, seed: int = 0,
                   batch_size: int = 32) -> LogisticModel:
    """Fit the toy classifier; deterministic given the shuffle seed."""
    docs = list(docs)
    u = np.asarray(list(labels), dtype=np.float64)
    if len(docs) != len(u) or not docs:
        raise ValidationError("need equally many non-empty docs and labels")
    if not np.isin(u, (0, 1)).all():
        raise ValidationError("labels must be 0 or 1")
    if epochs < 1 or lr <= 0 or batch_size < 1:
        raise ValidationError("hyperparameters must be positive")
    vocab = build_vocab(docs, v_size)
    x = np.stack([encode(d, vocab) for d in docs])
    n, v = x.shape
    w = np.zeros(v)
    bias = 0.0
    opt = Adam(v + 1, lr=lr)
    rng = np.random.Generator(np.random.PCG64(seed))
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            grad = logistic_gradient(w, bias, x[idx], u[idx])
            params = opt.step(np.append(w, bias), grad)
            w, bias = params[:v], float(params[v])
    w.setflags(write=False)
    return LogisticModel(weights=w, bias=bias, vocab=vocab)


def load_corpus(path) -> list[str]:
    """One document per line; trailing newlines stripped, blank lines kept."""
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]

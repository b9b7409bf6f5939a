"""Logistic regression fit by stochastic gradient descent.

Features are standardized per column (constant columns are flagged and
scaled to zero instead of dividing by a zero stddev). Training shuffles
per epoch with a seeded generator, so a given (data, seed) pair always
yields the same model.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

LEARNING_RATE = 0.01
EPOCHS = 50
L2_PENALTY = 1e-4


class TrainingError(Exception):
    pass


def _sigmoid(z: np.ndarray | float) -> np.ndarray | float:
    return 1.0 / (1.0 + np.exp(-np.clip(z, -35.0, 35.0)))


@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    means: np.ndarray
    stds: np.ndarray  # constant features carry std 1.0 and a flag
    constant_features: list[bool]
    feature_names: tuple[str, ...] = ()
    epoch_losses: list[float] = field(default_factory=list)

    def _standardize(self, x: np.ndarray) -> np.ndarray:
        return (x - self.means) / self.stds

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        z = self._standardize(x) @ self.weights + self.bias
        return np.asarray(_sigmoid(z))

    def predict(self, x: np.ndarray, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(x) >= threshold).astype(int)

    def save(self, path: str | Path) -> None:
        doc = {
            "weights": self.weights.tolist(),
            "bias": self.bias,
            "means": self.means.tolist(),
            "stds": self.stds.tolist(),
            "constant_features": self.constant_features,
            "feature_names": list(self.feature_names),
        }
        Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "LogisticModel":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            weights=np.asarray(doc["weights"], dtype=float),
            bias=float(doc["bias"]),
            means=np.asarray(doc["means"], dtype=float),
            stds=np.asarray(doc["stds"], dtype=float),
            constant_features=list(doc["constant_features"]),
            feature_names=tuple(doc["feature_names"]),
        )


def fit_logistic_sgd(
    x: np.ndarray,
    y: np.ndarray,
    seed: int,
    learning_rate: float = LEARNING_RATE,
    epochs: int = EPOCHS,
    l2: float = L2_PENALTY,
    feature_names: tuple[str, ...] = (),
) -> LogisticModel:
    """Per-sample SGD on log loss with L2; epoch losses recorded full-batch."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 2 or len(x) != len(y):
        raise TrainingError("bad training shapes")
    if len(np.unique(y)) < 2:
        raise TrainingError("training data contains a single class")

    means = x.mean(axis=0)
    stds = x.std(axis=0)
    constant = stds < 1e-12
    stds = np.where(constant, 1.0, stds)
    xs = (x - means) / stds

    rng = np.random.default_rng(seed)
    n, d = xs.shape
    w = np.zeros(d)
    b = 0.0
    losses: list[float] = []
    for _ in range(epochs):
        for i in rng.permutation(n):
            p = _sigmoid(xs[i] @ w + b)
            g = p - y[i]
            w -= learning_rate * (g * xs[i] + l2 * w)
            b -= learning_rate * g
        z = xs @ w + b
        p = np.asarray(_sigmoid(z))
        eps = 1e-12
        loss = float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))
        loss += 0.5 * l2 * float(w @ w)
        losses.append(loss)

    return LogisticModel(
        weights=w,
        bias=float(b),
        means=means,
        stds=stds,
        constant_features=constant.tolist(),
        feature_names=feature_names,
        epoch_losses=losses,
    )


def stratified_folds(y: np.ndarray, folds: int, seed: int) -> list[np.ndarray]:
    """Deal each class's shuffled indices round-robin into `folds` buckets."""
    rng = np.random.default_rng(seed)
    buckets: list[list[int]] = [[] for _ in range(folds)]
    for label in np.unique(y):
        idx = np.flatnonzero(y == label)
        rng.shuffle(idx)
        for pos, i in enumerate(idx):
            buckets[pos % folds].append(int(i))
    return [np.asarray(sorted(b), dtype=int) for b in buckets]


def cross_validate(
    x: np.ndarray,
    y: np.ndarray,
    folds: int,
    seed: int,
    **fit_kwargs,
) -> float:
    """Mean held-out accuracy over stratified folds."""
    y = np.asarray(y, dtype=float)
    counts = [int((y == label).sum()) for label in np.unique(y)]
    if folds < 2:
        raise TrainingError("folds must be >= 2")
    if min(counts) < 2:
        raise TrainingError("need at least 2 samples of each class")
    if folds > min(counts):
        raise TrainingError(f"folds={folds} exceeds smallest class count {min(counts)}")
    accuracies = []
    for k, held_out in enumerate(stratified_folds(y, folds, seed)):
        mask = np.ones(len(y), dtype=bool)
        mask[held_out] = False
        model = fit_logistic_sgd(x[mask], y[mask], seed=seed + k, **fit_kwargs)
        pred = model.predict(x[held_out])
        accuracies.append(float((pred == y[held_out]).mean()))
    return float(np.mean(accuracies))


def epoch_losses_nonincreasing(losses: list[float], tolerance: float = 1e-6) -> bool:
    return all(losses[i + 1] <= losses[i] + tolerance for i in range(len(losses) - 1))

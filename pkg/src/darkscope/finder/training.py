"""Training entry points for the product-URL classifier.

The labeled-URL file format is one `label<TAB>url` per line with label in
{product, nonproduct}. A frozen corpus ships with the package for offline
training and evaluation.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from darkscope.finder.features import FEATURE_NAMES, extract_url_features
from darkscope.finder.logistic import (
    LogisticModel,
    TrainingError,
    cross_validate,
    fit_logistic_sgd,
)

LABELS = ("nonproduct", "product")


def load_labeled_urls(path: str | Path | None = None) -> list[tuple[str, str]]:
    """Read (url, label) pairs; `None` loads the bundled corpus."""
    if path is None:
        text = resources.files("darkscope.data").joinpath("labeled_urls.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    pairs: list[tuple[str, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        label, _, url = line.partition("\t")
        if label not in LABELS or not url:
            raise TrainingError(f"bad labeled line {lineno}: {line!r}")
        pairs.append((url, label))
    return pairs


def featurize(pairs: list[tuple[str, str]]) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray([extract_url_features(url).vector() for url, _ in pairs], dtype=float)
    y = np.asarray([1.0 if label == "product" else 0.0 for _, label in pairs], dtype=float)
    return x, y


def train_url_classifier(
    labeled: list[tuple[str, str]],
    folds: int = 5,
    seed: int = 0,
) -> tuple[LogisticModel, float]:
    """Five-fold CV accuracy plus a final model fit on all rows."""
    if len(labeled) < 4:
        raise TrainingError("need at least 4 labeled URLs")
    x, y = featurize(labeled)
    cv_accuracy = cross_validate(x, y, folds=folds, seed=seed, feature_names=FEATURE_NAMES)
    model = fit_logistic_sgd(x, y, seed=seed, feature_names=FEATURE_NAMES)
    return model, cv_accuracy

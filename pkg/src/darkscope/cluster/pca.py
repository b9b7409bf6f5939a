"""Principal component analysis on the dense centered count matrix.

Desk-scale implementation: eigendecomposition of the covariance matrix with
a deterministic sign convention (the largest-magnitude coordinate of each
component is made positive). Inputs above the configurable memory cap are
refused rather than silently thrashing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_MEMORY_CAP_BYTES = 2_000_000_000


class PcaError(Exception):
    pass


@dataclass
class PcaModel:
    component_vectors: np.ndarray  # (k, d), orthonormal rows
    explained_variance_ratio: np.ndarray  # (k,)
    retained_k: int
    mean: np.ndarray  # (d,)
    full_spectrum: np.ndarray  # all eigenvalues, descending

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.mean) @ self.component_vectors.T

    def inverse_transform(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=float) @ self.component_vectors + self.mean

    @property
    def cumulative_ratio(self) -> float:
        return float(self.explained_variance_ratio.sum())


def fit_pca(
    matrix: np.ndarray,
    variance_target: float = 0.95,
    fixed_k: int | None = None,
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP_BYTES,
) -> tuple[PcaModel, np.ndarray]:
    """Fit and project in one step; returns (model, projected matrix).

    Retains the smallest k whose cumulative explained-variance ratio meets
    the target; `fixed_k` overrides the target rule.
    """
    x = np.asarray(matrix, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise PcaError("need a 2-D matrix with at least 2 rows")
    if not (0.0 < variance_target <= 1.0):
        raise PcaError("variance_target must be in (0, 1]")
    if x.nbytes > memory_cap_bytes:
        raise PcaError(
            f"matrix needs {x.nbytes} bytes, above the cap of {memory_cap_bytes}"
        )

    mean = x.mean(axis=0)
    centered = x - mean
    cov = (centered.T @ centered) / (x.shape[0] - 1)
    eigenvalues, eigenvectors = np.linalg.eigh(cov)
    order = np.argsort(eigenvalues)[::-1]
    eigenvalues = np.clip(eigenvalues[order], 0.0, None)
    eigenvectors = eigenvectors[:, order].T  # rows are components

    total = float(eigenvalues.sum())
    if total <= 0.0:
        raise PcaError("matrix has zero variance (all rows identical)")
    ratios = eigenvalues / total

    if fixed_k is not None:
        if not (1 <= fixed_k <= len(eigenvalues)):
            raise PcaError(f"fixed_k={fixed_k} out of range")
        k = fixed_k
    else:
        cumulative = np.cumsum(ratios)
        k = int(np.searchsorted(cumulative, variance_target - 1e-12) + 1)
        k = min(k, len(eigenvalues))

    components = eigenvectors[:k].copy()
    for i in range(k):
        j = int(np.argmax(np.abs(components[i])))
        if components[i, j] < 0:
            components[i] = -components[i]

    model = PcaModel(
        component_vectors=components,
        explained_variance_ratio=ratios[:k],
        retained_k=k,
        mean=mean,
        full_spectrum=eigenvalues,
    )
    return model, model.transform(x)

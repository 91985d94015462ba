"""
Principal component analysis on the covariance of the raw inputs.
"""
from dataclasses import dataclass

import numpy as np

from .linalg import covariance, sym_eig

K_SEQUENCE = (10, 7, 5, 3)


@dataclass(frozen=True)
class PcaModel:
    means: np.ndarray
    components: np.ndarray  # D x k, orthonormal columns
    eigenvalues: np.ndarray

    @property
    def n_inputs(self):
        return self.components.shape[0]

    @property
    def k(self):
        return self.components.shape[1]

    def truncate(self, k):
        """Model keeping only the leading `k` directions."""
        if not 1 <= k <= self.k:
            raise ValueError("invalid k")
        return PcaModel(self.means, self.components[:, :k], self.eigenvalues[:k])


def fit_pca(data, k):
    x = np.asarray(data, dtype=float)
    if x.ndim != 2:
        raise ValueError("dimension mismatch")
    n, d = x.shape
    if not 1 <= k <= min(n - 1, d):
        raise ValueError("invalid k")
    eig = sym_eig(covariance(x))
    return PcaModel(x.mean(axis=0), eig.vectors[:, :k].copy(), eig.values[:k].copy())


def project(model, data):
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.shape[1] != model.n_inputs:
        raise ValueError("dimension mismatch")
    return (x - model.means) @ model.components


def reconstruct(model, scores):
    return np.asarray(scores, dtype=float) @ model.components.T + model.means


def save_pca_csv(model, path):
    """Write means row, eigenvalue row, then one row per component."""
    with open(path, "w") as fh:
        fh.write(f"#pca,{model.n_inputs},{model.k}\n")
        fh.write(",".join(f"{v:.17g}" for v in model.means) + "\n")
        fh.write(",".join(f"{v:.17g}" for v in model.eigenvalues) + "\n")
        for col in model.components.T:
            fh.write(",".join(f"{v:.17g}" for v in col) + "\n")


def load_pca_csv(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    head = lines[0].lstrip("#").split(",")
    if head[0] != "pca" or len(head) != 3:
        raise ValueError(f"line 1: bad PCA header {lines[0]!r}")
    d, k = int(head[1]), int(head[2])
    if len(lines) != 3 + k:
        raise ValueError(f"line {len(lines) + 1}: expected {3 + k} lines")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        row = np.array([float(t) for t in ln.split(",")])
        if not np.all(np.isfinite(row)):
            raise ValueError(f"line {i}: non-finite value")
        rows.append(row)
    means, eigenvalues = rows[0], rows[1]
    components = np.array(rows[2:]).T
    if means.size != d or eigenvalues.size != k or components.shape != (d, k):
        raise ValueError("dimension mismatch")
    return PcaModel(means, components, eigenvalues)

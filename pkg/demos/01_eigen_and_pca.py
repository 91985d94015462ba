"""
Covariance, the Jacobi eigensolver and PCA on a small correlated cloud.
"""
import numpy as np

from ardpca.linalg import covariance, sym_eig
from ardpca.pca import fit_pca, project, reconstruct

rng = np.random.default_rng(0)

# three latent directions mixed into six observed columns
latent = rng.standard_normal((500, 3)) * [3.0, 1.0, 0.3]
mixing = rng.standard_normal((3, 6))
x = latent @ mixing + 0.05 * rng.standard_normal((500, 6))

cov = covariance(x)
eig = sym_eig(cov)
print("eigenvalues:", np.round(eig.values, 4))
print("trace vs sum of eigenvalues:", np.trace(cov), eig.values.sum())

# V diag(l) V^T rebuilds the matrix
rebuilt = eig.vectors @ np.diag(eig.values) @ eig.vectors.T
print("reconstruction error:", np.linalg.norm(rebuilt - cov))

# keep three components; nearly all variance survives
model = fit_pca(x, 3)
scores = project(model, x)
print("retained variance fraction:", model.eigenvalues.sum() / np.trace(cov))
print("projected column variances:", np.round(scores.var(axis=0, ddof=1), 4))

# going back to six columns loses only the small residual directions
err = reconstruct(model, scores) - x
print("rms reconstruction error with k=3:", np.sqrt(np.mean(err ** 2)))

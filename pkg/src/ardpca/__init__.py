"""
Input-dimension reduction for fault-identification networks.

Principal component analysis and automatic relevance determination are
compared as ways of shrinking the input of a small multilayer perceptron,
on synthetic cylinder (modal-property) and gear (vibration) data.
"""
from . import ard, evaluation, features, linalg, mlp, pca, scg, signal, sof, synthdata

__version__ = "0.1.0"

__all__ = ["ard", "evaluation", "features", "linalg", "mlp", "pca", "scg",
           "signal", "sof", "synthdata", "__version__"]

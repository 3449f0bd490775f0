"""Eigen-features of a cropped gesture mask."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCrop, ShapeMismatch
from .imaging import BinaryMask
from .linalg import DEFAULT_TOL, covariance, eigen_symmetric

__all__ = ["FeatureSet", "extract_features", "EIGEN_COUNT"]

EIGEN_COUNT = 5
# eigenvalue magnitudes below this are roundoff around a PSD zero
ZERO_CLAMP = 1e-12


@dataclass(frozen=True, eq=False)
class FeatureSet:
    """Leading eigenvalues (non-increasing) with their unit eigenvectors.

    ``values`` has shape ``(k,)`` and ``vectors`` shape ``(k, n)``; row ``i``
    of ``vectors`` belongs to ``values[i]``.
    """

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        vectors = np.array(self.vectors, dtype=np.float64)
        if values.ndim != 1 or vectors.ndim != 2 or vectors.shape[0] != values.shape[0]:
            raise ShapeMismatch(
                f"need k values and k vectors, got shapes {values.shape} and {vectors.shape}"
            )
        values.setflags(write=False)
        vectors.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "vectors", vectors)

    @property
    def eigen_count(self) -> int:
        return self.values.shape[0]

    @property
    def vector_len(self) -> int:
        return self.vectors.shape[1]

    def __eq__(self, other):
        if not isinstance(other, FeatureSet):
            return NotImplemented
        return np.array_equal(self.values, other.values) and np.array_equal(
            self.vectors, other.vectors
        )

    def __hash__(self):
        return hash((self.values.tobytes(), self.vectors.tobytes()))


def extract_features(crop: BinaryMask, eigen_count: int = EIGEN_COUNT, side: int = 50,
                     tol: float = DEFAULT_TOL) -> FeatureSet:
    """Top ``eigen_count`` eigenpairs of the row covariance of ``crop``.

    Bits become 0.0/1.0; rows are the variables and columns the
    observations. A crop with zero covariance raises DegenerateCrop.
    """
    if crop.width != side or crop.height != side:
        raise ShapeMismatch(f"crop must be {side}x{side}, got {crop.width}x{crop.height}")
    if not 1 <= eigen_count <= side:
        raise ValueError(f"eigen_count must be in [1, {side}], got {eigen_count}")
    data = crop.bits.astype(np.float64)
    cov = covariance(data)
    if not cov.any():
        raise DegenerateCrop("cropped mask has zero covariance (every row is constant)")
    decomp = eigen_symmetric(cov, tol=tol)
    values = decomp.values[:eigen_count]
    values = np.where(np.abs(values) < ZERO_CLAMP, 0.0, values)
    return FeatureSet(values, decomp.vectors[:eigen_count])

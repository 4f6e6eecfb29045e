from __future__ import annotations

import numpy as np

__all__ = ["FiniteMetricSpace"]

TRIANGLE_RTOL = 1e-9


class FiniteMetricSpace:
    """A validated ``n x n`` distance matrix.

    Construction checks squareness, finiteness, exact zero diagonal,
    nonnegativity, symmetry and the triangle inequality. Both of the last two
    allow a relative slack of ``rtol`` to absorb solver rounding; the stored
    matrix is symmetrized.
    """

    __slots__ = ("_dist",)

    def __init__(self, dist, rtol: float = TRIANGLE_RTOL):
        D = np.array(dist, dtype=float)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {D.shape}")
        if D.shape[0] == 0:
            raise ValueError("distance matrix must have at least one point")
        if not np.all(np.isfinite(D)):
            raise ValueError("distance matrix has non-finite entries")
        if np.any(np.diag(D) != 0.0):
            raise ValueError("distance matrix must have a zero diagonal")
        if np.any(D < 0):
            raise ValueError("distance matrix has negative entries")
        asym = np.abs(D - D.T)
        if np.any(asym > rtol * np.maximum(D, D.T)):
            i, j = np.unravel_index(np.argmax(asym), D.shape)
            raise ValueError(f"distance matrix is not symmetric at ({i}, {j})")
        D = (D + D.T) / 2.0
        n = D.shape[0]
        for j in range(n):
            # excess[i, k] = D[i, k] - (D[i, j] + D[j, k])
            excess = D - (D[:, j, None] + D[None, j, :])
            if np.any(excess > rtol * D):
                i, k = np.unravel_index(np.argmax(excess - rtol * D), D.shape)
                raise ValueError(
                    f"triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})"
                )
        D.setflags(write=False)
        self._dist = D

    @property
    def dist(self) -> np.ndarray:
        return self._dist

    @property
    def n(self) -> int:
        return self._dist.shape[0]

    def __len__(self) -> int:
        return self.n

    def __array__(self, dtype=None, copy=None):
        return self._dist if dtype is None else self._dist.astype(dtype)

    def scaled(self, s: float) -> "FiniteMetricSpace":
        return FiniteMetricSpace(self._dist * s)

    def relabeled(self, perm) -> "FiniteMetricSpace":
        perm = np.asarray(perm)
        return FiniteMetricSpace(self._dist[np.ix_(perm, perm)])

    def __repr__(self) -> str:
        return f"FiniteMetricSpace(n={self.n})"

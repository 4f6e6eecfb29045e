"""Isometric embedding of finite l_p point sets into diagram space.

A point ``a`` in R^d becomes the d-point diagram whose k-th point
(k = 1..d) is ``(2c(k-1), 2c(k+1) + a_k)``. When ``c`` strictly exceeds every
coordinate magnitude and every pairwise l_p distance of the set, matching
the diagrams index-by-index is the unique optimal partial matching, so the
p-Wasserstein distance between images equals the l_p distance between
sources.

Also here: the head/tail truncations of finitely supported sequences and
the truncation-level search used to move from l_p to R^m.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .diagram import PersistenceDiagram, as_diagram, check_order, matching_cost
from .exceptions import BoundViolation, IsometryViolation, SizeLimitExceeded
from .matching import enumerate_partial_matchings, wasserstein

__all__ = [
    "check_point_set",
    "lp_norm",
    "lp_distance_matrix",
    "embedding_constant",
    "lemma_embed",
    "IsometryReport",
    "verify_isometry",
    "DeviantBoundsReport",
    "deviant_matching_bounds",
    "project_head",
    "project_tail",
    "choose_truncation",
    "LemmaEmbedding",
]

ISOMETRY_RTOL = 1e-9
DEVIANT_MAX_DIM = 4
# 2c(k-1) is rounded for k > 2, so birth gaps of "exactly 2c" may come out a few ulps short.
_FLOAT_SLACK = 1e-12


def check_point_set(a) -> np.ndarray:
    """Return ``a`` as a finite ``(n, d)`` float array with ``n >= 1``."""
    arr = np.array(a, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"point set must be 2-dimensional (n, d), got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("point set must contain at least one point")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point set has non-finite coordinates")
    return arr


def lp_norm(x, order) -> float:
    p = check_order(order)
    total = 0.0
    for t in np.abs(np.asarray(x, dtype=float)).ravel():
        total += float(t) ** p
    return total ** (1.0 / p)


def lp_distance_matrix(a, order) -> np.ndarray:
    """Pairwise l_p distances between the rows of ``a``."""
    p = check_order(order)
    a = check_point_set(a)
    n = a.shape[0]
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = lp_norm(a[i] - a[j], p)
    return D


def embedding_constant(a, order) -> float:
    """``1 + max(max_i ||a_i||_inf, max_ij ||a_i - a_j||_p)``.

    >>> embedding_constant([[0.0, 0.0]], 3)
    1.0
    """
    a = check_point_set(a)
    p = check_order(order)
    return 1.0 + max(float(np.abs(a).max()), float(lp_distance_matrix(a, p).max()))


def _check_constant(a: np.ndarray, p: float, c: float) -> float:
    c = float(c)
    floor = embedding_constant(a, p) - 1.0
    if not c > floor:
        raise ValueError(f"separation constant {c} must exceed {floor}")
    return c


def _embed_rows(a: np.ndarray, c: float) -> list[PersistenceDiagram]:
    d = a.shape[1]
    k = np.arange(1, d + 1, dtype=float)
    births = 2 * c * (k - 1)
    return [PersistenceDiagram(np.column_stack([births, 2 * c * (k + 1) + row])) for row in a]


def lemma_embed(a, order, c: float | None = None) -> list[PersistenceDiagram]:
    """Diagrams ``D_1..D_n`` for the rows of ``a``.

    Parameters
    ----------
    a : array-like of shape (n, d)
    order : float
        The p of the l_p source metric; it enters through ``c``.
    c : float, optional
        Separation constant. Defaults to :func:`embedding_constant`; an
        explicit value must still strictly exceed the same maximum.
    """
    a = check_point_set(a)
    p = check_order(order)
    c = embedding_constant(a, p) if c is None else _check_constant(a, p, c)
    return _embed_rows(a, c)


@dataclass
class IsometryReport:
    c: float
    pairs: list[tuple[int, int]] = field(default_factory=list)
    source: list[float] = field(default_factory=list)
    embedded: list[float] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)


def _relative_residual(got: float, want: float) -> float:
    return abs(got - want) / want if want > 0 else abs(got)


def verify_isometry(a, order, diagrams=None, rtol: float = ISOMETRY_RTOL) -> IsometryReport:
    """Check that embedded diagrams reproduce every pairwise l_p distance.

    Each pair must agree within ``rtol`` (relative) and the solver's optimal
    matching must be the index-by-index one. ``diagrams`` lets a caller check
    previously written diagrams instead of freshly built ones.

    Raises
    ------
    IsometryViolation
        On the worst offending pair.
    """
    a = check_point_set(a)
    p = check_order(order)
    c = embedding_constant(a, p)
    if diagrams is None:
        diagrams = _embed_rows(a, c)
    else:
        diagrams = [as_diagram(d) for d in diagrams]
        if len(diagrams) != a.shape[0]:
            raise ValueError(f"expected {a.shape[0]} diagrams, got {len(diagrams)}")
    report = IsometryReport(c)
    worst = None
    n = a.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            want = lp_norm(a[i] - a[j], p)
            res = wasserstein(diagrams[i], diagrams[j], p)
            r = _relative_residual(res.distance, want)
            report.pairs.append((i, j))
            report.source.append(want)
            report.embedded.append(res.distance)
            report.residuals.append(r)
            if r > rtol or not res.matching.is_identity():
                if worst is None or r > worst[0]:
                    note = None
                    if not res.matching.is_identity():
                        note = f"optimal matching for pair {(i, j)} is not index-by-index: {res.matching}"
                    worst = (r, (i, j), note)
    if worst is not None:
        raise IsometryViolation(worst[1], worst[0], worst[2])
    return report


@dataclass
class DeviantBoundsReport:
    c: float
    checked: int
    min_cost: float
    min_unmatched_cost: float
    min_mismatched_cost: float


def deviant_matching_bounds(a, order, i: int, j: int) -> DeviantBoundsReport:
    """Enumerate every non-identity partial matching between ``D_i`` and ``D_j``.

    Each must cost more than ``c``; those leaving an index unmatched more than
    ``3c/2``; those pairing ``k`` with ``k' != k`` at least ``2c``.
    """
    a = check_point_set(a)
    p = check_order(order)
    d = a.shape[1]
    if d > DEVIANT_MAX_DIM:
        raise SizeLimitExceeded(f"exhaustive matching enumeration supports d <= {DEVIANT_MAX_DIM}, got {d}")
    c = embedding_constant(a, p)
    di, dj = _embed_rows(a[[i, j]], c)
    checked = 0
    mins = [np.inf, np.inf, np.inf]
    for f in enumerate_partial_matchings(d, d):
        if f.is_identity():
            continue
        checked += 1
        cost = matching_cost(di, dj, f, p)
        mins[0] = min(mins[0], cost)
        if not cost > c:
            raise BoundViolation(f, cost, c)
        if f.unmatched1 or f.unmatched2:
            mins[1] = min(mins[1], cost)
            if not cost > 1.5 * c:
                raise BoundViolation(f, cost, 1.5 * c)
        if any(k != kk for k, kk in f.pairs):
            mins[2] = min(mins[2], cost)
            if not cost >= 2 * c * (1 - _FLOAT_SLACK):
                raise BoundViolation(f, cost, 2 * c)
    return DeviantBoundsReport(c, checked, *(float(x) for x in mins))


def project_head(x, m: int) -> np.ndarray:
    """Keep the first ``m`` coordinates, zero the rest."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    out = np.array(x, dtype=float)
    out[m:] = 0.0
    return out


def project_tail(x, m: int) -> np.ndarray:
    """Zero the first ``m`` coordinates, keep the rest."""
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    out = np.array(x, dtype=float)
    out[:m] = 0.0
    return out


def choose_truncation(vectors, order, bound: float = 0.5) -> int:
    """Smallest ``m`` such that every vector's tail past ``m`` has l_p norm <= ``bound``.

    Vectors may have different lengths; each is a finitely supported sequence.
    """
    p = check_order(order)
    if not bound > 0:
        raise ValueError(f"bound must be positive, got {bound}")
    vecs = [np.asarray(v, dtype=float).ravel() for v in vectors]
    length = max((v.size for v in vecs), default=0)
    for m in range(length + 1):
        if all(lp_norm(v[m:], p) <= bound for v in vecs):
            return m
    return length  # unreachable: every tail is empty at m = length


class LemmaEmbedding(TransformerMixin, BaseEstimator):
    """Embed rows of a point set as persistence diagrams.

    ``fit`` fixes the separation constant from the training points;
    ``transform`` may then embed those points or others, provided the
    combined set still sits strictly below the fitted constant (otherwise
    distances between transformed outputs would not be preserved).

    Parameters
    ----------
    p : float, default=2.0

    Attributes
    ----------
    constant_ : float
    n_features_in_ : int
    """

    def __init__(self, p: float = 2.0):
        self.p = p

    def fit(self, X, y=None):
        X = check_point_set(X)
        self.constant_ = embedding_constant(X, self.p)
        self.points_ = X
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> list[PersistenceDiagram]:
        check_is_fitted(self, "constant_")
        X = self._check_features(X)
        if X is not self.points_ and not np.array_equal(X, self.points_):
            _check_constant(np.vstack([self.points_, X]), check_order(self.p), self.constant_)
        return _embed_rows(X, self.constant_)

    def inverse_transform(self, diagrams) -> np.ndarray:
        """Recover source points from the deaths of embedded diagrams."""
        check_is_fitted(self, "constant_")
        d = self.n_features_in_
        offsets = 2 * self.constant_ * (np.arange(1, d + 1, dtype=float) + 1)
        rows = []
        for dgm in diagrams:
            arr = as_diagram(dgm).array
            if arr.shape[0] != d:
                raise ValueError(f"expected a diagram with {d} points, got {arr.shape[0]}")
            rows.append(arr[:, 1] - offsets)
        return np.array(rows)

    def _check_features(self, X) -> np.ndarray:
        X = check_point_set(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return X

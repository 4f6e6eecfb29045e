"""Exact p-Wasserstein distance between finite persistence diagrams.

Optimal partial matching is reduced to a balanced assignment problem by
diagonal augmentation and solved with a shortest-augmenting-path Hungarian
method. A brute-force enumeration of every partial matching serves as an
independent oracle for small inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterator

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .diagram import PartialMatching, PersistenceDiagram, as_diagram, check_order
from .exceptions import SizeLimitExceeded
from .metric import FiniteMetricSpace

__all__ = [
    "AssignmentProblem",
    "WassersteinResult",
    "build_assignment",
    "solve_assignment",
    "wasserstein",
    "wasserstein_distance",
    "enumerate_partial_matchings",
    "brute_force_wasserstein",
    "distance_matrix",
    "WassersteinDistance",
]

BRUTE_FORCE_LIMIT = 6


@dataclass(frozen=True)
class AssignmentProblem:
    """Square cost matrix of size ``n + m`` for diagrams of sizes ``n`` and ``m``.

    Rows are the ``n`` points of the first diagram followed by ``m`` diagonal
    ghosts standing in for points of the second; columns are the ``m`` points
    of the second diagram followed by ``n`` ghosts for the first. All entries
    are p-th powers of the corresponding ground costs.
    """

    cost: np.ndarray
    n: int
    m: int
    sentinel: float

    @property
    def size(self) -> int:
        return self.n + self.m


@dataclass(frozen=True)
class WassersteinResult:
    distance: float
    matching: PartialMatching


def _pair_costs(a1: np.ndarray, a2: np.ndarray) -> np.ndarray:
    """l_inf distance between every point of ``a1`` and every point of ``a2``."""
    return np.max(np.abs(a1[:, None, :] - a2[None, :, :]), axis=2)


def build_assignment(d1, d2, order) -> AssignmentProblem:
    p = check_order(order)
    d1, d2 = as_diagram(d1), as_diagram(d2)
    n, m = len(d1), len(d2)
    k = n + m
    C = np.zeros((k, k))
    if k == 0:
        return AssignmentProblem(C, 0, 0, 1.0)

    match = _pair_costs(d1.array, d2.array) ** p
    del1 = d1.gaps() ** p
    del2 = d2.gaps() ** p
    real_max = max(
        match.max(initial=0.0), del1.max(initial=0.0), del2.max(initial=0.0)
    )
    # Any sentinel-free assignment totals at most k * real_max.
    sentinel = 1.0 + k * real_max

    C[:n, :m] = match
    C[:n, m:] = sentinel
    C[n:, :m] = sentinel
    C[np.arange(n), m + np.arange(n)] = del1
    C[n + np.arange(m), np.arange(m)] = del2
    return AssignmentProblem(C, n, m, sentinel)


def solve_assignment(prob) -> tuple[float, list[int]]:
    """Minimum-total perfect assignment of a square cost matrix.

    Shortest augmenting paths with row/column potentials, O(k^3). Rows are
    inserted in index order and ties in the column scan go to the lowest
    column index, so the output is a deterministic function of the matrix.

    Parameters
    ----------
    prob : AssignmentProblem or array-like of shape (k, k)

    Returns
    -------
    total : float
        Sum of the selected entries, accumulated in row order.
    assignment : list of int
        ``assignment[r]`` is the column given to row ``r``.
    """
    C = prob.cost if isinstance(prob, AssignmentProblem) else np.asarray(prob, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {C.shape}")
    if not np.all(np.isfinite(C)):
        raise ValueError("cost matrix must have finite entries")
    k = C.shape[0]
    if k == 0:
        return 0.0, []

    # 1-based columns; column 0 is the virtual source of each augmentation.
    u = np.zeros(k + 1)
    v = np.zeros(k + 1)
    owner = np.zeros(k + 1, dtype=np.intp)
    way = np.zeros(k + 1, dtype=np.intp)
    cols = np.arange(1, k + 1)
    for row in range(1, k + 1):
        owner[0] = row
        j0 = 0
        minv = np.full(k + 1, np.inf)
        used = np.zeros(k + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = owner[j0]
            free = cols[~used[1:]]
            reduced = C[i0 - 1, free - 1] - u[i0] - v[free]
            better = reduced < minv[free]
            minv[free[better]] = reduced[better]
            way[free[better]] = j0
            j1 = free[np.argmin(minv[free])]
            delta = minv[j1]
            taken = np.flatnonzero(used)
            u[owner[taken]] += delta
            v[taken] -= delta
            minv[free] -= delta
            j0 = j1
            if owner[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            owner[j0] = owner[j1]
            j0 = j1

    assignment = [0] * k
    for j in range(1, k + 1):
        assignment[owner[j] - 1] = j - 1
    total = 0.0
    for r in range(k):
        total += float(C[r, assignment[r]])
    return total, assignment


def _assignment_to_matching(prob: AssignmentProblem, assignment) -> PartialMatching:
    n, m = prob.n, prob.m
    pairs, un1, un2 = [], [], []
    for r, c in enumerate(assignment):
        if r < n and c < m:
            pairs.append((r, c))
        elif r < n:
            un1.append(r)
        elif c < m:
            un2.append(c)
    return PartialMatching(tuple(pairs), tuple(un1), tuple(sorted(un2)))


def _check_no_sentinel(prob: AssignmentProblem, assignment) -> None:
    n, m = prob.n, prob.m
    for r, c in enumerate(assignment):
        if (r < n and c >= m and c - m != r) or (r >= n and c < m and r - n != c):
            raise RuntimeError(f"assignment used a forbidden entry at ({r}, {c})")


def wasserstein(d1, d2, order) -> WassersteinResult:
    """Exact p-Wasserstein distance and an optimal partial matching.

    Examples
    --------
    >>> wasserstein([(0, 2)], [(0, 4)], 2).distance
    2.0
    """
    p = check_order(order)
    d1, d2 = as_diagram(d1), as_diagram(d2)
    # solve in a canonical orientation so that swapping arguments is bit-exact
    swap = (len(d2), d2.array.tobytes()) < (len(d1), d1.array.tobytes())
    if swap:
        d1, d2 = d2, d1
    prob = build_assignment(d1, d2, p)
    total, assignment = solve_assignment(prob)
    _check_no_sentinel(prob, assignment)
    m = _assignment_to_matching(prob, assignment)
    if swap:
        m = PartialMatching(tuple(sorted((j, i) for i, j in m.pairs)), m.unmatched2, m.unmatched1)
    return WassersteinResult(total ** (1.0 / p), m)


def wasserstein_distance(d1, d2, order) -> float:
    return wasserstein(d1, d2, order).distance


def enumerate_partial_matchings(n1: int, n2: int) -> Iterator[PartialMatching]:
    """Every partial matching between index sets of sizes ``n1`` and ``n2``.

    Ordered by number of pairs, then lexicographically; the empty matching
    comes first.
    """
    for k in range(min(n1, n2) + 1):
        for left in combinations(range(n1), k):
            for right in permutations(range(n2), k):
                yield PartialMatching.from_pairs(zip(left, right), n1, n2)


def brute_force_wasserstein(d1, d2, order) -> WassersteinResult:
    """Minimum p-cost over all partial matchings, by enumeration.

    Costs are computed directly as l_p norms of the cost sequence, with no
    assignment reduction involved. Limited to 6 points per diagram.
    """
    p = check_order(order)
    d1, d2 = as_diagram(d1), as_diagram(d2)
    n1, n2 = len(d1), len(d2)
    if n1 > BRUTE_FORCE_LIMIT or n2 > BRUTE_FORCE_LIMIT:
        raise SizeLimitExceeded(
            f"brute force supports at most {BRUTE_FORCE_LIMIT} points per diagram, got {n1} and {n2}"
        )
    pair = _pair_costs(d1.array, d2.array)
    g1, g2 = d1.gaps(), d2.gaps()
    best = None
    for f in enumerate_partial_matchings(n1, n2):
        total = 0.0
        for i, j in f.pairs:
            total += float(pair[i, j]) ** p
        for i in f.unmatched1:
            total += float(g1[i]) ** p
        for j in f.unmatched2:
            total += float(g2[j]) ** p
        cost = total ** (1.0 / p)
        if best is None or cost < best[0]:
            best = (cost, f)
    return WassersteinResult(best[0], best[1])


def distance_matrix(diagrams, order) -> FiniteMetricSpace:
    """Pairwise p-Wasserstein distances of a nonempty list of diagrams."""
    p = check_order(order)
    dgms = [as_diagram(d) for d in diagrams]
    if not dgms:
        raise ValueError("need at least one diagram")
    n = len(dgms)
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = wasserstein(dgms[i], dgms[j], p).distance
    return FiniteMetricSpace(D)


class WassersteinDistance(TransformerMixin, BaseEstimator):
    """Map diagrams to their p-Wasserstein distances from a fitted reference set.

    Parameters
    ----------
    p : float, default=2.0
        Wasserstein order, ``1 <= p < inf``.

    Attributes
    ----------
    diagrams_ : list of PersistenceDiagram
        Reference diagrams seen during ``fit``.
    """

    def __init__(self, p: float = 2.0):
        self.p = p

    def fit(self, X, y=None):
        check_order(self.p)
        self.diagrams_ = _check_diagrams(X)
        return self

    def transform(self, X):
        check_is_fitted(self, "diagrams_")
        p = check_order(self.p)
        rows = _check_diagrams(X)
        out = np.empty((len(rows), len(self.diagrams_)))
        for i, d in enumerate(rows):
            for j, ref in enumerate(self.diagrams_):
                out[i, j] = wasserstein(d, ref, p).distance
        return out


def _check_diagrams(X) -> list[PersistenceDiagram]:
    if isinstance(X, PersistenceDiagram) or (isinstance(X, np.ndarray) and X.ndim == 2):
        raise ValueError("expected a sequence of diagrams, got a single diagram")
    dgms = [as_diagram(d) for d in X]
    if not dgms:
        raise ValueError("expected at least one diagram")
    return dgms

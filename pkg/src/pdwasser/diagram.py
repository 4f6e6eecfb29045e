"""Persistence diagrams, partial matchings and the p-cost of a matching.

Diagrams here are finite: a list of birth-death pairs with stable indices.
Duplicate points are allowed, which is how multiset semantics are kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exceptions import InvalidMatching, InvalidPointError

__all__ = [
    "DiagramPoint",
    "PersistenceDiagram",
    "PartialMatching",
    "check_order",
    "as_diagram",
    "persistence_cost",
    "linf_distance",
    "matching_cost",
    "empty_distance",
]


def check_order(p) -> float:
    """Validate a Wasserstein order and return it as a float (``1 <= p < inf``)."""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise ValueError(f"order p must be a real number, got {p!r}") from None
    if not (1.0 <= p < math.inf):
        raise ValueError(f"order p must satisfy 1 <= p < inf, got {p}")
    return p


@dataclass(frozen=True)
class DiagramPoint:
    birth: float
    death: float

    def __post_init__(self):
        b, d = float(self.birth), float(self.death)
        if not (math.isfinite(b) and math.isfinite(d)):
            raise InvalidPointError(f"non-finite diagram point ({b}, {d})")
        if not b < d:
            raise InvalidPointError(f"diagram point needs birth < death, got ({b}, {d})")
        object.__setattr__(self, "birth", b)
        object.__setattr__(self, "death", d)

    def __iter__(self):
        yield self.birth
        yield self.death


class PersistenceDiagram:
    """A finite persistence diagram.

    Points live in a read-only ``(n, 2)`` float array; row ``i`` is the point
    with index ``i``. Storage order carries no meaning beyond indexing.

    Parameters
    ----------
    points : iterable of (birth, death) pairs or DiagramPoint, or an (n, 2) array
    """

    __slots__ = ("_array",)

    def __init__(self, points: Iterable = ()):
        arr = np.array(
            [tuple(pt) for pt in points] if not isinstance(points, np.ndarray) else points,
            dtype=float,
        )
        if arr.size == 0:
            arr = np.empty((0, 2), dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError(f"diagram must have shape (n, 2), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidPointError("diagram contains non-finite coordinates")
        bad = np.flatnonzero(arr[:, 0] >= arr[:, 1])
        if bad.size:
            i = int(bad[0])
            raise InvalidPointError(
                f"diagram point {i} needs birth < death, got ({arr[i, 0]}, {arr[i, 1]})"
            )
        arr.setflags(write=False)
        self._array = arr

    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def points(self) -> list[DiagramPoint]:
        return [DiagramPoint(b, d) for b, d in self._array]

    def __len__(self) -> int:
        return self._array.shape[0]

    def __iter__(self) -> Iterator[DiagramPoint]:
        return iter(self.points)

    def __getitem__(self, i: int) -> DiagramPoint:
        b, d = self._array[i]
        return DiagramPoint(b, d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PersistenceDiagram):
            return NotImplemented
        return np.array_equal(self._array, other._array)

    def __hash__(self):
        return hash(self._array.tobytes())

    def __repr__(self) -> str:
        pts = ", ".join(f"({b:g}, {d:g})" for b, d in self._array)
        return f"PersistenceDiagram([{pts}])"

    def permuted(self, order: Sequence[int]) -> "PersistenceDiagram":
        """Same multiset, points stored in ``order``."""
        return PersistenceDiagram(self._array[list(order)])

    def gaps(self) -> np.ndarray:
        """Half-lifetimes ``(death - birth) / 2`` of every point."""
        return (self._array[:, 1] - self._array[:, 0]) / 2.0


def as_diagram(obj) -> PersistenceDiagram:
    if isinstance(obj, PersistenceDiagram):
        return obj
    return PersistenceDiagram(obj)


@dataclass(frozen=True)
class PartialMatching:
    """A bijection between index subsets of two diagrams.

    ``pairs`` holds ``(i, j)`` with ``i`` indexing the first diagram and ``j``
    the second; every other index appears in the matching unmatched list.
    """

    pairs: tuple[tuple[int, int], ...] = ()
    unmatched1: tuple[int, ...] = ()
    unmatched2: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(i), int(j)) for i, j in self.pairs))
        object.__setattr__(self, "unmatched1", tuple(int(i) for i in self.unmatched1))
        object.__setattr__(self, "unmatched2", tuple(int(j) for j in self.unmatched2))

    @classmethod
    def from_pairs(cls, pairs, n1: int, n2: int) -> "PartialMatching":
        """Build the matching with the given pairs, leaving everything else unmatched."""
        pairs = sorted((int(i), int(j)) for i, j in pairs)
        left = {i for i, _ in pairs}
        right = {j for _, j in pairs}
        return cls(
            tuple(pairs),
            tuple(i for i in range(n1) if i not in left),
            tuple(j for j in range(n2) if j not in right),
        )

    @classmethod
    def identity(cls, n: int) -> "PartialMatching":
        return cls(tuple((i, i) for i in range(n)))

    def validate(self, n1: int, n2: int) -> None:
        """Raise InvalidMatching unless the index sets partition ``range(n1)`` and ``range(n2)``."""
        left = [i for i, _ in self.pairs]
        right = [j for _, j in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise InvalidMatching(f"pairs are not a bijection: {self.pairs}")
        for side, matched, unmatched, n in (
            (1, left, self.unmatched1, n1),
            (2, right, self.unmatched2, n2),
        ):
            everything = list(matched) + list(unmatched)
            if len(everything) != n or sorted(everything) != list(range(n)):
                raise InvalidMatching(
                    f"indices of diagram {side} are not partitioned: "
                    f"matched={sorted(matched)}, unmatched={sorted(unmatched)}, size={n}"
                )

    def is_identity(self) -> bool:
        return not self.unmatched1 and not self.unmatched2 and all(i == j for i, j in self.pairs)


def persistence_cost(pt) -> float:
    """Cost of matching ``pt`` to the diagonal: ``(death - birth) / 2``."""
    birth, death = pt
    return (death - birth) / 2.0


def linf_distance(a, b) -> float:
    (b1, d1), (b2, d2) = a, b
    return max(abs(b1 - b2), abs(d1 - d2))


def matching_cost(d1, d2, m: PartialMatching, order) -> float:
    """p-cost of a partial matching.

    The l_p norm of the sequence made of the l_inf distances of matched pairs
    followed by the diagonal gaps of unmatched points of ``d1`` and then
    ``d2``. Summands are accumulated in that fixed order and the root is
    taken once.
    """
    p = check_order(order)
    d1, d2 = as_diagram(d1), as_diagram(d2)
    m.validate(len(d1), len(d2))
    a1, a2 = d1.array, d2.array
    total = 0.0
    for i, j in m.pairs:
        total += linf_distance(a1[i], a2[j]) ** p
    for i in m.unmatched1:
        total += persistence_cost(a1[i]) ** p
    for j in m.unmatched2:
        total += persistence_cost(a2[j]) ** p
    return float(total ** (1.0 / p))


def empty_distance(d, order) -> float:
    """Distance from ``d`` to the empty diagram (every point is deleted)."""
    p = check_order(order)
    total = 0.0
    for g in as_diagram(d).gaps():
        total += float(g) ** p
    return float(total ** (1.0 / p))

"""Angular supports: unions of disjoint directional-cosine intervals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from colored_scatter.errors import InvalidSupportError

# Grid nodes within this distance of an endpoint count as inside.
BOUNDARY_TOLERANCE = 1e-12


@dataclass(frozen=True)
class AngularSupport:
    """A union of closed, sorted, pairwise disjoint intervals inside [-1, 1].

    An empty support is representable so that callers can report it; every
    kernel and covariance routine refuses it.
    """

    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        cleaned = tuple((float(a), float(b)) for a, b in self.intervals)
        object.__setattr__(self, "intervals", cleaned)
        previous_end = -np.inf
        for a, b in cleaned:
            if not (np.isfinite(a) and np.isfinite(b)):
                raise InvalidSupportError("interval endpoints must be finite", cleaned)
            if a < -1.0 or b > 1.0:
                raise InvalidSupportError(f"[{a}, {b}] lies outside [-1, 1]", cleaned)
            if b <= a:
                raise InvalidSupportError(f"[{a}, {b}] has no positive length", cleaned)
            if a < previous_end:
                raise InvalidSupportError("intervals must be sorted", cleaned)
            if a == previous_end:
                raise InvalidSupportError(f"intervals overlap at {a}", cleaned)
            previous_end = b

    @classmethod
    def from_intervals(cls, intervals: Iterable[Sequence[float]]) -> "AngularSupport":
        """Build a support from (a, b) pairs in any order.

        Pairs are sorted by left endpoint first; overlapping pairs are an
        error rather than being merged.
        """
        pairs = sorted((float(p[0]), float(p[1])) for p in intervals)
        for (a0, b0), (a1, b1) in zip(pairs, pairs[1:]):
            if a1 <= b0:
                raise InvalidSupportError(
                    f"[{a0}, {b0}] and [{a1}, {b1}] overlap", pairs
                )
        return cls(tuple(pairs))

    @classmethod
    def parse(cls, text: str) -> "AngularSupport":
        """Parse the ``a:b,c:d,...`` interval syntax.

        Example:
            >>> AngularSupport.parse("-1:-0.7,-0.15:0.15,0.7:1").cluster_count()
            3
        """
        pairs = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            # a leading minus sign is part of the number, so split on the last colon
            left, sep, right = chunk.rpartition(":")
            if not sep or not left or not right:
                raise InvalidSupportError(f"'{chunk}' is not of the form a:b", text)
            try:
                pairs.append((float(left), float(right)))
            except ValueError as e:
                raise InvalidSupportError(f"'{chunk}' has a non-numeric endpoint", text) from e
        if not pairs:
            raise InvalidSupportError("no intervals given", text)
        return cls.from_intervals(pairs)

    def measure(self) -> float:
        """Total length |Omega| of the support."""
        return float(sum(b - a for a, b in self.intervals))

    def cluster_count(self) -> int:
        """Number of clusters M."""
        return len(self.intervals)

    def cluster(self, index: int) -> "AngularSupport":
        """The single-interval support of one cluster."""
        return AngularSupport((self.intervals[index],))

    def cluster_measures(self) -> list[float]:
        return [b - a for a, b in self.intervals]

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x: float) -> bool:
        """Boundary-inclusive membership test."""
        return any(
            a - BOUNDARY_TOLERANCE <= x <= b + BOUNDARY_TOLERANCE for a, b in self.intervals
        )

    def grid_indices(self, grid_k: int) -> tuple[np.ndarray, np.ndarray]:
        """Grid indices k in -K..K with k/K inside the support.

        Returns:
            (indices, labels): ascending integer grid indices and, for each,
            the index of the cluster containing it.
        """
        all_k = np.arange(-grid_k, grid_k + 1)
        alpha = all_k / grid_k
        indices: list[np.ndarray] = []
        labels: list[np.ndarray] = []
        for i, (a, b) in enumerate(self.intervals):
            inside = (alpha >= a - BOUNDARY_TOLERANCE) & (alpha <= b + BOUNDARY_TOLERANCE)
            indices.append(all_k[inside])
            labels.append(np.full(int(inside.sum()), i, dtype=np.int64))
        if not indices:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        return np.concatenate(indices), np.concatenate(labels)

    def to_text(self) -> str:
        """Inverse of :meth:`parse`."""
        return ",".join(f"{a:.15g}:{b:.15g}" for a, b in self.intervals)

    def __str__(self) -> str:
        return " U ".join(f"[{a:g}, {b:g}]" for a, b in self.intervals) or "{}"

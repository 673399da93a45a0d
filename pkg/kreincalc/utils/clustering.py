from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.cluster.hierarchy import fclusterdata


@dataclass(frozen=True)
class Cluster:
    """A group of nearby complex numbers."""

    centroid: complex
    members: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)


def cluster_values(values: Iterable[complex], radius: float) -> list[Cluster]:
    """Single-linkage clustering of complex numbers.

    Two values end up in the same cluster when a chain of values with
    consecutive distances at most *radius* connects them.  Clusters are
    returned sorted by (real, imag) of their centroid.
    """
    vals = np.asarray(list(values), dtype=complex)
    if len(vals) < 2:
        labels = np.ones(len(vals), dtype=int)
    else:
        points = np.column_stack([vals.real, vals.imag])
        labels = fclusterdata(points, t=radius, criterion="distance", method="single")

    clusters = []
    for label in np.unique(labels):
        idx = np.flatnonzero(labels == label)
        clusters.append(Cluster(centroid=complex(np.mean(vals[idx])), members=tuple(int(i) for i in idx)))
    clusters.sort(key=lambda c: (round(c.centroid.real, 12), round(c.centroid.imag, 12)))
    return clusters


def match_index(value: complex, candidates: Iterable[complex], tol: float) -> int | None:
    """Index of the unique candidate within *tol* of *value*, else ``None``.

    Raises ``ValueError`` when more than one candidate is that close.
    """
    hits = [k for k, c in enumerate(candidates) if abs(c - value) <= tol]
    if len(hits) > 1:
        raise ValueError(f"{value} matches {len(hits)} candidates within {tol:.1e}")
    return hits[0] if hits else None

# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Flat-kernel mean shift."""

__all__ = [
    'MeanShiftResult',
    'mean_shift',
    ]

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


# Trajectories are advanced this many at a time to bound memory.
_CHUNK = 1024


@dataclass(frozen=True)
class MeanShiftResult:
    """Modes found by mean shift.

    :ivar modes: An ``(M, D)`` array, sorted lexicographically.
    :ivar labels: For every input point, the index of its mode.
    :ivar iterations: The most iterations any trajectory needed.
    """

    modes: np.ndarray
    labels: np.ndarray
    iterations: int

    @property
    def sizes(self):
        return np.bincount(self.labels, minlength=len(self.modes))


def _shift(points, positions, bandwidth):
    inside = cdist(positions, points) <= bandwidth
    counts = inside.sum(axis=1)
    moved = inside.astype(float) @ points
    return np.where(counts[:, np.newaxis] > 0,
                    moved / np.maximum(counts, 1)[:, np.newaxis], positions)


def mean_shift(points, bandwidth, max_iter=300, tol=1e-5, merge_radius=None):
    """Cluster ``points`` by flat-kernel mean shift.

    Every point starts a trajectory that repeatedly moves to the mean of
    the points within ``bandwidth`` of it, until it moves less than
    ``tol`` or ``max_iter`` is reached. End points closer than
    ``merge_radius`` (default ``bandwidth / 2``) become one mode; end
    points are merged in order of how many points surround them.

    :param points: An ``(N, D)`` array with N >= 1.
    :param bandwidth: The kernel radius, > 0.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, np.newaxis]
    if merge_radius is None:
        merge_radius = bandwidth / 2.0
    positions = points.copy()
    active = np.ones(len(points), dtype=bool)
    iterations = 0
    while active.any() and iterations < max_iter:
        iterations += 1
        rows = np.flatnonzero(active)
        for start in range(0, len(rows), _CHUNK):
            chunk = rows[start:start + _CHUNK]
            updated = _shift(points, positions[chunk], bandwidth)
            moved = np.linalg.norm(updated - positions[chunk], axis=1)
            positions[chunk] = updated
            active[chunk[moved < tol]] = False
    support = np.zeros(len(points), dtype=int)
    for start in range(0, len(points), _CHUNK):
        support[start:start + _CHUNK] = (
            cdist(positions[start:start + _CHUNK], points)
            <= bandwidth).sum(axis=1)
    centres = []
    owner = np.empty(len(points), dtype=int)
    for i in sorted(range(len(points)), key=lambda i: (-support[i], i)):
        if centres:
            distances = np.linalg.norm(
                np.array(centres) - positions[i], axis=1)
            nearest = int(np.argmin(distances))
            if distances[nearest] < merge_radius:
                owner[i] = nearest
                continue
        centres.append(positions[i])
        owner[i] = len(centres) - 1
    centres = np.array(centres)
    order = np.lexsort(centres.T[::-1])
    relabel = np.empty(len(order), dtype=int)
    relabel[order] = np.arange(len(order))
    return MeanShiftResult(centres[order], relabel[owner], iterations)

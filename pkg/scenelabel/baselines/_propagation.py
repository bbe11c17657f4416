# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Graph-based label propagation over a k-nearest-neighbour graph."""

__all__ = [
    'PropagationConfig',
    'label_propagation',
    'propagation_labeler',
    ]

from dataclasses import dataclass
import logging
import warnings

import numpy as np
from scipy import sparse
from scipy.spatial import cKDTree

from scenelabel.errors import (
    ConfigError,
    DimensionError,
    DisconnectedNodeWarning,
    EmptyInputError,
    )
from scenelabel.features import NUM_SPATIAL, feature_matrix
from scenelabel.helpers import standardize


logger = logging.getLogger(__name__)


@dataclass
class PropagationConfig:
    """Settings of the propagation graph and iteration.

    ``kernel_bandwidth`` is a positive number or ``'median'``, the median
    length of the graph's non-zero edges.
    """

    k_neighbors: int = 10
    kernel_bandwidth: object = 'median'
    max_iterations: int = 1000
    tolerance: float = 1e-6
    clamp: bool = True

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise ConfigError('propagation.k_neighbors must be >= 1')
        if self.max_iterations < 1:
            raise ConfigError('propagation.max_iterations must be >= 1')
        if not self.tolerance > 0:
            raise ConfigError('propagation.tolerance must be > 0')
        if self.kernel_bandwidth != 'median' and not (
                isinstance(self.kernel_bandwidth, (int, float))
                and self.kernel_bandwidth > 0):
            raise ConfigError(
                "propagation.kernel_bandwidth must be 'median' or > 0")


def _knn_graph(X, k, bandwidth):
    n = X.shape[0]
    k = min(k, n - 1)
    if k < 1:
        return sparse.csr_matrix((n, n))
    distances, neighbours = cKDTree(X).query(X, k=k + 1)
    # Drop each point itself; with coincident points it may not be first.
    is_self = neighbours == np.arange(n)[:, np.newaxis]
    missing = ~is_self.any(axis=1)
    is_self[missing, -1] = True
    keep = ~is_self
    rows = np.repeat(np.arange(n), k)
    cols = neighbours[keep]
    lengths = distances[keep]
    if bandwidth == 'median':
        positive = lengths[lengths > 0]
        sigma = float(np.median(positive)) if len(positive) else 1.0
    else:
        sigma = float(bandwidth)
    weights = np.exp(-lengths ** 2 / (2.0 * sigma ** 2))
    graph = sparse.csr_matrix((weights, (rows, cols)), shape=(n, n))
    return graph.maximum(graph.T).tocsr()


def label_propagation(X_l, y_l, X_u, cfg=None, num_classes=None):
    """Propagate labels from labeled to unlabeled points.

    Builds a symmetric k-NN graph over all points with Gaussian weights
    ``exp(-d^2 / 2 sigma^2)`` and iterates ``F <- D^-1 W F``, re-clamping
    the labeled rows when ``cfg.clamp``, until the largest change falls
    below ``cfg.tolerance``.

    :return: An ``(len(X_u), K)`` array of distributions. Unlabeled
        points the labels never reach get the uniform distribution.
    :raises EmptyInputError: If there are no labeled points.
    """
    cfg = cfg or PropagationConfig()
    X_l = np.asarray(X_l, dtype=float)
    X_u = np.asarray(X_u, dtype=float)
    y_l = np.asarray(y_l, dtype=int)
    if X_l.ndim != 2 or X_l.shape[0] == 0:
        raise EmptyInputError('label propagation needs labeled points')
    if X_u.ndim != 2 or X_u.shape[1] != X_l.shape[1]:
        raise DimensionError(
            'labeled points have {} features, unlabeled shape {}'.format(
                X_l.shape[1], X_u.shape))
    if num_classes is None:
        num_classes = int(y_l.max()) + 1
    if X_u.shape[0] == 0:
        return np.zeros((0, num_classes))
    n_l = X_l.shape[0]
    X = np.vstack([X_l, X_u])
    graph = _knn_graph(X, cfg.k_neighbors, cfg.kernel_bandwidth)
    degree = np.asarray(graph.sum(axis=1)).ravel()
    inverse = sparse.diags(np.where(degree > 0, 1.0 / np.where(
        degree > 0, degree, 1.0), 0.0))
    transition = inverse @ graph
    seeds = np.zeros((n_l, num_classes))
    seeds[np.arange(n_l), y_l] = 1.0
    F = np.vstack([seeds, np.zeros((X_u.shape[0], num_classes))])
    for iteration in range(1, cfg.max_iterations + 1):
        updated = transition @ F
        if cfg.clamp:
            updated[:n_l] = seeds
        change = np.max(np.abs(updated - F))
        F = updated
        if change < cfg.tolerance:
            break
    logger.debug('label propagation stopped after %d iterations', iteration)
    result = F[n_l:]
    totals = result.sum(axis=1)
    unreached = totals <= 0
    if unreached.any():
        warnings.warn(
            '{} unlabeled points are not connected to any labeled '
            'point'.format(int(unreached.sum())),
            DisconnectedNodeWarning, stacklevel=2)
    result = np.where(unreached[:, np.newaxis], 1.0 / num_classes,
                      result / np.where(unreached, 1.0, totals)[:, np.newaxis])
    return result


def propagation_labeler(split, cfg=None, pairs=None):
    """Label ``pairs`` (default: the unlabeled pairs) by propagation.

    Runs on combined features; the spatial block is standardized over
    all points and the one-hot block is left as is.

    :return: An ``(N, |P|)`` array of distributions.
    """
    pooled = split.pooled_labeled()
    if not pooled:
        raise EmptyInputError('label propagation needs labeled points')
    pairs = split.unlabeled if pairs is None else pairs
    vocab = split.category_vocab
    X_l = feature_matrix([rel.pair for rel in pooled], vocab)
    X_u = feature_matrix(pairs, vocab)
    scaled, _, _ = standardize(np.vstack([X_l, X_u]), np.arange(NUM_SPATIAL))
    return label_propagation(
        scaled[:len(pooled)], [rel.predicate for rel in pooled],
        scaled[len(pooled):], cfg, num_classes=len(split.predicate_vocab))

# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Count the spatial and categorical subtypes of a predicate."""

__all__ = [
    'SEPARATION',
    'SubtypeReport',
    'count_subtypes',
    'merge_overlapping',
    'pair_subtypes',
    'quantile_bandwidth',
    'subtype_series',
    'subtypes_csv',
    ]

from dataclasses import dataclass
import logging

import numpy as np
from scipy.spatial.distance import cdist, pdist

from scenelabel.analysis._meanshift import mean_shift
from scenelabel.content import csv_content
from scenelabel.errors import ConfigError, EmptyInputError
from scenelabel.features import feature_matrix
from scenelabel.helpers import standardize, substream


logger = logging.getLogger(__name__)

# Centroid distance, in pooled radii, below which two clusters merge.
SEPARATION = 6.0


@dataclass(frozen=True)
class SubtypeReport:
    """The complexity of one predicate.

    :ivar categorical_subtypes: Distinct (subject, object) category pairs.
    :ivar categorical_union: Distinct categories over both roles.
    :ivar spatial_subtypes: Mean-shift clusters of the spatial features,
        or None when only categorical subtypes were counted.
    :ivar bandwidth: The mean-shift bandwidth, in standardized units.
    """

    predicate: int
    spatial_subtypes: object
    categorical_subtypes: int
    instances_used: int
    bandwidth: float
    categorical_union: int = 0


def quantile_bandwidth(points, quantile=0.3, max_points=2000, seed=0):
    """Return the ``quantile`` of pairwise distances between distinct points.

    Larger sets are subsampled to ``max_points`` first.
    """
    if not 0 < quantile <= 1:
        raise ConfigError('quantile must be in (0, 1], got {!r}'.format(
            quantile))
    unique = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(unique) < 2:
        return 0.0
    if len(unique) > max_points:
        rows = substream(seed, 'analysis/bandwidth').choice(
            len(unique), max_points, replace=False)
        unique = unique[np.sort(rows)]
    distances = pdist(unique)
    return float(np.quantile(distances[distances > 0], quantile))


def merge_overlapping(points, labels, separation=SEPARATION):
    """Merge clusters whose centroids are not well separated.

    Two clusters count as separated when the distance between their
    centroids is at least ``separation`` times their pooled root mean
    square radius. The least separated pair merges first, until every
    remaining pair is separated or one cluster is left.

    :param points: An ``(N, D)`` array.
    :param labels: The cluster of every point.
    :return: New labels numbered from 0, in the order of the smallest
        original label of each merged cluster.
    """
    points = np.asarray(points, dtype=float)
    labels = np.asarray(labels)
    groups = [[label] for label in np.unique(labels)]
    members = [points[labels == group[0]] for group in groups]
    counts = np.array([len(m) for m in members], dtype=float)
    centroids = np.array([m.mean(axis=0) for m in members])
    scatter = np.array([np.sum((m - c) ** 2)
                        for m, c in zip(members, centroids)])
    while len(groups) > 1:
        distance = cdist(centroids, centroids)
        radius = np.sqrt((scatter[:, np.newaxis] + scatter)
                         / (counts[:, np.newaxis] + counts))
        with np.errstate(divide='ignore', invalid='ignore'):
            ratio = np.where(radius > 0, distance / radius, np.inf)
        np.fill_diagonal(ratio, np.inf)
        a, b = sorted(np.unravel_index(np.argmin(ratio), ratio.shape))
        if not ratio[a, b] < separation:
            break
        total = counts[a] + counts[b]
        gap = np.sum((centroids[a] - centroids[b]) ** 2)
        scatter[a] += scatter[b] + counts[a] * counts[b] / total * gap
        centroids[a] = (counts[a] * centroids[a]
                        + counts[b] * centroids[b]) / total
        counts[a] = total
        groups[a].extend(groups.pop(b))
        keep = np.arange(len(counts)) != b
        centroids, counts, scatter = (
            centroids[keep], counts[keep], scatter[keep])
    merged = np.empty(len(labels), dtype=int)
    for number, group in enumerate(groups):
        merged[np.isin(labels, group)] = number
    return merged


def _spatial_count(features, quantile, min_cluster_fraction, separation,
                   seed):
    scaled, _, _ = standardize(features)
    if len(np.unique(scaled, axis=0)) < 2:
        return 1, 0.0
    bandwidth = quantile_bandwidth(scaled, quantile, seed=seed)
    labels = merge_overlapping(
        scaled, mean_shift(scaled, bandwidth).labels, separation)
    sizes = np.bincount(labels)
    keep = sizes >= min_cluster_fraction * len(scaled)
    if not keep.any():
        keep[np.argmax(sizes)] = True
    if not keep.all():
        # Members of pruned clusters join their nearest surviving centroid.
        survivors = np.array([scaled[labels == i].mean(axis=0)
                              for i in np.flatnonzero(keep)])
        labels = np.argmin(cdist(scaled, survivors), axis=1)
        logger.debug('pruned %d small clusters', int((~keep).sum()))
    return len(np.unique(labels)), bandwidth


def pair_subtypes(pairs, predicate=0, kind='spatial', quantile=0.1,
                  min_cluster_fraction=0.05, seed=0, separation=SEPARATION):
    """Count the subtypes among ``pairs``, all instances of ``predicate``.

    :param kind: ``'spatial'`` counts both kinds; ``'categorical'`` skips
        the clustering.
    :raises EmptyInputError: If ``pairs`` is empty.
    """
    if kind not in ('spatial', 'categorical'):
        raise ConfigError('unknown subtype kind {!r}'.format(kind))
    pairs = list(pairs)
    if not pairs:
        raise EmptyInputError(
            'predicate {} has no instances to count subtypes of'.format(
                predicate))
    categories = {(pair.subject.category, pair.object.category)
                  for pair in pairs}
    union = {c for pair_categories in categories for c in pair_categories}
    spatial, bandwidth = None, 0.0
    if kind == 'spatial':
        spatial, bandwidth = _spatial_count(
            feature_matrix(pairs, 0, 'spatial'), quantile,
            min_cluster_fraction, separation, seed)
    return SubtypeReport(predicate, spatial, len(categories), len(pairs),
                         bandwidth, len(union))


def count_subtypes(ds, p, kind='spatial', quantile=0.1,
                   min_cluster_fraction=0.05, seed=0, separation=SEPARATION):
    """Count the subtypes of every ground-truth instance of ``p`` in ``ds``.

    Spatial subtypes are mean-shift clusters of the standardized spatial
    features, with the bandwidth set to the ``quantile`` of pairwise
    distances. Clusters closer than ``separation`` pooled radii are then
    merged (see ``merge_overlapping``), and clusters holding less than
    ``min_cluster_fraction`` of the instances are folded into their
    neighbours. Categorical subtypes are distinct (subject, object)
    category pairs.
    """
    return pair_subtypes(ds.instances(p), p, kind, quantile,
                         min_cluster_fraction, seed, separation)


def subtype_series(split, predicates=None, quantile=0.1,
                   min_cluster_fraction=0.05, seed=0, separation=SEPARATION):
    """Return per-predicate complexity series of a split.

    :return: A dict with ``'train_subtypes'`` (spatial subtypes in D_p),
        ``'unlabeled_subtypes'`` (in the unlabeled instances of p) and
        ``'labeled_proportion'`` (their ratio), each a list aligned with
        the returned ``'predicates'``. Predicates lacking either set are
        left out.
    """
    if predicates is None:
        predicates = range(len(split.predicate_vocab))
    unlabeled = {}
    for pair in split.unlabeled:
        for p in split.unlabeled_gold.get(pair.pair_id, ()):
            unlabeled.setdefault(p, []).append(pair)
    series = {'predicates': [], 'train_subtypes': [],
              'unlabeled_subtypes': [], 'labeled_proportion': []}
    for p in predicates:
        train_pairs = [rel.pair for rel in split.labeled[p]]
        if not train_pairs or not unlabeled.get(p):
            continue
        settings = dict(quantile=quantile,
                        min_cluster_fraction=min_cluster_fraction,
                        seed=seed, separation=separation)
        train = pair_subtypes(train_pairs, p, **settings).spatial_subtypes
        pool = pair_subtypes(unlabeled[p], p, **settings).spatial_subtypes
        series['predicates'].append(p)
        series['train_subtypes'].append(train)
        series['unlabeled_subtypes'].append(pool)
        series['labeled_proportion'].append(train / pool)
    return series


def subtypes_csv(reports, predicate_vocab):
    """Return subtype reports as CSV Content."""
    return csv_content(
        ['predicate', 'spatial_subtypes', 'categorical_subtypes',
         'categorical_union', 'instances', 'bandwidth'],
        ([predicate_vocab[r.predicate],
          '' if r.spatial_subtypes is None else r.spatial_subtypes,
          r.categorical_subtypes, r.categorical_union, r.instances_used,
          repr(round(r.bandwidth, 12))]
         for r in reports))

# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Per-predicate label matrices of heuristic votes."""

__all__ = [
    'LabelMatrix',
    'build_label_matrices',
    'build_label_matrix',
    'label_matrix_triplets',
    ]

import numpy as np
from scipy import sparse

from scenelabel.errors import AlignmentError, ValidationError


class LabelMatrix:
    """A J x N matrix of votes over {-1, 0, +1} for one predicate.

    Column ``i`` holds the votes on the pair ``pair_ids[i]``.
    """

    def __init__(self, predicate, entries, pair_ids):
        entries = np.asarray(entries)
        if entries.ndim != 2:
            raise ValidationError(
                'label matrix must be 2-d, got shape {}'.format(entries.shape))
        if not np.isin(entries, (-1, 0, 1)).all():
            raise ValidationError('label matrix entries must be -1, 0 or +1')
        pair_ids = tuple(pair_ids)
        if entries.shape[1] != len(pair_ids):
            raise AlignmentError(
                '{} columns but {} pair ids'.format(
                    entries.shape[1], len(pair_ids)))
        self.predicate = predicate
        self.entries = entries.astype(np.int8)
        self.pair_ids = pair_ids

    @property
    def shape(self):
        return self.entries.shape

    def __repr__(self):
        return '<LabelMatrix predicate={} J={} N={}>'.format(
            self.predicate, *self.shape)

    def coverage(self):
        """Return the fraction of non-abstain entries per heuristic."""
        if not self.shape[1]:
            return np.zeros(self.shape[0])
        return (self.entries != 0).mean(axis=1)


def build_label_matrix(hs, features, p, pair_ids, votes=None):
    """Return the one-vs-rest label matrix of predicate ``p``.

    Entry ``(j, i)`` is +1 when tree ``j``'s top class on pair ``i`` is
    ``p`` with probability at least the abstain threshold, -1 when it is
    another predicate with such confidence, and 0 otherwise. A leaf whose
    top probability is tied between classes votes 0.

    :param features: Mode -> feature matrix for the pairs.
    :param votes: A precomputed ``hs.vote(features)``, shared between
        predicates.
    """
    top, confidence = votes if votes is not None else hs.vote(features)
    confident = (confidence >= hs.abstain_threshold) & (top >= 0)
    entries = np.where(confident, np.where(top == p, 1, -1), 0)
    return LabelMatrix(p, entries, pair_ids)


def build_label_matrices(hs, features, pair_ids):
    """Return one label matrix per predicate from a single voting pass."""
    votes = hs.vote(features)
    return [build_label_matrix(hs, features, p, pair_ids, votes)
            for p in range(hs.num_predicates)]


def label_matrix_triplets(lm):
    """Return the non-zero entries as sorted ``(j, i, value)`` triplets."""
    coo = sparse.coo_matrix(lm.entries)
    order = np.lexsort((coo.col, coo.row))
    return [(int(coo.row[k]), int(coo.col[k]), int(coo.data[k]))
            for k in order]

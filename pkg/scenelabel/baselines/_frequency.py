# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Category-pair frequency priors."""

__all__ = [
    'FrequencyTable',
    'build_frequency_table',
    'frequency_baseline',
    ]

import numpy as np


class FrequencyTable:
    """Per (subject category, object category) predicate counts.

    :ivar overlap_required: If true, only instances whose boxes intersect
        with positive area were counted.
    """

    def __init__(self, num_predicates, overlap_required=False):
        self.num_predicates = num_predicates
        self.overlap_required = overlap_required
        self.counts = {}

    def add(self, relationship):
        """Count ``relationship``; return whether it was counted."""
        pair = relationship.pair
        if self.overlap_required and not (
                pair.subject.box.intersection_area(pair.object.box) > 0):
            return False
        key = (pair.subject.category, pair.object.category)
        if key not in self.counts:
            self.counts[key] = np.zeros(self.num_predicates)
        self.counts[key][relationship.predicate] += 1
        return True

    def total(self):
        return int(sum(row.sum() for row in self.counts.values()))

    def distribution(self, subject_category, object_category):
        """Return normalised counts for a key, uniform when it is unseen."""
        row = self.counts.get((subject_category, object_category))
        if row is None or row.sum() == 0:
            return np.full(self.num_predicates, 1.0 / self.num_predicates)
        return row / row.sum()


def build_frequency_table(split, overlap_required=False):
    """Count the labeled relationships of every D_p."""
    table = FrequencyTable(len(split.predicate_vocab), overlap_required)
    for rel in split.pooled_labeled():
        table.add(rel)
    return table


def frequency_baseline(split, pairs=None, overlap_required=False):
    """Predict each pair's predicate from its category pair alone.

    :return: An ``(N, |P|)`` array of distributions.
    """
    table = build_frequency_table(split, overlap_required)
    pairs = split.unlabeled if pairs is None else pairs
    rows = [table.distribution(pair.subject.category, pair.object.category)
            for pair in pairs]
    if not rows:
        return np.zeros((0, table.num_predicates))
    return np.array(rows)

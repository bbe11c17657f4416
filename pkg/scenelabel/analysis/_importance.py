# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Which features a one-vs-rest tree relies on to find a predicate."""

__all__ = [
    'ImportanceReport',
    'feature_importances',
    ]

from dataclasses import dataclass

import numpy as np

from scenelabel.errors import EmptyInputError
from scenelabel.features import feature_matrix, feature_names
from scenelabel.heuristics import fit_tree


@dataclass(frozen=True)
class ImportanceReport:
    """Features ranked by importance.

    :ivar ranking: ``(feature name, importance)`` pairs, most important
        first; ties keep feature order.
    :ivar has_splits: False when the tree is a single leaf, in which case
        every importance is 0.
    """

    predicate: int
    ranking: list
    has_splits: bool

    def to_dict(self):
        return {'has_splits': self.has_splits,
                'ranking': [[name, value] for name, value in self.ranking]}


def feature_importances(split, p, max_depth=3):
    """Rank combined features by their Gini decrease in a tree for ``p``.

    The tree separates D_p (positives) from the labeled examples of every
    other predicate (negatives).

    :raises EmptyInputError: If D_p is empty.
    """
    positives = [rel.pair for rel in split.labeled[p]]
    if not positives:
        raise EmptyInputError(
            'predicate {!r} has no labeled examples'.format(
                split.predicate_vocab[p]))
    positive_ids = {pair.pair_id for pair in positives}
    negatives = [rel.pair for q, group in enumerate(split.labeled)
                 if q != p for rel in group
                 if rel.pair.pair_id not in positive_ids]
    vocab = split.category_vocab
    X = feature_matrix(positives + negatives, vocab)
    y = np.array([1] * len(positives) + [0] * len(negatives))
    tree = fit_tree(X, y, max_depth=max_depth, num_classes=2,
                    feature_mode='combined')
    importances = tree.feature_importances()
    names = feature_names('combined', len(vocab))
    order = sorted(range(len(names)), key=lambda i: (-importances[i], i))
    return ImportanceReport(
        p, [(names[i], float(importances[i])) for i in order],
        bool(importances.sum() > 0))

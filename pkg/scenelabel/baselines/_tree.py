# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""A single decision tree fit on the labeled pool."""

__all__ = [
    'single_tree_labeler',
    ]

from scenelabel.errors import EmptyInputError
from scenelabel.features import feature_matrix
from scenelabel.heuristics import fit_tree


def single_tree_labeler(split, max_depth=None, pairs=None, min_leaf=1):
    """Fit one tree on combined features of all D_p and label ``pairs``.

    :param max_depth: The depth limit, or None for an unbounded tree.
    :param pairs: The pairs to label; defaults to the unlabeled pairs.
    :return: An ``(N, |P|)`` array of leaf distributions. The tree never
        abstains.
    """
    pooled = split.pooled_labeled()
    if not pooled:
        raise EmptyInputError('no labeled relationships to fit a tree on')
    vocab = split.category_vocab
    tree = fit_tree(
        feature_matrix([rel.pair for rel in pooled], vocab),
        [rel.predicate for rel in pooled], max_depth=max_depth,
        min_leaf=min_leaf, num_classes=len(split.predicate_vocab),
        feature_mode='combined')
    pairs = split.unlabeled if pairs is None else pairs
    return tree.predict_proba(feature_matrix(pairs, vocab))

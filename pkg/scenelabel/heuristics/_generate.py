# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Generate heuristics by fitting decision trees on the labeled pool."""

__all__ = [
    'DEFAULT_DEPTH_GRID',
    'DEFAULT_MODES',
    'HeuristicSet',
    'default_abstain_threshold',
    'generate_heuristics',
    'mode_features',
    ]

import itertools
import logging
import warnings

import numpy as np

from scenelabel.concurrency import map_concurrently
from scenelabel.errors import (
    ConfigError,
    EmptyInputError,
    EmptyPredicateWarning,
    )
from scenelabel.features import MODES, feature_matrix
from scenelabel.heuristics._tree import fit_tree, tree_from_dict, tree_to_dict


logger = logging.getLogger(__name__)

DEFAULT_DEPTH_GRID = (1, 2, 3)

DEFAULT_MODES = ('spatial', 'categorical')


def default_abstain_threshold(num_predicates):
    """Return twice the random-guess probability, clipped to [0.05, 0.95]."""
    return float(np.clip(2.0 / num_predicates, 0.05, 0.95))


def mode_features(pairs, vocab, modes):
    """Return ``{mode: feature_matrix(pairs, vocab, mode)}`` for ``modes``."""
    pairs = list(pairs)
    return {mode: feature_matrix(pairs, vocab, mode) for mode in set(modes)}


class HeuristicSet:
    """J fitted trees that vote on object pairs.

    :ivar trees: The trees, ordered by feature mode then depth.
    :ivar abstain_threshold: Votes whose top-class probability falls below
        this become abstains.
    """

    def __init__(self, trees, num_predicates, abstain_threshold=None):
        if abstain_threshold is None:
            abstain_threshold = default_abstain_threshold(num_predicates)
        if not 0 < abstain_threshold <= 0.95:
            raise ConfigError(
                'abstain_threshold must be in (0, 0.95], got {!r}'.format(
                    abstain_threshold))
        self.trees = list(trees)
        self.num_predicates = num_predicates
        self.abstain_threshold = float(abstain_threshold)

    def __len__(self):
        return len(self.trees)

    @property
    def modes(self):
        return [tree.feature_mode for tree in self.trees]

    def vote(self, features):
        """Return each tree's top class and its probability on every pair.

        :param features: A mapping from feature mode to an ``(N, D)``
            matrix, as built by ``mode_features``.
        :return: ``(top, confidence)``, both ``(J, N)`` arrays. ``top`` is
            -1 where the leaf's highest probability is shared by several
            classes; such a leaf names no class and its votes abstain.
        """
        top = []
        confidence = []
        for tree in self.trees:
            proba = tree.predict_proba(features[tree.feature_mode])
            best = np.max(proba, axis=1)
            tied = (proba == best[:, np.newaxis]).sum(axis=1) > 1
            top.append(np.where(tied, -1, np.argmax(proba, axis=1)))
            confidence.append(best)
        return np.array(top, dtype=int), np.array(confidence)

    def to_dict(self):
        return {
            'abstain_threshold': self.abstain_threshold,
            'num_predicates': self.num_predicates,
            'trees': [tree_to_dict(tree) for tree in self.trees],
            }

    @classmethod
    def from_dict(cls, data):
        return cls([tree_from_dict(tree) for tree in data['trees']],
                   data['num_predicates'], data['abstain_threshold'])


def generate_heuristics(split, depth_grid=DEFAULT_DEPTH_GRID,
                        modes=DEFAULT_MODES, min_leaf=1,
                        abstain_threshold=None, threads=1):
    """Fit one tree per (feature mode, depth) on the pooled labeled data.

    The training set merges every D_p with the predicate id as class label,
    so each tree is a multi-class classifier over all predicates.

    :param split: A ``SplitDataset``.
    :param depth_grid: The depth limits to fit.
    :param modes: The feature modes to fit; each tree sees one mode.
    :param threads: Worker threads for fitting.
    :return: A ``HeuristicSet`` of ``len(modes) * len(depth_grid)`` trees.
    :raises EmptyInputError: If no predicate has labeled examples.
    """
    for mode in modes:
        if mode not in MODES:
            raise ConfigError('unknown feature mode {!r}'.format(mode))
    pooled = split.pooled_labeled()
    if not pooled:
        raise EmptyInputError('no labeled relationships to fit heuristics on')
    num_predicates = len(split.predicate_vocab)
    for p, group in enumerate(split.labeled):
        if not group:
            warnings.warn(
                'predicate {!r} has no labeled examples; no heuristic can '
                'vote for it'.format(split.predicate_vocab[p]),
                EmptyPredicateWarning, stacklevel=2)
    labels = np.array([rel.predicate for rel in pooled], dtype=int)
    features = mode_features(
        [rel.pair for rel in pooled], split.category_vocab, modes)
    grid = list(itertools.product(modes, depth_grid))

    def fit(combination):
        mode, depth = combination
        return fit_tree(features[mode], labels, max_depth=depth,
                        min_leaf=min_leaf, num_classes=num_predicates,
                        feature_mode=mode)

    trees = map_concurrently(fit, grid, threads)
    hs = HeuristicSet(trees, num_predicates, abstain_threshold)
    logger.info('generated %d heuristics from %d labeled relationships '
                '(abstain threshold %.3f)', len(hs), len(pooled),
                hs.abstain_threshold)
    for tree in trees:
        logger.debug('heuristic %r', tree)
    return hs

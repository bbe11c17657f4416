# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Reference labelers bounding the others: random guesses and the truth."""

__all__ = [
    'distributions_to_labels',
    'oracle_labeler',
    'random_labeler',
    ]

import numpy as np

from scenelabel.helpers import substream
from scenelabel.labelmodel import ProbabilisticLabel, aggregate_scores


def distributions_to_labels(distributions, pairs):
    """Wrap per-pair distributions as non-abstained probabilistic labels."""
    return aggregate_scores(
        distributions, [pair.pair_id for pair in pairs], tau=0.0)


def random_labeler(split, seed=0, pairs=None):
    """Give every pair one uniformly random predicate.

    :return: An ``(N, |P|)`` array of one-hot rows.
    """
    pairs = split.unlabeled if pairs is None else pairs
    num_predicates = len(split.predicate_vocab)
    guesses = substream(seed, 'baselines/random').integers(
        num_predicates, size=len(pairs))
    onehot = np.zeros((len(pairs), num_predicates))
    onehot[np.arange(len(pairs)), guesses] = 1.0
    return onehot


def oracle_labeler(split, pairs=None):
    """Return the ground-truth labels of the unlabeled pairs.

    A pair with several gold predicates spreads its mass evenly over them;
    a pair with none (a sampled negative) is abstained.
    """
    pairs = split.unlabeled if pairs is None else pairs
    labels = []
    for pair in pairs:
        gold = split.unlabeled_gold.get(pair.pair_id, ())
        if not gold:
            labels.append(ProbabilisticLabel(pair.pair_id, {}, 1.0))
            continue
        labels.append(ProbabilisticLabel(
            pair.pair_id, {p: 1.0 / len(gold) for p in gold}, 0.0))
    return labels

# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""A linear per-predicate classifier trained with the noise-aware loss.

Each predicate gets a logistic head over the (standardized) combined
features. Probabilistic labels enter through the loss: the logistic loss
is averaged over the label distribution instead of a hard target.
"""

__all__ = [
    'ClassifierParams',
    'TrainConfig',
    'classifier_from_dict',
    'classifier_to_json',
    'labeled_examples',
    'noise_aware_gradient',
    'noise_aware_loss',
    'predict_scores',
    'scores_to_jsonl',
    'train_classifier',
    ]

from dataclasses import dataclass, field
import logging
import math

import numpy as np
from scipy.special import expit

from scenelabel.concurrency import map_concurrently
from scenelabel.content import json_content, jsonl_content
from scenelabel.errors import (
    AlignmentError,
    ConfigError,
    DimensionError,
    EmptyInputError,
    NumericalError,
    )
from scenelabel.helpers import standardize, substream
from scenelabel.labelmodel import ProbabilisticLabel


logger = logging.getLogger(__name__)


def _augment(v):
    v = np.asarray(v, dtype=float)
    ones = np.ones(v.shape[:-1] + (1,))
    return np.concatenate([v, ones], axis=-1)


def noise_aware_loss(theta, v, p_pos):
    """Return the expected logistic loss of ``theta`` under ``p_pos``.

    ``p_pos * log(1 + exp(-z)) + (1 - p_pos) * log(1 + exp(z))`` with
    ``z = theta . [v; 1]``. Works on a single vector or on rows of a
    matrix (with a matching vector of probabilities).
    """
    z = _augment(v) @ np.asarray(theta, dtype=float)
    p_pos = np.asarray(p_pos, dtype=float)
    loss = p_pos * np.logaddexp(0.0, -z) + (1.0 - p_pos) * np.logaddexp(0.0, z)
    return float(loss) if np.ndim(loss) == 0 else loss


def noise_aware_gradient(theta, v, p_pos):
    """Return the gradient of ``noise_aware_loss`` in ``theta``."""
    augmented = _augment(v)
    z = augmented @ np.asarray(theta, dtype=float)
    residual = expit(z) - np.asarray(p_pos, dtype=float)
    if augmented.ndim == 1:
        return residual * augmented
    return augmented.T @ residual


@dataclass
class TrainConfig:
    """Settings of the classifier's gradient descent.

    :ivar batch: None (or ``'full'``) for full-batch descent with step
        halving, or a batch size for fixed-step mini-batches shuffled from
        ``seed``.
    """

    step: float = 0.5
    epochs: int = 300
    l2: float = 1e-4
    seed: int = 0
    batch: object = None
    max_halvings: int = 20

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigError('classifier.step must be > 0')
        if self.epochs < 1:
            raise ConfigError('classifier.epochs must be >= 1')
        if self.batch == 'full':
            self.batch = None
        if self.batch is not None and (
                not isinstance(self.batch, int) or self.batch < 1):
            raise ConfigError("classifier.batch must be 'full' or >= 1")


@dataclass
class ClassifierParams:
    """Weights of the per-predicate heads.

    :ivar weights: A ``(P, D + 1)`` array; the last column is the bias.
    :ivar mean: Per-feature means subtracted before scoring.
    :ivar scale: Per-feature scales divided out before scoring.
    :ivar traces: The objective per epoch for every head.
    """

    weights: np.ndarray
    mean: np.ndarray
    scale: np.ndarray
    traces: list = field(default_factory=list)

    @property
    def dimension(self):
        return self.weights.shape[1] - 1


def _objective(theta, V, targets, l2):
    return (float(np.mean(noise_aware_loss(theta, V, targets)))
            + 0.5 * l2 * float(theta @ theta))


def _train_head(V, targets, cfg, name):
    theta = np.zeros(V.shape[1] + 1)
    current = _objective(theta, V, targets, cfg.l2)
    trace = [current]
    rng = substream(cfg.seed, 'downstream/{}'.format(name))
    for epoch in range(1, cfg.epochs + 1):
        if cfg.batch is None:
            gradient = (noise_aware_gradient(theta, V, targets) / len(V)
                        + cfg.l2 * theta)
            if np.max(np.abs(gradient)) < 1e-10:
                break
            step = cfg.step
            for _ in range(cfg.max_halvings + 1):
                candidate = theta - step * gradient
                value = _objective(candidate, V, targets, cfg.l2)
                if value <= current:
                    break
                step /= 2.0
            else:
                break
            theta = candidate
        else:
            order = rng.permutation(len(V))
            for start in range(0, len(V), cfg.batch):
                rows = order[start:start + cfg.batch]
                theta = theta - cfg.step * (
                    noise_aware_gradient(theta, V[rows], targets[rows])
                    / len(rows) + cfg.l2 * theta)
            value = _objective(theta, V, targets, cfg.l2)
        if not math.isfinite(value):
            raise NumericalError(
                'classifier objective for {} is not finite at epoch '
                '{}'.format(name, epoch))
        current = value
        trace.append(current)
    return theta, trace


def labeled_examples(split):
    """Return D_p as (pairs, one-hot labels) for downstream training.

    A pair labeled with several predicates spreads its mass over them.
    """
    gold = {}
    pairs = {}
    for rel in split.pooled_labeled():
        pairs[rel.pair.pair_id] = rel.pair
        gold.setdefault(rel.pair.pair_id, []).append(rel.predicate)
    labels = [ProbabilisticLabel(
                  pair_id, {p: 1.0 / len(gold[pair_id])
                            for p in gold[pair_id]}, 0.0)
              for pair_id in pairs]
    return list(pairs.values()), labels


def train_classifier(features, labels, cfg=None, num_predicates=None,
                     threads=1):
    """Train one logistic head per predicate on probabilistic labels.

    :param features: An ``(N, D)`` matrix, row ``i`` for ``labels[i]``.
    :param labels: ``ProbabilisticLabel`` objects; abstained ones are
        skipped.
    :param num_predicates: The number of heads; defaults to one past the
        largest predicate id seen.
    :raises EmptyInputError: If every label is abstained.
    """
    cfg = cfg or TrainConfig()
    features = np.asarray(features, dtype=float)
    labels = list(labels)
    if features.ndim != 2 or features.shape[0] != len(labels):
        raise AlignmentError('{} feature rows for {} labels'.format(
            features.shape[0] if features.ndim == 2 else 0, len(labels)))
    keep = [i for i, label in enumerate(labels) if not label.abstained]
    if not keep:
        raise EmptyInputError('no non-abstained labels to train on')
    if num_predicates is None:
        num_predicates = 1 + max(
            p for i in keep for p in labels[i].distribution)
    targets = np.array(
        [labels[i].probabilities(num_predicates) for i in keep])
    V, mean, scale = standardize(features[keep])

    def fit(p):
        return _train_head(V, targets[:, p], cfg, p)

    heads = map_concurrently(fit, range(num_predicates), threads)
    params = ClassifierParams(
        np.array([theta for theta, _ in heads]), mean, scale,
        [trace for _, trace in heads])
    logger.info('trained %d classifier heads on %d of %d examples',
                num_predicates, len(keep), len(labels))
    return params


def predict_scores(params, v):
    """Return ``sigmoid(theta_p . [v; 1])`` for every predicate.

    Scores are not normalised across predicates.

    :param v: One feature vector, or an ``(N, D)`` matrix.
    :raises DimensionError: If the dimension does not match.
    """
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != params.dimension:
        raise DimensionError('classifier expects {} features, got {}'.format(
            params.dimension, v.shape[-1]))
    return expit(_augment((v - params.mean) / params.scale) @ params.weights.T)


def classifier_to_json(params, predicate_vocab):
    """Return the heads as JSON keyed by predicate name."""
    return json_content({
        'heads': {predicate_vocab[p]: [float(w) for w in row]
                  for p, row in enumerate(params.weights)},
        'mean': [float(m) for m in params.mean],
        'scale': [float(s) for s in params.scale],
        })


def classifier_from_dict(data, predicate_vocab):
    weights = np.array([data['heads'][name] for name in predicate_vocab])
    return ClassifierParams(
        weights, np.array(data['mean']), np.array(data['scale']))


def scores_to_jsonl(scores, pair_ids, predicate_vocab):
    """Return per-pair predicate scores as JSON-lines Content."""
    return jsonl_content(
        {'pair_id': pair_id,
         'scores': {predicate_vocab[p]: float(v) for p, v in enumerate(row)}}
        for pair_id, row in zip(pair_ids, np.asarray(scores)))

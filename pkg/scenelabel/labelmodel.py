# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""The generative label model and the aggregation of heuristic votes.

For one predicate the model is the factor-graph family

    pi_phi(Lambda, Y) = exp(phi . Lambda * Y) / Z(phi)

with votes ``Lambda`` in {-1, 0, +1}^J and ``Y`` in {-1, +1}. ``phi_j`` is
the accuracy weight of heuristic ``j``. It is learned without ground
truth by maximising the marginal likelihood of the observed votes, and
the posterior of ``Y`` given the votes becomes the probabilistic label.
The family has no class-prior term, so a pair without votes has
posterior 0.5.
"""

__all__ = [
    'LabelModelConfig',
    'LabelModelParams',
    'ProbabilisticLabel',
    'aggregate_labels',
    'aggregate_scores',
    'labels_from_jsonl',
    'labels_to_jsonl',
    'log_partition',
    'majority_vote',
    'marginal_log_likelihood',
    'mll_gradient',
    'phi_to_json',
    'posterior',
    'posteriors',
    'train_label_model',
    'train_label_models',
    ]

from dataclasses import dataclass, field
import json
import logging
import math
import warnings

import numpy as np
from scipy.special import expit, logsumexp

from scenelabel.concurrency import map_concurrently
from scenelabel.content import json_content, jsonl_content
from scenelabel.errors import (
    AlignmentError,
    ConfigError,
    EmptyInputError,
    NoEvidenceWarning,
    NumericalError,
    SchemaError,
    )


logger = logging.getLogger(__name__)


def _votes(lm):
    return np.asarray(getattr(lm, 'entries', lm), dtype=float)


def log_partition(phi):
    """Return log Z(phi) = log 2 + sum_j log(1 + 2 cosh(phi_j))."""
    phi = np.asarray(phi, dtype=float)
    terms = logsumexp(np.stack([np.zeros_like(phi), phi, -phi]), axis=0)
    return float(math.log(2.0) + np.sum(terms))


def marginal_log_likelihood(phi, lm):
    """Return the log probability of the votes with ``Y`` summed out.

    :param lm: A ``LabelMatrix`` or a J x N vote array.
    """
    phi = np.asarray(phi, dtype=float)
    votes = _votes(lm)
    scores = phi @ votes
    return float(np.sum(np.logaddexp(scores, -scores))
                 - votes.shape[1] * log_partition(phi))


def _partition_gradient(phi):
    # 2 sinh(phi) / (1 + 2 cosh(phi)), scaled by exp(-|phi|) to stay finite.
    a = np.abs(phi)
    return (np.sign(phi) * (-np.expm1(-2 * a))
            / (np.exp(-a) + 1 + np.exp(-2 * a)))


def mll_gradient(phi, lm):
    """Return the gradient of ``marginal_log_likelihood`` in ``phi``.

    Component ``j`` is ``sum_i Lambda_ji tanh(phi . Lambda_i)`` minus
    ``N * 2 sinh(phi_j) / (1 + 2 cosh(phi_j))``.
    """
    phi = np.asarray(phi, dtype=float)
    votes = _votes(lm)
    return (votes @ np.tanh(phi @ votes)
            - votes.shape[1] * _partition_gradient(phi))


def posterior(phi, column):
    """Return P(Y = +1 | votes) = sigmoid(2 phi . votes)."""
    return float(expit(2.0 * np.dot(np.asarray(phi, dtype=float),
                                    np.asarray(column, dtype=float))))


def posteriors(phi, lm):
    """Return the posterior of every column of ``lm``."""
    return expit(2.0 * (np.asarray(phi, dtype=float) @ _votes(lm)))


def majority_vote(lm):
    """Return, per column, the fraction of non-abstain votes that are +1.

    Columns where every heuristic abstains get 0.5.
    """
    votes = _votes(lm)
    positive = (votes > 0).sum(axis=0)
    cast = (votes != 0).sum(axis=0)
    return np.where(cast > 0, positive / np.maximum(cast, 1), 0.5)


@dataclass
class LabelModelConfig:
    """Training settings of the label model.

    ``seed`` is accepted for symmetry with the other stages; the
    initialisation is deterministic and training is full batch.
    """

    init: float = 0.5
    step: float = 0.1
    epochs: int = 500
    l2: float = 1e-3
    seed: int = 0
    max_halvings: int = 20
    tolerance: float = 1e-9

    def __post_init__(self):
        if self.step <= 0:
            raise ConfigError('label_model.step must be > 0')
        if self.epochs < 0:
            raise ConfigError('label_model.epochs must be >= 0')
        if self.l2 < 0:
            raise ConfigError('label_model.l2 must be >= 0')


@dataclass
class LabelModelParams:
    """Learned accuracy weights for one predicate.

    :ivar trace: The regularised objective after every accepted epoch,
        starting with its value at initialisation.
    """

    predicate: int
    phi: np.ndarray
    trace: list = field(default_factory=list)


def train_label_model(lm, cfg=None, predicate=None):
    """Fit ``phi`` by gradient ascent on the marginal likelihood.

    The objective is ``marginal_log_likelihood - (l2 / 2) * |phi|^2``.
    Each epoch tries the configured step and halves it while the
    objective would decrease, up to ``max_halvings`` times; when no step
    helps, training stops. Heuristics that never vote carry no evidence
    and keep their initial weight.

    :param lm: A ``LabelMatrix`` (or J x N vote array) with N >= 1.
    :param cfg: A ``LabelModelConfig``.
    :raises EmptyInputError: If the matrix has no columns.
    :raises NumericalError: If the objective stops being finite.
    """
    cfg = cfg or LabelModelConfig()
    votes = _votes(lm)
    if predicate is None:
        predicate = getattr(lm, 'predicate', 0)
    if votes.ndim != 2 or votes.shape[1] < 1:
        raise EmptyInputError('label model needs at least one column')
    active = (votes != 0).any(axis=1)
    phi = np.full(votes.shape[0], float(cfg.init))
    if not active.any():
        warnings.warn(
            'label matrix for predicate {} holds no votes'.format(predicate),
            NoEvidenceWarning, stacklevel=2)

    def objective(weights):
        value = (marginal_log_likelihood(weights, votes)
                 - 0.5 * cfg.l2 * np.sum(weights[active] ** 2))
        return value

    current = objective(phi)
    if not math.isfinite(current):
        raise NumericalError(
            'label model objective is not finite at epoch 0')
    trace = [current]
    for epoch in range(1, cfg.epochs + 1):
        if not active.any():
            break
        gradient = mll_gradient(phi, votes) - cfg.l2 * phi
        gradient[~active] = 0.0
        if np.max(np.abs(gradient)) < cfg.tolerance:
            break
        step = cfg.step
        for _ in range(cfg.max_halvings + 1):
            candidate = phi + step * gradient
            value = objective(candidate)
            if not math.isfinite(value):
                raise NumericalError(
                    'label model objective is not finite at epoch '
                    '{}'.format(epoch))
            if value >= current:
                break
            step /= 2.0
        else:
            break
        phi, current = candidate, value
        trace.append(current)
        logger.debug('predicate %s epoch %d objective %.9g step %.3g',
                     predicate, epoch, current, step)
    if not np.all(np.isfinite(phi)):
        raise NumericalError(
            'label model weights are not finite after epoch {}'.format(
                len(trace) - 1))
    logger.info('predicate %s: label model trained for %d epochs, '
                'objective %.6f', predicate, len(trace) - 1, current)
    return LabelModelParams(predicate, phi, trace)


def train_label_models(matrices, cfg=None, threads=1):
    """Train one label model per predicate matrix, in parallel."""
    return map_concurrently(
        lambda lm: train_label_model(lm, cfg), matrices, threads)


@dataclass(frozen=True)
class ProbabilisticLabel:
    """A distribution over predicates plus an abstain mass for one pair.

    :ivar distribution: predicate id -> probability. Empty when the pair
        is abstained.
    """

    pair_id: str
    distribution: dict
    abstain_mass: float

    @property
    def abstained(self):
        return self.abstain_mass >= 1.0

    def top(self):
        """Return the most likely predicate (lowest id on ties), or None."""
        if not self.distribution:
            return None
        best = max(self.distribution.values())
        return min(p for p, v in self.distribution.items() if v == best)

    def probabilities(self, num_predicates):
        values = np.zeros(num_predicates)
        for p, v in self.distribution.items():
            values[p] = v
        return values


def aggregate_scores(scores, pair_ids, tau=0.5):
    """Turn per-predicate scores into probabilistic labels.

    A pair whose best score is below ``tau`` is abstained. Otherwise its
    scores are normalised into a distribution.

    :param scores: An ``(N, P)`` array, column ``p`` holding predicate
        ``p``'s one-vs-rest score for every pair.
    """
    scores = np.asarray(scores, dtype=float)
    pair_ids = list(pair_ids)
    if scores.shape[0] != len(pair_ids):
        raise AlignmentError('{} score rows for {} pairs'.format(
            scores.shape[0], len(pair_ids)))
    labels = []
    for pair_id, row in zip(pair_ids, scores):
        total = row.sum()
        if row.size == 0 or row.max() < tau or total <= 0:
            labels.append(ProbabilisticLabel(pair_id, {}, 1.0))
            continue
        labels.append(ProbabilisticLabel(
            pair_id, {p: float(v / total) for p, v in enumerate(row)}, 0.0))
    return labels


def aggregate_labels(models, matrices, tau=0.5):
    """Combine per-predicate posteriors into probabilistic labels.

    :param models: ``LabelModelParams`` indexed like ``matrices``.
    :param matrices: One ``LabelMatrix`` per predicate, all over the same
        pairs.
    :raises AlignmentError: If the matrices disagree on their pair ids.
    """
    matrices = list(matrices)
    models = list(models)
    if len(models) != len(matrices):
        raise AlignmentError('{} models for {} label matrices'.format(
            len(models), len(matrices)))
    if not matrices:
        return []
    pair_ids = matrices[0].pair_ids
    for lm in matrices[1:]:
        if lm.pair_ids != pair_ids:
            raise AlignmentError(
                'label matrix for predicate {} has different pair ids'.format(
                    lm.predicate))
    scores = np.column_stack([
        posteriors(model.phi, lm) for model, lm in zip(models, matrices)])
    return aggregate_scores(scores, pair_ids, tau)


def labels_to_jsonl(labels, predicate_vocab):
    """Return labels as JSON-lines Content, one line per pair."""
    return jsonl_content(
        {'pair_id': label.pair_id,
         'dist': {predicate_vocab[p]: v
                  for p, v in sorted(label.distribution.items())},
         'abstain': label.abstain_mass}
        for label in labels)


def labels_from_jsonl(text, predicate_vocab):
    """Parse the JSON-lines label format back into labels."""
    labels = []
    for number, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            labels.append(ProbabilisticLabel(
                record['pair_id'],
                {predicate_vocab.index(name): float(v)
                 for name, v in record['dist'].items()},
                float(record['abstain'])))
        except (ValueError, KeyError, TypeError) as e:
            raise SchemaError('labels line {}'.format(number), str(e))
    return labels


def phi_to_json(models, predicate_vocab):
    """Return the learned weights as JSON keyed by predicate name."""
    return json_content({
        predicate_vocab[model.predicate]: [float(v) for v in model.phi]
        for model in models})

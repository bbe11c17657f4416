# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Label-quality metrics and PREDCLS recall@K."""

__all__ = [
    'EvalReport',
    'PredicateMetrics',
    'RecallReport',
    'format_table',
    'gold_by_image',
    'hard_labels',
    'macro_prf1',
    'predcls_recall_at_k',
    'recall_to_dict',
    'report_to_dict',
    'scores_by_image',
    ]

from collections import OrderedDict
from dataclasses import dataclass
import logging

import numpy as np

from scenelabel.errors import AlignmentError, MissingScoreError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PredicateMetrics:

    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    """Label quality against gold labels.

    :ivar per_predicate: predicate id -> ``PredicateMetrics``.
    :ivar macro: Unweighted means of precision, recall and F1 over the
        predicates with gold support.
    :ivar accuracy: Correct predictions over non-abstained predictions
        (micro).
    :ivar evaluated: The number of gold pairs scored.
    :ivar abstained: How many of them got no prediction.
    """

    per_predicate: dict
    macro: dict
    accuracy: float
    evaluated: int = 0
    abstained: int = 0


@dataclass(frozen=True)
class RecallReport:

    k_values: tuple
    recall_at_k: dict
    total_gold: int = 0


def hard_labels(labels):
    """Map pair id to the most likely predicate, or None when abstained."""
    return {label.pair_id: (None if label.abstained else label.top())
            for label in labels}


def _f1(precision, recall):
    if precision + recall > 0:
        return 2 * precision * recall / (precision + recall)
    return 0.0


def macro_prf1(predicted, gold, num_predicates=None):
    """Score hard predictions one-vs-rest against gold predicate sets.

    A prediction is correct when it is among the pair's gold predicates.
    Abstained pairs (None, or missing from ``predicted``) add nothing to
    precision but their gold predicates count as missed.

    :param predicted: pair id -> predicate id or None.
    :param gold: pair id -> iterable of gold predicate ids. Pairs with an
        empty gold set are negatives; any prediction on them is wrong.
    :param num_predicates: Report every predicate below this number,
        including those without support.
    :raises AlignmentError: If no gold pair has a prediction entry.
    """
    if not set(gold) & set(predicted):
        raise AlignmentError('predictions and gold share no pair ids')
    tp, fp, support = {}, {}, {}
    correct = made = abstained = 0
    for pair_id, truth in gold.items():
        truth = set(truth)
        guess = predicted.get(pair_id)
        for p in truth:
            support[p] = support.get(p, 0) + 1
        if guess is None:
            abstained += 1
            continue
        made += 1
        if guess in truth:
            tp[guess] = tp.get(guess, 0) + 1
            correct += 1
        else:
            fp[guess] = fp.get(guess, 0) + 1
    predicates = set(support) | set(fp) | set(tp)
    if num_predicates is not None:
        predicates |= set(range(num_predicates))
    per_predicate = {}
    for p in sorted(predicates):
        hits = tp.get(p, 0)
        called = hits + fp.get(p, 0)
        precision = hits / called if called else 0.0
        recall = hits / support[p] if support.get(p) else 0.0
        per_predicate[p] = PredicateMetrics(
            precision, recall, _f1(precision, recall), support.get(p, 0))
    supported = [m for m in per_predicate.values() if m.support > 0]
    macro = {
        name: (float(np.mean([getattr(m, name) for m in supported]))
               if supported else 0.0)
        for name in ('precision', 'recall', 'f1')}
    accuracy = correct / made if made else 0.0
    logger.info('macro F1 %.4f over %d gold pairs (%d abstained)',
                macro['f1'], len(gold), abstained)
    return EvalReport(per_predicate, macro, accuracy, len(gold), abstained)


def scores_by_image(pairs, scores):
    """Group score rows by image, keeping pair order within each image.

    :return: image id -> ``(pair ids, (n, P) score array)``.
    """
    scores = np.asarray(scores, dtype=float)
    grouped = OrderedDict()
    for pair, row in zip(pairs, scores):
        ids, rows = grouped.setdefault(pair.image_id, ([], []))
        ids.append(pair.pair_id)
        rows.append(row)
    return OrderedDict(
        (image_id, (ids, np.array(rows)))
        for image_id, (ids, rows) in grouped.items())


def gold_by_image(relationships):
    """Group ``LabeledRelationship`` objects as image id -> (pair id, p)."""
    grouped = OrderedDict()
    for rel in relationships:
        grouped.setdefault(rel.pair.image_id, []).append(
            (rel.pair.pair_id, rel.predicate))
    return grouped


def predcls_recall_at_k(scores, gold, k_values=(20, 50, 100)):
    """Return recall@K of gold relationships among per-image top-K.

    Within an image every (pair, predicate) candidate is ranked by score,
    descending; ties go to the earlier pair, then the lower predicate.

    :param scores: image id -> (pair ids, score array), see
        ``scores_by_image``.
    :param gold: image id -> list of (pair id, predicate), see
        ``gold_by_image``.
    :raises MissingScoreError: If a gold pair has no score row.
    """
    k_values = tuple(sorted(set(int(k) for k in k_values)))
    hits = dict.fromkeys(k_values, 0)
    total = 0
    for image_id, relationships in gold.items():
        if not relationships:
            continue
        ids, matrix = scores.get(image_id, ([], np.zeros((0, 0))))
        position = {pair_id: i for i, pair_id in enumerate(ids)}
        for pair_id, _ in relationships:
            if pair_id not in position:
                raise MissingScoreError(pair_id)
        n_pairs, n_predicates = matrix.shape
        pair_index = np.repeat(np.arange(n_pairs), n_predicates)
        predicate_index = np.tile(np.arange(n_predicates), n_pairs)
        order = np.lexsort((predicate_index, pair_index, -matrix.ravel()))
        rank = np.empty(len(order), dtype=int)
        rank[order] = np.arange(len(order))
        for pair_id, p in relationships:
            place = rank[position[pair_id] * n_predicates + p]
            for k in k_values:
                if place < k:
                    hits[k] += 1
        total += len(relationships)
    recall = {k: (hits[k] / total if total else 0.0) for k in k_values}
    return RecallReport(k_values, recall, total)


def report_to_dict(report, predicate_vocab):
    """Return an ``EvalReport`` keyed by predicate names, for JSON."""
    return {
        'accuracy': report.accuracy,
        'accuracy_kind': 'micro',
        'abstained': report.abstained,
        'evaluated': report.evaluated,
        'macro': dict(report.macro),
        'per_predicate': {
            predicate_vocab[p]: {
                'precision': m.precision, 'recall': m.recall, 'f1': m.f1,
                'support': m.support}
            for p, m in report.per_predicate.items()},
        }


def recall_to_dict(report):
    return {
        'recall_at_k': {str(k): v for k, v in report.recall_at_k.items()},
        'total_gold': report.total_gold,
        }


def format_table(rows):
    """Render (method, EvalReport) rows as a plain-text comparison table.

    Values are percentages; accuracy is micro-averaged.
    """
    width = max([len('Method')] + [len(name) for name, _ in rows])
    lines = ['{:<{w}}  {:>7}  {:>7}  {:>7}  {:>7}'.format(
        'Method', 'Prec.', 'Recall', 'F1', 'Acc.', w=width)]
    for name, report in rows:
        lines.append('{:<{w}}  {:>7.2f}  {:>7.2f}  {:>7.2f}  {:>7.2f}'.format(
            name, 100 * report.macro['precision'],
            100 * report.macro['recall'], 100 * report.macro['f1'],
            100 * report.accuracy, w=width))
    return '\n'.join(lines) + '\n'

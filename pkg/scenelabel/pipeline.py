# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""The labeling pipeline, from dataset file to reports.

Stages run in a fixed order: ingest, split, label, train, evaluate,
analyze. Labeling with ``ours`` generates heuristics from the labeled
examples, builds one label matrix per predicate over the unlabeled pairs,
fits a label model per matrix and aggregates the posteriors into
probabilistic labels; the classifier is then trained on the labeled
examples plus those labels. Every labeling method produces the same
label format, so the evaluation never special-cases one.
"""

__all__ = [
    'LabelingResult',
    'Pipeline',
    'PipelineReport',
    'evaluate_labels',
    'label_gold',
    'label_pairs',
    'predcls_report',
    'run_pipeline',
    'sweep',
    'train_downstream',
    ]

from collections import OrderedDict
from dataclasses import dataclass, field
import json
import logging
import os

import numpy as np

from scenelabel.analysis import (
    count_subtypes,
    feature_importances,
    fit_points_csv,
    fits_csv,
    linear_fit_r2,
    subtype_series,
    subtypes_csv,
    )
from scenelabel.baselines import (
    distributions_to_labels,
    frequency_baseline,
    oracle_labeler,
    propagation_labeler,
    random_labeler,
    single_tree_labeler,
    )
from scenelabel.config import config_to_dict
from scenelabel.content import csv_content, json_content, text_content
from scenelabel.dataset import load_dataset, split_limited
from scenelabel.downstream import (
    classifier_from_dict,
    classifier_to_json,
    labeled_examples,
    predict_scores,
    scores_to_jsonl,
    train_classifier,
    )
from scenelabel.errors import (
    AlignmentError,
    ConfigError,
    DataError,
    SchemaError,
    )
from scenelabel.evaluation import (
    format_table,
    gold_by_image,
    hard_labels,
    macro_prf1,
    predcls_recall_at_k,
    recall_to_dict,
    report_to_dict,
    scores_by_image,
    )
from scenelabel.features import feature_matrix, features_csv
from scenelabel.helpers import filter_values, map_values
from scenelabel.heuristics import (
    build_label_matrices,
    generate_heuristics,
    label_matrix_triplets,
    mode_features,
    )
from scenelabel.labelmodel import (
    aggregate_labels,
    aggregate_scores,
    labels_from_jsonl,
    labels_to_jsonl,
    majority_vote,
    phi_to_json,
    train_label_models,
    )
from scenelabel.stages import StageRunner


logger = logging.getLogger(__name__)

_HEURISTIC_MODES = {
    'ours_spatial': ('spatial',),
    'ours_categorical': ('categorical',),
    }

FIT_SERIES = ('train_subtypes', 'unlabeled_subtypes', 'labeled_proportion')


@dataclass
class LabelingResult:
    """The labels one method assigns, plus its learned state if any.

    :ivar models: ``LabelModelParams`` per predicate for the label-model
        methods, else None.
    :ivar heuristics: The ``HeuristicSet`` for heuristic methods, else
        None.
    :ivar matrices: The ``LabelMatrix`` of every predicate for heuristic
        methods, else None.
    """

    method: str
    labels: list
    models: object = None
    heuristics: object = None
    matrices: object = None


def label_pairs(split, method, config, pairs=None):
    """Label ``pairs`` (default: the unlabeled pairs) with ``method``."""
    pairs = split.unlabeled if pairs is None else tuple(pairs)
    pair_ids = [pair.pair_id for pair in pairs]
    tau = config.evaluation.tau
    if method in ('ours', 'ours_spatial', 'ours_categorical',
                  'majority_vote'):
        settings = config.heuristics
        hs = generate_heuristics(
            split, settings.depth_grid,
            _HEURISTIC_MODES.get(method, settings.modes), settings.min_leaf,
            settings.abstain_threshold, config.threads)
        matrices = build_label_matrices(
            hs, mode_features(pairs, split.category_vocab, hs.modes),
            pair_ids)
        if method == 'majority_vote':
            scores = np.column_stack([majority_vote(lm) for lm in matrices])
            return LabelingResult(
                method, aggregate_scores(scores, pair_ids, tau),
                heuristics=hs, matrices=matrices)
        models = train_label_models(
            matrices, config.section_with_seed('label_model'),
            config.threads)
        return LabelingResult(
            method, aggregate_labels(models, matrices, tau), models, hs,
            matrices)
    if method == 'oracle':
        return LabelingResult(method, oracle_labeler(split, pairs))
    if method == 'single_tree':
        distributions = single_tree_labeler(split, pairs=pairs)
    elif method == 'label_propagation':
        distributions = propagation_labeler(split, config.propagation, pairs)
    elif method in ('freq', 'freq_overlap'):
        distributions = frequency_baseline(
            split, pairs, overlap_required=(method == 'freq_overlap'))
    elif method == 'random':
        distributions = random_labeler(split, config.seed, pairs)
    else:
        raise ConfigError('unknown method {!r}'.format(method))
    return LabelingResult(
        method, distributions_to_labels(distributions, pairs))


def label_gold(split, include_negatives=False):
    """Return pair id -> gold predicates for the unlabeled pairs.

    Negatives (empty gold) are only kept with ``include_negatives``.
    """
    gold = OrderedDict(
        (pair.pair_id, split.unlabeled_gold.get(pair.pair_id, ()))
        for pair in split.unlabeled)
    if include_negatives:
        return gold
    return filter_values(bool, gold)


def evaluate_labels(split, labels, include_negatives=False):
    """Score ``labels`` against the unlabeled pairs' ground truth."""
    return macro_prf1(hard_labels(labels), label_gold(
        split, include_negatives), len(split.predicate_vocab))


def train_downstream(split, labels, config):
    """Train the classifier on D_p plus the probabilistic labels."""
    labeled_pairs, labeled_targets = labeled_examples(split)
    by_id = {pair.pair_id: pair for pair in split.unlabeled}
    labels = list(labels)
    missing = [label.pair_id for label in labels if label.pair_id not in by_id]
    if missing:
        raise AlignmentError('label for unknown pair {}'.format(missing[0]))
    pairs = labeled_pairs + [by_id[label.pair_id] for label in labels]
    return train_classifier(
        feature_matrix(pairs, split.category_vocab),
        labeled_targets + labels, config.section_with_seed('classifier'),
        len(split.predicate_vocab), config.threads)


def predcls_report(split, params, k_values):
    """Return PREDCLS recall@K over the held-out images, or None."""
    if not split.holdout_pairs:
        return None
    scores = predict_scores(
        params, feature_matrix(split.holdout_pairs, split.category_vocab))
    return predcls_recall_at_k(
        scores_by_image(split.holdout_pairs, scores),
        gold_by_image(split.eval_holdout), k_values)


@dataclass
class PipelineReport:
    """What one full run produced.

    :ivar outputs: file name -> path of every file written.
    :ivar timings: stage name -> seconds. Not part of ``to_dict``.
    """

    method: str
    config: dict
    split_sizes: dict
    label_report: object
    recall: object
    comparison: list = field(default_factory=list)
    outputs: dict = field(default_factory=OrderedDict)
    timings: dict = field(default_factory=OrderedDict)
    subtype_paths: list = field(default_factory=list)

    def to_dict(self, predicate_vocab):
        return {
            'comparison': {
                method: report_to_dict(report, predicate_vocab)
                for method, report in self.comparison},
            'config': self.config,
            'label_eval': report_to_dict(self.label_report, predicate_vocab),
            'method': self.method,
            'outputs': sorted(self.outputs),
            'predcls': (None if self.recall is None
                        else recall_to_dict(self.recall)),
            'split': self.split_sizes,
            'subtype_files': [os.path.basename(path)
                              for path in self.subtype_paths],
            }


def _read_text(path, what):
    try:
        with open(path, 'rb') as stream:
            return stream.read().decode('utf8')
    except FileNotFoundError:
        raise DataError('{} not found: {}'.format(what, path))


class Pipeline:
    """The stages of one configured run, sharing an output directory.

    Each public method is one stage; the command line strings them
    together per subcommand.
    """

    def __init__(self, config, runner=None):
        if config.dataset is None:
            raise ConfigError('no dataset given')
        self.config = config
        self.runner = runner or StageRunner(config.output_dir)
        self.outputs = OrderedDict()

    def _path(self, name):
        return os.path.join(self.config.output_dir, name)

    def _write(self, name, content):
        self.outputs[name] = content.write_to(self._path(name))
        return self.outputs[name]

    def ingest(self):
        return self.runner.run('ingest', load_dataset, self.config.dataset)

    def split(self, ds, n_labeled=None):
        settings = self.config.split
        if n_labeled is None:
            n_labeled = settings.n_labeled
        return self.runner.run(
            'split', split_limited, ds, n_labeled,
            settings.holdout_fraction, self.config.seed,
            settings.negative_ratio)

    def label(self, split, method=None, write=True):
        """Label the unlabeled pairs and write ``labels.jsonl``.

        Heuristic methods also write their votes to ``label_matrix.csv``;
        ``features.csv`` holds the unlabeled pairs' feature rows in the
        order of ``labels.jsonl``.
        """
        method = method or self.config.method
        result = self.runner.run(
            'label', label_pairs, split, method, self.config)
        if write:
            vocab = split.predicate_vocab
            self._write('labels.jsonl', labels_to_jsonl(result.labels, vocab))
            if result.models is not None:
                self._write('phi.json', phi_to_json(result.models, vocab))
            if result.heuristics is not None:
                self._write('heuristics.json',
                            json_content(result.heuristics.to_dict()))
            if result.matrices is not None:
                self._write('label_matrix.csv', csv_content(
                    ('predicate', 'heuristic', 'pair_id', 'vote'),
                    ((vocab[lm.predicate], j, lm.pair_ids[i], vote)
                     for lm in result.matrices
                     for j, i, vote in label_matrix_triplets(lm))))
            self._write('features.csv', features_csv(
                feature_matrix(split.unlabeled, split.category_vocab),
                'combined', len(split.category_vocab)))
        return result

    def read_labels(self, split):
        """Load ``labels.jsonl`` written by an earlier ``label`` run."""
        text = _read_text(self._path('labels.jsonl'), 'labels file')
        labels = labels_from_jsonl(text, split.predicate_vocab)
        expected = {pair.pair_id for pair in split.unlabeled}
        if {label.pair_id for label in labels} != expected:
            raise AlignmentError(
                'labels.jsonl does not cover the unlabeled pairs of this '
                'split; rerun the label command with the same settings')
        return labels

    def train(self, split, labels, write=True):
        params = self.runner.run(
            'train', train_downstream, split, labels, self.config)
        if write:
            self._write('classifier.json',
                        classifier_to_json(params, split.predicate_vocab))
        return params

    def read_classifier(self, split):
        text = _read_text(self._path('classifier.json'), 'classifier file')
        try:
            return classifier_from_dict(json.loads(text),
                                        split.predicate_vocab)
        except (ValueError, KeyError, TypeError) as e:
            raise SchemaError('classifier.json', str(e))

    def _evaluate(self, split, labels, params):
        settings = self.config.evaluation
        report = evaluate_labels(split, labels, settings.include_negatives)
        comparison = []
        for method in settings.compare_methods:
            if method == self.config.method:
                continue
            other = label_pairs(split, method, self.config)
            comparison.append((method, evaluate_labels(
                split, other.labels, settings.include_negatives)))
        recall = None
        if params is not None:
            recall = predcls_report(split, params, settings.k_values)
        return report, comparison, recall

    def evaluate(self, split, labels, params=None):
        """Write ``eval.json`` and the ``eval.txt`` comparison table.

        With a classifier, ``predictions.jsonl`` holds its scores on the
        held-out pairs.

        :return: ``(EvalReport, [(method, EvalReport)], RecallReport)``.
        """
        report, comparison, recall = self.runner.run(
            'evaluate', self._evaluate, split, labels, params)
        vocab = split.predicate_vocab
        self._write('eval.json', json_content({
            'comparison': {method: report_to_dict(other, vocab)
                           for method, other in comparison},
            'labels': report_to_dict(report, vocab),
            'predcls': None if recall is None else recall_to_dict(recall),
            }))
        table = format_table([(self.config.method, report)] + comparison)
        if recall is not None:
            table += 'PREDCLS {}\n'.format('  '.join(
                'R@{} {:.2f}'.format(k, 100 * v)
                for k, v in recall.recall_at_k.items()))
        self._write('eval.txt', text_content(table))
        if params is not None and split.holdout_pairs:
            self._write('predictions.jsonl', scores_to_jsonl(
                predict_scores(params, feature_matrix(
                    split.holdout_pairs, split.category_vocab)),
                [pair.pair_id for pair in split.holdout_pairs], vocab))
        return report, comparison, recall

    def _analyze(self, ds, split, report):
        settings = self.config.analysis
        seed = self.config.seed
        counts = ds.relationship_counts()
        subtypes = [
            count_subtypes(ds, p, 'spatial', settings.quantile,
                           settings.min_cluster_fraction, seed,
                           settings.separation)
            for p in range(len(counts)) if counts[p]]
        series = subtype_series(
            split, None, settings.quantile, settings.min_cluster_fraction,
            seed, settings.separation)
        if report is None:
            report = evaluate_labels(
                split, label_pairs(split, self.config.method,
                                   self.config).labels)
        baseline = evaluate_labels(
            split, label_pairs(split, settings.baseline, self.config).labels)

        def f1(evaluation, p):
            metrics = evaluation.per_predicate.get(p)
            return metrics.f1 if metrics is not None else 0.0

        improvement = [f1(report, p) - f1(baseline, p)
                       for p in series['predicates']]
        fits = []
        points = {}
        if len(improvement) >= 2:
            for name in FIT_SERIES:
                fits.append((name, 'f1_improvement',
                             linear_fit_r2(series[name], improvement),
                             len(improvement)))
                points[name] = (series[name], improvement)
        importances = {
            split.predicate_vocab[p]: feature_importances(
                split, p, settings.importance_depth).to_dict()
            for p in range(len(split.labeled)) if split.labeled[p]}
        return subtypes, fits, points, importances

    def analyze(self, ds, split, report=None):
        """Write ``subtypes.csv``, ``fits.csv``, per-fit point files and
        ``importances.json``.

        :return: The paths of the subtype and fit CSV files.
        """
        subtypes, fits, points, importances = self.runner.run(
            'analyze', self._analyze, ds, split, report)
        paths = [self._write('subtypes.csv',
                             subtypes_csv(subtypes, ds.predicate_vocab)),
                 self._write('fits.csv', fits_csv(fits))]
        for name, (xs, ys) in points.items():
            paths.append(self._write('fit_{}.csv'.format(name),
                                     fit_points_csv(xs, ys)))
        self._write('importances.json', json_content(importances))
        return paths

    def run(self):
        """Run every stage and write ``report.json`` and ``timings.json``.

        :return: A ``PipelineReport``.
        """
        self.runner.clear_marker()
        ds = self.ingest()
        split = self.split(ds)
        result = self.label(split)
        params = self.train(split, result.labels)
        report, comparison, recall = self.evaluate(
            split, result.labels, params)
        subtype_paths = []
        if self.config.analysis.enabled:
            subtype_paths = self.analyze(ds, split, report)
        # report.json is identical across thread counts and output
        # directories.
        echo = config_to_dict(self.config)
        del echo['threads'], echo['output_dir']
        pipeline_report = PipelineReport(
            self.config.method, echo, split.sizes(),
            report, recall, comparison, self.outputs, self.runner.timings,
            subtype_paths)
        self.outputs['report.json'] = self._path('report.json')
        json_content(pipeline_report.to_dict(split.predicate_vocab)).write_to(
            self._path('report.json'))
        self._write('timings.json', json_content(
            map_values(lambda seconds: round(seconds, 6),
                       self.runner.timings)))
        return pipeline_report


def run_pipeline(config, runner=None):
    """Run the whole pipeline for ``config``; see ``Pipeline.run``."""
    return Pipeline(config, runner).run()


def _sweep_row(n, method, report, recall, k_values):
    row = [n, method] + [repr(round(report.macro[name], 12))
                         for name in ('precision', 'recall', 'f1')]
    row.append(repr(round(report.accuracy, 12)))
    for k in k_values:
        row.append('' if recall is None
                   else repr(round(recall.recall_at_k[k], 12)))
    return row


def sweep(config, runner=None):
    """Repeat label, train and evaluate over ``config.sweep.n_values``.

    The main method and every comparison method are evaluated at each n;
    only the main method trains a classifier. Writes ``sweep.csv``.

    :return: The CSV rows.
    """
    pipeline = Pipeline(config, runner)
    pipeline.runner.clear_marker()
    ds = pipeline.ingest()
    k_values = tuple(sorted(set(config.evaluation.k_values)))
    rows = []
    for n in config.sweep.n_values:
        split = pipeline.split(ds, n)
        result = pipeline.label(split, write=False)
        params = pipeline.train(split, result.labels, write=False)
        report, comparison, recall = pipeline._evaluate(
            split, result.labels, params)
        rows.append(_sweep_row(n, config.method, report, recall, k_values))
        for method, other in comparison:
            rows.append(_sweep_row(n, method, other, None, k_values))
        logger.info('sweep n=%d: macro F1 %.4f', n, report.macro['f1'])
    header = ['n', 'method', 'precision', 'recall', 'f1', 'accuracy'] + [
        'recall_at_{}'.format(k) for k in k_values]
    pipeline._write('sweep.csv', csv_content(header, rows))
    return rows


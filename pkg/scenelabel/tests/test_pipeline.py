# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Tests for the labeling pipeline and its stages."""

import json
import os

from fixtures import TempDir
from testresources import OptimisingTestSuite, ResourcedTestCase
from testscenarios import WithScenarios
from testtools import TestCase
from testtools.matchers import (
    Equals,
    FileContains,
    FileExists,
    HasLength,
    Is,
    MatchesException,
    Not,
    Raises,
    StartsWith,
    )

from scenelabel.config import (
    METHODS,
    AnalysisSection,
    EvaluationSection,
    SweepSection,
    )
from scenelabel.dataset import split_limited
from scenelabel.errors import AlignmentError, ConfigError, DataError
from scenelabel.labelmodel import ProbabilisticLabel
from scenelabel.pipeline import (
    Pipeline,
    evaluate_labels,
    label_gold,
    label_pairs,
    predcls_report,
    sweep,
    train_downstream,
    )
from scenelabel.stages import FAILED_MARKER, StageFailure
from scenelabel.tests.helpers import (
    IsDistribution,
    small_config,
    small_generated,
    )


def read(path):
    with open(path, 'rb') as f:
        return f.read()


class PipelineTestCase(TestCase, ResourcedTestCase):

    resources = [('generated', small_generated)]

    def setUp(self):
        super().setUp()
        self.ds, self.manifest, self.dataset_path = self.generated
        self.output_dir = os.path.join(self.useFixture(TempDir()).path, 'out')

    def make_config(self, **kwargs):
        return small_config(self.dataset_path, self.output_dir, **kwargs)

    def make_split(self, config):
        return split_limited(
            self.ds, config.split.n_labeled, config.split.holdout_fraction,
            config.seed, config.split.negative_ratio)


class TestLabelPairs(WithScenarios, PipelineTestCase):

    scenarios = [(method, dict(method=method)) for method in METHODS]

    def test_one_label_per_unlabeled_pair(self):
        config = self.make_config()
        split = self.make_split(config)
        result = label_pairs(split, self.method, config)
        self.assertThat(result.method, Equals(self.method))
        self.assertThat([label.pair_id for label in result.labels],
                        Equals([pair.pair_id for pair in split.unlabeled]))
        num_predicates = len(split.predicate_vocab)
        for label in result.labels:
            if not label.abstained:
                self.assertThat(label.probabilities(num_predicates),
                                IsDistribution())
        report = evaluate_labels(split, result.labels)
        self.assertThat(report.evaluated, Equals(
            len(label_gold(split))))

    def test_learned_state(self):
        config = self.make_config()
        result = label_pairs(self.make_split(config), self.method, config)
        if self.method in ('ours', 'ours_spatial', 'ours_categorical'):
            self.assertThat(result.models, HasLength(5))
            self.assertThat(result.heuristics, Not(Is(None)))
        elif self.method == 'majority_vote':
            self.assertThat(result.models, Is(None))
            self.assertThat(result.heuristics, Not(Is(None)))
        else:
            self.assertThat(result.models, Is(None))
            self.assertThat(result.heuristics, Is(None))


class TestLabelingHelpers(PipelineTestCase):

    def test_oracle_is_perfect_on_positives(self):
        config = self.make_config()
        split = self.make_split(config)
        report = evaluate_labels(split, label_pairs(
            split, 'oracle', config).labels)
        self.assertThat(report.macro['f1'], Equals(1.0))
        self.assertThat(report.abstained, Equals(0))

    def test_label_gold_negatives(self):
        config = self.make_config()
        split = self.make_split(config)
        everything = label_gold(split, include_negatives=True)
        self.assertThat(everything, HasLength(len(split.unlabeled)))
        self.assertThat(
            len(everything) - len(label_gold(split)),
            Equals(split.sizes()['negatives']))

    def test_unknown_method(self):
        config = self.make_config()
        self.assertThat(
            lambda: label_pairs(self.make_split(config), 'snorkel', config),
            Raises(MatchesException(ConfigError, "unknown method 'snorkel'")))

    def test_train_rejects_unknown_pair(self):
        config = self.make_config()
        split = self.make_split(config)
        labels = [ProbabilisticLabel('nowhere:0:1', {0: 1.0}, 0.0)]
        self.assertThat(
            lambda: train_downstream(split, labels, config),
            Raises(MatchesException(AlignmentError, '.*nowhere:0:1')))

    def test_no_holdout_no_recall(self):
        config = self.make_config()
        split = split_limited(self.ds, 5, 0.0, 0, 0.25)
        params = train_downstream(
            split, label_pairs(split, 'oracle', config).labels, config)
        self.assertThat(predcls_report(split, params, (20,)), Is(None))


class TestPipeline(PipelineTestCase):

    def test_requires_dataset(self):
        self.assertThat(
            lambda: Pipeline(self.make_config(dataset=None)),
            Raises(MatchesException(ConfigError, 'no dataset given')))

    def test_run_writes_outputs(self):
        config = self.make_config()
        report = Pipeline(config).run()
        for name in ('labels.jsonl', 'phi.json', 'heuristics.json',
                     'classifier.json', 'eval.json', 'eval.txt',
                     'subtypes.csv', 'fits.csv', 'importances.json',
                     'report.json', 'timings.json', 'label_matrix.csv',
                     'features.csv', 'predictions.jsonl'):
            self.assertThat(os.path.join(self.output_dir, name),
                            FileExists())
        self.assertThat(os.path.join(self.output_dir, FAILED_MARKER),
                        Not(FileExists()))
        split = self.make_split(config)
        with open(os.path.join(self.output_dir, 'labels.jsonl')) as f:
            self.assertThat(f.read().splitlines(),
                            HasLength(len(split.unlabeled)))
        with open(os.path.join(self.output_dir, 'features.csv')) as f:
            self.assertThat(f.read().splitlines(),
                            HasLength(len(split.unlabeled) + 1))
        with open(os.path.join(self.output_dir, 'label_matrix.csv')) as f:
            self.assertThat(f.readline(),
                            Equals('predicate,heuristic,pair_id,vote\n'))
        with open(os.path.join(self.output_dir, 'predictions.jsonl')) as f:
            predictions = [json.loads(line) for line in f]
        self.assertThat(predictions, HasLength(len(split.holdout_pairs)))
        self.assertThat(sorted(predictions[0]['scores']),
                        Equals(sorted(split.predicate_vocab)))
        self.assertThat(list(report.timings), Equals(
            ['ingest', 'split', 'label', 'train', 'evaluate', 'analyze']))
        with open(os.path.join(self.output_dir, 'report.json')) as f:
            data = json.load(f)
        self.assertThat(sorted(data), Equals(
            ['comparison', 'config', 'label_eval', 'method', 'outputs',
             'predcls', 'split', 'subtype_files']))
        self.assertThat(data['split'], Equals(split.sizes()))
        self.assertThat(sorted(data['predcls']['recall_at_k']),
                        Equals(['20', '5']))
        self.assertNotIn('threads', data['config'])

    def test_eval_table(self):
        config = self.make_config(evaluation=EvaluationSection(
            k_values=(5,), compare_methods=('ours', 'freq')))
        report = Pipeline(config).run()
        self.assertThat([method for method, _ in report.comparison],
                        Equals(['freq']))
        with open(os.path.join(self.output_dir, 'eval.txt')) as f:
            lines = f.read().splitlines()
        self.assertThat(lines[0], StartsWith('Method'))
        self.assertThat(lines[1], StartsWith('ours'))
        self.assertThat(lines[2], StartsWith('freq'))
        self.assertThat(lines[3], StartsWith('PREDCLS R@5 '))

    def test_missing_dataset(self):
        missing = os.path.join(self.output_dir, 'nothing.json')
        config = self.make_config(dataset=missing)
        try:
            Pipeline(config).run()
        except StageFailure as failure:
            self.assertThat(failure.stage, Equals('ingest'))
            self.assertThat(failure.exit_status, Equals(2))
            self.assertIn(missing, str(failure))
        else:
            self.fail('the run did not fail')
        self.assertThat(
            os.path.join(self.output_dir, FAILED_MARKER),
            FileContains(matcher=StartsWith('stage: ingest\n')))

    def test_success_clears_old_marker(self):
        config = self.make_config(
            analysis=AnalysisSection(enabled=False))
        os.makedirs(self.output_dir)
        marker = os.path.join(self.output_dir, FAILED_MARKER)
        with open(marker, 'w') as f:
            f.write('stage: ingest\n')
        Pipeline(config).run()
        self.assertThat(marker, Not(FileExists()))
        self.assertThat(os.path.join(self.output_dir, 'subtypes.csv'),
                        Not(FileExists()))

    def test_stage_by_stage(self):
        config = self.make_config()
        pipeline = Pipeline(config)
        ds = pipeline.ingest()
        split = pipeline.split(ds)
        labels = pipeline.label(split).labels
        self.assertThat(pipeline.read_labels(split), Equals(labels))
        params = pipeline.train(split, pipeline.read_labels(split))
        again = Pipeline(config).read_classifier(split)
        self.assertThat(again.weights.shape, Equals(params.weights.shape))

    def test_read_labels_from_another_split(self):
        config = self.make_config()
        pipeline = Pipeline(config)
        ds = pipeline.ingest()
        pipeline.label(pipeline.split(ds))
        other = pipeline.split(ds, 6)
        self.assertThat(
            lambda: pipeline.read_labels(other),
            Raises(MatchesException(
                AlignmentError, 'labels.jsonl does not cover')))

    def test_read_missing_outputs(self):
        pipeline = Pipeline(self.make_config())
        split = pipeline.split(pipeline.ingest())
        self.assertThat(lambda: pipeline.read_labels(split),
                        Raises(MatchesException(DataError,
                                                'labels file not found')))
        self.assertThat(lambda: pipeline.read_classifier(split),
                        Raises(MatchesException(DataError,
                                                'classifier file not found')))


class TestDeterminism(PipelineTestCase):

    names = ('labels.jsonl', 'phi.json', 'heuristics.json',
             'classifier.json', 'eval.json', 'subtypes.csv', 'fits.csv',
             'importances.json', 'report.json', 'label_matrix.csv',
             'features.csv', 'predictions.jsonl')

    def run_into(self, name, **kwargs):
        output_dir = os.path.join(self.output_dir, name)
        Pipeline(small_config(self.dataset_path, output_dir, **kwargs)).run()
        return {filename: read(os.path.join(output_dir, filename))
                for filename in self.names}

    def test_repeat_runs(self):
        self.assertThat(self.run_into('first'),
                        Equals(self.run_into('second')))

    def test_thread_counts(self):
        self.assertThat(self.run_into('one', threads=1),
                        Equals(self.run_into('four', threads=4)))


class TestSweep(PipelineTestCase):

    def test_rows(self):
        config = self.make_config(
            sweep=SweepSection(n_values=(5, 3)),
            evaluation=EvaluationSection(k_values=(20, 5),
                                         compare_methods=('freq',)))
        rows = sweep(config)
        self.assertThat([row[:2] for row in rows], Equals(
            [[5, 'ours'], [5, 'freq'], [3, 'ours'], [3, 'freq']]))
        self.assertThat(rows[1][-2:], Equals(['', '']))
        with open(os.path.join(self.output_dir, 'sweep.csv')) as f:
            header = f.readline().strip()
        self.assertThat(header, Equals(
            'n,method,precision,recall,f1,accuracy,recall_at_5,'
            'recall_at_20'))


def test_suite():
    from unittest import TestLoader
    return OptimisingTestSuite(TestLoader().loadTestsFromName(__name__))

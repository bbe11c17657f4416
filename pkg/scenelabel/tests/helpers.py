# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Helpers for tests."""

__all__ = [
    'AcceptanceRunResource',
    'AllClose',
    'GeneratedDatasetResource',
    'IsDistribution',
    'make_dataset',
    'make_split',
    'small_config',
    'scene_dict',
    ]

import os
import shutil
import tempfile

import numpy as np
from testresources import TestResourceManager
from testtools.matchers import Mismatch

from scenelabel.baselines import oracle_labeler
from scenelabel.config import EvaluationSection, PipelineConfig, SplitSection
from scenelabel.dataset import dataset_from_dict, split_limited
from scenelabel.pipeline import (
    Pipeline,
    label_pairs,
    predcls_report,
    train_downstream,
    )
from scenelabel.synthgen import acceptance_spec, generate, write_generated


class AllClose:
    """Match arrays equal to ``expected`` within a tolerance."""

    def __init__(self, expected, rtol=1e-9, atol=1e-12):
        self.expected = np.asarray(expected, dtype=float)
        self.rtol = rtol
        self.atol = atol

    def __str__(self):
        return 'AllClose({!r}, rtol={}, atol={})'.format(
            self.expected.tolist(), self.rtol, self.atol)

    def match(self, actual):
        actual = np.asarray(actual, dtype=float)
        if actual.shape != self.expected.shape:
            return Mismatch('shape {} != {}'.format(
                actual.shape, self.expected.shape))
        if np.allclose(actual, self.expected, rtol=self.rtol, atol=self.atol):
            return None
        worst = float(np.max(np.abs(actual - self.expected)))
        return Mismatch('{!r} is not close to {!r}: largest difference '
                        '{!r}'.format(actual.tolist(),
                                      self.expected.tolist(), worst))


class IsDistribution:
    """Match arrays whose rows are non-negative and sum to one."""

    def __init__(self, atol=1e-9):
        self.atol = atol

    def __str__(self):
        return 'IsDistribution(atol={})'.format(self.atol)

    def match(self, actual):
        rows = np.atleast_2d(np.asarray(actual, dtype=float))
        if (rows < 0).any():
            return Mismatch('{!r} has negative entries'.format(rows.tolist()))
        totals = rows.sum(axis=1)
        bad = np.flatnonzero(np.abs(totals - 1.0) > self.atol)
        if len(bad):
            return Mismatch('row {} sums to {!r}'.format(
                int(bad[0]), float(totals[bad[0]])))
        return None


def scene_dict(num_images=8, predicates=('ride', 'wear')):
    """Return a small dataset in the JSON schema.

    Every image holds a person riding a horse and wearing a hat; the
    boxes drift a little from image to image.
    """
    images = []
    for i in range(num_images):
        images.append({
            'id': 'im{}'.format(i),
            'objects': [
                {'box': [10.0 + i, 10.0, 20.0, 10.0], 'category': 0},
                {'box': [25.0 + i, 5.0 + i, 20.0, 30.0], 'category': 1},
                {'box': [5.0 + i, 12.0, 6.0, 6.0 + i], 'category': 2},
                ],
            'relationships': [
                {'subject': 0, 'object': 1, 'predicate': 0},
                {'subject': 0, 'object': 2, 'predicate': 1},
                ],
            })
    return {'categories': ['person', 'horse', 'hat'],
            'predicates': list(predicates), 'images': images}


def make_dataset(num_images=8, predicates=('ride', 'wear')):
    return dataset_from_dict(scene_dict(num_images, predicates))


def make_split(n=3, holdout_fraction=0.25, seed=0, negative_ratio=1.0,
               num_images=8):
    return split_limited(make_dataset(num_images), n, holdout_fraction, seed,
                         negative_ratio)


class GeneratedDatasetResource(TestResourceManager):
    """The acceptance dataset, generated once and written to disk.

    The resource is ``(dataset, manifest, dataset path)``.
    """

    def __init__(self, instances_per_predicate=420):
        super().__init__()
        self.instances_per_predicate = instances_per_predicate

    def make(self, dependency_resources):
        ds, manifest = generate(acceptance_spec(
            0, self.instances_per_predicate))
        directory = tempfile.mkdtemp(prefix='scenelabel-data-')
        dataset_path, _ = write_generated(ds, manifest, directory)
        return ds, manifest, dataset_path

    def clean(self, resource):
        shutil.rmtree(os.path.dirname(resource[2]), ignore_errors=True)


generated_dataset = GeneratedDatasetResource()
small_generated = GeneratedDatasetResource(40)


class AcceptanceRun:
    """A full pipeline run over the acceptance dataset.

    :ivar report: The ``PipelineReport`` of the run.
    :ivar split: The split the run labeled.
    :ivar labeling: A ``LabelingResult`` of ``ours`` on that split.
    :ivar oracle_recall: PREDCLS recall of a classifier trained on the
        true labels of the unlabeled pairs.
    """

    def __init__(self, directory, config, report, split, labeling,
                 oracle_recall):
        self.directory = directory
        self.config = config
        self.report = report
        self.split = split
        self.labeling = labeling
        self.oracle_recall = oracle_recall

    def path(self, name):
        return os.path.join(self.config.output_dir, name)


class AcceptanceRunResource(TestResourceManager):

    resources = [('generated', generated_dataset)]

    def make(self, dependency_resources):
        ds, manifest, dataset_path = dependency_resources['generated']
        directory = tempfile.mkdtemp(prefix='scenelabel-run-')
        config = PipelineConfig(
            dataset=dataset_path, output_dir=os.path.join(directory, 'out'))
        report = Pipeline(config).run()
        split = split_limited(
            ds, config.split.n_labeled, config.split.holdout_fraction,
            config.seed, config.split.negative_ratio)
        labeling = label_pairs(split, 'ours', config)
        oracle_params = train_downstream(split, oracle_labeler(split), config)
        oracle_recall = predcls_report(
            split, oracle_params, config.evaluation.k_values)
        return AcceptanceRun(directory, config, report, split, labeling,
                             oracle_recall)

    def clean(self, resource):
        shutil.rmtree(resource.directory, ignore_errors=True)


acceptance_run = AcceptanceRunResource()


def small_config(dataset_path, output_dir, **kwargs):
    """A configuration sized for the small generated dataset."""
    values = dict(
        dataset=dataset_path, output_dir=output_dir,
        split=SplitSection(n_labeled=5),
        evaluation=EvaluationSection(k_values=(5, 20)))
    values.update(kwargs)
    return PipelineConfig(**values)

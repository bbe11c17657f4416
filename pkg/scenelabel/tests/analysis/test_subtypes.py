# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Tests for subtype counting."""

import numpy as np
from testscenarios import WithScenarios
from testtools import TestCase
from testtools.matchers import (
    Equals,
    HasLength,
    Is,
    MatchesException,
    MatchesStructure,
    Raises,
    )

from scenelabel.analysis import (
    SubtypeReport,
    count_subtypes,
    merge_overlapping,
    pair_subtypes,
    quantile_bandwidth,
    subtype_series,
    subtypes_csv,
    )
from scenelabel.dataset import BoundingBox, ObjectInstance, ObjectPair, Vocab
from scenelabel.errors import ConfigError, EmptyInputError
from scenelabel.synthgen import generate, planted_spec
from scenelabel.tests.helpers import AllClose, make_dataset, make_split


def pair(subject_category, object_category, number=0):
    return ObjectPair(
        'im{}'.format(number),
        ObjectInstance(BoundingBox(0, 0, 10, 10), subject_category),
        ObjectInstance(BoundingBox(5, 5, 10, 20), object_category), 0, 1)


class TestQuantileBandwidth(TestCase):

    def test_quantile_of_distances(self):
        self.assertThat(quantile_bandwidth([[0.0], [1.0], [3.0]], 0.5),
                        AllClose(2.0))

    def test_duplicates_ignored(self):
        self.assertThat(
            quantile_bandwidth([[0.0], [0.0], [0.0], [1.0], [3.0]], 0.5),
            AllClose(2.0))

    def test_single_point(self):
        self.assertThat(quantile_bandwidth([[2.0], [2.0]]), Equals(0.0))

    def test_bad_quantile(self):
        self.assertThat(lambda: quantile_bandwidth([[0.0], [1.0]], 0.0),
                        Raises(MatchesException(ConfigError, 'quantile')))

    def test_subsampling_is_seeded(self):
        points = np.arange(40.0)[:, np.newaxis] ** 1.5
        first = quantile_bandwidth(points, max_points=10, seed=2)
        self.assertThat(quantile_bandwidth(points, max_points=10, seed=2),
                        Equals(first))


class TestPairSubtypes(TestCase):

    def test_single_instance(self):
        report = pair_subtypes([pair(0, 1)])
        self.assertThat(report, MatchesStructure.byEquality(
            spatial_subtypes=1, categorical_subtypes=1, instances_used=1,
            categorical_union=2))

    def test_categorical(self):
        pairs = [pair(0, 1, 0), pair(0, 1, 1), pair(2, 3, 2)]
        report = pair_subtypes(pairs, 4, 'categorical')
        self.assertThat(report, MatchesStructure.byEquality(
            predicate=4, categorical_subtypes=2, categorical_union=4,
            instances_used=3))
        self.assertThat(report.spatial_subtypes, Is(None))

    def test_identical_geometry_is_one_subtype(self):
        pairs = [pair(0, 1, n) for n in range(5)]
        self.assertThat(pair_subtypes(pairs).spatial_subtypes, Equals(1))

    def test_empty(self):
        self.assertThat(lambda: pair_subtypes([], 2),
                        Raises(MatchesException(EmptyInputError,
                                                'predicate 2 has no')))

    def test_unknown_kind(self):
        self.assertThat(lambda: pair_subtypes([pair(0, 1)], kind='visual'),
                        Raises(MatchesException(ConfigError)))

    def test_count_subtypes(self):
        report = count_subtypes(make_dataset(), 0, 'categorical')
        self.assertThat(report, MatchesStructure.byEquality(
            predicate=0, categorical_subtypes=1, categorical_union=2,
            instances_used=8, spatial_subtypes=None))


class TestMergeOverlapping(TestCase):

    def test_halves_of_one_group_merge(self):
        points = np.arange(8.0)[:, np.newaxis]
        labels = merge_overlapping(points, [0, 0, 0, 0, 1, 1, 1, 1])
        self.assertThat(labels.tolist(), Equals([0] * 8))

    def test_separated_groups_stay(self):
        points = np.array([[0.0], [1.0], [100.0], [101.0]])
        labels = merge_overlapping(points, [5, 5, 2, 2])
        self.assertThat(labels.tolist(), Equals([1, 1, 0, 0]))

    def test_separation_threshold(self):
        # The halves are 4 apart with a pooled radius of sqrt(1.25).
        points = np.arange(8.0)[:, np.newaxis]
        labels = [0, 0, 0, 0, 1, 1, 1, 1]
        self.assertThat(
            merge_overlapping(points, labels, separation=3.0).tolist(),
            Equals(labels))
        self.assertThat(
            merge_overlapping(points, labels, separation=3.6).tolist(),
            Equals([0] * 8))

    def test_distinct_singletons_stay(self):
        points = np.array([[0.0], [1.0]])
        self.assertThat(merge_overlapping(points, [0, 1]).tolist(),
                        Equals([0, 1]))


class TestPlantedSubtypes(WithScenarios, TestCase):

    scenarios = [('k={}'.format(k), dict(k=k)) for k in range(1, 6)]

    def test_recovers_planted_count(self):
        counts = []
        for seed in range(20):
            ds, _ = generate(planted_spec(self.k, seed))
            counts.append(
                count_subtypes(ds, 0, seed=seed).spatial_subtypes)
        self.assertThat(counts, Equals([self.k] * 20))


class TestSubtypeSeries(TestCase):

    def test_series(self):
        split = make_split()
        series = subtype_series(split)
        self.assertThat(series['predicates'], Equals([0, 1]))
        for name in ('train_subtypes', 'unlabeled_subtypes',
                     'labeled_proportion'):
            self.assertThat(series[name], HasLength(2))
        self.assertThat(series['labeled_proportion'], AllClose(
            np.array(series['train_subtypes'])
            / np.array(series['unlabeled_subtypes'])))

    def test_restricted_predicates(self):
        series = subtype_series(make_split(), predicates=[1])
        self.assertThat(series['predicates'], Equals([1]))

    def test_csv(self):
        reports = [SubtypeReport(0, 3, 2, 40, 0.5, 4),
                   SubtypeReport(1, None, 1, 5, 0.0, 2)]
        content = subtypes_csv(reports, Vocab(['ride', 'wear'], 'predicate'))
        self.assertThat(content.as_text(), Equals(
            'predicate,spatial_subtypes,categorical_subtypes,'
            'categorical_union,instances,bandwidth\n'
            'ride,3,2,4,40,0.5\n'
            'wear,,1,2,5,0.0\n'))


def test_suite():
    from unittest import TestLoader
    return TestLoader().loadTestsFromName(__name__)

# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Tests for feature importance rankings."""

import dataclasses

from testtools import TestCase
from testtools.matchers import Equals, HasLength, Is, MatchesException, Raises

from scenelabel.analysis import feature_importances
from scenelabel.dataset import split_limited
from scenelabel.errors import EmptyInputError
from scenelabel.synthgen import PredicateSpec, SpatialMode, SynthSpec, generate
from scenelabel.tests.helpers import make_split


def vertical_split():
    """Two predicates that differ only in the vertical offset."""
    categories = ((('a', 'b'), 1.0),)
    spec = SynthSpec(('a', 'b'), (
        PredicateSpec('above', (SpatialMode.relative(0.0, -2.0, 1.0, 1.0),),
                      categories),
        PredicateSpec('below', (SpatialMode.relative(0.0, 2.0, 1.0, 1.0),),
                      categories),
        ), 20, 0.0, 1, 0)
    ds, _ = generate(spec)
    return split_limited(ds, 10, 0.0, 0, 0.0)


class TestFeatureImportances(TestCase):

    def test_vertical_offset_ranks_first(self):
        report = feature_importances(vertical_split(), 0)
        self.assertThat(report.ranking[0], Equals(('f2', 1.0)))
        self.assertThat(report.has_splits, Is(True))
        self.assertThat(report.ranking, HasLength(8 + 4))

    def test_single_leaf(self):
        split = make_split()
        split = dataclasses.replace(split, labeled=(split.labeled[0], ()))
        report = feature_importances(split, 0)
        self.assertThat(report.has_splits, Is(False))
        self.assertThat([value for _, value in report.ranking],
                        Equals([0.0] * 14))
        self.assertThat(report.ranking[0][0], Equals('f1'))

    def test_no_labeled_examples(self):
        split = make_split()
        split = dataclasses.replace(split, labeled=(split.labeled[0], ()))
        self.assertThat(
            lambda: feature_importances(split, 1),
            Raises(MatchesException(EmptyInputError, "predicate 'wear'")))

    def test_to_dict(self):
        report = feature_importances(vertical_split(), 1, max_depth=1)
        data = report.to_dict()
        self.assertThat(data['has_splits'], Is(True))
        self.assertThat(data['ranking'][0], Equals(['f2', 1.0]))


def test_suite():
    from unittest import TestLoader
    return TestLoader().loadTestsFromName(__name__)

# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Tests for the data model, ingestion and limited-label splits."""

import json
import os
import warnings

from fixtures import TempDir
from testtools import TestCase
from testtools.matchers import (
    AnyMatch,
    Contains,
    Equals,
    HasLength,
    MatchesException,
    MatchesListwise,
    MatchesStructure,
    Raises,
    Warnings,
    WarningMessage,
    )

from scenelabel.dataset import (
    BoundingBox,
    Vocab,
    dataset_from_dict,
    dataset_to_dict,
    dump_dataset,
    load_dataset,
    split_limited,
    )
from scenelabel.errors import (
    ConfigError,
    DataError,
    DegenerateBoxError,
    EmptyPredicateWarning,
    FewExamplesWarning,
    SchemaError,
    ValidationError,
    )
from scenelabel.tests.helpers import make_dataset, scene_dict


raises_config_error = Raises(MatchesException(ConfigError))
raises_validation_error = Raises(MatchesException(ValidationError))


def raises_schema_error(record):
    return Raises(MatchesException(
        SchemaError, '{}: .*'.format(record.replace('[', r'\[').replace(
            ']', r'\]'))))


class TestBoundingBox(TestCase):

    def test_from_list(self):
        box = BoundingBox.from_list([1, 2, 3, 4])
        self.assertThat(box, MatchesStructure.byEquality(y=1, x=2, h=3, w=4))
        self.assertThat(box.as_list(), Equals([1, 2, 3, 4]))

    def test_degenerate(self):
        self.assertThat(lambda: BoundingBox(0, 0, 0, 5),
                        Raises(MatchesException(DegenerateBoxError)))
        self.assertThat(lambda: BoundingBox(0, 0, 5, -1),
                        Raises(MatchesException(DegenerateBoxError)))

    def test_negative_corner(self):
        self.assertThat(lambda: BoundingBox(-1, 0, 5, 5),
                        raises_validation_error)

    def test_not_finite(self):
        self.assertThat(lambda: BoundingBox(0, float('inf'), 5, 5),
                        raises_validation_error)
        self.assertThat(lambda: BoundingBox(0, True, 5, 5),
                        raises_validation_error)

    def test_intersection_area(self):
        box = BoundingBox(0, 0, 4, 4)
        self.assertThat(box.intersection_area(BoundingBox(2, 2, 4, 4)),
                        Equals(4))
        self.assertThat(box.intersection_area(BoundingBox(4, 0, 4, 4)),
                        Equals(0.0))


class TestVocab(TestCase):

    def test_index_and_name(self):
        vocab = Vocab(['ride', 'wear'], 'predicate')
        self.assertThat(vocab.index('wear'), Equals(1))
        self.assertThat(vocab[0], Equals('ride'))
        self.assertThat(vocab, HasLength(2))

    def test_unknown_name(self):
        vocab = Vocab(['ride'], 'predicate')
        self.assertThat(
            lambda: vocab.index('fly'),
            Raises(MatchesException(ValidationError,
                                    "unknown predicate 'fly'")))

    def test_duplicates(self):
        self.assertThat(lambda: Vocab(['a', 'a']), raises_validation_error)

    def test_empty_name(self):
        self.assertThat(lambda: Vocab(['']), raises_validation_error)


class TestDatasetFromDict(TestCase):

    def test_minimal(self):
        ds = dataset_from_dict({
            'categories': ['person', 'horse'], 'predicates': ['ride'],
            'images': [{'id': 'a', 'objects': [
                {'box': [0, 0, 2, 2], 'category': 0},
                {'box': [2, 0, 1, 1], 'category': 1}],
                'relationships': [
                    {'subject': 0, 'object': 1, 'predicate': 0}]}]})
        self.assertThat(ds.images, HasLength(1))
        self.assertThat(ds.relationship_counts(), Equals([1]))
        self.assertThat(ds.summary(), Equals(
            {'images': 1, 'objects': 2, 'relationships': 1}))

    def test_object_index_out_of_range(self):
        data = scene_dict(2)
        data['images'][1]['relationships'][0]['object'] = 5
        self.assertThat(
            lambda: dataset_from_dict(data),
            Raises(MatchesException(
                ValidationError, r'images\[1\]\.relationships\[0\]: .*')))

    def test_self_pair(self):
        data = scene_dict(1)
        data['images'][0]['relationships'][0]['object'] = 0
        self.assertThat(lambda: dataset_from_dict(data),
                        raises_validation_error)

    def test_missing_key_names_record(self):
        data = scene_dict(2)
        del data['images'][1]['objects'][2]['category']
        self.assertThat(lambda: dataset_from_dict(data),
                        raises_schema_error('images[1].objects[2]'))

    def test_bad_box_names_record(self):
        data = scene_dict(1)
        data['images'][0]['objects'][0]['box'] = [0, 0, 1]
        self.assertThat(lambda: dataset_from_dict(data),
                        raises_schema_error('images[0].objects[0]'))

    def test_degenerate_box_names_record(self):
        data = scene_dict(1)
        data['images'][0]['objects'][1]['box'] = [0, 0, 0, 1]
        self.assertThat(
            lambda: dataset_from_dict(data),
            Raises(MatchesException(
                DegenerateBoxError, r'images\[0\]\.objects\[1\]: .*')))

    def test_duplicate_image_id(self):
        data = scene_dict(2)
        data['images'][1]['id'] = data['images'][0]['id']
        self.assertThat(lambda: dataset_from_dict(data),
                        raises_schema_error('images[1]'))

    def test_category_out_of_range(self):
        data = scene_dict(1)
        data['images'][0]['objects'][0]['category'] = 7
        self.assertThat(lambda: dataset_from_dict(data),
                        raises_validation_error)

    def test_to_dict_inverts_from_dict(self):
        data = scene_dict(3)
        self.assertThat(dataset_to_dict(dataset_from_dict(data)),
                        Equals(json.loads(json.dumps(data))))

    def test_instances(self):
        ds = make_dataset(3)
        pairs = ds.instances(1)
        self.assertThat([pair.pair_id for pair in pairs],
                        Equals(['im0:0:2', 'im1:0:2', 'im2:0:2']))


class TestLoadDataset(TestCase):

    def test_missing_file_names_path(self):
        path = os.path.join(self.useFixture(TempDir()).path, 'absent.json')
        self.assertThat(
            lambda: load_dataset(path),
            Raises(MatchesException(DataError, '.*absent.json')))

    def test_not_json(self):
        path = os.path.join(self.useFixture(TempDir()).path, 'bad.json')
        with open(path, 'w') as stream:
            stream.write('{"images": [')
        self.assertThat(lambda: load_dataset(path),
                        Raises(MatchesException(SchemaError)))

    def test_dump_then_load(self):
        ds = make_dataset(4)
        path = dump_dataset(ds).write_to(
            os.path.join(self.useFixture(TempDir()).path, 'dataset.json'))
        self.assertThat(dataset_to_dict(load_dataset(path)),
                        Equals(dataset_to_dict(ds)))


class TestSplitLimited(TestCase):

    def test_sizes(self):
        split = split_limited(make_dataset(8), 3, 0.25, seed=0)
        self.assertThat(split.sizes(), Equals({
            'labeled': [3, 3],
            'unlabeled': 12,
            'negatives': 6,
            'holdout_images': 2,
            'holdout_relationships': 4,
            }))

    def test_parts_are_disjoint(self):
        split = split_limited(make_dataset(8), 3, 0.25, seed=1)
        labeled = {rel.pair.pair_id for rel in split.pooled_labeled()}
        unlabeled = {pair.pair_id for pair in split.unlabeled}
        held_images = {pair.image_id for pair in split.holdout_pairs}
        self.assertThat(labeled & unlabeled, Equals(set()))
        for pair_id in labeled | unlabeled:
            self.assertNotIn(pair_id.split(':')[0], held_images)
        for rel in split.eval_holdout:
            self.assertIn(rel.pair.image_id, held_images)

    def test_labeled_is_capped_by_availability(self):
        split = split_limited(make_dataset(4), 10, 0.0, seed=0)
        self.assertThat(split.sizes()['labeled'], Equals([4, 4]))
        self.assertThat(split.unlabeled, HasLength(0))

    def test_short_predicate_warns(self):
        ds = make_dataset(4)
        self.assertThat(
            lambda: split_limited(ds, 10, 0.0, seed=0),
            Warnings(MatchesListwise([
                WarningMessage(
                    category_type=FewExamplesWarning,
                    message=Contains("'ride' has only 4 of 10")),
                WarningMessage(
                    category_type=FewExamplesWarning,
                    message=Contains("'wear' has only 4 of 10")),
                ])))

    def test_shared_predicate_stays_under_cap(self):
        # Every pair carrying A also carries B, as do the two C pairs, so
        # labeling C first leaves room for a single A pair.
        images = []
        for i in range(10):
            relationships = [
                {'subject': 0, 'object': 2, 'predicate': 0},
                {'subject': 0, 'object': 2, 'predicate': 1},
                ]
            if i < 2:
                relationships.extend([
                    {'subject': 0, 'object': 1, 'predicate': 2},
                    {'subject': 0, 'object': 1, 'predicate': 1},
                    ])
            images.append({
                'id': 'im{}'.format(i),
                'objects': [
                    {'box': [10.0, 10.0 + i, 20.0, 10.0], 'category': 0},
                    {'box': [30.0, 5.0, 10.0, 10.0], 'category': 1},
                    {'box': [5.0, 40.0, 8.0, 8.0], 'category': 2},
                    ],
                'relationships': relationships,
                })
        ds = dataset_from_dict({
            'categories': ['a', 'b', 'c'],
            'predicates': ['A', 'B', 'C'],
            'images': images})
        for seed in range(5):
            with warnings.catch_warnings():
                warnings.simplefilter('ignore', FewExamplesWarning)
                split = split_limited(ds, 3, 0.0, seed=seed)
            self.assertThat(split.sizes()['labeled'], Equals([1, 3, 2]))
            for group in split.labeled:
                pair_ids = [rel.pair.pair_id for rel in group]
                self.assertThat(len(set(pair_ids)), Equals(len(pair_ids)))

    def test_same_seed_same_split(self):
        ds = make_dataset(8)
        first = split_limited(ds, 2, 0.25, seed=7)
        second = split_limited(ds, 2, 0.25, seed=7)
        self.assertThat(
            [pair.pair_id for pair in first.unlabeled],
            Equals([pair.pair_id for pair in second.unlabeled]))
        self.assertThat(
            [rel.pair.pair_id for rel in first.pooled_labeled()],
            Equals([rel.pair.pair_id for rel in second.pooled_labeled()]))

    def test_negative_ratio(self):
        split = split_limited(make_dataset(8), 3, 0.0, negative_ratio=0.5)
        sizes = split.sizes()
        positives = sizes['unlabeled'] - sizes['negatives']
        self.assertThat(positives, Equals(10))
        self.assertThat(sizes['negatives'], Equals(5))
        for pair in split.unlabeled:
            gold = split.unlabeled_gold[pair.pair_id]
            self.assertThat(bool(gold), Equals(
                pair.pair_id.split(':')[1:] in (['0', '1'], ['0', '2'])))

    def test_predicate_without_instances_warns(self):
        ds = make_dataset(4, predicates=('ride', 'wear', 'near'))
        self.assertThat(
            lambda: split_limited(ds, 2),
            Warnings(AnyMatch(WarningMessage(
                category_type=EmptyPredicateWarning,
                message=Contains("'near'")))))

    def test_bad_arguments(self):
        ds = make_dataset(2)
        self.assertThat(lambda: split_limited(ds, 0), raises_config_error)
        self.assertThat(lambda: split_limited(ds, 2, 1.0),
                        raises_config_error)
        self.assertThat(lambda: split_limited(ds, 2, negative_ratio=-1),
                        raises_config_error)


def test_suite():
    from unittest import TestLoader
    return TestLoader().loadTestsFromName(__name__)

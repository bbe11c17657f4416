# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""The scene-graph data model, its JSON ingestion and limited-label splits."""

__all__ = [
    'BoundingBox',
    'ImageRecord',
    'LabeledRelationship',
    'ObjectInstance',
    'ObjectPair',
    'Relationship',
    'SceneGraphDataset',
    'SplitDataset',
    'Vocab',
    'dataset_from_dict',
    'dataset_to_dict',
    'dump_dataset',
    'load_dataset',
    'split_limited',
    ]

from collections import defaultdict
from dataclasses import dataclass, field
import json
import logging
import math
import warnings

from scenelabel.content import json_content
from scenelabel.errors import (
    ConfigError,
    DataError,
    DegenerateBoxError,
    EmptyPredicateWarning,
    FewExamplesWarning,
    SchemaError,
    ValidationError,
    )
from scenelabel.helpers import substream


logger = logging.getLogger(__name__)


def _is_number(value):
    return (isinstance(value, (int, float)) and not isinstance(value, bool)
            and math.isfinite(value))


@dataclass(frozen=True)
class BoundingBox:
    """An axis-aligned box in image coordinates.

    ``y`` grows downward and ``(y, x)`` is the top-left corner, so a box
    with a smaller ``y`` sits higher in the image.
    """

    y: float
    x: float
    h: float
    w: float

    def __post_init__(self):
        for name in ('y', 'x', 'h', 'w'):
            if not _is_number(getattr(self, name)):
                raise ValidationError(
                    'box {} must be a finite number, got {!r}'.format(
                        name, getattr(self, name)))
        if self.h <= 0 or self.w <= 0:
            raise DegenerateBoxError(
                'box has non-positive size h={} w={}'.format(self.h, self.w))
        if self.y < 0 or self.x < 0:
            raise ValidationError(
                'box has a negative corner y={} x={}'.format(self.y, self.x))

    @classmethod
    def from_list(cls, values):
        """Build a box from ``[y, x, h, w]``."""
        y, x, h, w = values
        return cls(y, x, h, w)

    def as_list(self):
        return [self.y, self.x, self.h, self.w]

    def intersection_area(self, other):
        """Return the area shared by this box and ``other``."""
        overlap_h = (min(self.y + self.h, other.y + other.h)
                     - max(self.y, other.y))
        overlap_w = (min(self.x + self.w, other.x + other.w)
                     - max(self.x, other.x))
        if overlap_h <= 0 or overlap_w <= 0:
            return 0.0
        return overlap_h * overlap_w


class Vocab:
    """An ordered vocabulary of unique names.

    Index and name map to each other one-to-one.
    """

    def __init__(self, names, kind='category'):
        names = tuple(names)
        seen = set()
        for name in names:
            if not isinstance(name, str) or not name:
                raise ValidationError(
                    '{} names must be non-empty strings, got {!r}'.format(
                        kind, name))
            if name in seen:
                raise ValidationError(
                    'duplicate {} name {!r}'.format(kind, name))
            seen.add(name)
        self.names = names
        self.kind = kind
        self._index = {name: i for i, name in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __getitem__(self, index):
        return self.names[index]

    def __eq__(self, other):
        return (isinstance(other, Vocab) and self.names == other.names
                and self.kind == other.kind)

    def __hash__(self):
        return hash((self.kind, self.names))

    def __repr__(self):
        return 'Vocab({!r}, kind={!r})'.format(list(self.names), self.kind)

    def index(self, name):
        """Return the index of ``name``.

        :raises ValidationError: If ``name`` is not in the vocabulary.
        """
        try:
            return self._index[name]
        except KeyError:
            raise ValidationError('unknown {} {!r}'.format(self.kind, name))


@dataclass(frozen=True)
class ObjectInstance:
    """A box with a category id."""

    box: BoundingBox
    category: int


@dataclass(frozen=True)
class ObjectPair:
    """An ordered (subject, object) pair of objects from one image."""

    image_id: str
    subject: ObjectInstance
    object: ObjectInstance
    subject_index: int
    object_index: int

    @property
    def pair_id(self):
        return '{}:{}:{}'.format(
            self.image_id, self.subject_index, self.object_index)


@dataclass(frozen=True)
class LabeledRelationship:
    """An object pair together with one of its predicates."""

    pair: ObjectPair
    predicate: int


@dataclass(frozen=True)
class Relationship:
    """An edge of a scene graph, as object indices into its image."""

    subject: int
    object: int
    predicate: int


@dataclass(frozen=True)
class ImageRecord:
    """One image: its objects and its ground-truth relationships."""

    id: str
    objects: tuple
    relationships: tuple

    def pair(self, subject, object):
        return ObjectPair(self.id, self.objects[subject], self.objects[object],
                          subject, object)

    def ordered_pairs(self):
        """Yield every ordered pair of distinct objects."""
        for s in range(len(self.objects)):
            for o in range(len(self.objects)):
                if s != o:
                    yield self.pair(s, o)


@dataclass(frozen=True)
class SceneGraphDataset:
    """Images whose relationships form a multigraph over their objects."""

    category_vocab: Vocab
    predicate_vocab: Vocab
    images: tuple

    def __post_init__(self):
        ids = set()
        for i, image in enumerate(self.images):
            if image.id in ids:
                raise SchemaError(
                    'images[{}]'.format(i),
                    'duplicate image id {!r}'.format(image.id))
            ids.add(image.id)
            for j, obj in enumerate(image.objects):
                if not 0 <= obj.category < len(self.category_vocab):
                    raise ValidationError(
                        'images[{}].objects[{}]: category {} out of range '
                        '[0, {})'.format(i, j, obj.category,
                                         len(self.category_vocab)))
            for j, rel in enumerate(image.relationships):
                record = 'images[{}].relationships[{}]'.format(i, j)
                for role in ('subject', 'object'):
                    index = getattr(rel, role)
                    if not 0 <= index < len(image.objects):
                        raise ValidationError(
                            '{}: {} index {} out of range for {} '
                            'objects'.format(record, role, index,
                                             len(image.objects)))
                if rel.subject == rel.object:
                    raise ValidationError(
                        '{}: subject and object are the same object'.format(
                            record))
                if not 0 <= rel.predicate < len(self.predicate_vocab):
                    raise ValidationError(
                        '{}: predicate {} out of range [0, {})'.format(
                            record, rel.predicate, len(self.predicate_vocab)))

    def relationship_counts(self):
        """Return the number of ground-truth relationships per predicate."""
        counts = [0] * len(self.predicate_vocab)
        for image in self.images:
            for rel in image.relationships:
                counts[rel.predicate] += 1
        return counts

    def instances(self, predicate):
        """Return every pair carrying ``predicate``, in dataset order."""
        return [image.pair(rel.subject, rel.object)
                for image in self.images
                for rel in image.relationships
                if rel.predicate == predicate]

    def summary(self):
        return {
            'images': len(self.images),
            'objects': sum(len(image.objects) for image in self.images),
            'relationships': sum(
                len(image.relationships) for image in self.images),
            }


def _require(mapping, key, record, kind):
    if not isinstance(mapping, dict):
        raise SchemaError(record, 'expected an object')
    if key not in mapping:
        raise SchemaError(record, 'missing key {!r}'.format(key))
    value = mapping[key]
    if not isinstance(value, kind):
        raise SchemaError(
            record, '{!r} must be {}'.format(
                key, getattr(kind, '__name__', 'a list')))
    return value


def _index_value(value, record, key):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(record, '{!r} must be an integer'.format(key))
    return value


def dataset_from_dict(data):
    """Build a dataset from the decoded JSON schema.

    :raises SchemaError: naming the offending record when the structure is
        wrong.
    :raises ValidationError: when indices are out of range.
    """
    categories = _require(data, 'categories', 'dataset', list)
    predicates = _require(data, 'predicates', 'dataset', list)
    raw_images = _require(data, 'images', 'dataset', list)
    category_vocab = Vocab(categories, 'category')
    predicate_vocab = Vocab(predicates, 'predicate')
    images = []
    for i, raw in enumerate(raw_images):
        record = 'images[{}]'.format(i)
        image_id = _require(raw, 'id', record, str)
        objects = []
        for j, raw_obj in enumerate(_require(raw, 'objects', record, list)):
            obj_record = '{}.objects[{}]'.format(record, j)
            box = _require(raw_obj, 'box', obj_record, list)
            if len(box) != 4 or not all(_is_number(v) for v in box):
                raise SchemaError(
                    obj_record, 'box must be four finite numbers [y, x, h, w]')
            category = _index_value(
                _require(raw_obj, 'category', obj_record, int),
                obj_record, 'category')
            try:
                objects.append(
                    ObjectInstance(BoundingBox.from_list(box), category))
            except ValidationError as e:
                raise e.__class__('{}: {}'.format(obj_record, e))
        relationships = []
        raw_rels = _require(raw, 'relationships', record, list)
        for j, raw_rel in enumerate(raw_rels):
            rel_record = '{}.relationships[{}]'.format(record, j)
            relationships.append(Relationship(*(
                _index_value(_require(raw_rel, key, rel_record, int),
                             rel_record, key)
                for key in ('subject', 'object', 'predicate'))))
        images.append(
            ImageRecord(image_id, tuple(objects), tuple(relationships)))
    return SceneGraphDataset(category_vocab, predicate_vocab, tuple(images))


def dataset_to_dict(ds):
    """Return the JSON-schema form of ``ds``."""
    return {
        'categories': list(ds.category_vocab),
        'predicates': list(ds.predicate_vocab),
        'images': [
            {'id': image.id,
             'objects': [{'box': obj.box.as_list(), 'category': obj.category}
                         for obj in image.objects],
             'relationships': [
                 {'subject': rel.subject, 'object': rel.object,
                  'predicate': rel.predicate}
                 for rel in image.relationships]}
            for image in ds.images],
        }


def dump_dataset(ds):
    """Return ``ds`` serialised as a JSON Content object."""
    return json_content(dataset_to_dict(ds))


def load_dataset(path):
    """Load a dataset file.

    :param path: Path to a JSON file in the documented schema.
    :raises DataError: If the file is missing or is not JSON.
    :raises SchemaError: If a record does not conform to the schema.
    :raises ValidationError: If an index is out of range.
    """
    try:
        with open(path, 'rb') as stream:
            data = json.loads(stream.read().decode('utf8'))
    except FileNotFoundError:
        raise DataError('dataset file not found: {}'.format(path))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SchemaError(path, 'not valid JSON ({})'.format(e))
    ds = dataset_from_dict(data)
    summary = ds.summary()
    logger.info(
        'loaded %s: %d images, %d objects, %d relationships', path,
        summary['images'], summary['objects'], summary['relationships'])
    return ds


@dataclass(frozen=True, eq=False)
class SplitDataset:
    """A limited-label view of a dataset.

    :ivar labeled: A tuple indexed by predicate id; entry ``p`` holds the
        labeled relationships D_p.
    :ivar unlabeled: The unlabeled pairs D_U, ground-truth positives with
        their labels stripped plus sampled negative pairs, in dataset order.
    :ivar eval_holdout: Ground-truth relationships of the held-out images.
    :ivar holdout_pairs: Every ordered object pair of the held-out images.
    :ivar unlabeled_gold: pair id -> tuple of ground-truth predicate ids for
        every unlabeled pair (empty for negatives). Only evaluation reads it.
    """

    category_vocab: Vocab
    predicate_vocab: Vocab
    labeled: tuple
    unlabeled: tuple
    eval_holdout: tuple
    holdout_pairs: tuple = ()
    unlabeled_gold: dict = field(default_factory=dict)

    def pooled_labeled(self):
        """Return all labeled relationships, predicate by predicate."""
        return [rel for group in self.labeled for rel in group]

    def sizes(self):
        return {
            'labeled': [len(group) for group in self.labeled],
            'unlabeled': len(self.unlabeled),
            'negatives': sum(
                1 for pair in self.unlabeled
                if not self.unlabeled_gold.get(pair.pair_id)),
            'holdout_images': len({
                pair.image_id for pair in self.holdout_pairs}),
            'holdout_relationships': len(self.eval_holdout),
            }


def _gold_pairs(ds, image_indices):
    """Map (image, subject, object) -> sorted predicate ids."""
    gold = defaultdict(set)
    for i in image_indices:
        for rel in ds.images[i].relationships:
            gold[(i, rel.subject, rel.object)].add(rel.predicate)
    return {key: tuple(sorted(preds)) for key, preds in sorted(gold.items())}


def split_limited(ds, n, holdout_fraction=0.0, seed=0, negative_ratio=1.0):
    """Split ``ds`` into labeled, unlabeled and held-out parts.

    Held-out images are drawn first and keep all their labels for
    evaluation. From the remaining images at most ``n`` relationships per
    predicate are labeled; a labeled pair contributes all its predicates.
    Every other annotated pair becomes unlabeled, joined by
    ``negative_ratio`` times as many pairs that carry no relationship.

    :param n: Labeled examples per predicate, at least 1.
    :param holdout_fraction: Fraction of images held out, in [0, 1).
    :param seed: Root seed; equal arguments give identical splits.
    :param negative_ratio: Sampled negatives per unlabeled positive.
    :return: A ``SplitDataset``.
    """
    if not isinstance(n, int) or n < 1:
        raise ConfigError('n must be an integer >= 1, got {!r}'.format(n))
    if not 0 <= holdout_fraction < 1:
        raise ConfigError(
            'holdout_fraction must be in [0, 1), got {!r}'.format(
                holdout_fraction))
    if negative_ratio < 0:
        raise ConfigError('negative_ratio must be >= 0')
    num_predicates = len(ds.predicate_vocab)
    num_images = len(ds.images)
    held = int(math.floor(holdout_fraction * num_images))
    order = substream(seed, 'split/holdout').permutation(num_images)
    held_images = set(int(i) for i in order[:held])
    train_images = [i for i in range(num_images) if i not in held_images]

    def pair_of(key):
        i, s, o = key
        return ds.images[i].pair(s, o)

    eval_holdout = []
    for key, preds in _gold_pairs(ds, sorted(held_images)).items():
        pair = pair_of(key)
        eval_holdout.extend(LabeledRelationship(pair, p) for p in preds)
    holdout_pairs = [pair for i in sorted(held_images)
                     for pair in ds.images[i].ordered_pairs()]

    gold = _gold_pairs(ds, train_images)
    available = [0] * num_predicates
    for preds in gold.values():
        for p in preds:
            available[p] += 1
    totals = ds.relationship_counts()
    labeled = [[] for _ in range(num_predicates)]
    counts = [0] * num_predicates
    chosen = set()
    rng = substream(seed, 'split/labeled')
    for p in sorted(range(num_predicates), key=lambda q: (available[q], q)):
        if totals[p] == 0 or available[p] == 0:
            warnings.warn(
                'predicate {!r} has no ground-truth instances to '
                'label'.format(ds.predicate_vocab[p]),
                EmptyPredicateWarning, stacklevel=2)
            continue
        if counts[p] >= n:
            continue
        candidates = [
            key for key, preds in gold.items()
            if p in preds and key not in chosen]
        for index in rng.permutation(len(candidates)):
            if counts[p] >= n:
                break
            key = candidates[index]
            # A pair labels all its predicates, so each must have room.
            if any(counts[q] >= n for q in gold[key]):
                continue
            chosen.add(key)
            for q in gold[key]:
                labeled[q].append(LabeledRelationship(pair_of(key), q))
                counts[q] += 1
        if counts[p] < n:
            warnings.warn(
                'predicate {!r} has only {} of {} labeled examples'.format(
                    ds.predicate_vocab[p], counts[p], n),
                FewExamplesWarning, stacklevel=2)
    for group in labeled:
        group.sort(key=lambda rel: _pair_key(ds, rel.pair))

    unlabeled = {}
    unlabeled_gold = {}
    for key, preds in gold.items():
        if key not in chosen:
            unlabeled[key] = pair_of(key)
            unlabeled_gold[unlabeled[key].pair_id] = preds
    wanted = int(round(negative_ratio * len(unlabeled)))
    negatives = [
        (i, s, o) for i in train_images
        for s in range(len(ds.images[i].objects))
        for o in range(len(ds.images[i].objects))
        if s != o and (i, s, o) not in gold]
    picks = substream(seed, 'split/negatives').permutation(
        len(negatives))[:wanted]
    for index in sorted(picks):
        key = negatives[index]
        unlabeled[key] = pair_of(key)
        unlabeled_gold[unlabeled[key].pair_id] = ()
    split = SplitDataset(
        ds.category_vocab, ds.predicate_vocab,
        labeled=tuple(tuple(group) for group in labeled),
        unlabeled=tuple(unlabeled[key] for key in sorted(unlabeled)),
        eval_holdout=tuple(eval_holdout),
        holdout_pairs=tuple(holdout_pairs),
        unlabeled_gold=unlabeled_gold)
    sizes = split.sizes()
    logger.info(
        'split n=%d: %d labeled, %d unlabeled (%d negatives), '
        '%d held-out relationships', n, sum(sizes['labeled']),
        sizes['unlabeled'], sizes['negatives'],
        sizes['holdout_relationships'])
    return split


def _pair_key(ds, pair):
    # Image position, not id, so the order matches the file.
    return (_image_positions(ds)[pair.image_id], pair.subject_index,
            pair.object_index)


def _image_positions(ds):
    positions = getattr(ds, '_positions', None)
    if positions is None:
        positions = {image.id: i for i, image in enumerate(ds.images)}
        object.__setattr__(ds, '_positions', positions)
    return positions

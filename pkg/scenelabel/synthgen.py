# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""A deterministic generator of synthetic scene graphs.

Generation works in feature space: for every planted relationship a
target spatial feature vector is drawn from one of the predicate's
modes, and a subject/object box pair realising it is solved for. Each
relationship occupies its own horizontal region of its image, so planted
pairs never overlap each other.
"""

__all__ = [
    'InstanceRecord',
    'PredicateSpec',
    'SpatialMode',
    'SynthSpec',
    'acceptance_spec',
    'generate',
    'planted_spec',
    'write_generated',
    ]

from dataclasses import dataclass, field
import logging
import math
import os

import numpy as np

from scenelabel.concurrency import map_concurrently
from scenelabel.content import json_content
from scenelabel.dataset import (
    BoundingBox,
    ImageRecord,
    ObjectInstance,
    Relationship,
    SceneGraphDataset,
    Vocab,
    dump_dataset,
    )
from scenelabel.errors import ConfigError, InfeasibleTargetError
from scenelabel.helpers import as_float_list, substream


logger = logging.getLogger(__name__)

# Indices of the features that are sampled; the others follow from them
# for a square subject box.
FREE_FEATURES = (0, 1, 4, 5)

MAX_TRIES = 100

_GAP = 10.0


def _derive(f0, f1, f4, f5):
    return [f0, f1, f1 + 1.0 - f4, f0 + 1.0 - f5, f4, f5, f4 * f5,
            (f4 + f5) / 2.0]


@dataclass(frozen=True)
class SpatialMode:
    """A mode of the eight spatial features: a mean and a spread each.

    Only the free features (f[0], f[1], f[4], f[5]) are sampled. The other
    means must equal what a square subject box gives for the free means,
    as ``relative`` builds them; their spreads only describe the derived
    features.
    """

    mean: tuple
    spread: tuple

    def __post_init__(self):
        if len(self.mean) != 8 or len(self.spread) != 8:
            raise ConfigError('a spatial mode needs 8 means and 8 spreads')
        if any(s < 0 for s in self.spread):
            raise ConfigError('spreads must be non-negative')
        if self.mean[4] <= 0 or self.mean[5] <= 0:
            raise ConfigError('size ratios f[4] and f[5] must be positive')
        derived = _derive(*(self.mean[i] for i in FREE_FEATURES))
        wrong = [i for i in range(8)
                 if abs(self.mean[i] - derived[i]) > 1e-9]
        if wrong:
            raise ConfigError(
                'means of derived features {} do not follow from the free '
                'features'.format(wrong))

    @classmethod
    def relative(cls, dx, dy, h_ratio, w_ratio, spread=0.05,
                 ratio_spread=None):
        """Build a consistent mode from the relative box parameters.

        :param dx: Target ``(x - x') / w``.
        :param dy: Target ``(y - y') / h``; negative puts the subject above.
        :param h_ratio: Target ``h' / h``.
        :param w_ratio: Target ``w' / w``.
        :param spread: Standard deviation of ``dx`` and ``dy``.
        :param ratio_spread: Standard deviation of the ratios; defaults to
            ``spread``.
        """
        if ratio_spread is None:
            ratio_spread = spread
        s, r = float(spread), float(ratio_spread)
        mean = _derive(float(dx), float(dy), float(h_ratio), float(w_ratio))
        deviations = [
            s, s, math.hypot(s, r), math.hypot(s, r), r, r,
            math.hypot(w_ratio * r, h_ratio * r), r / math.sqrt(2.0)]
        return cls(tuple(mean), tuple(deviations))


@dataclass(frozen=True)
class PredicateSpec:
    """How one predicate is planted.

    :ivar category_pairs: ``((subject name, object name), weight)`` items.
        When empty, every ordered pair of categories is equally likely.
    :ivar spatial_modes: ``SpatialMode`` objects. When empty, one broad
        mode around identical boxes is used.
    :ivar mode_weights: Relative frequency of each mode; uniform if empty.
    """

    name: str
    spatial_modes: tuple = ()
    category_pairs: tuple = ()
    mode_weights: tuple = ()

    def modes(self):
        if self.spatial_modes:
            return self.spatial_modes
        return (SpatialMode.relative(0.0, 0.0, 1.0, 1.0, 0.5, 0.1),)


@dataclass(frozen=True)
class SynthSpec:
    """A complete description of a synthetic dataset."""

    categories: tuple
    predicates: tuple
    instances_per_predicate: int = 100
    negative_pair_fraction: float = 0.0
    relationships_per_image: int = 3
    seed: int = 0

    def __post_init__(self):
        if not self.predicates:
            raise ConfigError('a synthetic spec needs predicates')
        if self.instances_per_predicate < 1:
            raise ConfigError('instances_per_predicate must be >= 1')
        if self.relationships_per_image < 1:
            raise ConfigError('relationships_per_image must be >= 1')
        if self.negative_pair_fraction < 0:
            raise ConfigError('negative_pair_fraction must be >= 0')
        names = set(self.categories)
        for predicate in self.predicates:
            if predicate.mode_weights and (
                    len(predicate.mode_weights) != len(predicate.modes())):
                raise ConfigError(
                    'predicate {!r}: one weight per mode'.format(
                        predicate.name))
            for (subject, object_), weight in predicate.category_pairs:
                if subject not in names or object_ not in names:
                    raise ConfigError(
                        'predicate {!r}: unknown category in ({}, {})'.format(
                            predicate.name, subject, object_))
                if weight <= 0:
                    raise ConfigError('category pair weights must be > 0')


@dataclass(frozen=True)
class InstanceRecord:
    """One planted relationship before layout."""

    predicate: int
    mode: int
    subject_category: int
    object_category: int
    target: tuple
    subject_box: tuple
    object_box: tuple


def _sample_target(mode, rng, what):
    mean = np.asarray(mode.mean, dtype=float)
    spread = np.asarray(mode.spread, dtype=float)
    for _ in range(MAX_TRIES):
        f0, f1, f4, f5 = (rng.normal(mean[i], spread[i])
                          for i in FREE_FEATURES)
        if f4 > 0 and f5 > 0:
            return _derive(f0, f1, f4, f5)
    raise InfeasibleTargetError(
        '{}: no positive size ratios after {} tries'.format(what, MAX_TRIES))


def _solve_boxes(target, size):
    """Return subject and object boxes, relative to the subject corner."""
    f0, f1, f4, f5 = (target[i] for i in FREE_FEATURES)
    subject = (0.0, 0.0, size, size)
    object_ = (-f1 * size, -f0 * size, f4 * size, f5 * size)
    return subject, object_


def _pick(rng, weights):
    weights = np.asarray(weights, dtype=float)
    return int(rng.choice(len(weights), p=weights / weights.sum()))


def _plant_predicate(spec, index, category_vocab):
    predicate = spec.predicates[index]
    rng = substream(spec.seed, 'synthgen/{}'.format(index))
    modes = predicate.modes()
    mode_weights = predicate.mode_weights or [1.0] * len(modes)
    if predicate.category_pairs:
        pairs = [(category_vocab.index(s), category_vocab.index(o))
                 for (s, o), _ in predicate.category_pairs]
        pair_weights = [w for _, w in predicate.category_pairs]
    else:
        pairs = [(s, o) for s in range(len(category_vocab))
                 for o in range(len(category_vocab))]
        pair_weights = [1.0] * len(pairs)
    records = []
    for number in range(spec.instances_per_predicate):
        mode = _pick(rng, mode_weights)
        subject_category, object_category = pairs[_pick(rng, pair_weights)]
        target = _sample_target(
            modes[mode], rng, '{} instance {}'.format(predicate.name, number))
        subject, object_ = _solve_boxes(target, rng.uniform(20.0, 60.0))
        records.append(InstanceRecord(
            index, mode, subject_category, object_category, tuple(target),
            subject, object_))
    return records


def _distractor(spec, number, num_categories):
    rng = substream(spec.seed, 'synthgen/negatives/{}'.format(number))
    broad = SpatialMode.relative(0.0, 0.0, 1.0, 1.0, 1.5, 0.5)
    target = _sample_target(broad, rng, 'distractor {}'.format(number))
    subject, object_ = _solve_boxes(target, rng.uniform(20.0, 60.0))
    categories = rng.integers(num_categories, size=2)
    return InstanceRecord(-1, -1, int(categories[0]), int(categories[1]),
                          tuple(target), subject, object_)


def _place(records, offset):
    """Translate box pairs into side-by-side regions starting at ``offset``.

    :return: ``(objects, next offset)``.
    """
    objects = []
    for record in records:
        boxes = [record.subject_box, record.object_box]
        top = min(b[0] for b in boxes)
        left = min(b[1] for b in boxes)
        right = max(b[1] + b[3] for b in boxes)
        for box, category in zip(
                boxes, (record.subject_category, record.object_category)):
            objects.append(ObjectInstance(
                BoundingBox(box[0] - top, box[1] - left + offset, box[2],
                            box[3]),
                category))
        offset += (right - left) + _GAP
    return objects, offset


def generate(spec, threads=1):
    """Generate a dataset and its manifest from ``spec``.

    :return: ``(SceneGraphDataset, manifest dict)``. The manifest records,
        per planted relationship, the predicate, mode index, category pair
        and target features, plus every distractor pair.
    :raises InfeasibleTargetError: If a target cannot be realised.
    """
    category_vocab = Vocab(spec.categories, 'category')
    predicate_vocab = Vocab([p.name for p in spec.predicates], 'predicate')
    planted = map_concurrently(
        lambda index: _plant_predicate(spec, index, category_vocab),
        range(len(spec.predicates)), threads)
    records = [record for group in planted for record in group]
    order = substream(spec.seed, 'synthgen/layout').permutation(len(records))
    records = [records[i] for i in order]
    per_image = spec.relationships_per_image
    chunks = [records[start:start + per_image]
              for start in range(0, len(records), per_image)]
    num_distractors = int(round(spec.negative_pair_fraction * len(records)))
    hosts = substream(spec.seed, 'synthgen/hosts').integers(
        len(chunks), size=num_distractors)
    distractors = {}
    for number, host in enumerate(hosts):
        distractors.setdefault(int(host), []).append(
            _distractor(spec, number, len(category_vocab)))
    images = []
    instances = []
    negatives = []
    for number, chunk in enumerate(chunks):
        image_id = 'img{:05d}'.format(number)
        objects, offset = _place(chunk, 0.0)
        extra, _ = _place(distractors.get(number, []), offset)
        relationships = []
        for k, record in enumerate(chunk):
            relationships.append(Relationship(2 * k, 2 * k + 1,
                                              record.predicate))
            instances.append({
                'category_pair': [record.subject_category,
                                  record.object_category],
                'image_id': image_id,
                'mode': record.mode,
                'object': 2 * k + 1,
                'predicate': predicate_vocab[record.predicate],
                'subject': 2 * k,
                'target': as_float_list(record.target),
                })
        for k in range(len(extra) // 2):
            negatives.append({'image_id': image_id,
                              'subject': len(objects) + 2 * k,
                              'object': len(objects) + 2 * k + 1})
        images.append(ImageRecord(image_id, tuple(objects + extra),
                                  tuple(relationships)))
    ds = SceneGraphDataset(category_vocab, predicate_vocab, tuple(images))
    counts = ds.relationship_counts()
    manifest = {
        'counts': {predicate_vocab[p]: counts[p] for p in range(len(counts))},
        'instances': instances,
        'negatives': negatives,
        'predicates': list(predicate_vocab),
        'seed': spec.seed,
        }
    logger.info('generated %d images with %d relationships and %d '
                'distractor pairs', len(images), len(records), len(negatives))
    return ds, manifest


def write_generated(ds, manifest, directory):
    """Write ``dataset.json`` and ``manifest.json`` under ``directory``.

    :return: The two paths.
    """
    dataset_path = dump_dataset(ds).write_to(
        os.path.join(directory, 'dataset.json'))
    manifest_path = json_content(manifest).write_to(
        os.path.join(directory, 'manifest.json'))
    return dataset_path, manifest_path


ACCEPTANCE_CATEGORIES = (
    'person', 'man', 'woman', 'bird', 'kite', 'plane', 'tree', 'building',
    'car', 'phone', 'hat', 'bike', 'horse', 'surfboard')


def acceptance_spec(seed=0, instances_per_predicate=420,
                    negative_pair_fraction=0.2):
    """Return the default five-predicate acceptance spec.

    ``fly`` and ``under`` share one category pair and differ only in the
    vertical offset f[1]. ``look`` and ``wear`` share one broad spatial
    mode and differ only in categories. ``ride`` mixes three spatial modes
    with three category pairs.
    """
    near = SpatialMode.relative(0.0, 0.0, 0.5, 0.5, 0.3, 0.1)
    predicates = (
        PredicateSpec(
            'fly', (SpatialMode.relative(0.0, -5.0, 1.0, 1.0, 0.3, 0.1),),
            ((('bird', 'tree'), 1.0),)),
        PredicateSpec(
            'under', (SpatialMode.relative(0.0, 5.0, 1.0, 1.0, 0.3, 0.1),),
            ((('bird', 'tree'), 1.0),)),
        PredicateSpec('look', (near,), ((('man', 'phone'), 1.0),)),
        PredicateSpec('wear', (near,), ((('woman', 'hat'), 1.0),)),
        PredicateSpec(
            'ride',
            (SpatialMode.relative(-0.8, -2.0, 0.4, 1.6, 0.06, 0.04),
             SpatialMode.relative(0.4, -2.6, 1.6, 2.6, 0.06, 0.04),
             SpatialMode.relative(-0.2, -3.2, 0.8, 0.6, 0.06, 0.04)),
            ((('person', 'bike'), 1.0), (('person', 'horse'), 1.0),
             (('person', 'surfboard'), 1.0))),
        )
    return SynthSpec(ACCEPTANCE_CATEGORIES, predicates,
                     instances_per_predicate, negative_pair_fraction, 3, seed)


def planted_spec(k, seed=0, instances_per_predicate=200, spread=0.05):
    """Return a one-predicate spec with ``k`` well-separated spatial modes.

    Consecutive modes differ by twenty spreads in every free feature.
    """
    step = 20.0 * spread
    modes = tuple(
        SpatialMode.relative(i * step, -i * step, 1.0 + i * step,
                             1.0 + 1.5 * i * step, spread)
        for i in range(k))
    return SynthSpec(
        ('a', 'b'), (PredicateSpec('planted', modes, ((('a', 'b'), 1.0),)),),
        instances_per_predicate, 0.0, 1, seed)

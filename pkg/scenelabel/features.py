# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Image-agnostic features of object pairs: spatial and categorical."""

__all__ = [
    'CategoricalFeatures',
    'MODES',
    'NUM_SPATIAL',
    'categorical_features',
    'feature_dimension',
    'feature_matrix',
    'feature_names',
    'features_csv',
    'featurize',
    'spatial_features',
    ]

from dataclasses import dataclass

import numpy as np

from scenelabel.content import csv_content
from scenelabel.dataset import BoundingBox
from scenelabel.errors import ConfigError, DegenerateBoxError, ValidationError


NUM_SPATIAL = 8

MODES = ('spatial', 'categorical', 'combined')


def _as_box(box):
    if isinstance(box, BoundingBox):
        return box
    y, x, h, w = box
    if h <= 0 or w <= 0:
        raise DegenerateBoxError(
            'box has non-positive size h={} w={}'.format(h, w))
    return BoundingBox(y, x, h, w)


def spatial_features(b, b2):
    """Return the eight spatial features of subject box ``b`` and object
    box ``b2``.

    With ``b = [y, x, h, w]`` and ``b2 = [y', x', h', w']`` the features
    are, in order::

        (x - x')/w, (y - y')/h, ((y + h) - (y' + h'))/h,
        ((x + w) - (x' + w'))/w, h'/h, w'/w, (w'h')/(wh), (w' + h')/(w + h)

    ``y`` grows downward, so ``f[1]`` is negative when the subject sits
    above the object.

    :param b: A ``BoundingBox`` or a ``[y, x, h, w]`` sequence.
    :param b2: Likewise, for the object.
    :raises DegenerateBoxError: If either box has a non-positive size.
    :return: A float array of shape ``(8,)``.
    """
    b, b2 = _as_box(b), _as_box(b2)
    y, x, h, w = b.y, b.x, b.h, b.w
    y2, x2, h2, w2 = b2.y, b2.x, b2.h, b2.w
    return np.array([
        (x - x2) / w,
        (y - y2) / h,
        ((y + h) - (y2 + h2)) / h,
        ((x + w) - (x2 + w2)) / w,
        h2 / h,
        w2 / w,
        (w2 * h2) / (w * h),
        (w2 + h2) / (w + h),
        ])


@dataclass(frozen=True)
class CategoricalFeatures:
    """The sparse form of a concatenated pair of one-hot vectors."""

    subject_index: int
    object_index: int
    dimension: int

    @property
    def active_positions(self):
        return (self.subject_index, self.object_index)

    def dense(self):
        values = np.zeros(self.dimension)
        values[[self.subject_index, self.object_index]] = 1.0
        return values


def categorical_features(c, c2, num_categories):
    """Encode a (subject, object) category pair.

    :raises ValidationError: If either category is out of range.
    """
    for role, value in (('subject', c), ('object', c2)):
        if not 0 <= value < num_categories:
            raise ValidationError(
                '{} category {} out of range [0, {})'.format(
                    role, value, num_categories))
    return CategoricalFeatures(c, num_categories + c2, 2 * num_categories)


def _check_mode(mode):
    if mode not in MODES:
        raise ConfigError(
            'unknown feature mode {!r}, expected one of {}'.format(
                mode, ', '.join(MODES)))


def feature_dimension(mode, num_categories):
    _check_mode(mode)
    return {
        'spatial': NUM_SPATIAL,
        'categorical': 2 * num_categories,
        'combined': NUM_SPATIAL + 2 * num_categories,
        }[mode]


def featurize(pair, vocab, mode='combined'):
    """Return the feature vector of ``pair`` in the layout of ``mode``.

    Combined vectors are ``[spatial (8) | categorical (2|C|)]``.

    :param vocab: The category vocabulary (or its size).
    """
    _check_mode(mode)
    num_categories = vocab if isinstance(vocab, int) else len(vocab)
    blocks = []
    if mode in ('spatial', 'combined'):
        blocks.append(spatial_features(pair.subject.box, pair.object.box))
    if mode in ('categorical', 'combined'):
        blocks.append(categorical_features(
            pair.subject.category, pair.object.category,
            num_categories).dense())
    return np.concatenate(blocks)


def feature_matrix(pairs, vocab, mode='combined'):
    """Stack the feature vectors of ``pairs`` into an ``(N, D)`` array.

    Rows equal ``featurize`` of each pair exactly.
    """
    _check_mode(mode)
    num_categories = vocab if isinstance(vocab, int) else len(vocab)
    pairs = list(pairs)
    width = feature_dimension(mode, num_categories)
    matrix = np.zeros((len(pairs), width))
    if not pairs:
        return matrix
    offset = 0
    if mode in ('spatial', 'combined'):
        subject = np.array([pair.subject.box.as_list() for pair in pairs],
                           dtype=float)
        object_ = np.array([pair.object.box.as_list() for pair in pairs],
                           dtype=float)
        y, x, h, w = subject.T
        y2, x2, h2, w2 = object_.T
        matrix[:, 0] = (x - x2) / w
        matrix[:, 1] = (y - y2) / h
        matrix[:, 2] = ((y + h) - (y2 + h2)) / h
        matrix[:, 3] = ((x + w) - (x2 + w2)) / w
        matrix[:, 4] = h2 / h
        matrix[:, 5] = w2 / w
        matrix[:, 6] = (w2 * h2) / (w * h)
        matrix[:, 7] = (w2 + h2) / (w + h)
        offset = NUM_SPATIAL
    if mode in ('categorical', 'combined'):
        rows = np.arange(len(pairs))
        matrix[rows, offset + np.array(
            [pair.subject.category for pair in pairs])] = 1.0
        matrix[rows, offset + num_categories + np.array(
            [pair.object.category for pair in pairs])] = 1.0
    return matrix


def feature_names(mode, num_categories):
    """Return the column names of a feature matrix: f1..f8, cat_0..."""
    _check_mode(mode)
    names = []
    if mode in ('spatial', 'combined'):
        names.extend('f{}'.format(i + 1) for i in range(NUM_SPATIAL))
    if mode in ('categorical', 'combined'):
        names.extend('cat_{}'.format(i) for i in range(2 * num_categories))
    return names


def features_csv(matrix, mode, num_categories):
    """Return a feature matrix as CSV Content, one row per pair."""
    return csv_content(
        feature_names(mode, num_categories),
        ([repr(float(v)) for v in row] for row in np.asarray(matrix)))

# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Small helpers shared across the package."""

__all__ = [
    'as_float_list',
    'filter_values',
    'map_values',
    'standardize',
    'substream',
    ]

import zlib

import numpy as np


def substream(seed, name):
    """Return a random generator for the stream ``name`` under ``seed``.

    Every consumer of randomness draws from its own named stream so that
    adding a consumer never shifts the numbers another one sees.

    :param seed: The root seed, a non-negative integer.
    :param name: The stream name, e.g. ``'split'`` or ``'synthgen/3'``.
    :return: A ``numpy.random.Generator``.
    """
    return np.random.default_rng([int(seed), zlib.crc32(name.encode('utf8'))])


def map_values(function, dictionary):
    """Map ``function`` across the values of ``dictionary``.

    :return: A dict with the same keys as ``dictionary``, where the value
        of each key ``k`` is ``function(dictionary[k])``.
    """
    return {k: function(dictionary[k]) for k in dictionary}


def filter_values(function, dictionary):
    """Filter ``dictionary`` by its values using ``function``."""
    return {k: v for k, v in dictionary.items() if function(v)}


def as_float_list(values, digits=None):
    """Convert an array-like into a list of Python floats.

    :param digits: If given, round each value to that many decimals. Used
        where floats end up in text output that must compare equal.
    """
    values = np.asarray(values, dtype=float).ravel()
    if digits is None:
        return [float(v) for v in values]
    return [round(float(v), digits) for v in values]


def standardize(matrix, columns=None):
    """Standardize the columns of ``matrix`` to zero mean and unit variance.

    Columns with zero variance are centred only.

    :param matrix: A 2-d array.
    :param columns: The column indices to standardize; the others are
        passed through unchanged. Defaults to all columns.
    :return: ``(standardized, mean, scale)``, where ``mean`` and ``scale``
        are full-width vectors (identity entries for untouched columns).
    """
    matrix = np.asarray(matrix, dtype=float)
    width = matrix.shape[1]
    mean = np.zeros(width)
    scale = np.ones(width)
    if columns is None:
        columns = np.arange(width)
    columns = np.asarray(columns, dtype=int)
    if len(matrix) and len(columns):
        mean[columns] = matrix[:, columns].mean(axis=0)
        spread = matrix[:, columns].std(axis=0)
        scale[columns] = np.where(spread > 0, spread, 1.0)
    return (matrix - mean) / scale, mean, scale

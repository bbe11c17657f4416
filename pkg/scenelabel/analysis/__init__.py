# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Relationship complexity: subtypes, feature importances and line fits."""

__all__ = [
    'FitReport',
    'ImportanceReport',
    'MeanShiftResult',
    'SubtypeReport',
    'count_subtypes',
    'feature_importances',
    'fit_points_csv',
    'fits_csv',
    'linear_fit_r2',
    'mean_shift',
    'merge_overlapping',
    'pair_subtypes',
    'quantile_bandwidth',
    'subtype_series',
    'subtypes_csv',
    ]

from ._fit import (
    FitReport,
    fit_points_csv,
    fits_csv,
    linear_fit_r2,
    )
from ._importance import (
    ImportanceReport,
    feature_importances,
    )
from ._meanshift import (
    MeanShiftResult,
    mean_shift,
    )
from ._subtypes import (
    SubtypeReport,
    count_subtypes,
    merge_overlapping,
    pair_subtypes,
    quantile_bandwidth,
    subtype_series,
    subtypes_csv,
    )

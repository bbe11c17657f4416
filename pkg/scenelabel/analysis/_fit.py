# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Least-squares line fits for complexity against performance."""

__all__ = [
    'FitReport',
    'fit_points_csv',
    'fits_csv',
    'linear_fit_r2',
    ]

from dataclasses import dataclass

import numpy as np
from scipy import stats

from scenelabel.content import csv_content
from scenelabel.errors import DimensionError, EmptyInputError


@dataclass(frozen=True)
class FitReport:

    slope: float
    intercept: float
    r_squared: float


def linear_fit_r2(xs, ys):
    """Fit ``y = slope * x + intercept`` by ordinary least squares.

    ``r_squared`` is ``1 - SS_res / SS_tot``, defined as 0 when ``ys`` is
    constant. Constant ``xs`` give slope 0 and the mean of ``ys``.

    :raises DimensionError: If the lengths differ.
    :raises EmptyInputError: With fewer than two points.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise DimensionError('{} xs but {} ys'.format(len(xs), len(ys)))
    if len(xs) < 2:
        raise EmptyInputError('a line fit needs at least two points')
    if np.ptp(ys) == 0 or np.ptp(xs) == 0:
        return FitReport(0.0, float(ys.mean()), 0.0)
    fit = stats.linregress(xs, ys)
    return FitReport(float(fit.slope), float(fit.intercept),
                     float(np.clip(fit.rvalue ** 2, 0.0, 1.0)))


def fits_csv(fits):
    """Return ``(x name, y name, FitReport, n)`` rows as CSV Content."""
    return csv_content(
        ['x', 'y', 'slope', 'intercept', 'r_squared', 'n'],
        ([x_name, y_name, repr(fit.slope), repr(fit.intercept),
          repr(fit.r_squared), n]
         for x_name, y_name, fit, n in fits))


def fit_points_csv(xs, ys):
    """Return the points behind one fit as plotting-ready CSV Content."""
    return csv_content(['x', 'y'], ([repr(float(x)), repr(float(y))]
                                    for x, y in zip(xs, ys)))

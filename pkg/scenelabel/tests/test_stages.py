# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Tests for the stage runner."""

import os

from fixtures import FakeLogger, TempDir
from testtools import TestCase
from testtools.matchers import (
    Contains,
    Equals,
    FileContains,
    FileExists,
    Is,
    MatchesException,
    Not,
    Raises,
    )

from scenelabel.errors import ConfigError, DataError, NumericalError
from scenelabel.stages import FAILED_MARKER, StageFailure, StageRunner


class FakeClock:
    """A clock that advances one second per reading."""

    def __init__(self):
        self.now = 0.0

    def __call__(self):
        self.now += 1.0
        return self.now


def fail(error):
    raise error


class TestStageRunner(TestCase):

    def setUp(self):
        super().setUp()
        self.output_dir = self.useFixture(TempDir()).path
        self.marker = os.path.join(self.output_dir, FAILED_MARKER)

    def make_runner(self, **kwargs):
        return StageRunner(self.output_dir, clock=FakeClock(), **kwargs)

    def test_returns_result(self):
        runner = self.make_runner()
        self.assertThat(runner.run('ingest', lambda x, y=0: x + y, 2, y=3),
                        Equals(5))
        self.assertThat(self.marker, Not(FileExists()))

    def test_timings_in_run_order(self):
        runner = self.make_runner()
        runner.run('ingest', lambda: None)
        runner.run('split', lambda: None)
        self.assertThat(list(runner.timings.items()),
                        Equals([('ingest', 1.0), ('split', 1.0)]))

    def test_handled_error(self):
        runner = self.make_runner()
        error = DataError('dataset file not found: data.json')
        self.assertThat(
            lambda: runner.run('ingest', fail, error),
            Raises(MatchesException(
                StageFailure,
                'stage ingest failed: DataError: dataset file not found')))
        self.assertThat(self.marker, FileContains(
            'stage: ingest\n'
            'error: DataError: dataset file not found: data.json\n'))
        self.assertThat(runner.timings['ingest'], Equals(1.0))

    def test_failure_carries_the_exit_status(self):
        runner = self.make_runner()
        for error, status in ((ConfigError('x'), 1), (DataError('x'), 2),
                              (NumericalError('x'), 3)):
            try:
                runner.run('label', fail, error)
            except StageFailure as failure:
                self.assertThat(failure.exit_status, Equals(status))
                self.assertThat(failure.error, Is(error))
                self.assertThat(failure.stage, Equals('label'))
                self.assertThat(failure.__cause__, Is(error))
            else:
                self.fail('no StageFailure for {!r}'.format(error))

    def test_unhandled_error_is_reraised(self):
        runner = self.make_runner()
        self.assertThat(
            lambda: runner.run('train', fail, RuntimeError('boom')),
            Raises(MatchesException(RuntimeError, 'boom')))
        self.assertThat(self.marker, FileContains(
            'stage: train\nerror: RuntimeError: boom\n'))

    def test_failure_is_logged(self):
        logger = self.useFixture(FakeLogger())
        runner = self.make_runner()
        self.assertRaises(StageFailure, runner.run, 'ingest', fail,
                          DataError('missing'))
        self.assertThat(logger.output,
                        Contains('stage ingest failed: missing'))

    def test_custom_handler_first(self):
        seen = []

        def handler(stage, error):
            seen.append((stage, str(error)))
            return 7

        runner = self.make_runner(handlers=[(ZeroDivisionError, handler)])
        try:
            runner.run('evaluate', lambda: 1 / 0)
        except StageFailure as failure:
            self.assertThat(failure.exit_status, Equals(7))
        else:
            self.fail('no StageFailure')
        self.assertThat(seen, Equals([('evaluate', 'division by zero')]))
        self.assertThat(self.marker, Not(FileExists()))

    def test_custom_last_resort(self):
        seen = []
        runner = self.make_runner(
            last_resort=lambda stage, error: seen.append(stage))
        self.assertRaises(KeyError, runner.run, 'analyze', fail,
                          KeyError('x'))
        self.assertThat(seen, Equals(['analyze']))
        self.assertThat(self.marker, Not(FileExists()))

    def test_clear_marker(self):
        runner = self.make_runner()
        self.assertRaises(StageFailure, runner.run, 'ingest', fail,
                          DataError('x'))
        self.assertThat(self.marker, FileExists())
        runner.clear_marker()
        self.assertThat(self.marker, Not(FileExists()))
        runner.clear_marker()


def test_suite():
    from unittest import TestLoader
    return TestLoader().loadTestsFromName(__name__)

# Copyright (c) 2026 scenelabel developers. See LICENSE for details.

"""Run pipeline stages, timing them and turning failures into exit codes."""

__all__ = [
    'FAILED_MARKER',
    'StageFailure',
    'StageRunner',
    ]

from collections import OrderedDict
import logging
import os
import time

from scenelabel.content import text_content
from scenelabel.errors import ScenelabelError, exit_status


logger = logging.getLogger(__name__)

FAILED_MARKER = 'FAILED'


class StageFailure(Exception):
    """A stage stopped with a handled error.

    :ivar stage: The name of the failing stage.
    :ivar error: The exception the stage raised.
    :ivar exit_status: The process exit status for the failure.
    """

    def __init__(self, stage, error, status):
        super().__init__('stage {} failed: {}: {}'.format(
            stage, type(error).__name__, error))
        self.stage = stage
        self.error = error
        self.exit_status = status


class StageRunner:
    """Run the stages of one pipeline invocation.

    Outputs of finished stages are kept when a later stage fails; a
    ``FAILED`` marker file naming the stage and its cause is written next
    to them.

    :ivar output_dir: Where the marker goes.
    :ivar timings: stage name -> wall-clock seconds, in run order.
    :ivar handlers: A list of (ExceptionClass, handler) for errors raised
        by a stage. Handlers are checked first to last and called as
        ``handler(stage, error)``; the first match returns the exit status.
        To handle a new exception, insert it at the front so it is checked
        before its base classes.
    :ivar last_resort: Called as ``last_resort(stage, error)`` for an
        unhandled error, which is then re-raised unchanged.
    """

    def __init__(self, output_dir, handlers=None, last_resort=None,
                 clock=time.perf_counter):
        self.output_dir = output_dir
        self.timings = OrderedDict()
        self.handlers = handlers or [(ScenelabelError, self._handled)]
        self.last_resort = last_resort or self._mark_failed
        self._clock = clock

    def clear_marker(self):
        """Remove a marker left behind by an earlier failed run."""
        path = os.path.join(self.output_dir, FAILED_MARKER)
        if os.path.exists(path):
            os.remove(path)

    def run(self, stage, function, *args, **kwargs):
        """Run ``function(*args, **kwargs)`` as the stage named ``stage``.

        :return: Whatever ``function`` returns.
        :raises StageFailure: When a handler claims the error.
        """
        logger.info('stage %s: start', stage)
        start = self._clock()
        try:
            result = function(*args, **kwargs)
        except Exception as e:
            self.timings[stage] = self._clock() - start
            for exc_class, handler in self.handlers:
                if isinstance(e, exc_class):
                    raise StageFailure(stage, e, handler(stage, e)) from e
            self.last_resort(stage, e)
            raise
        self.timings[stage] = self._clock() - start
        logger.info('stage %s: done in %.3fs', stage, self.timings[stage])
        return result

    def _handled(self, stage, error):
        self._mark_failed(stage, error)
        return exit_status(error)

    def _mark_failed(self, stage, error):
        logger.error('stage %s failed: %s', stage, error)
        text_content('stage: {}\nerror: {}: {}\n'.format(
            stage, type(error).__name__, error)).write_to(
                os.path.join(self.output_dir, FAILED_MARKER))
